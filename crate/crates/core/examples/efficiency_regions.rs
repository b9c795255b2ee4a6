//! Which competitor `d⁽ᵘ⁾` beats as `L` moves away from the data.

use unbiased_ratio::population::summarize;
use unbiased_ratio::theory::efficiency_conditions;
use unbiased_ratio::{fixtures, TransformConfig};

fn main() -> unbiased_ratio::Result<()> {
    let pop = fixtures::synthetic_500();
    let n = 50;
    println!(
        "{:>8} {:>9} {:>12} {:>8} {:>8}",
        "L", "Vbar", "ybar & d1u", "d2u", "d*"
    );
    for l in [81.0, 90.0, 110.0, 150.0, 200.0, 400.0, 1000.0, -20.0] {
        let r = efficiency_conditions(&summarize(&pop, n, Some(TransformConfig::new(l)))?)?;
        println!(
            "{l:>8} {:>9.4} {:>12} {:>8} {:>8}",
            r.vbar,
            r.beats_ybar_and_d1u,
            r.beats_d2u.map_or("-".into(), |b| b.to_string()),
            r.beats_dstar.holds
        );
    }
    Ok(())
}
