//! Relative efficiency of `d⁽ᵘ⁾` over a grid of `L`, from published summary
//! constants of a literacy survey (`V̄ ≈ Ȳ / (L - X̄)`).

use unbiased_ratio::params::ParamsFile;
use unbiased_ratio::theory::efficiency_conditions;
use unbiased_ratio::SummaryParams;

fn main() -> unbiased_ratio::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/rao.params");
    let base = SummaryParams::from_constants(&ParamsFile::read(path)?.constants(None)?)?;

    println!(
        "{:>10} {:>10} {:>10} {:>10}",
        "L", "vs ybar", "vs d1u", "vs d2u"
    );
    for l in [
        60.0, 61.0, 62.5, 63.0, 65.0, 70.0, 85.0, 100.0, 300.0, 500.0, 372_607.0,
    ] {
        let r = efficiency_conditions(&base.with_approx_vbar(l)?)?;
        println!(
            "{l:>10} {:>10.2} {:>10.2} {:>10.2}",
            r.re_vs_ybar,
            r.re_vs_d1u,
            r.re_vs_d2u.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
