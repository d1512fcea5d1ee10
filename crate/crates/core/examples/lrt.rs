//! Likelihood-ratio tests of the three submodels against the full model.

use pseudo_poisson::{lrt, sample_bivariate, ModelParams, Seed, SubmodelKind};

fn main() -> pseudo_poisson::Result<()> {
    for truth in [
        ModelParams::new(1.0, 2.0, 2.0)?,
        ModelParams::new(1.0, 0.0, 2.0)?,
        ModelParams::new(1.0, 1.0, 0.2)?,
    ] {
        let s = sample_bivariate(&truth, 500, Seed(21))?;
        println!("data from {truth}");
        for h in [SubmodelKind::EqualRates, SubmodelKind::ZeroIntercept, SubmodelKind::Independence] {
            match lrt(&s, h) {
                Ok(t) => println!(
                    "  H0 {:<15} -2 log Lambda = {:>10.4}  p = {:.3e}{}{}",
                    h.as_str(),
                    t.stat,
                    t.pvalue,
                    if t.rejects_at(0.05) { "  reject" } else { "" },
                    if t.boundary_caution { "  (boundary null)" } else { "" }
                ),
                Err(e) => println!("  H0 {:<15} {e}", h.as_str()),
            }
        }
    }
    Ok(())
}
