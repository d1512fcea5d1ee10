//! Bootstrap standard errors for both estimators of the full model.

use pseudo_poisson::{
    bootstrap_se, sample_bivariate, Method, ModelParams, Seed, SubmodelKind,
    DEFAULT_BOOTSTRAP_REPLICATES,
};

fn main() -> pseudo_poisson::Result<()> {
    let truth = ModelParams::new(1.0, 3.0, 4.0)?;
    let s = sample_bivariate(&truth, 1000, Seed(5))?;
    for method in [Method::Moment, Method::Mle] {
        let bs = bootstrap_se(&s, SubmodelKind::Full, method, DEFAULT_BOOTSTRAP_REPLICATES, Seed(6))?;
        println!(
            "{:<4} se = ({:.4}, {:.4}, {:.4}) from {} replicates, {} failed",
            method.as_str(),
            bs.se[0],
            bs.se[1],
            bs.se[2],
            bs.replicates,
            bs.failed
        );
    }
    Ok(())
}
