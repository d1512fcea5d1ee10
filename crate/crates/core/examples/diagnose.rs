//! Empirical dispersion screening followed by a fit of the suggested
//! orientation.

use pseudo_poisson::{
    empirical_dispersion, mle_fit, mirror, sample_bivariate, sample_moments, ModelParams, Seed,
    SubmodelKind,
};

fn main() -> pseudo_poisson::Result<()> {
    // x1 over-dispersed, x2 close to Poisson
    let s = mirror(&sample_bivariate(&ModelParams::new(2.0, 1.0, 1.0)?, 5000, Seed(8))?);
    let (d1, d2) = empirical_dispersion(&s)?;
    println!("dispersion indices ({d1:.3}, {d2:.3}), correlation {:.3}", sample_moments(&s).correlation());
    let data = if (d2 - 1.0).abs() < (d1 - 1.0).abs() {
        println!("x2 looks Poisson: fitting the mirrored model");
        mirror(&s)
    } else {
        s
    };
    let f = mle_fit(&data, SubmodelKind::Full)?;
    println!("estimates {}", f.estimates);
    Ok(())
}
