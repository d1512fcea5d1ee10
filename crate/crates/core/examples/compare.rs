//! AIC comparison of the six cards, including mirrored data and an
//! infeasible zero-intercept card.

use pseudo_poisson::{compare_models, mirror, sample_bivariate, ModelParams, Sample, Seed};

fn main() -> pseudo_poisson::Result<()> {
    let s = sample_bivariate(&ModelParams::new(1.0, 3.0, 4.0)?, 2000, Seed(1))?;
    println!("{}", compare_models(&s)?.to_table());

    // zero-intercept data with the columns swapped, plus a (0, 5) row
    let z = sample_bivariate(&ModelParams::zero_intercept(2.0, 1.5)?, 2000, Seed(2))?;
    let mut pairs = mirror(&z).into_pairs();
    pairs.push((0, 5).into());
    println!("{}", compare_models(&Sample::new(pairs)?)?.to_table());
    Ok(())
}
