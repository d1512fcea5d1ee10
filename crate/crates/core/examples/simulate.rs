//! Seeded simulation and sample summaries.

use pseudo_poisson::{sample_bivariate, sample_moments, ModelParams, Seed};

fn main() -> pseudo_poisson::Result<()> {
    let p = ModelParams::new(1.0, 3.0, 4.0)?;
    let s = sample_bivariate(&p, 10_000, Seed(42))?;
    let m = sample_moments(&s);
    let (e1, e2) = p.mean();
    let c = p.covariance();
    println!("{:<12} {:>10} {:>10}", "", "sample", "model");
    println!("{:<12} {:>10.4} {:>10.4}", "mean x1", m.m1, e1);
    println!("{:<12} {:>10.4} {:>10.4}", "mean x2", m.m2, e2);
    println!("{:<12} {:>10.4} {:>10.4}", "var x1", m.v1, c.var1);
    println!("{:<12} {:>10.4} {:>10.4}", "var x2", m.v2, c.var2);
    println!("{:<12} {:>10.4} {:>10.4}", "covariance", m.s12, c.cov12);
    println!("{:<12} {:>10.4} {:>10.4}", "correlation", m.correlation(), p.correlation());

    // same seed, same sample
    assert_eq!(s, sample_bivariate(&p, 10_000, Seed(42))?);
    println!("first rows: {:?}", &s.pairs()[..5]);
    Ok(())
}
