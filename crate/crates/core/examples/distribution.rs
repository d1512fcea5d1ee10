//! Mass function, generating function, moments and dispersion indices.

use pseudo_poisson::{neyman_a_pmf, CountPair, ModelParams};

fn main() -> pseudo_poisson::Result<()> {
    let p = ModelParams::new(1.0, 3.0, 4.0)?;
    println!("model {p}");

    println!("joint pmf, rows x1 = 0..3, columns x2 = 0..7");
    for x1 in 0..4 {
        let row: Vec<String> = (0..8)
            .map(|x2| format!("{:.5}", p.joint_pmf(CountPair::new(x1, x2))))
            .collect();
        println!("  {}", row.join(" "));
    }

    let (m1, m2) = p.mean();
    let c = p.covariance();
    println!("means ({m1}, {m2})");
    println!("covariance [[{}, {}], [{}, {}]]", c.var1, c.cov12, c.cov12, c.var2);
    println!("correlation {:.6}", p.correlation());
    let (d1, d2) = p.dispersion_indices();
    println!("dispersion indices ({d1:.6}, {d2:.6}), generalized {:.6}", p.gdi());
    println!("pgf(0.5, 0.5) = {:.8}", p.pgf(0.5, 0.5));

    // with no intercept the second margin is Neyman Type A
    let z = ModelParams::zero_intercept(2.0, 1.5)?;
    for x2 in 0..5 {
        println!(
            "x2 = {x2}: margin {:.8}, Neyman Type A {:.8}",
            z.marginal_pmf_x2(x2),
            neyman_a_pmf(2.0, 1.5, x2)?
        );
    }
    Ok(())
}
