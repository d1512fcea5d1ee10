//! Moment and maximum-likelihood fits of every submodel.

use pseudo_poisson::{fit, sample_bivariate, Method, ModelParams, Seed, SubmodelKind};

fn main() -> pseudo_poisson::Result<()> {
    let truth = ModelParams::new(1.0, 3.0, 4.0)?;
    let s = sample_bivariate(&truth, 1000, Seed(11))?;
    println!("truth {truth}");
    println!(
        "{:<15} {:<5} {:>9} {:>9} {:>9} {:>12}",
        "model", "method", "lambda1", "lambda2", "lambda3", "loglik"
    );
    for kind in SubmodelKind::ALL {
        for method in [Method::Moment, Method::Mle] {
            match fit(&s, kind, method) {
                Ok(f) => {
                    let e = f.estimates.as_array();
                    println!(
                        "{:<15} {:<5} {:>9.4} {:>9.4} {:>9.4} {:>12.3}{}",
                        kind.as_str(),
                        method.as_str(),
                        e[0],
                        e[1],
                        e[2],
                        f.loglik,
                        if f.boundary { "  (boundary)" } else { "" }
                    );
                }
                Err(e) => println!("{:<15} {:<5} {e}", kind.as_str(), method.as_str()),
            }
        }
    }
    Ok(())
}
