//! Three-dimensional triangular construction: each coordinate is Poisson
//! with a rate linear in the coordinates before it.

use pseudo_poisson::{sample_kdim, KdimSpec, LinearLink, Seed};

fn main() -> pseudo_poisson::Result<()> {
    let spec = KdimSpec::new(
        1.0,
        vec![
            LinearLink::new(3.0, vec![4.0])?,
            LinearLink::new(0.5, vec![1.0, 0.25])?,
        ],
    )?;
    let n = 50_000;
    let rows = sample_kdim(&spec, n, Seed(3))?;
    let mut means = vec![0.0; spec.dim()];
    for row in &rows {
        for (m, &x) in means.iter_mut().zip(row) {
            *m += x as f64 / n as f64;
        }
    }
    // E[X3] = 0.5 + 1 * 1 + 0.25 * 7
    println!("k = {}, sample means {means:.3?}, expected [1, 7, 3.25]", spec.dim());
    println!("first rows: {:?}", &rows[..4]);
    Ok(())
}
