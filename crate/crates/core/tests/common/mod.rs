#![allow(dead_code)]

use pseudo_poisson::{CountPair, ModelParams};

/// Neumaier-compensated sum.
#[derive(Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Upper bound well past the bulk of a Poisson(rate) law.
pub fn poisson_cutoff(rate: f64) -> u64 {
    (rate + 14.0 * rate.sqrt() + 40.0).ceil() as u64
}

/// Visit every cell of a truncated grid that carries all but a negligible
/// amount of mass: x1 up to its cutoff, x2 up to the cutoff of the largest
/// conditional rate.
pub fn for_grid(p: &ModelParams, mut f: impl FnMut(CountPair, f64)) {
    let k1 = poisson_cutoff(p.lambda1());
    for x1 in 0..=k1 {
        let k2 = poisson_cutoff(p.conditional_rate(x1));
        for x2 in 0..=k2 {
            let x = CountPair::new(x1, x2);
            f(x, p.joint_pmf(x));
        }
    }
}

/// Twenty parameter points with every component at most 10, covering the
/// zero-intercept and independence edges.
pub fn parameter_grid() -> Vec<ModelParams> {
    let pts = [
        (1.0, 3.0, 4.0),
        (0.1, 0.1, 0.1),
        (0.5, 2.0, 0.0),
        (10.0, 10.0, 10.0),
        (2.0, 0.0, 1.0),
        (10.0, 0.0, 0.5),
        (0.3, 7.5, 2.2),
        (5.0, 5.0, 5.0),
        (1.0, 0.0, 10.0),
        (7.0, 1.0, 0.2),
        (3.3, 4.4, 0.0),
        (0.05, 9.0, 3.0),
        (4.0, 0.25, 6.0),
        (9.5, 2.0, 1.0),
        (1.5, 1.5, 1.5),
        (6.0, 0.0, 2.5),
        (2.5, 10.0, 0.75),
        (8.0, 3.0, 9.0),
        (0.7, 0.0, 0.3),
        (10.0, 0.5, 10.0),
    ];
    pts.iter()
        .map(|&(a, b, c)| ModelParams::new(a, b, c).unwrap())
        .collect()
}

pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Full-model log-likelihood written straight from the product form of the
/// likelihood, with repeated pairs grouped.
pub struct DirectLik {
    cells: Vec<((u64, u64), f64)>,
    n: f64,
    sum_x1: f64,
    ln_const: f64,
}

impl DirectLik {
    pub fn new(pairs: &[(u64, u64)]) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for &p in pairs {
            *map.entry(p).or_insert(0.0) += 1.0;
        }
        let mut ln_const = 0.0;
        for &(x1, x2) in pairs {
            ln_const -= (1..=x1).map(|k| (k as f64).ln()).sum::<f64>();
            ln_const -= (1..=x2).map(|k| (k as f64).ln()).sum::<f64>();
        }
        DirectLik {
            cells: map.into_iter().collect(),
            n: pairs.len() as f64,
            sum_x1: pairs.iter().map(|p| p.0 as f64).sum(),
            ln_const,
        }
    }

    pub fn eval(&self, l1: f64, l2: f64, l3: f64) -> f64 {
        let mut ll = -self.n * (l1 + l2) + l1.ln() * self.sum_x1 - l3 * self.sum_x1;
        for &((x1, x2), c) in &self.cells {
            if x2 > 0 {
                ll += c * x2 as f64 * (l2 + l3 * x1 as f64).ln();
            }
        }
        ll + self.ln_const
    }
}

pub fn loglik_direct(l1: f64, l2: f64, l3: f64, pairs: &[(u64, u64)]) -> f64 {
    DirectLik::new(pairs).eval(l1, l2, l3)
}

/// Maximize the full-model log-likelihood over a (lambda2, lambda3) grid
/// with lambda1 at its closed-form maximizer M1. Each stage is a full grid
/// over a window of three cells around the previous best; the
/// log-likelihood is concave in (lambda2, lambda3).
pub fn grid_search(pairs: &[(u64, u64)]) -> (f64, f64, f64) {
    let n = pairs.len() as f64;
    let m1 = pairs.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let m2 = pairs.iter().map(|p| p.1 as f64).sum::<f64>() / n;
    let lik = DirectLik::new(pairs);
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut window = (0.0, 1.5 * m2 + 1.0, 0.0, 1.5 * m2 / m1 + 1.0);
    for step in [0.02, 1e-3, 1e-5] {
        let (a0, a1, b0, b1) = window;
        let na = ((a1 - a0) / step).ceil() as usize;
        let nb = ((b1 - b0) / step).ceil() as usize;
        for i in 0..=na {
            let l2 = (a0 + i as f64 * step).max(0.0);
            for j in 0..=nb {
                let l3 = (b0 + j as f64 * step).max(0.0);
                if l2 + l3 == 0.0 {
                    continue;
                }
                let ll = lik.eval(m1, l2, l3);
                if ll > best.0 {
                    best = (ll, l2, l3);
                }
            }
        }
        let w = 3.0 * step;
        window = (best.1 - w, best.1 + w, best.2 - w, best.2 + w);
    }
    best
}
