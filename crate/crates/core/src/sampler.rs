//! Seeded simulation from the bivariate model and from the general
//! k-dimensional triangular construction with linear links.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed by
//! `SeedableRng::seed_from_u64(seed)`. Replicate `r` reads ChaCha stream `r`
//! of that key, so replicates can be generated in any order, or concurrently,
//! with identical results. Single-sample entry points use stream 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CountPair, ModelParams, Sample};
use crate::special::ln_factorial;

/// Rates below this use cdf inversion; above it, transformed rejection.
const INVERSION_CUTOFF: f64 = 30.0;

/// Seed of a reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    /// Private generator for replicate `replicate`.
    pub fn stream(self, replicate: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(replicate);
        rng
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// One exact Poisson(rate) variate.
///
/// Inversion by cdf accumulation for `rate < 30`; above that the transformed
/// rejection method with squeeze of Hörmann (1993), which is also exact.
pub fn poisson_draw<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> Result<u64> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::domain(format!(
            "Poisson rate must be finite and >= 0, got {rate}"
        )));
    }
    if rate == 0.0 {
        return Ok(0);
    }
    if rate < INVERSION_CUTOFF {
        Ok(poisson_inversion(rate, rng))
    } else {
        Ok(poisson_ptrs(rate, rng))
    }
}

fn poisson_inversion<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> u64 {
    let p0 = (-rate).exp();
    'draw: loop {
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = p0;
        let mut cdf = p0;
        while u > cdf {
            k += 1;
            p *= rate / k as f64;
            if p == 0.0 {
                // u fell in the rounding gap above the accumulated cdf
                continue 'draw;
            }
            cdf += p;
        }
        return k;
    }
}

fn poisson_ptrs<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> u64 {
    let sqrt_rate = rate.sqrt();
    let ln_rate = rate.ln();
    let b = 0.931 + 2.53 * sqrt_rate;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.random::<f64>() - 0.5;
        let v: f64 = rng.random();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + rate + 0.43).floor();
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -rate + k * ln_rate - ln_factorial(k as u64);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

/// `n` pairs from the two-step algorithm, drawing from `rng`.
pub fn sample_bivariate_with<R: Rng + ?Sized>(
    params: &ModelParams,
    n: usize,
    rng: &mut R,
) -> Result<Sample> {
    if n == 0 {
        return Err(Error::domain("sample size must be >= 1"));
    }
    let mut pairs = Vec::with_capacity(n);
    for _ in 0..n {
        let x1 = poisson_draw(params.lambda1(), rng)?;
        let x2 = poisson_draw(params.conditional_rate(x1), rng)?;
        pairs.push(CountPair { x1, x2 });
    }
    Sample::new(pairs)
}

/// `n` i.i.d. pairs, deterministic in `(params, n, seed)`.
pub fn sample_bivariate(params: &ModelParams, n: usize, seed: Seed) -> Result<Sample> {
    sample_bivariate_with(params, n, &mut seed.stream(0))
}

/// Linear rate `intercept + sum(coefficients[i] * x[i])` for one level of the
/// triangular construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearLink {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

impl LinearLink {
    pub fn new(intercept: f64, coefficients: Vec<f64>) -> Result<Self> {
        let link = LinearLink {
            intercept,
            coefficients,
        };
        link.validate()?;
        Ok(link)
    }

    fn validate(&self) -> Result<()> {
        let all = std::iter::once(self.intercept).chain(self.coefficients.iter().copied());
        let mut total = 0.0;
        for v in all {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::domain(format!(
                    "link intercept and coefficients must be finite and >= 0, got {v}"
                )));
            }
            total += v;
        }
        if total <= 0.0 {
            return Err(Error::domain("link must have a positive intercept or coefficient"));
        }
        Ok(())
    }

    pub fn rate(&self, prefix: &[u64]) -> f64 {
        self.intercept
            + self
                .coefficients
                .iter()
                .zip(prefix)
                .map(|(c, &x)| c * x as f64)
                .sum::<f64>()
    }
}

/// k-dimensional model: `X1 ~ Poisson(lambda1)` and, for each level `l >= 2`,
/// `X_l | X_1..X_{l-1} ~ Poisson(links[l-2].rate(prefix))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdimSpec {
    pub lambda1: f64,
    pub links: Vec<LinearLink>,
}

impl KdimSpec {
    pub fn new(lambda1: f64, links: Vec<LinearLink>) -> Result<Self> {
        let spec = KdimSpec { lambda1, links };
        spec.validate()?;
        Ok(spec)
    }

    /// Dimension k.
    pub fn dim(&self) -> usize {
        self.links.len() + 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda1 > 0.0) || !self.lambda1.is_finite() {
            return Err(Error::domain(format!(
                "lambda1 must be finite and > 0, got {}",
                self.lambda1
            )));
        }
        if self.links.is_empty() {
            return Err(Error::domain("a k-dimensional model needs k >= 2"));
        }
        for (i, link) in self.links.iter().enumerate() {
            let level = i + 2;
            if link.coefficients.len() != level - 1 {
                return Err(Error::domain(format!(
                    "link for level {level} needs {} coefficients, got {}",
                    level - 1,
                    link.coefficients.len()
                )));
            }
            link.validate()?;
        }
        Ok(())
    }
}

impl From<&ModelParams> for KdimSpec {
    fn from(p: &ModelParams) -> Self {
        KdimSpec {
            lambda1: p.lambda1(),
            links: vec![LinearLink {
                intercept: p.lambda2(),
                coefficients: vec![p.lambda3()],
            }],
        }
    }
}

pub fn sample_kdim_with<R: Rng + ?Sized>(
    spec: &KdimSpec,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Vec<u64>>> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::domain("sample size must be >= 1"));
    }
    let k = spec.dim();
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(k);
        row.push(poisson_draw(spec.lambda1, rng)?);
        for link in &spec.links {
            let rate = link.rate(&row);
            row.push(poisson_draw(rate, rng)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `n` k-tuples, deterministic in `(spec, n, seed)`. For k = 2 the draws
/// consume the stream in the same order as [`sample_bivariate`].
pub fn sample_kdim(spec: &KdimSpec, n: usize, seed: Seed) -> Result<Vec<Vec<u64>>> {
    sample_kdim_with(spec, n, &mut seed.stream(0))
}
