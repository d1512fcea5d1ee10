//! Method-of-moments and maximum-likelihood fits for the full model and its
//! three submodels, plus nonparametric bootstrap standard errors.
//!
//! The full-model likelihood maximum always lies on the line
//! `lambda2 + lambda3 * M1 = M2`: scaling `(lambda2, lambda3)` by `c` changes
//! the log-likelihood by `-c * n * (lambda2 + lambda3 * M1) + n * M2 * ln(c)`,
//! which is maximal at `c * (lambda2 + lambda3 * M1) = M2`. On that line the
//! profile log-likelihood is, up to a constant,
//!
//! ```text
//! g(t) = sum_i x2_i * ln(M2 + t * (x1_i - M1)),   t = lambda3 in [0, M2 / M1]
//! ```
//!
//! which is concave, so the fit reduces to a bracketed one-dimensional root
//! search on `g'`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CountPair, ModelParams, Sample, SubmodelKind};
use crate::sampler::Seed;

/// Default number of bootstrap replicates.
pub const DEFAULT_BOOTSTRAP_REPLICATES: usize = 500;

/// Tolerance on the reduced gradient, relative to the sample size.
const PROFILE_GRAD_TOL: f64 = 1e-10;
const PROFILE_MAX_ITER: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[serde(rename = "mom")]
    Moment,
    Mle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Moment => "mom",
            Method::Mle => "mle",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mom" | "moment" => Ok(Method::Moment),
            "mle" => Ok(Method::Mle),
            other => Err(Error::domain(format!("unknown method '{other}'"))),
        }
    }
}

/// Means, covariance and marginal variances of a sample, all with `1/n`
/// divisors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleMoments {
    pub n: usize,
    pub m1: f64,
    pub m2: f64,
    pub s12: f64,
    pub v1: f64,
    pub v2: f64,
}

impl SampleMoments {
    pub fn from_sample(sample: &Sample) -> Self {
        moments_of(sample.pairs())
    }

    /// Pearson correlation, or zero when either margin is constant.
    pub fn correlation(&self) -> f64 {
        let denom = (self.v1 * self.v2).sqrt();
        if denom > 0.0 {
            self.s12 / denom
        } else {
            0.0
        }
    }
}

pub fn sample_moments(sample: &Sample) -> SampleMoments {
    SampleMoments::from_sample(sample)
}

fn moments_of(pairs: &[CountPair]) -> SampleMoments {
    let n = pairs.len();
    let nf = n as f64;
    let (sum1, sum2) = pairs
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + p.x1 as f64, b + p.x2 as f64));
    let m1 = sum1 / nf;
    let m2 = sum2 / nf;
    let (mut s11, mut s22, mut s12) = (0.0, 0.0, 0.0);
    for p in pairs {
        let d1 = p.x1 as f64 - m1;
        let d2 = p.x2 as f64 - m2;
        s11 += d1 * d1;
        s22 += d2 * d2;
        s12 += d1 * d2;
    }
    SampleMoments {
        n,
        m1,
        m2,
        s12: s12 / nf,
        v1: s11 / nf,
        v2: s22 / nf,
    }
}

/// Outcome of fitting one model to one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: SubmodelKind,
    pub method: Method,
    pub estimates: ModelParams,
    /// Estimates before clamping to the parameter space. Differs from
    /// `estimates` only for moment fits with a negative intercept or slope.
    pub raw: [f64; 3],
    pub se: Option<[f64; 3]>,
    pub loglik: f64,
    pub converged: bool,
    pub boundary: bool,
    pub corr_hat: f64,
}

impl FitResult {
    /// `-2 log L`.
    pub fn deviance(&self) -> f64 {
        -2.0 * self.loglik
    }

    pub fn nparams(&self) -> u32 {
        self.model.nparams()
    }
}

fn require_m1(mom: &SampleMoments, model: SubmodelKind) -> Result<()> {
    if mom.m1 > 0.0 {
        Ok(())
    } else {
        Err(Error::NoEstimate(format!(
            "the {model} model needs M1 > 0 but every x1 is zero"
        )))
    }
}

fn build_params(l1: f64, l2: f64, l3: f64) -> Result<ModelParams> {
    if l2 <= 0.0 && l3 <= 0.0 {
        return Err(Error::NoEstimate(
            "every x2 is zero, so lambda2 and lambda3 both estimate to zero".into(),
        ));
    }
    ModelParams::new(l1, l2, l3)
}

/// Closed-form estimates shared by the moment and submodel ML fits.
fn closed_form(mom: &SampleMoments, model: SubmodelKind) -> [f64; 3] {
    let SampleMoments { m1, m2, s12, .. } = *mom;
    match model {
        SubmodelKind::Full => [m1, m2 - s12, s12 / m1],
        SubmodelKind::ZeroIntercept => [m1, 0.0, m2 / m1],
        SubmodelKind::EqualRates => {
            let rate = m2 / (1.0 + m1);
            [m1, rate, rate]
        }
        SubmodelKind::Independence => [m1, m2, 0.0],
    }
}

fn finish(
    sample: &Sample,
    model: SubmodelKind,
    method: Method,
    estimates: ModelParams,
    raw: [f64; 3],
    boundary: bool,
) -> FitResult {
    FitResult {
        model,
        method,
        estimates,
        raw,
        se: None,
        loglik: estimates.log_likelihood(sample).value,
        converged: true,
        boundary,
        corr_hat: estimates.correlation(),
    }
}

/// Method-of-moments fit.
///
/// A negative raw intercept or slope (full model only) is clamped to zero
/// and flagged with `boundary = true`; the unclamped values stay in `raw`.
pub fn mom_fit(sample: &Sample, model: SubmodelKind) -> Result<FitResult> {
    let mom = sample_moments(sample);
    require_m1(&mom, model)?;
    let raw = closed_form(&mom, model);
    let l2 = raw[1].max(0.0);
    let l3 = raw[2].max(0.0);
    let boundary = model == SubmodelKind::Full && (l2 == 0.0 || l3 == 0.0);
    let estimates = build_params(raw[0], l2, l3)?;
    Ok(finish(sample, model, Method::Moment, estimates, raw, boundary))
}

/// Whether every pair with `x1 = 0` also has `x2 = 0`, the support
/// condition of the zero-intercept model.
pub fn zero_intercept_feasible(sample: &Sample) -> bool {
    sample.iter().all(|p| p.x1 != 0 || p.x2 == 0)
}

/// Maximum-likelihood fit.
///
/// Submodels have closed forms that coincide with the moment estimates. The
/// full model is solved on the stationarity line described in the module
/// docs; a maximum at `lambda3 = 0` or `lambda2 = 0` is returned with
/// `boundary = true`.
pub fn mle_fit(sample: &Sample, model: SubmodelKind) -> Result<FitResult> {
    let mom = sample_moments(sample);
    require_m1(&mom, model)?;
    if mom.m2 == 0.0 {
        return Err(Error::NoEstimate(
            "every x2 is zero, so the likelihood has no maximum with lambda2 + lambda3 > 0"
                .into(),
        ));
    }
    match model {
        SubmodelKind::Full => mle_full(sample, &mom),
        SubmodelKind::ZeroIntercept if !zero_intercept_feasible(sample) => {
            Err(Error::Infeasible(
                "zero-intercept model needs x2 = 0 whenever x1 = 0".into(),
            ))
        }
        _ => {
            let raw = closed_form(&mom, model);
            let estimates = build_params(raw[0], raw[1], raw[2])?;
            Ok(finish(sample, model, Method::Mle, estimates, raw, false))
        }
    }
}

/// Fit with either method.
pub fn fit(sample: &Sample, model: SubmodelKind, method: Method) -> Result<FitResult> {
    match method {
        Method::Moment => mom_fit(sample, model),
        Method::Mle => mle_fit(sample, model),
    }
}

/// Reduced objective for the full model: `g'(t)` and `g''(t)`.
struct Profile {
    /// `(x1 - M1, x2)` for rows with `x2 > 0`.
    terms: Vec<(f64, f64)>,
    m2: f64,
}

impl Profile {
    fn new(sample: &Sample, mom: &SampleMoments) -> Self {
        let terms = sample
            .iter()
            .filter(|p| p.x2 > 0)
            .map(|p| (p.x1 as f64 - mom.m1, p.x2 as f64))
            .collect();
        Profile { terms, m2: mom.m2 }
    }

    fn derivatives(&self, t: f64) -> (f64, f64) {
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for &(d, x2) in &self.terms {
            let rate = self.m2 + t * d;
            let q = d / rate;
            d1 += x2 * q;
            d2 -= x2 * q * q;
        }
        (d1, d2)
    }
}

fn mle_full(sample: &Sample, mom: &SampleMoments) -> Result<FitResult> {
    let first = sample.pairs()[0].x1;
    if sample.iter().all(|p| p.x1 == first) {
        return Err(Error::NonIdentifiable(
            "every x1 is equal, so only lambda2 + lambda3 * x1 is identified".into(),
        ));
    }
    let n = sample.len() as f64;
    let m1 = mom.m1;
    let m2 = mom.m2;
    let upper = m2 / m1;
    let raw = closed_form(mom, SubmodelKind::Full);
    let on_line = |t: f64| -> Result<ModelParams> { ModelParams::new(m1, (m2 - t * m1).max(0.0), t) };

    // g'(0) = n * S12 / M2
    if mom.s12 <= 0.0 {
        let est = build_params(m1, m2, 0.0)?;
        return Ok(finish(sample, SubmodelKind::Full, Method::Mle, est, raw, true));
    }

    let profile = Profile::new(sample, mom);
    let blocked = sample.iter().any(|p| p.x1 == 0 && p.x2 > 0);
    if !blocked {
        let (grad_upper, _) = profile.derivatives(upper);
        if grad_upper >= 0.0 {
            let est = build_params(m1, 0.0, upper)?;
            return Ok(finish(sample, SubmodelKind::Full, Method::Mle, est, raw, true));
        }
    }

    // Safeguarded Newton on g' over (lo, hi); g' > 0 at lo and < 0 at hi.
    let tol = PROFILE_GRAD_TOL * n;
    let mut lo = 0.0;
    let mut hi = upper;
    let mut t = (mom.s12 / m1).clamp(0.05 * upper, 0.95 * upper);
    let mut converged = false;
    for _ in 0..PROFILE_MAX_ITER {
        let (g1, g2) = profile.derivatives(t);
        if g1.abs() <= tol {
            converged = true;
            break;
        }
        if g1 > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let newton = t - g1 / g2;
        let next = if g2 < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == t || hi - lo <= f64::EPSILON * upper {
            // bracket has collapsed to adjacent floats
            converged = true;
            break;
        }
        t = next;
    }
    if !converged {
        return Err(Error::NonConvergence(format!(
            "profile likelihood search did not reach |g'| <= {tol:e} in {PROFILE_MAX_ITER} iterations"
        )));
    }
    let est = on_line(t)?;
    Ok(finish(sample, SubmodelKind::Full, Method::Mle, est, raw, false))
}

/// Partial derivatives of the log-likelihood with respect to
/// `(lambda1, lambda2, lambda3)` at `params`.
pub fn score(params: &ModelParams, sample: &Sample) -> [f64; 3] {
    let n = sample.len() as f64;
    let (mut g1, mut g2, mut g3) = (-n, -n, 0.0);
    for p in sample {
        let x1 = p.x1 as f64;
        let x2 = p.x2 as f64;
        g1 += x1 / params.lambda1();
        g3 -= x1;
        if p.x2 > 0 {
            let rate = params.conditional_rate(p.x1);
            g2 += x2 / rate;
            g3 += x1 * x2 / rate;
        }
    }
    [g1, g2, g3]
}

/// Bootstrap standard errors with bookkeeping on failed replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapSe {
    pub se: [f64; 3],
    pub replicates: usize,
    pub failed: usize,
}

/// Nonparametric bootstrap: resample the pairs with replacement `b` times,
/// refit, and return the per-parameter standard deviation of the estimates.
///
/// Replicate `r` draws from `seed.stream(r)`, so results do not depend on
/// thread scheduling. Replicates that fail to fit are excluded; more than 10%
/// failures is an error.
pub fn bootstrap_se(
    sample: &Sample,
    model: SubmodelKind,
    method: Method,
    b: usize,
    seed: Seed,
) -> Result<BootstrapSe> {
    if b < 2 {
        return Err(Error::domain(format!("bootstrap needs b >= 2, got {b}")));
    }
    fit(sample, model, method)?;
    let n = sample.len();
    let pairs = sample.pairs();
    let estimates: Vec<Option<[f64; 3]>> = (0..b as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed.stream(r);
            let resampled: Vec<CountPair> =
                (0..n).map(|_| pairs[rng.random_range(0..n)]).collect();
            let resampled = Sample::new(resampled).ok()?;
            fit(&resampled, model, method)
                .ok()
                .map(|f| f.estimates.as_array())
        })
        .collect();
    let ok: Vec<[f64; 3]> = estimates.iter().flatten().copied().collect();
    let failed = b - ok.len();
    if failed * 10 > b || ok.len() < 2 {
        return Err(Error::UnreliableBootstrap { failed, total: b });
    }
    let mut se = [0.0; 3];
    for (k, slot) in se.iter_mut().enumerate() {
        let vals: Vec<f64> = ok.iter().map(|e| e[k]).collect();
        *slot = std_dev(&vals);
    }
    Ok(BootstrapSe {
        se,
        replicates: ok.len(),
        failed,
    })
}

/// Sample standard deviation with an `n - 1` divisor.
pub(crate) fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}
