//! Likelihood-ratio tests of the three nested hypotheses against the full
//! model, and empirical dispersion diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::{mle_fit, sample_moments, FitResult};
use crate::model::{Sample, SubmodelKind};

/// Slack below zero tolerated in `-2 log Lambda` before it is treated as a
/// solver failure.
const NEGATIVE_STAT_SLACK: f64 = 1e-8;

/// `P(chi^2_1 > x) = erfc(sqrt(x / 2))`.
pub fn chisq1_upper_tail(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!(
            "chi-square statistic must be >= 0, got {x}"
        )));
    }
    Ok(libm::erfc((0.5 * x).sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub hypothesis: SubmodelKind,
    /// `-2 log Lambda`.
    pub stat: f64,
    pub pvalue: f64,
    pub df: u32,
    pub restricted_fit: FitResult,
    pub full_fit: FitResult,
    /// Set for `lambda3 = 0`, which sits on the edge of the parameter space;
    /// the chi-square(1) reference is then only approximate.
    pub boundary_caution: bool,
}

impl TestResult {
    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.pvalue < alpha
    }
}

/// Generalized likelihood-ratio test of `hypothesis` against the full model,
/// referred to chi-square with one degree of freedom.
pub fn lrt(sample: &Sample, hypothesis: SubmodelKind) -> Result<TestResult> {
    if hypothesis == SubmodelKind::Full {
        return Err(Error::domain(
            "the hypothesis must be a submodel (equal-rates, zero-intercept or independence)",
        ));
    }
    let restricted_fit = mle_fit(sample, hypothesis)?;
    let full_fit = mle_fit(sample, SubmodelKind::Full)?;
    let mut stat = 2.0 * (full_fit.loglik - restricted_fit.loglik);
    if !stat.is_finite() {
        return Err(Error::Infeasible(format!(
            "log-likelihood of the {hypothesis} model is not finite"
        )));
    }
    if stat < 0.0 {
        let scale = full_fit.loglik.abs().max(1.0);
        if stat < -NEGATIVE_STAT_SLACK * scale {
            return Err(Error::NonConvergence(format!(
                "full-model fit is below the {hypothesis} fit by {:e}",
                -stat / 2.0
            )));
        }
        stat = 0.0;
    }
    Ok(TestResult {
        hypothesis,
        stat,
        pvalue: chisq1_upper_tail(stat)?,
        df: 1,
        restricted_fit,
        full_fit,
        boundary_caution: hypothesis == SubmodelKind::Independence,
    })
}

/// Variance-to-mean ratios `(s1^2 / M1, s2^2 / M2)` of the two margins, using
/// the unbiased (`n - 1`) sample variance.
pub fn empirical_dispersion(sample: &Sample) -> Result<(f64, f64)> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::domain("dispersion indices need at least two pairs"));
    }
    let m = sample_moments(sample);
    if m.m1 <= 0.0 || m.m2 <= 0.0 {
        return Err(Error::domain(format!(
            "dispersion index undefined: sample means are ({}, {})",
            m.m1, m.m2
        )));
    }
    let scale = n as f64 / (n as f64 - 1.0);
    Ok((m.v1 * scale / m.m1, m.v2 * scale / m.m2))
}
