//! Distribution functions, moments and likelihood of the bivariate
//! Pseudo-Poisson model with a linear regression function:
//!
//! ```text
//! X1            ~ Poisson(lambda1)
//! X2 | X1 = x1  ~ Poisson(lambda2 + lambda3 * x1)
//! ```
//!
//! All mass-function arithmetic happens in the log domain; values are
//! exponentiated only when returned.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{ln_factorial, ln_poisson_pmf, LogSumExp};

/// Relative size below which a series term no longer contributes.
const SERIES_REL_TOL: f64 = 1e-14;
/// Hard cap on series length.
const SERIES_MAX_TERMS: u64 = 50_000_000;

/// Which linear constraint, if any, ties the intercept and slope together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubmodelKind {
    /// Unrestricted three-parameter model.
    Full,
    /// lambda2 = lambda3.
    EqualRates,
    /// lambda2 = 0 (the Poisson-Poisson model).
    ZeroIntercept,
    /// lambda3 = 0, i.e. independent Poisson margins.
    Independence,
}

impl SubmodelKind {
    pub const ALL: [SubmodelKind; 4] = [
        SubmodelKind::Full,
        SubmodelKind::EqualRates,
        SubmodelKind::ZeroIntercept,
        SubmodelKind::Independence,
    ];

    /// Number of free parameters.
    pub fn nparams(self) -> u32 {
        match self {
            SubmodelKind::Full => 3,
            _ => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SubmodelKind::Full => "full",
            SubmodelKind::EqualRates => "equal-rates",
            SubmodelKind::ZeroIntercept => "zero-intercept",
            SubmodelKind::Independence => "independence",
        }
    }
}

impl fmt::Display for SubmodelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubmodelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(SubmodelKind::Full),
            "equal-rates" => Ok(SubmodelKind::EqualRates),
            "zero-intercept" => Ok(SubmodelKind::ZeroIntercept),
            "independence" => Ok(SubmodelKind::Independence),
            other => Err(Error::domain(format!("unknown model '{other}'"))),
        }
    }
}

/// Parameters `(lambda1, lambda2, lambda3)`.
///
/// Valid parameters have `lambda1 > 0`, `lambda2 >= 0`, `lambda3 >= 0` and
/// `lambda2 + lambda3 > 0`; the constructor rejects anything else, so every
/// method on this type is total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
}

impl ModelParams {
    pub fn new(lambda1: f64, lambda2: f64, lambda3: f64) -> Result<Self> {
        if !(lambda1.is_finite() && lambda2.is_finite() && lambda3.is_finite()) {
            return Err(Error::domain(format!(
                "parameters must be finite, got ({lambda1}, {lambda2}, {lambda3})"
            )));
        }
        if lambda1 <= 0.0 {
            return Err(Error::domain(format!("lambda1 must be > 0, got {lambda1}")));
        }
        if lambda2 < 0.0 || lambda3 < 0.0 {
            return Err(Error::domain(format!(
                "lambda2 and lambda3 must be >= 0, got ({lambda2}, {lambda3})"
            )));
        }
        if lambda2 + lambda3 <= 0.0 {
            return Err(Error::domain(
                "lambda2 and lambda3 cannot both be zero",
            ));
        }
        Ok(ModelParams {
            lambda1,
            lambda2,
            lambda3,
        })
    }

    pub fn equal_rates(lambda1: f64, rate: f64) -> Result<Self> {
        Self::new(lambda1, rate, rate)
    }

    pub fn zero_intercept(lambda1: f64, lambda3: f64) -> Result<Self> {
        Self::new(lambda1, 0.0, lambda3)
    }

    pub fn independence(lambda1: f64, lambda2: f64) -> Result<Self> {
        Self::new(lambda1, lambda2, 0.0)
    }

    #[inline]
    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    #[inline]
    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    #[inline]
    pub fn lambda3(&self) -> f64 {
        self.lambda3
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.lambda1, self.lambda2, self.lambda3]
    }

    /// Whether these parameters lie in the subspace of `kind`.
    pub fn satisfies(&self, kind: SubmodelKind) -> bool {
        match kind {
            SubmodelKind::Full => true,
            SubmodelKind::EqualRates => self.lambda2 == self.lambda3,
            SubmodelKind::ZeroIntercept => self.lambda2 == 0.0,
            SubmodelKind::Independence => self.lambda3 == 0.0,
        }
    }

    /// Most specific submodel these parameters belong to.
    pub fn kind(&self) -> SubmodelKind {
        if self.lambda3 == 0.0 {
            SubmodelKind::Independence
        } else if self.lambda2 == 0.0 {
            SubmodelKind::ZeroIntercept
        } else if self.lambda2 == self.lambda3 {
            SubmodelKind::EqualRates
        } else {
            SubmodelKind::Full
        }
    }

    /// Rate of X2 given X1 = x1.
    #[inline]
    pub fn conditional_rate(&self, x1: u64) -> f64 {
        self.lambda2 + self.lambda3 * x1 as f64
    }

    /// `log P(X1 = x1, X2 = x2)`; negative infinity when the pair has zero mass.
    pub fn ln_joint_pmf(&self, x: CountPair) -> f64 {
        ln_poisson_pmf(x.x1, self.lambda1) + ln_poisson_pmf(x.x2, self.conditional_rate(x.x1))
    }

    pub fn joint_pmf(&self, x: CountPair) -> f64 {
        self.ln_joint_pmf(x).exp()
    }

    /// Joint probability generating function `E[t1^X1 t2^X2]`.
    pub fn pgf(&self, t1: f64, t2: f64) -> f64 {
        let inner = t1 * (self.lambda3 * (t2 - 1.0)).exp() - 1.0;
        (self.lambda2 * (t2 - 1.0) + self.lambda1 * inner).exp()
    }

    /// `log P(X2 = x2)`, summing the Poisson mixture over x1.
    pub fn ln_marginal_pmf_x2(&self, x2: u64) -> f64 {
        if self.lambda3 == 0.0 {
            return ln_poisson_pmf(x2, self.lambda2);
        }
        let turnover = (self.lambda1 * (-self.lambda3).exp())
            .max(x2 as f64)
            .max(self.lambda1)
            + 10.0;
        sum_log_series(
            |j| ln_poisson_pmf(j, self.lambda1) + ln_poisson_pmf(x2, self.conditional_rate(j)),
            turnover,
        )
    }

    pub fn marginal_pmf_x2(&self, x2: u64) -> f64 {
        self.ln_marginal_pmf_x2(x2).exp()
    }

    /// `(E[X1], E[X2])`.
    pub fn mean(&self) -> (f64, f64) {
        (self.lambda1, self.mean_x2())
    }

    fn mean_x2(&self) -> f64 {
        self.lambda2 + self.lambda3 * self.lambda1
    }

    pub fn covariance(&self) -> Covariance2 {
        let l1 = self.lambda1;
        let l3 = self.lambda3;
        Covariance2 {
            var1: l1,
            cov12: l1 * l3,
            var2: self.mean_x2() + l3 * l3 * l1,
        }
    }

    /// Pearson correlation of X1 and X2; lies in `[0, 1)`.
    pub fn correlation(&self) -> f64 {
        let cov = self.covariance();
        cov.cov12 / (cov.var1 * cov.var2).sqrt()
    }

    /// Marginal Fisher dispersion indices `(Var/E)` of X1 and X2.
    pub fn dispersion_indices(&self) -> (f64, f64) {
        let l3 = self.lambda3;
        (1.0, 1.0 + l3 * l3 * self.lambda1 / self.mean_x2())
    }

    /// Generalized dispersion index of the pair; exceeds one whenever
    /// `lambda3 > 0` and equals one at `lambda3 = 0`.
    pub fn gdi(&self) -> f64 {
        let l1 = self.lambda1;
        let l3 = self.lambda3;
        let m2 = self.mean_x2();
        let excess = 2.0 * l1.powf(1.5) * l3 * m2.sqrt() + m2 * l3 * l3 * l1;
        1.0 + excess / (l1 * l1 + m2 * m2)
    }

    /// Log-likelihood of an i.i.d. sample, including the factorial constant.
    pub fn log_likelihood(&self, sample: &Sample) -> LogLikelihood {
        let mut value = 0.0;
        for &pair in sample.pairs() {
            let term = self.ln_joint_pmf(pair);
            if term == f64::NEG_INFINITY {
                return LogLikelihood::INFEASIBLE;
            }
            value += term;
        }
        LogLikelihood {
            value,
            feasible: true,
        }
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.lambda1, self.lambda2, self.lambda3)
    }
}

/// Neyman Type A probability mass at `x2`: the law of X2 when `lambda2 = 0`,
/// with `lambda3` the index of clumping.
pub fn neyman_a_pmf(lambda1: f64, lambda3: f64, x2: u64) -> Result<f64> {
    ln_neyman_a_pmf(lambda1, lambda3, x2).map(f64::exp)
}

pub fn ln_neyman_a_pmf(lambda1: f64, lambda3: f64, x2: u64) -> Result<f64> {
    if !(lambda1 > 0.0 && lambda1.is_finite() && lambda3 > 0.0 && lambda3.is_finite()) {
        return Err(Error::domain(format!(
            "Neyman Type A needs lambda1 > 0 and lambda3 > 0, got ({lambda1}, {lambda3})"
        )));
    }
    // e^{-l1} l3^k / k! * sum_j (l1 e^{-l3})^j j^k / j!
    let k = x2 as f64;
    let ln_ratio = lambda1.ln() - lambda3;
    let turnover = (lambda1 * (-lambda3).exp()).max(k).max(lambda1) + 10.0;
    let series = sum_log_series(
        |j| {
            let ln_jk = if x2 == 0 {
                0.0
            } else if j == 0 {
                f64::NEG_INFINITY
            } else {
                k * (j as f64).ln()
            };
            j as f64 * ln_ratio + ln_jk - ln_factorial(j)
        },
        turnover,
    );
    Ok(-lambda1 + k * lambda3.ln() - ln_factorial(x2) + series)
}

/// Log of a series of positive, log-concave terms.
///
/// Terms are summed until the index has passed `turnover`, the current term
/// is below `SERIES_REL_TOL` of the partial sum, and the geometric bound on
/// the remaining tail is below the same tolerance.
fn sum_log_series(ln_term: impl Fn(u64) -> f64, turnover: f64) -> f64 {
    let mut acc = LogSumExp::new();
    let mut j = 0u64;
    let mut current = ln_term(0);
    let ln_tol = SERIES_REL_TOL.ln();
    loop {
        acc.add(current);
        let next = ln_term(j + 1);
        if j as f64 > turnover && current.is_finite() {
            let partial = acc.value();
            let ln_ratio = next - current;
            if current - partial < ln_tol && ln_ratio < 0.0 {
                // tail <= next / (1 - r) since the term ratio is non-increasing
                let ln_tail = next - (-ln_ratio.exp()).ln_1p();
                if ln_tail - partial < ln_tol {
                    break;
                }
            }
        }
        j += 1;
        current = next;
        if j >= SERIES_MAX_TERMS {
            break;
        }
    }
    acc.value()
}

/// 2x2 symmetric covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Covariance2 {
    pub var1: f64,
    pub cov12: f64,
    pub var2: f64,
}

impl Covariance2 {
    pub fn as_array(&self) -> [[f64; 2]; 2] {
        [[self.var1, self.cov12], [self.cov12, self.var2]]
    }

    pub fn determinant(&self) -> f64 {
        self.var1 * self.var2 - self.cov12 * self.cov12
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        self.var1 >= 0.0 && self.var2 >= 0.0 && self.determinant() >= 0.0
    }
}

/// Sample log-likelihood. An infeasible sample (some pair has zero mass,
/// e.g. `x1 = 0, x2 > 0` under `lambda2 = 0`) carries negative infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLikelihood {
    pub value: f64,
    pub feasible: bool,
}

impl LogLikelihood {
    pub const INFEASIBLE: LogLikelihood = LogLikelihood {
        value: f64::NEG_INFINITY,
        feasible: false,
    };
}

/// One bivariate observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountPair {
    pub x1: u64,
    pub x2: u64,
}

impl CountPair {
    pub const fn new(x1: u64, x2: u64) -> Self {
        CountPair { x1, x2 }
    }

    pub const fn swapped(self) -> Self {
        CountPair {
            x1: self.x2,
            x2: self.x1,
        }
    }
}

impl From<(u64, u64)> for CountPair {
    fn from((x1, x2): (u64, u64)) -> Self {
        CountPair { x1, x2 }
    }
}

/// Non-empty ordered sequence of count pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sample {
    pairs: Vec<CountPair>,
}

impl Sample {
    pub fn new(pairs: Vec<CountPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::domain("sample must contain at least one pair"));
        }
        Ok(Sample { pairs })
    }

    pub fn from_pairs<I, P>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: Into<CountPair>,
    {
        Self::new(pairs.into_iter().map(Into::into).collect())
    }

    #[inline]
    pub fn pairs(&self) -> &[CountPair] {
        &self.pairs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Always false; kept for API symmetry with `len`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CountPair> {
        self.pairs.iter()
    }

    /// The sample with the roles of x1 and x2 interchanged.
    pub fn mirrored(&self) -> Sample {
        Sample {
            pairs: self.pairs.iter().map(|p| p.swapped()).collect(),
        }
    }

    pub fn into_pairs(self) -> Vec<CountPair> {
        self.pairs
    }
}

impl<'a> IntoIterator for &'a Sample {
    type Item = &'a CountPair;
    type IntoIter = std::slice::Iter<'a, CountPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}
