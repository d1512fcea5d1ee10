//! The bivariate Pseudo-Poisson distribution.
//!
//! `X1 ~ Poisson(lambda1)` and, given `X1 = x1`,
//! `X2 ~ Poisson(lambda2 + lambda3 * x1)`. The crate provides
//!
//! * exact mass functions, generating function, moments and dispersion
//!   indices ([`model`]),
//! * seeded simulation, including the k-dimensional triangular
//!   construction ([`sampler`]),
//! * moment and maximum-likelihood fits with bootstrap standard errors
//!   ([`estimation`]),
//! * likelihood-ratio tests of the nested submodels ([`inference`]),
//! * mirrored models and AIC comparison ([`select`]),
//! * a CSV-driven command-line front end ([`cli`]).
//!
//! ```
//! use pseudo_poisson::{mle_fit, sample_bivariate, ModelParams, Seed, SubmodelKind};
//!
//! let truth = ModelParams::new(1.0, 3.0, 4.0).unwrap();
//! let sample = sample_bivariate(&truth, 2000, Seed(7)).unwrap();
//! let fit = mle_fit(&sample, SubmodelKind::Full).unwrap();
//! assert!((fit.estimates.lambda3() - 4.0).abs() < 0.5);
//! ```

pub mod cli;
pub mod error;
pub mod estimation;
pub mod inference;
pub mod model;
pub mod sampler;
pub mod select;
pub mod special;

pub use error::{Error, Result};
pub use estimation::{
    bootstrap_se, fit, mle_fit, mom_fit, sample_moments, score, zero_intercept_feasible,
    BootstrapSe, FitResult, Method, SampleMoments, DEFAULT_BOOTSTRAP_REPLICATES,
};
pub use inference::{chisq1_upper_tail, empirical_dispersion, lrt, TestResult};
pub use model::{
    neyman_a_pmf, CountPair, Covariance2, LogLikelihood, ModelParams, Sample, SubmodelKind,
};
pub use sampler::{poisson_draw, sample_bivariate, sample_kdim, KdimSpec, LinearLink, Seed};
pub use select::{aic, compare_models, mirror, CardName, ComparisonReport, ModelCard};
pub use special::{ln_factorial, ln_poisson_pmf};
