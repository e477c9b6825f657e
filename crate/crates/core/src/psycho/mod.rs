//! Psychometric analysis of "Greater"/"Smaller" judgements.
//!
//! The model is `psi(x) = gamma + (1 - gamma - lambda) * Phi(beta * (x - alpha))`, fitted by
//! maximum likelihood with a Nelder–Mead simplex. Thresholds are read off at 25/50/75%.

mod chisq;
mod dataset;
mod fit;
mod model;
pub mod simplex;

pub use chisq::{chi_square_2x2, ChiSquare};
pub use dataset::{Level, ResponseDataset};
pub use fit::{bootstrap_ci, fit_psychometric, fit_report_json, FitOptions, PsyFit};
pub use model::{
    aic, cumulative_normal, neg_log_likelihood, normal_quantile, psychometric_value, sse,
    thresholds, PsyParams, Thresholds, PSI_EPS,
};
