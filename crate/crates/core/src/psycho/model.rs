use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};

use super::dataset::Level;
use super::fit::PsyFit;
use crate::error::{Error, Result};

/// Probability floor/ceiling applied before taking logs.
pub const PSI_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsyParams {
    /// Position: stimulus at which the underlying normal is centred.
    pub alpha: f64,
    /// Scale: reciprocal of the normal's standard deviation.
    pub beta: f64,
    /// Left asymptote (guess rate).
    pub gamma: f64,
    /// Right asymptote complement (lapse rate).
    pub lambda: f64,
}

impl PsyParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            gamma: 0.0,
            lambda: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::param("alpha", "must be finite"));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidScale(self.beta));
        }
        if !(self.gamma >= 0.0) || !(self.lambda >= 0.0) {
            return Err(Error::param("gamma/lambda", "asymptotes must be >= 0"));
        }
        if !(self.gamma + self.lambda < 1.0) {
            return Err(Error::param("gamma/lambda", "gamma + lambda must be < 1"));
        }
        Ok(())
    }

    /// Unchecked evaluation; callers validate once up front.
    pub(crate) fn psi(&self, x: f64) -> f64 {
        self.gamma + (1.0 - self.gamma - self.lambda) * std_normal_cdf(self.beta * (x - self.alpha))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub ldt: f64,
    pub pse: f64,
    pub udt: f64,
}

pub(crate) fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Inverse of the standard normal CDF.
pub fn normal_quantile(p: f64) -> f64 {
    let z = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p);
    if !z.is_finite() {
        return z;
    }
    // one Newton step against the CDF tightens erfc_inv's ~1e-11 error
    let density = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if density > 0.0 {
        z - (std_normal_cdf(z) - p) / density
    } else {
        z
    }
}

/// `Phi(beta * (x - alpha))`.
pub fn cumulative_normal(x: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::InvalidScale(beta));
    }
    Ok(std_normal_cdf(beta * (x - alpha)))
}

pub fn psychometric_value(x: f64, p: &PsyParams) -> Result<f64> {
    p.validate()?;
    Ok(p.psi(x))
}

/// Bernoulli-form negative log-likelihood (the binomial coefficient is dropped).
pub fn neg_log_likelihood(levels: &[Level], p: &PsyParams) -> f64 {
    levels
        .iter()
        .map(|l| {
            let psi = p.psi(l.x).clamp(PSI_EPS, 1.0 - PSI_EPS);
            let k = l.k as f64;
            let miss = (l.n - l.k) as f64;
            -(k * psi.ln() + miss * (1.0 - psi).ln())
        })
        .sum()
}

/// Sum of squared differences between empirical proportions and the curve.
pub fn sse(levels: &[Level], p: &PsyParams) -> f64 {
    levels
        .iter()
        .map(|l| {
            let r = l.proportion() - p.psi(l.x);
            r * r
        })
        .sum()
}

/// Stimulus at which `psi` equals `prob`.
pub(crate) fn inverse_psi(prob: f64, p: &PsyParams) -> Result<f64> {
    let span = 1.0 - p.gamma - p.lambda;
    let f = (prob - p.gamma) / span;
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::ThresholdUndefined(prob));
    }
    Ok(p.alpha + normal_quantile(f) / p.beta)
}

/// Lower detection threshold, point of subjective equality and upper detection
/// threshold at 25%, 50% and 75% "Greater".
pub fn thresholds(p: &PsyParams) -> Result<Thresholds> {
    p.validate()?;
    Ok(Thresholds {
        ldt: inverse_psi(0.25, p)?,
        pse: inverse_psi(0.5, p)?,
        udt: inverse_psi(0.75, p)?,
    })
}

/// Akaike information criterion, `2 * n_free_params + 2 * nll`.
pub fn aic(fit: &PsyFit, n_free_params: usize) -> Result<f64> {
    if !fit.converged {
        return Err(Error::NotConverged);
    }
    Ok(2.0 * n_free_params as f64 + 2.0 * fit.nll)
}
