use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::ResponseDataset;
use super::model::{self, neg_log_likelihood, thresholds, PsyParams};
use super::simplex::{nelder_mead, SimplexOptions};
use crate::error::{Error, Result};

/// Free parameters in every fit: position and scale. Asymptotes are always fixed.
const N_FREE: usize = 2;

/// Refits that fail beyond this fraction make a bootstrap interval unreliable.
const MAX_BOOT_FAILURE: f64 = 0.20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitOptions {
    pub fix_gamma: Option<f64>,
    pub fix_lambda: Option<f64>,
    /// Parametric bootstrap replicates for the PSE interval; 0 skips the bootstrap.
    pub n_boot: usize,
    pub ci_level: f64,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            fix_gamma: None,
            fix_lambda: None,
            n_boot: 1000,
            ci_level: 0.95,
            seed: 1,
        }
    }
}

impl FitOptions {
    pub fn without_bootstrap() -> Self {
        Self {
            n_boot: 0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let gamma = self.fix_gamma.unwrap_or(0.0);
        let lambda = self.fix_lambda.unwrap_or(0.0);
        if !(gamma >= 0.0 && lambda >= 0.0 && gamma + lambda < 1.0) {
            return Err(Error::param(
                "fix_gamma/fix_lambda",
                "asymptotes must be >= 0 with gamma + lambda < 1",
            ));
        }
        if self.n_boot != 0 && self.n_boot < 100 {
            return Err(Error::param(
                "n_boot",
                "must be 0 (disabled) or at least 100",
            ));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::param("ci_level", "must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Fit report. Serializes to the JSON fit-report format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsyFit {
    pub params: PsyParams,
    pub nll: f64,
    pub aic: f64,
    pub sse: f64,
    pub pse: f64,
    pub ldt: f64,
    pub udt: f64,
    pub pse_ci: Option<[f64; 2]>,
    pub converged: bool,
}

impl PsyFit {
    #[cfg(test)]
    pub(crate) fn placeholder(nll: f64) -> Self {
        Self {
            params: PsyParams::new(1.0, 1.0),
            nll,
            aic: f64::NAN,
            sse: 0.0,
            pse: 1.0,
            ldt: 0.5,
            udt: 1.5,
            pse_ci: None,
            converged: true,
        }
    }
}

fn check_identifiable(data: &ResponseDataset) -> Result<()> {
    let levels = data.levels();
    if levels.iter().all(|l| l.k == 0) {
        return Err(Error::FitDegenerate(
            "no \"Greater\" responses at any level".into(),
        ));
    }
    if levels.iter().all(|l| l.k == l.n) {
        return Err(Error::FitDegenerate(
            "only \"Greater\" responses at every level".into(),
        ));
    }
    let mixed = levels.iter().filter(|l| l.k > 0 && l.k < l.n).count();
    if mixed < 2 {
        return Err(Error::FitDegenerate(format!(
            "{mixed} level(s) with mixed responses; at least 2 are needed to identify position and scale"
        )));
    }
    Ok(())
}

/// Stimulus where the empirical proportions first cross `mid`, by linear interpolation.
fn crossing_guess(data: &ResponseDataset, mid: f64) -> f64 {
    let levels = data.levels();
    for w in levels.windows(2) {
        let (p0, p1) = (w[0].proportion(), w[1].proportion());
        if p0 < mid && p1 >= mid {
            return w[0].x + (mid - p0) / (p1 - p0) * (w[1].x - w[0].x);
        }
    }
    let (lo, hi) = data.x_range();
    if levels.iter().all(|l| l.proportion() >= mid) {
        lo
    } else if levels.iter().all(|l| l.proportion() < mid) {
        hi
    } else {
        0.5 * (lo + hi)
    }
}

/// Core maximum-likelihood fit of position and scale; no bootstrap.
fn fit_point(data: &ResponseDataset, gamma: f64, lambda: f64) -> Result<(PsyParams, f64, bool)> {
    check_identifiable(data)?;
    let (lo, hi) = data.x_range();
    let range = hi - lo;
    let alpha0 = crossing_guess(data, gamma + 0.5 * (1.0 - gamma - lambda));
    let beta0 = 2.0 / range;

    let levels = data.levels();
    let objective = |v: &[f64]| {
        let p = PsyParams {
            alpha: v[0],
            beta: v[1].exp(),
            gamma,
            lambda,
        };
        neg_log_likelihood(levels, &p)
    };

    // optimized in (alpha, ln beta) so the scale stays positive
    let starts = [
        (alpha0, beta0),
        (alpha0 - 0.2 * range, 3.0 * beta0),
        (alpha0 + 0.2 * range, 3.0 * beta0),
        (alpha0, 10.0 * beta0),
        (alpha0, 0.5 * beta0),
    ];
    let step = [0.1 * range, 0.5];
    let opts = SimplexOptions::default();
    let mut best: Option<super::simplex::Minimum> = None;
    for (a, b) in starts {
        let first = nelder_mead(objective, &[a, b.ln()], &step, opts);
        // restart at the optimum to guard against a collapsed simplex
        let polished = nelder_mead(objective, &first.x, &[0.01 * range, 0.05], opts);
        if best.as_ref().is_none_or(|m| polished.fx < m.fx) {
            best = Some(polished);
        }
    }
    let best = best.expect("at least one start");
    let params = PsyParams {
        alpha: best.x[0],
        beta: best.x[1].exp(),
        gamma,
        lambda,
    };
    let converged = best.converged && best.fx.is_finite() && params.beta.is_finite();
    Ok((params, best.fx, converged))
}

/// Maximum-likelihood fit of a cumulative-normal psychometric function with fixed
/// asymptotes, plus thresholds, AIC, SSE and (when `n_boot > 0`) a bootstrap PSE interval.
pub fn fit_psychometric(data: &ResponseDataset, options: &FitOptions) -> Result<PsyFit> {
    options.validate()?;
    let gamma = options.fix_gamma.unwrap_or(0.0);
    let lambda = options.fix_lambda.unwrap_or(0.0);
    let (params, nll, converged) = fit_point(data, gamma, lambda)?;
    let t = thresholds(&params)?;
    let mut fit = PsyFit {
        params,
        nll,
        aic: 2.0 * N_FREE as f64 + 2.0 * nll,
        sse: model::sse(data.levels(), &params),
        pse: t.pse,
        ldt: t.ldt,
        udt: t.udt,
        pse_ci: None,
        converged,
    };
    if options.n_boot > 0 {
        let (lo, hi) = bootstrap_ci(data, &fit, options.n_boot, options.seed, options.ci_level)?;
        fit.pse_ci = Some([lo, hi]);
    }
    Ok(fit)
}

/// The fit report as pretty-printed JSON.
pub fn fit_report_json(fit: &PsyFit) -> Result<String> {
    Ok(serde_json::to_string_pretty(fit)?)
}

/// Percentile of sorted data with linear interpolation between order statistics.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    match sorted.get(i + 1) {
        Some(next) => sorted[i] + frac * (next - sorted[i]),
        None => sorted[i],
    }
}

/// Parametric bootstrap percentile interval for the PSE.
///
/// Replicate `r` draws its counts from a ChaCha8 stream seeded with `seed + r`, so the
/// interval does not depend on scheduling.
pub fn bootstrap_ci(
    data: &ResponseDataset,
    fit: &PsyFit,
    n_boot: usize,
    seed: u64,
    level: f64,
) -> Result<(f64, f64)> {
    if !fit.converged {
        return Err(Error::NotConverged);
    }
    if n_boot < 100 {
        return Err(Error::param(
            "n_boot",
            "bootstrap needs at least 100 replicates",
        ));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::param("ci_level", "must lie in (0, 1)"));
    }
    let probs: Vec<f64> = data.levels().iter().map(|l| fit.params.psi(l.x)).collect();
    let (gamma, lambda) = (fit.params.gamma, fit.params.lambda);

    let pses: Vec<Option<f64>> = (0..n_boot as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r));
            let ks: Vec<u64> = data
                .levels()
                .iter()
                .zip(&probs)
                .map(|(l, &p)| {
                    Binomial::new(l.n, p.clamp(0.0, 1.0))
                        .map(|b| b.sample(&mut rng))
                        .unwrap_or(0)
                })
                .collect();
            let resampled = data.with_counts(&ks);
            match fit_point(&resampled, gamma, lambda) {
                Ok((p, _, true)) => model::inverse_psi(0.5, &p).ok(),
                _ => None,
            }
        })
        .collect();

    let mut ok: Vec<f64> = pses.into_iter().flatten().collect();
    let failed = n_boot - ok.len();
    if failed as f64 > MAX_BOOT_FAILURE * n_boot as f64 {
        return Err(Error::CiUnreliable {
            failed,
            total: n_boot,
        });
    }
    ok.sort_by(f64::total_cmp);
    let tail = 0.5 * (1.0 - level);
    Ok((quantile_sorted(&ok, tail), quantile_sorted(&ok, 1.0 - tail)))
}
