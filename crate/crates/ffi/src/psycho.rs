use std::ffi::c_char;

use rdwlab::psycho::{
    chi_square_2x2, fit_psychometric, psychometric_value, thresholds, FitOptions, Level, PsyFit,
    PsyParams, ResponseDataset,
};

use crate::error::{guard, into_c_string, null, read_in, write_out, Failure, RdwStatus};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdwPsyParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
}

impl From<RdwPsyParams> for PsyParams {
    fn from(p: RdwPsyParams) -> Self {
        PsyParams {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            lambda: p.lambda,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdwThresholds {
    pub ldt: f64,
    pub pse: f64,
    pub udt: f64,
}

/// Fit settings. A NaN `fix_gamma`/`fix_lambda` means the default of 0; `n_boot = 0`
/// skips the bootstrap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdwFitOptions {
    pub fix_gamma: f64,
    pub fix_lambda: f64,
    pub n_boot: u32,
    pub ci_level: f64,
    pub seed: u64,
}

impl From<RdwFitOptions> for FitOptions {
    fn from(o: RdwFitOptions) -> Self {
        let fixed = |v: f64| (!v.is_nan()).then_some(v);
        FitOptions {
            fix_gamma: fixed(o.fix_gamma),
            fix_lambda: fixed(o.fix_lambda),
            n_boot: o.n_boot as usize,
            ci_level: o.ci_level,
            seed: o.seed,
        }
    }
}

/// Plain-data view of a fit. `has_ci` tells whether `ci_low`/`ci_high` are set.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdwFitSummary {
    pub params: RdwPsyParams,
    pub nll: f64,
    pub aic: f64,
    pub sse: f64,
    pub pse: f64,
    pub ldt: f64,
    pub udt: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub has_ci: bool,
    pub converged: bool,
}

#[no_mangle]
pub extern "C" fn rdw_fit_options_default() -> RdwFitOptions {
    let d = FitOptions::default();
    RdwFitOptions {
        fix_gamma: f64::NAN,
        fix_lambda: f64::NAN,
        n_boot: d.n_boot as u32,
        ci_level: d.ci_level,
        seed: d.seed,
    }
}

#[no_mangle]
pub unsafe extern "C" fn rdw_psychometric_value(
    x: f64,
    params: *const RdwPsyParams,
    out_p: *mut f64,
) -> RdwStatus {
    guard(|| {
        let p: PsyParams = (*unsafe { read_in(params, "params") }?).into();
        let v = psychometric_value(x, &p)?;
        unsafe { write_out(out_p, "out_p", v) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn rdw_thresholds(
    params: *const RdwPsyParams,
    out: *mut RdwThresholds,
) -> RdwStatus {
    guard(|| {
        let p: PsyParams = (*unsafe { read_in(params, "params") }?).into();
        let t = thresholds(&p)?;
        unsafe {
            write_out(
                out,
                "out",
                RdwThresholds {
                    ldt: t.ldt,
                    pse: t.pse,
                    udt: t.udt,
                },
            )
        }
    })
}

/// Chi-square statistic (df = 1, no continuity correction) of `[[a, b], [c, d]]`.
/// `out_p_value` may be null.
#[no_mangle]
pub unsafe extern "C" fn rdw_chi_square_2x2(
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    out_statistic: *mut f64,
    out_p_value: *mut f64,
) -> RdwStatus {
    guard(|| {
        let r = chi_square_2x2([[a, b], [c, d]])?;
        unsafe { write_out(out_statistic, "out_statistic", r.statistic) }?;
        if !out_p_value.is_null() {
            unsafe { write_out(out_p_value, "out_p_value", r.p_value) }?;
        }
        Ok(())
    })
}

/// Fitted psychometric function.
pub struct RdwFit {
    inner: PsyFit,
}

/// Fits `len` levels given as parallel arrays of gains, presentations and "Greater" counts.
/// `options` may be null for the defaults.
#[no_mangle]
pub unsafe extern "C" fn rdw_fit(
    gains: *const f64,
    n: *const u64,
    k: *const u64,
    len: usize,
    options: *const RdwFitOptions,
    out: *mut *mut RdwFit,
) -> RdwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if len > 0 && (gains.is_null() || n.is_null() || k.is_null()) {
            return Err(null("gains/n/k"));
        }
        let options: FitOptions = match unsafe { options.as_ref() } {
            Some(o) => (*o).into(),
            None => FitOptions::default(),
        };
        let levels = if len == 0 {
            Vec::new()
        } else {
            // SAFETY: non-null, caller guarantees `len` readable elements each.
            let (xs, ns, ks) = unsafe {
                (
                    std::slice::from_raw_parts(gains, len),
                    std::slice::from_raw_parts(n, len),
                    std::slice::from_raw_parts(k, len),
                )
            };
            xs.iter()
                .zip(ns)
                .zip(ks)
                .map(|((&x, &n), &k)| Level { x, n, k })
                .collect()
        };
        let data = ResponseDataset::new(levels)?;
        let fit = fit_psychometric(&data, &options)?;
        unsafe { write_out(out, "out", Box::into_raw(Box::new(RdwFit { inner: fit }))) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn rdw_fit_free(fit: *mut RdwFit) {
    if !fit.is_null() {
        // SAFETY: created by rdw_fit and not freed before.
        drop(unsafe { Box::from_raw(fit) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn rdw_fit_summary(fit: *const RdwFit, out: *mut RdwFitSummary) -> RdwStatus {
    guard(|| {
        let f = &unsafe { read_in(fit, "fit") }?.inner;
        let p = f.params;
        let summary = RdwFitSummary {
            params: RdwPsyParams {
                alpha: p.alpha,
                beta: p.beta,
                gamma: p.gamma,
                lambda: p.lambda,
            },
            nll: f.nll,
            aic: f.aic,
            sse: f.sse,
            pse: f.pse,
            ldt: f.ldt,
            udt: f.udt,
            ci_low: f.pse_ci.map_or(f64::NAN, |c| c[0]),
            ci_high: f.pse_ci.map_or(f64::NAN, |c| c[1]),
            has_ci: f.pse_ci.is_some(),
            converged: f.converged,
        };
        unsafe { write_out(out, "out", summary) }
    })
}

/// The fit report as JSON, in the same format the CLI writes. Free with `rdw_string_free`.
#[no_mangle]
pub unsafe extern "C" fn rdw_fit_to_json(
    fit: *const RdwFit,
    out_json: *mut *mut c_char,
) -> RdwStatus {
    guard(|| {
        let f = &unsafe { read_in(fit, "fit") }?.inner;
        let json = serde_json_string(f)?;
        unsafe { write_out(out_json, "out_json", into_c_string(json)) }
    })
}

fn serde_json_string(fit: &PsyFit) -> Result<String, Failure> {
    rdwlab::psycho::fit_report_json(fit).map_err(Failure::from)
}
