use rdwlab::{
    apply_translation_gain, attention_step, gaze_angle, scheduled_gain, AttentionParams,
    AttentionState, DynamicGain, GainProfileMode, Phase, Pose,
};

use crate::error::{guard, null, read_in, write_out, Failure, RdwStatus};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdwAttentionParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub a_max: f64,
}

impl From<RdwAttentionParams> for AttentionParams {
    fn from(p: RdwAttentionParams) -> Self {
        AttentionParams {
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
            a_max: p.a_max,
        }
    }
}

impl From<AttentionParams> for RdwAttentionParams {
    fn from(p: AttentionParams) -> Self {
        RdwAttentionParams {
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
            a_max: p.a_max,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RdwAttentionState {
    pub attention: f64,
    pub time_in_hold: f64,
    pub hold_duration: f64,
}

impl From<RdwAttentionState> for AttentionState {
    fn from(s: RdwAttentionState) -> Self {
        AttentionState {
            attention: s.attention,
            time_in_hold: s.time_in_hold,
            hold_duration: s.hold_duration,
        }
    }
}

impl From<AttentionState> for RdwAttentionState {
    fn from(s: AttentionState) -> Self {
        RdwAttentionState {
            attention: s.attention,
            time_in_hold: s.time_in_hold,
            hold_duration: s.hold_duration,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdwPhase {
    Idle = 0,
    Ascent = 1,
    Hold = 2,
    Descent = 3,
}

impl From<Phase> for RdwPhase {
    fn from(p: Phase) -> Self {
        match p {
            Phase::Idle => RdwPhase::Idle,
            Phase::Ascent => RdwPhase::Ascent,
            Phase::Hold => RdwPhase::Hold,
            Phase::Descent => RdwPhase::Descent,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdwGainMode {
    Dynamic = 0,
    Scheduled = 1,
    Switch = 2,
}

impl From<RdwGainMode> for GainProfileMode {
    fn from(m: RdwGainMode) -> Self {
        match m {
            RdwGainMode::Dynamic => GainProfileMode::Dynamic,
            RdwGainMode::Scheduled => GainProfileMode::Scheduled,
            RdwGainMode::Switch => GainProfileMode::Switch,
        }
    }
}

/// Default attention parameters (a=5000, b=2000, c=3.1, d=15, a_max=100).
#[no_mangle]
pub extern "C" fn rdw_attention_params_default() -> RdwAttentionParams {
    AttentionParams::default().into()
}

/// Advances the attention accumulator one frame.
#[no_mangle]
pub unsafe extern "C" fn rdw_attention_step(
    state: *const RdwAttentionState,
    deg: f64,
    dt: f64,
    params: *const RdwAttentionParams,
    out: *mut RdwAttentionState,
) -> RdwStatus {
    guard(|| {
        let state = unsafe { read_in(state, "state") }?;
        let params: AttentionParams = (*unsafe { read_in(params, "params") }?).into();
        params.validate()?;
        if !(dt > 0.0) {
            return Err(Failure(RdwStatus::InvalidArgument, "dt must be > 0".into()));
        }
        let next = attention_step((*state).into(), deg, dt, &params);
        unsafe { write_out(out, "out", next.into()) }
    })
}

/// Angle in degrees between the view direction and the eye-to-centroid vector.
/// `view_direction` and `centroid` point to three doubles each.
#[no_mangle]
pub unsafe extern "C" fn rdw_gaze_angle(
    pos_x: f64,
    pos_z: f64,
    view_direction: *const f64,
    eye_height: f64,
    centroid: *const f64,
    out_deg: *mut f64,
) -> RdwStatus {
    guard(|| {
        if view_direction.is_null() {
            return Err(null("view_direction"));
        }
        if centroid.is_null() {
            return Err(null("centroid"));
        }
        // SAFETY: both non-null and documented to hold three doubles.
        let (v, c) = unsafe {
            (
                *(view_direction as *const [f64; 3]),
                *(centroid as *const [f64; 3]),
            )
        };
        let pose = Pose::new([pos_x, pos_z], v, eye_height)?;
        let deg = gaze_angle(&pose, c)?;
        unsafe { write_out(out_deg, "out_deg", deg) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn rdw_scheduled_gain(
    t_since_trigger: f64,
    mode: RdwGainMode,
    base: f64,
    target: f64,
    out_gain: *mut f64,
) -> RdwStatus {
    guard(|| {
        let g = scheduled_gain(t_since_trigger, mode.into(), base, target)?;
        unsafe { write_out(out_gain, "out_gain", g) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn rdw_apply_translation_gain(
    physical_delta: f64,
    gain: f64,
    out_virtual: *mut f64,
) -> RdwStatus {
    guard(|| {
        let v = apply_translation_gain(physical_delta, gain)?;
        unsafe { write_out(out_virtual, "out_virtual", v) }
    })
}

/// Attention accumulator plus phased gain controller.
pub struct RdwController {
    inner: DynamicGain,
}

#[no_mangle]
pub unsafe extern "C" fn rdw_controller_new(
    params: *const RdwAttentionParams,
    base_gain: f64,
    target_gain: f64,
    out: *mut *mut RdwController,
) -> RdwStatus {
    guard(|| {
        let params: AttentionParams = (*unsafe { read_in(params, "params") }?).into();
        params.validate()?;
        for g in [base_gain, target_gain] {
            if !(g > 0.0) {
                return Err(rdwlab::Error::InvalidGain(g).into());
            }
        }
        let handle = Box::new(RdwController {
            inner: DynamicGain::new(params, base_gain, target_gain),
        });
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { write_out(out, "out", Box::into_raw(handle)) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn rdw_controller_free(ctrl: *mut RdwController) {
    if !ctrl.is_null() {
        // SAFETY: created by rdw_controller_new and not freed before.
        drop(unsafe { Box::from_raw(ctrl) });
    }
}

unsafe fn controller<'a>(ctrl: *mut RdwController) -> Result<&'a mut RdwController, Failure> {
    // SAFETY: caller passes a live handle from rdw_controller_new.
    unsafe { ctrl.as_mut() }.ok_or_else(|| null("ctrl"))
}

/// Starts the gain episode. `out_fired` (optional) reports whether it started.
#[no_mangle]
pub unsafe extern "C" fn rdw_controller_trigger(
    ctrl: *mut RdwController,
    out_fired: *mut bool,
) -> RdwStatus {
    guard(|| {
        let c = unsafe { controller(ctrl) }?;
        let fired = c.inner.trigger();
        if !out_fired.is_null() {
            unsafe { write_out(out_fired, "out_fired", fired) }?;
        }
        Ok(())
    })
}

/// Feeds one frame of gaze angle and returns the frame's gain.
#[no_mangle]
pub unsafe extern "C" fn rdw_controller_step(
    ctrl: *mut RdwController,
    deg: f64,
    dt: f64,
    out_gain: *mut f64,
) -> RdwStatus {
    guard(|| {
        let c = unsafe { controller(ctrl) }?;
        if !(dt > 0.0) {
            return Err(Failure(RdwStatus::InvalidArgument, "dt must be > 0".into()));
        }
        let g = c.inner.step(deg, dt);
        unsafe { write_out(out_gain, "out_gain", g) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn rdw_controller_phase(
    ctrl: *const RdwController,
    out_phase: *mut RdwPhase,
) -> RdwStatus {
    guard(|| {
        let c = unsafe { read_in(ctrl, "ctrl") }?;
        unsafe { write_out(out_phase, "out_phase", c.inner.controller.phase.into()) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn rdw_controller_attention(
    ctrl: *const RdwController,
    out_attention: *mut f64,
) -> RdwStatus {
    guard(|| {
        let c = unsafe { read_in(ctrl, "ctrl") }?;
        unsafe { write_out(out_attention, "out_attention", c.inner.attention.attention) }
    })
}

/// Ascent duration once full attention was reached; `RDW_STATUS_NOT_AVAILABLE` before.
#[no_mangle]
pub unsafe extern "C" fn rdw_controller_t1(
    ctrl: *const RdwController,
    out_t1: *mut f64,
) -> RdwStatus {
    guard(|| {
        let c = unsafe { read_in(ctrl, "ctrl") }?;
        match c.inner.controller.t1_duration {
            Some(t1) => unsafe { write_out(out_t1, "out_t1", t1) },
            None => Err(Failure(
                RdwStatus::NotAvailable,
                "full attention not reached yet".into(),
            )),
        }
    })
}
