use rdwlab::sim::{
    gaze_script_preset, run_trial, Frame, GazePreset, GazeSource, Group, Scenario, TrialTrace,
};
use rdwlab::AttentionParams;

use crate::error::{guard, null, read_in, write_out, Failure, RdwStatus};
use crate::gain::RdwAttentionParams;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdwGroup {
    WithDistractor = 0,
    WithoutDistractor = 1,
    Switch = 2,
}

impl From<RdwGroup> for Group {
    fn from(g: RdwGroup) -> Self {
        match g {
            RdwGroup::WithDistractor => Group::WithDistractor,
            RdwGroup::WithoutDistractor => Group::WithoutDistractor,
            RdwGroup::Switch => Group::Switch,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdwGazeKind {
    InstantFocus = 0,
    LinearTurn = 1,
    Glance = 2,
    NeverLook = 3,
}

/// Gaze preset. `duration` is used by `LinearTurn`; `on`, `off` and `cycles` by `Glance`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdwGaze {
    pub kind: RdwGazeKind,
    pub duration: f64,
    pub on: f64,
    pub off: f64,
    pub cycles: u32,
}

impl From<RdwGaze> for GazePreset {
    fn from(g: RdwGaze) -> Self {
        match g.kind {
            RdwGazeKind::InstantFocus => GazePreset::InstantFocus,
            RdwGazeKind::LinearTurn => GazePreset::LinearTurn {
                duration: g.duration,
            },
            RdwGazeKind::Glance => GazePreset::Glance {
                on: g.on,
                off: g.off,
                cycles: g.cycles,
            },
            RdwGazeKind::NeverLook => GazePreset::NeverLook,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RdwFrame {
    pub t: f64,
    pub phys_x: f64,
    pub phys_z: f64,
    pub virtual_dist: f64,
    pub deg: f64,
    pub attention: f64,
    pub gain: f64,
}

impl From<&Frame> for RdwFrame {
    fn from(f: &Frame) -> Self {
        RdwFrame {
            t: f.t,
            phys_x: f.phys_x,
            phys_z: f.phys_z,
            virtual_dist: f.virtual_dist,
            deg: f.deg,
            attention: f.attention,
            gain: f.gain,
        }
    }
}

/// Per-trial outcome. `t1` is NaN when full attention was never reached.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdwTrialSummary {
    pub t1: f64,
    pub max_gain_reached: bool,
    pub physical_distance: f64,
    pub frame_count: usize,
    pub out_of_bounds_frames: usize,
}

/// A simulated trial with its frames.
pub struct RdwTrace {
    inner: TrialTrace,
}

/// Simulates one trial on the default 8 m path. `params` may be null for the defaults.
#[no_mangle]
pub unsafe extern "C" fn rdw_trial_run(
    group: RdwGroup,
    target_gain: f64,
    gaze: *const RdwGaze,
    params: *const RdwAttentionParams,
    dt: f64,
    out: *mut *mut RdwTrace,
) -> RdwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let gaze = *unsafe { read_in(gaze, "gaze") }?;
        let params: AttentionParams = match unsafe { params.as_ref() } {
            Some(p) => (*p).into(),
            None => AttentionParams::default(),
        };
        let source: GazeSource = gaze_script_preset(gaze.into())?.into();
        let trace = run_trial(
            &Scenario::default(),
            group.into(),
            target_gain,
            &source,
            &params,
            dt,
        )?;
        unsafe {
            write_out(
                out,
                "out",
                Box::into_raw(Box::new(RdwTrace { inner: trace })),
            )
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn rdw_trace_free(trace: *mut RdwTrace) {
    if !trace.is_null() {
        // SAFETY: created by rdw_trial_run and not freed before.
        drop(unsafe { Box::from_raw(trace) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn rdw_trace_summary(
    trace: *const RdwTrace,
    out: *mut RdwTrialSummary,
) -> RdwStatus {
    guard(|| {
        let t = &unsafe { read_in(trace, "trace") }?.inner;
        let s = RdwTrialSummary {
            t1: t.t1_duration.unwrap_or(f64::NAN),
            max_gain_reached: t.max_gain_reached,
            physical_distance: t.physical_distance,
            frame_count: t.frames.len(),
            out_of_bounds_frames: t.out_of_bounds_frames,
        };
        unsafe { write_out(out, "out", s) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn rdw_trace_frame(
    trace: *const RdwTrace,
    index: usize,
    out: *mut RdwFrame,
) -> RdwStatus {
    guard(|| {
        let t = &unsafe { read_in(trace, "trace") }?.inner;
        let frame = t.frames.get(index).ok_or_else(|| {
            Failure(
                RdwStatus::InvalidArgument,
                format!("frame {index} out of range ({} frames)", t.frames.len()),
            )
        })?;
        unsafe { write_out(out, "out", frame.into()) }
    })
}
