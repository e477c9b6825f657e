//! Phased translation-gain controller and the fixed gain profiles used by the
//! control groups.
//!
//! A dynamic episode runs Idle → Ascent → Hold → Descent → Idle. During Ascent the gain
//! follows the attention level linearly from the base gain to the target gain. Reaching
//! full attention ends Ascent (that elapsed time is the episode's t1). Hold keeps the
//! target for `hold_duration`. Descent walks back to the base gain linearly in time
//! over `descent_duration`.

use serde::{Deserialize, Serialize};

use crate::attention::{attention_step, AttentionParams, AttentionState, TIME_EPS};
use crate::error::{Error, Result};

/// Rise time of the canonical gain envelope, seconds.
pub const ENVELOPE_RISE: f64 = 0.200;
/// Hold time of the canonical gain envelope, seconds.
pub const ENVELOPE_HOLD: f64 = 0.300;
/// Fall time of the canonical gain envelope, seconds.
pub const ENVELOPE_FALL: f64 = 0.050;
/// Onset window during which attention stays frozen, seconds.
pub const ONSET_HOLD: f64 = 0.033;

pub const fn envelope_length() -> f64 {
    ENVELOPE_RISE + ENVELOPE_HOLD + ENVELOPE_FALL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Idle,
    Ascent,
    Hold,
    Descent,
}

/// How the gain evolves after the trigger in a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainProfileMode {
    /// Attention-driven controller (with distractor).
    Dynamic,
    /// Fixed 550 ms linear envelope (without distractor).
    Scheduled,
    /// Immediate switch to the target for the length of the envelope.
    Switch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainController {
    pub phase: Phase,
    pub base_gain: f64,
    pub target_gain: f64,
    pub current_gain: f64,
    pub phase_timer: f64,
    pub t1_elapsed: f64,
    /// Ascent duration of the completed ascent, if full attention was reached.
    pub t1_duration: Option<f64>,
    pub hold_duration: f64,
    pub descent_duration: f64,
    pub onset_hold: f64,
    /// Set once an episode has run to completion; a finished controller ignores triggers.
    pub finished: bool,
}

impl GainController {
    pub fn new(base_gain: f64, target_gain: f64) -> Self {
        Self {
            phase: Phase::Idle,
            base_gain,
            target_gain,
            current_gain: base_gain,
            phase_timer: 0.0,
            t1_elapsed: 0.0,
            t1_duration: None,
            hold_duration: ENVELOPE_HOLD,
            descent_duration: ENVELOPE_FALL,
            onset_hold: ONSET_HOLD,
            finished: false,
        }
    }

    /// Starts an episode. Has no effect unless the controller is idle and unused.
    pub fn trigger(&mut self) -> bool {
        if self.phase != Phase::Idle || self.finished {
            return false;
        }
        self.phase = Phase::Ascent;
        self.t1_elapsed = 0.0;
        self.phase_timer = 0.0;
        true
    }

    pub fn reached_max(&self) -> bool {
        self.t1_duration.is_some()
    }

    fn lerp(&self, frac: f64) -> f64 {
        self.base_gain + (self.target_gain - self.base_gain) * frac.clamp(0.0, 1.0)
    }
}

/// Advances the controller one frame given the attention after this frame's update.
pub fn controller_step(
    ctrl: GainController,
    state: &AttentionState,
    dt: f64,
    params: &AttentionParams,
) -> GainController {
    let mut c = ctrl;
    match c.phase {
        Phase::Idle => c.current_gain = c.base_gain,
        Phase::Ascent => {
            c.t1_elapsed += dt;
            c.current_gain = c.lerp(state.level(params));
            if state.attention >= params.a_max {
                c.t1_duration = Some(c.t1_elapsed);
                c.current_gain = c.target_gain;
                c.phase = Phase::Hold;
                c.phase_timer = 0.0;
            }
        }
        Phase::Hold => {
            c.phase_timer += dt;
            c.current_gain = c.target_gain;
            if c.phase_timer + TIME_EPS >= c.hold_duration {
                c.phase = Phase::Descent;
                c.phase_timer = 0.0;
            }
        }
        Phase::Descent => {
            c.phase_timer += dt;
            if c.phase_timer + TIME_EPS >= c.descent_duration {
                c.current_gain = c.base_gain;
                c.phase = Phase::Idle;
                c.phase_timer = 0.0;
                c.finished = true;
            } else {
                c.current_gain = c.lerp(1.0 - c.phase_timer / c.descent_duration);
            }
        }
    }
    c
}

/// Attention accumulator and gain controller driven together by a gaze-angle stream.
///
/// An onset hold is armed on every focus onset while ascending, including the first
/// focused frame after the trigger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicGain {
    pub params: AttentionParams,
    pub attention: AttentionState,
    pub controller: GainController,
    focused: bool,
}

impl DynamicGain {
    pub fn new(params: AttentionParams, base_gain: f64, target_gain: f64) -> Self {
        Self {
            params,
            attention: AttentionState::new(),
            controller: GainController::new(base_gain, target_gain),
            focused: false,
        }
    }

    pub fn trigger(&mut self) -> bool {
        let fired = self.controller.trigger();
        if fired {
            self.attention = AttentionState::new();
            self.focused = false;
        }
        fired
    }

    pub fn triggered(&self) -> bool {
        self.controller.phase != Phase::Idle || self.controller.finished
    }

    /// Consumes one frame of gaze angle and returns the gain for that frame.
    pub fn step(&mut self, deg: f64, dt: f64) -> f64 {
        if self.triggered() {
            let focused = deg < self.params.d;
            if self.controller.phase == Phase::Ascent && focused && !self.focused {
                self.attention.arm_hold(self.controller.onset_hold);
            }
            self.focused = focused;
            self.attention = attention_step(self.attention, deg, dt, &self.params);
        }
        self.controller = controller_step(self.controller, &self.attention, dt, &self.params);
        self.controller.current_gain
    }
}

/// Gain of the non-attentive profiles `t_since_trigger` seconds after the trigger.
/// Negative times mean the trigger has not fired yet.
pub fn scheduled_gain(
    t_since_trigger: f64,
    mode: GainProfileMode,
    base: f64,
    target: f64,
) -> Result<f64> {
    let t = t_since_trigger;
    let gain = match mode {
        GainProfileMode::Dynamic => {
            return Err(Error::Config(
                "the dynamic profile is attention-driven and has no fixed schedule".into(),
            ))
        }
        _ if t < 0.0 || t >= envelope_length() => base,
        GainProfileMode::Switch => target,
        GainProfileMode::Scheduled => {
            if t < ENVELOPE_RISE {
                base + (target - base) * t / ENVELOPE_RISE
            } else if t < ENVELOPE_RISE + ENVELOPE_HOLD {
                target
            } else {
                let into_fall = t - ENVELOPE_RISE - ENVELOPE_HOLD;
                target + (base - target) * into_fall / ENVELOPE_FALL
            }
        }
    };
    Ok(gain)
}

/// Maps a physical displacement to the virtual displacement under gain `g`.
pub fn apply_translation_gain(physical_delta: f64, g: f64) -> Result<f64> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::InvalidGain(g));
    }
    Ok(physical_delta * g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const DT: f64 = 1.0 / 90.0;

    fn ascent(base: f64, target: f64) -> GainController {
        let mut c = GainController::new(base, target);
        assert!(c.trigger());
        c
    }

    fn with_attention(attention: f64) -> AttentionState {
        AttentionState {
            attention,
            ..Default::default()
        }
    }

    #[test]
    fn ascent_endpoints_and_midpoint() {
        let p = AttentionParams::default();
        let c = controller_step(ascent(1.0, 1.5), &with_attention(0.0), DT, &p);
        assert_eq!(c.current_gain, 1.0);
        assert_eq!(c.phase, Phase::Ascent);

        let c = controller_step(ascent(1.0, 1.5), &with_attention(100.0), DT, &p);
        assert_eq!(c.current_gain, 1.5);
        assert_eq!(c.phase, Phase::Hold);
        assert_abs_diff_eq!(c.t1_duration.unwrap(), DT);

        let c = controller_step(ascent(1.0, 1.4), &with_attention(50.0), DT, &p);
        assert_abs_diff_eq!(c.current_gain, 1.2, epsilon = 1e-12);
    }

    #[test]
    fn idle_ignores_attention() {
        let p = AttentionParams::default();
        let c = controller_step(
            GainController::new(1.0, 0.5),
            &with_attention(100.0),
            DT,
            &p,
        );
        assert_eq!(c.phase, Phase::Idle);
        assert_eq!(c.current_gain, 1.0);
    }

    #[test]
    fn full_episode_phase_order_and_timing() {
        let p = AttentionParams::default();
        let mut c = controller_step(ascent(1.0, 0.5), &with_attention(100.0), DT, &p);
        let full = with_attention(100.0);
        let mut hold_frames = 0;
        while c.phase == Phase::Hold {
            c = controller_step(c, &full, DT, &p);
            hold_frames += 1;
        }
        assert_eq!(c.phase, Phase::Descent);
        assert!((hold_frames as f64 * DT - 0.300).abs() <= DT);
        let mut descent_frames = 0;
        let mut last = c.current_gain;
        while c.phase == Phase::Descent {
            c = controller_step(c, &full, DT, &p);
            descent_frames += 1;
            assert!(c.current_gain >= last);
            last = c.current_gain;
        }
        assert_eq!(c.phase, Phase::Idle);
        assert!((descent_frames as f64 * DT - 0.050).abs() <= DT);
        assert_eq!(c.current_gain, 1.0);
        assert!(c.finished);
        assert!(!c.trigger());
    }

    #[test]
    fn dynamic_instant_focus_t1_closed_form() {
        let mut g = DynamicGain::new(AttentionParams::default(), 1.0, 1.5);
        g.trigger();
        while g.controller.phase == Phase::Ascent {
            g.step(0.0, DT);
        }
        let t1 = g.controller.t1_duration.unwrap();
        assert!((t1 - 0.053).abs() <= DT, "t1 = {t1}");
    }

    #[test]
    fn look_away_keeps_ascent_at_base() {
        let mut g = DynamicGain::new(AttentionParams::default(), 1.0, 1.5);
        g.trigger();
        for _ in 0..4 {
            g.step(0.0, DT);
        }
        assert!(g.attention.attention > 0.0);
        for _ in 0..20 {
            g.step(60.0, DT);
        }
        assert_eq!(g.controller.phase, Phase::Ascent);
        assert_eq!(g.attention.attention, 0.0);
        assert_eq!(g.controller.current_gain, 1.0);
        // refocusing re-arms the onset hold
        g.step(0.0, DT);
        assert_eq!(g.attention.attention, 0.0);
        assert!(g.attention.in_hold());
    }

    #[test]
    fn scheduled_profiles() {
        use GainProfileMode::*;
        assert_eq!(scheduled_gain(1e-6, Switch, 1.0, 0.5).unwrap(), 0.5);
        assert_abs_diff_eq!(
            scheduled_gain(0.100, Scheduled, 1.0, 1.4).unwrap(),
            1.2,
            epsilon = 1e-12
        );
        assert_eq!(scheduled_gain(0.3, Scheduled, 1.0, 1.4).unwrap(), 1.4);
        assert_abs_diff_eq!(
            scheduled_gain(0.525, Scheduled, 1.0, 1.4).unwrap(),
            1.2,
            epsilon = 1e-9
        );
        for mode in [Switch, Scheduled] {
            assert_eq!(scheduled_gain(10.0, mode, 1.0, 1.4).unwrap(), 1.0);
            assert_eq!(scheduled_gain(-0.1, mode, 1.0, 1.4).unwrap(), 1.0);
        }
        assert!(matches!(
            scheduled_gain(0.1, Dynamic, 1.0, 1.4),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn translation_gain_mapping() {
        assert_eq!(apply_translation_gain(0.1, 1.0).unwrap(), 0.1);
        assert_abs_diff_eq!(apply_translation_gain(1.0, 1.26).unwrap(), 1.26);
        // inverse: physical length of an 8 m virtual path at constant 1.5
        assert_abs_diff_eq!(8.0 / 1.5, 5.333, epsilon = 1e-3);
        assert!(matches!(
            apply_translation_gain(1.0, 0.0),
            Err(Error::InvalidGain(_))
        ));
        assert!(apply_translation_gain(1.0, -1.0).is_err());
    }
}
