//! Gaze-driven attention accumulator.
//!
//! Attention grows while the gaze angle to the distractor is inside the threshold cone,
//! weighted by a Gaussian of the angle, and drains linearly once the gaze leaves it:
//!
//! ```text
//! A(t + dt) = A(t) + a * exp(-deg^2 / (2 c^2)) * dt    if deg < d
//! A(t + dt) = A(t) - b * dt                            if deg >= d
//! ```
//!
//! The result is clamped to `[0, a_max]`. A freshly armed onset hold freezes the
//! accumulator for its duration while focus is held.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Timers compare against durations with this slack so that an integer number of
/// frames summing to a duration counts as reaching it.
pub(crate) const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttentionParams {
    /// Accumulation rate, attention units per second.
    pub a: f64,
    /// Decay rate, attention units per second.
    pub b: f64,
    /// Width of the Gaussian angle weighting, degrees.
    pub c: f64,
    /// Gaze-angle threshold, degrees.
    pub d: f64,
    /// Attention ceiling. Equal to `b * 0.050` so that a 50 ms drain empties it.
    pub a_max: f64,
}

impl Default for AttentionParams {
    fn default() -> Self {
        Self {
            a: 5000.0,
            b: 2000.0,
            c: 3.1,
            d: 15.0,
            a_max: 100.0,
        }
    }
}

impl AttentionParams {
    pub fn validate(&self) -> Result<()> {
        fn positive(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(
                    field,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        }
        positive("a", self.a)?;
        positive("b", self.b)?;
        positive("c", self.c)?;
        positive("a_max", self.a_max)?;
        if !(self.d > 0.0 && self.d <= 90.0) {
            return Err(Error::param(
                "d",
                format!("must lie in (0, 90], got {}", self.d),
            ));
        }
        Ok(())
    }

    /// Per-second accumulation rate at gaze angle `deg` (zero outside the cone).
    pub fn gain_rate(&self, deg: f64) -> f64 {
        if deg < self.d {
            self.a * (-(deg * deg) / (2.0 * self.c * self.c)).exp()
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AttentionState {
    pub attention: f64,
    /// Time already spent inside the current onset hold.
    pub time_in_hold: f64,
    /// Length of the armed onset hold; zero when no hold is armed.
    pub hold_duration: f64,
}

impl AttentionState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Arms an onset hold: the next `duration` seconds of focused frames leave the
    /// attention unchanged.
    pub fn arm_hold(&mut self, duration: f64) {
        self.time_in_hold = 0.0;
        self.hold_duration = duration.max(0.0);
    }

    pub fn in_hold(&self) -> bool {
        self.time_in_hold + TIME_EPS < self.hold_duration
    }

    /// Attention as a fraction of the ceiling.
    pub fn level(&self, params: &AttentionParams) -> f64 {
        (self.attention / params.a_max).clamp(0.0, 1.0)
    }
}

/// Advances the accumulator by one frame.
pub fn attention_step(
    state: AttentionState,
    deg: f64,
    dt: f64,
    params: &AttentionParams,
) -> AttentionState {
    let mut next = state;
    if deg < params.d {
        if state.in_hold() {
            next.time_in_hold += dt;
            return next;
        }
        next.attention += params.gain_rate(deg) * dt;
    } else {
        // losing focus cancels any pending hold
        next.hold_duration = 0.0;
        next.time_in_hold = 0.0;
        next.attention -= params.b * dt;
    }
    next.attention = next.attention.clamp(0.0, params.a_max);
    next
}

/// Head pose used as a gaze proxy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    /// Position on the physical floor plane, `[x, z]` in meters.
    pub position: [f64; 2],
    /// Unit view direction `[x, y, z]` (y up).
    pub view_direction: [f64; 3],
    /// Eye height above the floor, meters.
    pub height: f64,
}

impl Pose {
    pub fn new(position: [f64; 2], view_direction: [f64; 3], height: f64) -> Result<Self> {
        let norm = norm3(view_direction);
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::param(
                "view_direction",
                format!("must have unit norm, got {norm}"),
            ));
        }
        Ok(Self {
            position,
            view_direction,
            height,
        })
    }

    pub fn eye(&self) -> [f64; 3] {
        [self.position[0], self.height, self.position[1]]
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// 3D angle in degrees between the view ray and the eye-to-centroid vector.
pub fn gaze_angle(pose: &Pose, centroid: [f64; 3]) -> Result<f64> {
    let eye = pose.eye();
    let to = [
        centroid[0] - eye[0],
        centroid[1] - eye[1],
        centroid[2] - eye[2],
    ];
    if norm3(to) < 1e-12 {
        return Err(Error::DegenerateGeometry(
            "distractor centroid coincides with eye position",
        ));
    }
    let v = pose.view_direction;
    let dot = v[0] * to[0] + v[1] * to[1] + v[2] * to[2];
    let cross = [
        v[1] * to[2] - v[2] * to[1],
        v[2] * to[0] - v[0] * to[2],
        v[0] * to[1] - v[1] * to[0],
    ];
    Ok(norm3(cross).atan2(dot).to_degrees())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const DT: f64 = 1.0 / 90.0;

    #[test]
    fn defaults_validate() {
        AttentionParams::default().validate().unwrap();
        let bad = AttentionParams {
            d: 120.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = AttentionParams {
            a: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn focused_step_from_zero() {
        let p = AttentionParams::default();
        let s = attention_step(AttentionState::new(), 0.0, DT, &p);
        assert_abs_diff_eq!(s.attention, 5000.0 / 90.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s.attention, 55.556, epsilon = 1e-3);
    }

    #[test]
    fn decay_branch() {
        let p = AttentionParams::default();
        let s = AttentionState {
            attention: 100.0,
            ..Default::default()
        };
        let s = attention_step(s, 20.0, DT, &p);
        assert_abs_diff_eq!(s.attention, 77.778, epsilon = 1e-3);
    }

    #[test]
    fn boundary_increment_vanishes() {
        let p = AttentionParams::default();
        let s = attention_step(AttentionState::new(), 14.99, DT, &p);
        assert!(s.attention > 0.0);
        assert!(s.attention < 5e-4, "{}", s.attention);
        // hand evaluation: 5000 * exp(-14.99^2 / 19.22) / 90
        let expected = 5000.0 * (-(14.99f64 * 14.99) / (2.0 * 3.1 * 3.1)).exp() / 90.0;
        assert_abs_diff_eq!(s.attention, expected, epsilon = 1e-15);
    }

    #[test]
    fn clamps_at_floor_and_ceiling() {
        let p = AttentionParams::default();
        assert_eq!(
            attention_step(AttentionState::new(), 30.0, DT, &p).attention,
            0.0
        );
        let s = AttentionState {
            attention: 90.0,
            ..Default::default()
        };
        assert_eq!(attention_step(s, 0.0, DT, &p).attention, 100.0);
    }

    #[test]
    fn onset_hold_freezes_three_frames() {
        let p = AttentionParams::default();
        let mut s = AttentionState::new();
        s.arm_hold(0.033);
        for _ in 0..3 {
            s = attention_step(s, 0.0, DT, &p);
            assert_eq!(s.attention, 0.0);
        }
        s = attention_step(s, 0.0, DT, &p);
        assert!(s.attention > 0.0);
    }

    #[test]
    fn losing_focus_cancels_hold() {
        let p = AttentionParams::default();
        let mut s = AttentionState::new();
        s.arm_hold(0.033);
        s = attention_step(s, 0.0, DT, &p);
        s = attention_step(s, 40.0, DT, &p);
        assert!(!s.in_hold());
        s = attention_step(s, 0.0, DT, &p);
        assert!(s.attention > 0.0);
    }

    #[test]
    fn gaze_angle_cases() {
        let pose = Pose::new([0.0, 0.0], [1.0, 0.0, 0.0], 0.0).unwrap();
        assert_abs_diff_eq!(
            gaze_angle(&pose, [2.0, 0.0, 0.0]).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gaze_angle(&pose, [0.0, 0.0, 3.0]).unwrap(),
            90.0,
            epsilon = 1e-12
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(
            gaze_angle(&pose, [h, 0.0, h]).unwrap(),
            45.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gaze_angle(&pose, [-1.0, 0.0, 0.0]).unwrap(),
            180.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn gaze_angle_uses_eye_height() {
        let pose = Pose::new([0.0, 0.0], [1.0, 0.0, 0.0], 1.6).unwrap();
        // centroid one meter ahead, one meter below the eye
        assert_abs_diff_eq!(
            gaze_angle(&pose, [1.0, 0.6, 0.0]).unwrap(),
            45.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn gaze_angle_degenerate() {
        let pose = Pose::new([1.0, 2.0], [0.0, 0.0, 1.0], 1.5).unwrap();
        assert!(matches!(
            gaze_angle(&pose, [1.0, 1.5, 2.0]),
            Err(Error::DegenerateGeometry(_))
        ));
    }

    #[test]
    fn pose_requires_unit_view() {
        assert!(Pose::new([0.0, 0.0], [1.0, 1.0, 0.0], 1.6).is_err());
    }
}
