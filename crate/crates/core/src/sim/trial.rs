use serde::{Deserialize, Serialize};

use super::gaze::{GazeSource, AWAY_DEG};
use super::scenario::Scenario;
use crate::attention::{gaze_angle, AttentionParams, Pose};
use crate::controller::{scheduled_gain, DynamicGain, GainProfileMode, ENVELOPE_RISE};
use crate::error::{Error, Result};

/// Base gain before the trigger and after an episode.
pub const BASE_GAIN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    WithDistractor,
    WithoutDistractor,
    Switch,
}

impl Group {
    pub const ALL: [Group; 3] = [
        Group::WithDistractor,
        Group::WithoutDistractor,
        Group::Switch,
    ];

    pub fn mode(self) -> GainProfileMode {
        match self {
            Group::WithDistractor => GainProfileMode::Dynamic,
            Group::WithoutDistractor => GainProfileMode::Scheduled,
            Group::Switch => GainProfileMode::Switch,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Group::WithDistractor => "with_distractor",
            Group::WithoutDistractor => "without_distractor",
            Group::Switch => "switch",
        }
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "with_distractor" | "w_dst" | "dynamic" => Ok(Group::WithDistractor),
            "without_distractor" | "wo_dst" | "scheduled" => Ok(Group::WithoutDistractor),
            "switch" => Ok(Group::Switch),
            other => Err(Error::Config(format!("unknown group `{other}`"))),
        }
    }
}

/// One simulated frame; field order is the trial-log column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub t: f64,
    pub phys_x: f64,
    pub phys_z: f64,
    pub virtual_dist: f64,
    pub deg: f64,
    pub attention: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace {
    pub group: Group,
    pub target_gain: f64,
    pub frames: Vec<Frame>,
    /// Ascent duration of the dynamic controller; absent for scheduled profiles or when
    /// full attention was never reached.
    pub t1_duration: Option<f64>,
    pub max_gain_reached: bool,
    pub physical_distance: f64,
    /// Start time of the frame on which the trigger fired.
    pub trigger_time: Option<f64>,
    /// Virtual progress when the trigger fired.
    pub trigger_progress: Option<f64>,
    /// Frames whose physical position fell outside the tracking area.
    pub out_of_bounds_frames: usize,
}

impl TrialTrace {
    pub fn bounds_violation(&self) -> bool {
        self.out_of_bounds_frames > 0
    }

    pub fn final_virtual_dist(&self) -> f64 {
        self.frames.last().map_or(0.0, |f| f.virtual_dist)
    }
}

/// Rotates unit vector `v` toward unit vector `target` by at most `max_angle` radians.
fn rotate_toward(v: [f64; 3], target: [f64; 3], max_angle: f64) -> [f64; 3] {
    let dot = (v[0] * target[0] + v[1] * target[1] + v[2] * target[2]).clamp(-1.0, 1.0);
    let angle = dot.acos();
    if angle <= max_angle || angle < 1e-12 {
        return target;
    }
    let sin = angle.sin();
    if sin < 1e-9 {
        // antiparallel: turn about the vertical axis
        let (s, c) = max_angle.sin_cos();
        return [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]];
    }
    let f = max_angle / angle;
    let wa = ((1.0 - f) * angle).sin() / sin;
    let wb = (f * angle).sin() / sin;
    let r = [
        wa * v[0] + wb * target[0],
        wa * v[1] + wb * target[1],
        wa * v[2] + wb * target[2],
    ];
    normalize(r)
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

enum GazeState<'a> {
    Script(&'a super::gaze::GazeScript),
    Head { view: [f64; 3], rate: f64 },
}

/// Simulates one trial at a fixed timestep.
///
/// Frame `i` covers `[i*dt, (i+1)*dt)`; its gain is decided from the state at the start of
/// the frame and `t` in the log is the frame's end time. The final step is shortened so
/// the walk stops exactly at the end of the path.
pub fn run_trial(
    scenario: &Scenario,
    group: Group,
    target_gain: f64,
    gaze: &GazeSource,
    params: &AttentionParams,
    dt: f64,
) -> Result<TrialTrace> {
    scenario.validate()?;
    params.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", "must be > 0"));
    }
    if !(target_gain > 0.0) {
        return Err(Error::InvalidGain(target_gain));
    }
    let mut gaze_state = match gaze {
        GazeSource::Script { script } => GazeState::Script(script),
        GazeSource::HeadTracking { turn_rate_deg_s } => {
            if !(*turn_rate_deg_s > 0.0) {
                return Err(Error::param("gaze.turn_rate_deg_s", "must be > 0"));
            }
            GazeState::Head {
                view: [0.0, 0.0, 1.0],
                rate: turn_rate_deg_s.to_radians(),
            }
        }
    };

    let path = scenario.virtual_path_length;
    let trigger_at = scenario.trigger_point();
    let step = scenario.walk_speed * dt;
    let mode = group.mode();
    let mut dynamic = DynamicGain::new(*params, BASE_GAIN, target_gain);

    let mut frames = Vec::with_capacity((path / step).ceil() as usize + 1);
    let mut phys = scenario.start;
    let mut virtual_dist = 0.0;
    let mut physical_distance = 0.0;
    let mut trigger_frame: Option<u64> = None;
    let mut trigger_progress = None;
    let mut out_of_bounds = 0;
    let mut frame: u64 = 0;

    while virtual_dist < path - 1e-12 {
        if trigger_frame.is_none() && virtual_dist >= trigger_at - 1e-9 {
            trigger_frame = Some(frame);
            trigger_progress = Some(virtual_dist);
            dynamic.trigger();
        }
        let tau = trigger_frame.map(|f0| (frame - f0) as f64 * dt);

        let deg = match (&mut gaze_state, tau) {
            (_, None) => AWAY_DEG,
            (GazeState::Script(s), Some(tau)) => s.at(tau),
            (GazeState::Head { view, rate }, Some(tau)) => {
                match scenario.distractor_centroid(tau) {
                    None => AWAY_DEG,
                    Some(centroid) => {
                        let eye = [0.0, scenario.eye_height, virtual_dist];
                        let to = normalize([
                            centroid[0] - eye[0],
                            centroid[1] - eye[1],
                            centroid[2] - eye[2],
                        ]);
                        *view = rotate_toward(*view, to, *rate * dt);
                        let pose = Pose::new([0.0, virtual_dist], *view, scenario.eye_height)?;
                        gaze_angle(&pose, centroid)?
                    }
                }
            }
        };

        let gain = match mode {
            GainProfileMode::Dynamic => dynamic.step(deg, dt),
            _ => scheduled_gain(tau.unwrap_or(-1.0), mode, BASE_GAIN, target_gain)?,
        };

        let v_step = step.min(path - virtual_dist);
        let p_step = v_step / gain;
        frame += 1;
        virtual_dist = (frame as f64 * step).min(path);
        physical_distance += p_step;
        phys[1] += p_step;
        if !scenario.contains(phys) {
            out_of_bounds += 1;
        }
        frames.push(Frame {
            t: frame as f64 * dt,
            phys_x: phys[0],
            phys_z: phys[1],
            virtual_dist,
            deg,
            attention: dynamic.attention.attention,
            gain,
        });
    }

    let triggered_for = trigger_frame.map(|f0| (frame - f0) as f64 * dt);
    let (t1_duration, max_gain_reached) = match mode {
        GainProfileMode::Dynamic => (
            dynamic.controller.t1_duration,
            dynamic.controller.reached_max(),
        ),
        GainProfileMode::Scheduled => (None, triggered_for.is_some_and(|d| d > ENVELOPE_RISE)),
        GainProfileMode::Switch => (None, triggered_for.is_some()),
    };
    debug_assert!(triggered_for.is_none_or(|d| d >= 0.0 && d.is_finite()));

    Ok(TrialTrace {
        group,
        target_gain,
        frames,
        t1_duration,
        max_gain_reached,
        physical_distance,
        trigger_time: trigger_frame.map(|f0| f0 as f64 * dt),
        trigger_progress,
        out_of_bounds_frames: out_of_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::gaze::{gaze_script_preset, GazePreset};

    const DT: f64 = 1.0 / 90.0;

    fn script(p: GazePreset) -> GazeSource {
        gaze_script_preset(p).unwrap().into()
    }

    #[test]
    fn instant_focus_t1() {
        let tr = run_trial(
            &Scenario::default(),
            Group::WithDistractor,
            1.5,
            &script(GazePreset::InstantFocus),
            &AttentionParams::default(),
            DT,
        )
        .unwrap();
        let t1 = tr.t1_duration.unwrap();
        assert!((t1 - 0.053).abs() <= DT, "t1 {t1}");
        assert!(tr.max_gain_reached);
        assert!((tr.trigger_progress.unwrap() - 6.5).abs() <= DT);
    }

    #[test]
    fn never_look_keeps_base_gain() {
        let tr = run_trial(
            &Scenario::default(),
            Group::WithDistractor,
            1.5,
            &script(GazePreset::NeverLook),
            &AttentionParams::default(),
            DT,
        )
        .unwrap();
        assert!(!tr.max_gain_reached);
        assert!(tr.t1_duration.is_none());
        assert!(tr.frames.iter().all(|f| f.gain == 1.0));
        assert!((tr.physical_distance - 8.0).abs() <= DT);
    }

    #[test]
    fn frames_are_monotone_in_time_and_progress() {
        let tr = run_trial(
            &Scenario::default(),
            Group::WithoutDistractor,
            0.7,
            &script(GazePreset::NeverLook),
            &AttentionParams::default(),
            DT,
        )
        .unwrap();
        for w in tr.frames.windows(2) {
            assert!((w[1].t - w[0].t - DT).abs() < 1e-9);
            assert!(w[1].virtual_dist >= w[0].virtual_dist);
        }
        assert_eq!(tr.final_virtual_dist(), 8.0);
    }

    #[test]
    fn head_tracking_reaches_focus() {
        let tr = run_trial(
            &Scenario::default(),
            Group::WithDistractor,
            1.3,
            &GazeSource::HeadTracking {
                turn_rate_deg_s: 180.0,
            },
            &AttentionParams::default(),
            DT,
        )
        .unwrap();
        assert!(tr.max_gain_reached);
        let t1 = tr.t1_duration.unwrap();
        assert!(t1 > 0.053 && t1 < 1.0, "t1 {t1}");
    }

    #[test]
    fn head_tracking_without_distractor_never_focuses() {
        let scenario = Scenario {
            distractor_side: crate::sim::DistractorSide::None,
            ..Default::default()
        };
        let tr = run_trial(
            &scenario,
            Group::WithDistractor,
            1.3,
            &GazeSource::HeadTracking {
                turn_rate_deg_s: 180.0,
            },
            &AttentionParams::default(),
            DT,
        )
        .unwrap();
        assert!(!tr.max_gain_reached);
    }

    #[test]
    fn rotate_toward_is_rate_limited() {
        let v = rotate_toward([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], 0.1);
        let angle = v[2].clamp(-1.0, 1.0).acos();
        assert!((angle - 0.1).abs() < 1e-12);
        assert_eq!(
            rotate_toward([0.0, 0.0, 1.0], [0.0, 0.0, 1.0], 0.1),
            [0.0, 0.0, 1.0]
        );
    }

    #[test]
    fn group_parsing() {
        assert_eq!("switch".parse::<Group>().unwrap(), Group::Switch);
        assert_eq!(
            "with-distractor".parse::<Group>().unwrap(),
            Group::WithDistractor
        );
        assert!("sideways".parse::<Group>().is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = script(GazePreset::InstantFocus);
        let p = AttentionParams::default();
        assert!(run_trial(&Scenario::default(), Group::Switch, 1.0, &g, &p, 0.0).is_err());
        assert!(run_trial(&Scenario::default(), Group::Switch, 0.0, &g, &p, DT).is_err());
    }
}
