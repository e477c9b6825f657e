//! Scripted gaze behaviour standing in for a participant's head direction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angle reported when there is nothing to look at.
pub(crate) const AWAY_DEG: f64 = 90.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GazeSegment {
    pub duration: f64,
    pub deg_start: f64,
    pub deg_end: f64,
}

/// Piecewise-linear gaze angle over time since the trigger. The last angle is held once
/// the script runs out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GazeScript {
    segments: Vec<GazeSegment>,
}

impl GazeScript {
    pub fn new(segments: Vec<GazeSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::param(
                "gaze.segments",
                "at least one segment is required",
            ));
        }
        for s in &segments {
            if !(s.duration > 0.0) {
                return Err(Error::param("gaze.segments", "durations must be > 0"));
            }
            for d in [s.deg_start, s.deg_end] {
                if !(0.0..=180.0).contains(&d) {
                    return Err(Error::param(
                        "gaze.segments",
                        format!("angle {d} outside [0, 180]"),
                    ));
                }
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[GazeSegment] {
        &self.segments
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Gaze angle `tau` seconds into the script.
    pub fn at(&self, tau: f64) -> f64 {
        let mut start = 0.0;
        for s in &self.segments {
            if tau < start + s.duration {
                let frac = ((tau - start) / s.duration).clamp(0.0, 1.0);
                return s.deg_start + (s.deg_end - s.deg_start) * frac;
            }
            start += s.duration;
        }
        self.segments.last().map_or(AWAY_DEG, |s| s.deg_end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GazePreset {
    /// On target from the trigger onward.
    InstantFocus,
    /// Turns from 40° to 0° over `duration`, then stays on target.
    LinearTurn { duration: f64 },
    /// `cycles` repetitions of `on` seconds on target then `off` seconds at 40°.
    Glance { on: f64, off: f64, cycles: u32 },
    /// Never within the threshold cone (constant 90°).
    NeverLook,
}

const TURN_START_DEG: f64 = 40.0;

pub fn gaze_script_preset(preset: GazePreset) -> Result<GazeScript> {
    let seg = |duration, deg_start, deg_end| GazeSegment {
        duration,
        deg_start,
        deg_end,
    };
    let segments = match preset {
        GazePreset::InstantFocus => vec![seg(1.0, 0.0, 0.0)],
        GazePreset::LinearTurn { duration } => {
            vec![seg(duration, TURN_START_DEG, 0.0), seg(1.0, 0.0, 0.0)]
        }
        GazePreset::Glance { on, off, cycles } => {
            if cycles == 0 {
                return Err(Error::param("gaze.cycles", "must be >= 1"));
            }
            (0..cycles)
                .flat_map(|_| [seg(on, 0.0, 0.0), seg(off, TURN_START_DEG, TURN_START_DEG)])
                .collect()
        }
        GazePreset::NeverLook => vec![seg(1.0, AWAY_DEG, AWAY_DEG)],
    };
    GazeScript::new(segments)
}

/// Where the per-frame gaze angle comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum GazeSource {
    /// Direct angle script.
    Script { script: GazeScript },
    /// Head turning toward the moving distractor at a bounded rate; the angle comes
    /// from the pose and the distractor centroid.
    HeadTracking { turn_rate_deg_s: f64 },
}

impl From<GazeScript> for GazeSource {
    fn from(script: GazeScript) -> Self {
        GazeSource::Script { script }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let s = gaze_script_preset(GazePreset::InstantFocus).unwrap();
        assert_eq!(s.segments().len(), 1);
        assert_eq!((s.at(0.0), s.at(5.0)), (0.0, 0.0));

        let s = gaze_script_preset(GazePreset::NeverLook).unwrap();
        assert!([0.0, 0.3, 20.0].iter().all(|&t| s.at(t) == 90.0));

        let s = gaze_script_preset(GazePreset::LinearTurn { duration: 0.2 }).unwrap();
        assert_eq!(s.at(0.0), 40.0);
        assert!((s.at(0.1) - 20.0).abs() < 1e-12);
        assert_eq!(s.at(0.2), 0.0);
        assert_eq!(s.at(3.0), 0.0);

        let s = gaze_script_preset(GazePreset::Glance {
            on: 0.1,
            off: 0.2,
            cycles: 2,
        })
        .unwrap();
        assert_eq!(s.at(0.05), 0.0);
        assert_eq!(s.at(0.15), 40.0);
        assert_eq!(s.at(0.35), 0.0);
        assert_eq!(s.at(10.0), 40.0);
    }

    #[test]
    fn invalid_scripts() {
        assert!(gaze_script_preset(GazePreset::LinearTurn { duration: 0.0 }).is_err());
        assert!(GazeScript::new(vec![]).is_err());
        assert!(GazeScript::new(vec![GazeSegment {
            duration: 1.0,
            deg_start: 0.0,
            deg_end: 200.0
        }])
        .is_err());
    }
}
