use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistractorSide {
    Left,
    Right,
    None,
}

/// Trial geometry. Virtual coordinates put the path on the +z axis starting at the
/// origin, with x lateral (right positive) and y up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    /// Physical tracking area `[width (x), depth (z)]`, meters.
    pub physical_bounds: [f64; 2],
    pub virtual_path_length: f64,
    /// Distance before the end of the path at which the trigger fires.
    pub trigger_lead: f64,
    /// Constant virtual walking speed, m/s.
    pub walk_speed: f64,
    /// Physical start position `[x, z]`; the walker heads along +z.
    pub start: [f64; 2],
    pub eye_height: f64,
    pub distractor_side: DistractorSide,
    /// Lateral approach speed of the distractor toward the path centre, m/s.
    pub distractor_speed: f64,
    /// Lateral offset at which the distractor appears, meters.
    pub distractor_offset: f64,
    pub distractor_height: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            physical_bounds: [10.0, 10.0],
            virtual_path_length: 8.0,
            trigger_lead: 1.5,
            walk_speed: 1.0,
            start: [5.0, 0.5],
            eye_height: 1.6,
            distractor_side: DistractorSide::Right,
            distractor_speed: 0.8,
            distractor_offset: 3.0,
            distractor_height: 0.9,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let [w, h] = self.physical_bounds;
        if !(w > 0.0 && h > 0.0) {
            return Err(Error::param("physical_bounds", "both extents must be > 0"));
        }
        if !(self.trigger_lead > 0.0) {
            return Err(Error::param("trigger_lead", "must be > 0"));
        }
        if !(self.virtual_path_length > self.trigger_lead) {
            return Err(Error::param(
                "virtual_path_length",
                "must exceed trigger_lead",
            ));
        }
        if !(self.walk_speed > 0.0) {
            return Err(Error::param("walk_speed", "must be > 0"));
        }
        if !(self.distractor_speed >= 0.0) {
            return Err(Error::param("distractor_speed", "must be >= 0"));
        }
        if !self.contains(self.start) {
            return Err(Error::param("start", "must lie inside physical_bounds"));
        }
        Ok(())
    }

    pub fn trigger_point(&self) -> f64 {
        self.virtual_path_length - self.trigger_lead
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let [w, h] = self.physical_bounds;
        (0.0..=w).contains(&p[0]) && (0.0..=h).contains(&p[1])
    }

    /// Distractor centroid in virtual coordinates `tau` seconds after the trigger.
    ///
    /// It appears beside the end of the path and slides toward the centre line,
    /// stopping there.
    pub fn distractor_centroid(&self, tau: f64) -> Option<[f64; 3]> {
        let sign = match self.distractor_side {
            DistractorSide::Left => -1.0,
            DistractorSide::Right => 1.0,
            DistractorSide::None => return None,
        };
        let lateral = (self.distractor_offset - self.distractor_speed * tau.max(0.0)).max(0.0);
        Some([
            sign * lateral,
            self.distractor_height,
            self.virtual_path_length,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        let s = Scenario::default();
        s.validate().unwrap();
        assert_eq!(s.trigger_point(), 6.5);
    }

    #[test]
    fn rejects_bad_geometry() {
        let s = Scenario {
            trigger_lead: 9.0,
            ..Default::default()
        };
        assert!(s.validate().is_err());
        let s = Scenario {
            walk_speed: 0.0,
            ..Default::default()
        };
        assert!(s.validate().is_err());
        let s = Scenario {
            start: [11.0, 0.0],
            ..Default::default()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn distractor_moves_toward_centre() {
        let s = Scenario::default();
        let c0 = s.distractor_centroid(0.0).unwrap();
        let c1 = s.distractor_centroid(1.0).unwrap();
        assert_eq!(c0[0], 3.0);
        assert!((c1[0] - 2.2).abs() < 1e-12);
        assert_eq!(s.distractor_centroid(100.0).unwrap()[0], 0.0);
        let none = Scenario {
            distractor_side: DistractorSide::None,
            ..s
        };
        assert!(none.distractor_centroid(0.0).is_none());
    }
}
