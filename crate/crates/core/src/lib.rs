//! Attention-driven dynamic translation gain for redirected walking.
//!
//! The crate has four parts:
//!
//! - [`attention`] and [`controller`]: the gaze-driven attention accumulator and the
//!   phased gain controller that turns it into a translation gain.
//! - [`sim`]: a fixed-timestep reconstruction of the escort walking trial, trial
//!   sequencing, logging and batch execution with synthetic responders.
//! - [`psycho`]: cumulative-normal psychometric fitting by maximum likelihood,
//!   detection thresholds, AIC/SSE, bootstrap intervals and a 2x2 chi-square test.
//! - [`config`] and [`cli`]: the JSON run configuration and the command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod attention;
pub mod cli;
pub mod config;
pub mod controller;
pub mod error;
pub mod psycho;
pub mod sim;

pub use attention::{attention_step, gaze_angle, AttentionParams, AttentionState, Pose};
pub use controller::{
    apply_translation_gain, scheduled_gain, DynamicGain, GainController, GainProfileMode, Phase,
};
pub use error::{Error, Result};

/// Nominal headset frame interval (90 Hz).
pub const DEFAULT_DT: f64 = 1.0 / 90.0;
