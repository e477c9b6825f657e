//! Fixed-timestep reconstruction of the escort walking trial.
//!
//! The walker advances at a constant virtual speed along a straight virtual path. When
//! virtual progress reaches the trigger point the group's gain profile starts; the
//! physical step of each frame is the virtual step divided by that frame's gain.

mod batch;
mod gaze;
pub mod log;
mod scenario;
mod shuffle;
mod trial;

pub(crate) use batch::dataset_from_summaries as batch_dataset;
pub use batch::{
    batch_run, t1_statistics, BatchContext, BatchResult, GazePlan, Response, SyntheticResponder,
    T1Stats, TrialPlan, TrialSummary,
};
pub use gaze::{gaze_script_preset, GazePreset, GazeScript, GazeSegment, GazeSource};
pub use scenario::{DistractorSide, Scenario};
pub use shuffle::{default_gains, shuffle_gains, DEFAULT_REPETITIONS};
pub use trial::{run_trial, Frame, Group, TrialTrace};
