use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gaze::{gaze_script_preset, GazePreset, GazeSource};
use super::scenario::Scenario;
use super::shuffle::shuffle_gains;
use super::trial::{run_trial, Group, TrialTrace};
use crate::attention::AttentionParams;
use crate::error::{Error, Result};
use crate::psycho::{PsyParams, ResponseDataset};

/// One group's block of trials for one participant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub group: Group,
    pub gain_sequence: Vec<f64>,
    pub repetitions: usize,
    /// Seed the sequence was shuffled with.
    pub seed: u64,
    /// Id given to the first trial; later trials count up from it.
    pub first_trial_id: u64,
}

impl TrialPlan {
    pub fn shuffled(group: Group, gains: &[f64], repetitions: usize, seed: u64) -> Result<Self> {
        if gains.is_empty() {
            return Err(Error::param("gains", "at least one gain is required"));
        }
        if repetitions == 0 {
            return Err(Error::param("repetitions", "must be >= 1"));
        }
        if let Some(g) = gains.iter().find(|g| !(**g > 0.0)) {
            return Err(Error::InvalidGain(*g));
        }
        Ok(Self {
            group,
            gain_sequence: shuffle_gains(seed, gains, repetitions),
            repetitions,
            seed,
            first_trial_id: 0,
        })
    }
}

/// Which gaze behaviour drives each trial of the distractor group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GazePlan {
    pub preset: GazePreset,
    /// When set, the head turns toward the moving distractor at this rate (deg/s)
    /// instead of following `preset`.
    pub head_turn_rate: Option<f64>,
    /// Every n-th trial (1-based) ignores the distractor; 0 disables.
    pub never_look_every: usize,
}

impl Default for GazePlan {
    fn default() -> Self {
        Self {
            preset: GazePreset::LinearTurn { duration: 0.15 },
            head_turn_rate: None,
            never_look_every: 0,
        }
    }
}

impl GazePlan {
    pub fn is_never_look(&self, index: usize) -> bool {
        self.never_look_every > 0 && (index + 1).is_multiple_of(self.never_look_every)
    }

    /// Gaze for the `index`-th trial of a block in `group`. Groups without a distractor
    /// get a gaze that never enters the threshold cone.
    pub fn source_for(&self, group: Group, index: usize) -> Result<GazeSource> {
        if group != Group::WithDistractor || self.is_never_look(index) {
            return Ok(gaze_script_preset(GazePreset::NeverLook)?.into());
        }
        Ok(match self.head_turn_rate {
            Some(turn_rate_deg_s) => GazeSource::HeadTracking { turn_rate_deg_s },
            None => gaze_script_preset(self.preset)?.into(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SyntheticResponder {
    /// Says "Greater" with probability psi(target gain).
    Psychometric(PsyParams),
    /// Says "Greater" exactly when the target gain exceeds `at`.
    Step { at: f64 },
}

impl SyntheticResponder {
    pub fn says_greater<R: Rng>(&self, gain: f64, rng: &mut R) -> bool {
        match self {
            SyntheticResponder::Psychometric(p) => rng.random::<f64>() < p.psi(gain),
            SyntheticResponder::Step { at } => gain > *at,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SyntheticResponder::Psychometric(p) => p.validate(),
            SyntheticResponder::Step { at } if at.is_finite() => Ok(()),
            SyntheticResponder::Step { .. } => Err(Error::param("responder.at", "must be finite")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Response {
    Greater,
    Smaller,
}

/// Shared simulation settings for a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchContext {
    pub scenario: Scenario,
    pub attention: AttentionParams,
    pub dt: f64,
    pub gaze: GazePlan,
    /// Keep per-frame data in the returned traces.
    pub keep_frames: bool,
}

impl Default for BatchContext {
    fn default() -> Self {
        Self {
            scenario: Scenario::default(),
            attention: AttentionParams::default(),
            dt: crate::DEFAULT_DT,
            gaze: GazePlan::default(),
            keep_frames: true,
        }
    }
}

/// One row of the batch summary log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial_id: u64,
    pub group: Group,
    pub target_gain: f64,
    pub t1: Option<f64>,
    pub max_gain_reached: bool,
    pub physical_distance: f64,
    /// Absent for excluded trials.
    pub response: Option<Response>,
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    pub dataset: ResponseDataset,
    pub summaries: Vec<TrialSummary>,
    pub traces: Vec<TrialTrace>,
}

impl BatchResult {
    pub fn excluded(&self) -> usize {
        self.summaries
            .iter()
            .filter(|s| !s.max_gain_reached)
            .count()
    }
}

/// Runs every trial of `plan` and collects responses from the synthetic responder.
///
/// Trials are independent and run in parallel. The responder for trial id `i` draws from
/// a ChaCha8 stream seeded with `seed + i`, so results do not depend on execution order.
/// Trials that never reached the target gain are excluded from the dataset.
pub fn batch_run(
    plan: &TrialPlan,
    ctx: &BatchContext,
    responder: &SyntheticResponder,
    seed: u64,
) -> Result<BatchResult> {
    ctx.scenario.validate()?;
    ctx.attention.validate()?;
    responder.validate()?;

    let outcomes = plan
        .gain_sequence
        .par_iter()
        .enumerate()
        .map(|(i, &gain)| {
            let trial_id = plan.first_trial_id + i as u64;
            let gaze = ctx.gaze.source_for(plan.group, i)?;
            let mut trace = run_trial(
                &ctx.scenario,
                plan.group,
                gain,
                &gaze,
                &ctx.attention,
                ctx.dt,
            )?;
            let response = trace.max_gain_reached.then(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial_id));
                if responder.says_greater(gain, &mut rng) {
                    Response::Greater
                } else {
                    Response::Smaller
                }
            });
            let summary = TrialSummary {
                trial_id,
                group: plan.group,
                target_gain: gain,
                t1: trace.t1_duration,
                max_gain_reached: trace.max_gain_reached,
                physical_distance: trace.physical_distance,
                response,
            };
            if !ctx.keep_frames {
                trace.frames = Vec::new();
            }
            Ok((summary, trace))
        })
        .collect::<Result<Vec<_>>>()?;

    let (summaries, traces): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    let dataset = dataset_from_summaries(&summaries)?;
    Ok(BatchResult {
        dataset,
        summaries,
        traces,
    })
}

/// Pools the answered trials of a summary log into per-level counts.
pub(crate) fn dataset_from_summaries<'a, I>(rows: I) -> Result<ResponseDataset>
where
    I: IntoIterator<Item = &'a TrialSummary>,
{
    ResponseDataset::from_responses(rows.into_iter().filter_map(|s| {
        s.response
            .filter(|_| s.max_gain_reached)
            .map(|r| (s.target_gain, r == Response::Greater))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct T1Stats {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub mean: f64,
    /// Sample standard deviation (n - 1); zero for a single value.
    pub sd: f64,
}

/// Order statistics and moments of the recorded t1 durations; absent values are skipped.
pub fn t1_statistics<I>(values: I) -> Result<T1Stats>
where
    I: IntoIterator<Item = Option<f64>>,
{
    let mut v: Vec<f64> = values.into_iter().flatten().collect();
    if v.is_empty() {
        return Err(Error::EmptyStatistics);
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    let median = if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    };
    let sd = if n > 1 {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(T1Stats {
        count: n,
        min: v[0],
        max: v[n - 1],
        median,
        mean,
        sd,
    })
}
