//! JSON run configuration and the multi-participant experiment runner built on it.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::attention::AttentionParams;
use crate::error::{Error, Result};
use crate::psycho::{FitOptions, PsyParams, ResponseDataset};
use crate::sim::{
    batch_run, default_gains, BatchContext, BatchResult, GazePlan, Group, Scenario,
    SyntheticResponder, TrialPlan, TrialSummary, TrialTrace, DEFAULT_REPETITIONS,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanConfig {
    pub groups: Vec<Group>,
    pub gains: Vec<f64>,
    pub repetitions: usize,
    /// Each participant gets one shuffled sequence, reused across their groups.
    pub participants: usize,
    /// Master seed. Participant `p` shuffles with `seed + p`; the responder for trial id
    /// `i` draws from `seed + i`.
    pub seed: u64,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            groups: Group::ALL.to_vec(),
            gains: default_gains(),
            repetitions: DEFAULT_REPETITIONS,
            participants: 1,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub attention: AttentionParams,
    pub dt: f64,
    pub plan: PlanConfig,
    pub gaze: GazePlan,
    /// Ground-truth psychometric function of the synthetic participants.
    pub responder: PsyParams,
    /// Per-group overrides of `responder`.
    pub group_responders: BTreeMap<Group, PsyParams>,
    pub fit: FitOptions,
    pub output_dir: PathBuf,
    /// Write one frame log per trial.
    pub write_frames: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::default(),
            attention: AttentionParams::default(),
            dt: crate::DEFAULT_DT,
            plan: PlanConfig::default(),
            gaze: GazePlan::default(),
            responder: PsyParams::new(1.03, 5.62),
            group_responders: BTreeMap::new(),
            fit: FitOptions::default(),
            output_dir: PathBuf::from("rdwlab-out"),
            write_frames: true,
        }
    }
}

fn field(name: &'static str, e: Error) -> Error {
    Error::Config(format!("{name}: {e}"))
}

impl RunConfig {
    /// Parses and validates a configuration document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a configuration file. I/O failures stay [`Error::Io`]; parse and
    /// validation failures become [`Error::Config`].
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate().map_err(|e| field("scenario", e))?;
        self.attention
            .validate()
            .map_err(|e| field("attention", e))?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt: must be > 0, got {}", self.dt)));
        }
        let plan = &self.plan;
        if plan.groups.is_empty() {
            return Err(Error::Config(
                "plan.groups: at least one group is required".into(),
            ));
        }
        if plan.gains.is_empty() || plan.gains.iter().any(|g| !(*g > 0.0)) {
            return Err(Error::Config(
                "plan.gains: must be a non-empty list of gains > 0".into(),
            ));
        }
        if plan.repetitions == 0 {
            return Err(Error::Config("plan.repetitions: must be >= 1".into()));
        }
        if plan.participants == 0 {
            return Err(Error::Config("plan.participants: must be >= 1".into()));
        }
        self.responder
            .validate()
            .map_err(|e| field("responder", e))?;
        for p in self.group_responders.values() {
            p.validate().map_err(|e| field("group_responders", e))?;
        }
        if let Some(rate) = self.gaze.head_turn_rate {
            if !(rate > 0.0) {
                return Err(Error::Config("gaze.head_turn_rate: must be > 0".into()));
            }
        }
        self.fit.validate().map_err(|e| field("fit", e))?;
        Ok(())
    }

    pub fn responder_for(&self, group: Group) -> PsyParams {
        self.group_responders
            .get(&group)
            .copied()
            .unwrap_or(self.responder)
    }

    fn batch_context(&self) -> BatchContext {
        BatchContext {
            scenario: self.scenario,
            attention: self.attention,
            dt: self.dt,
            gaze: self.gaze,
            keep_frames: self.write_frames,
        }
    }
}

/// All trials of one group, pooled over participants.
#[derive(Debug, Clone)]
pub struct GroupRun {
    pub group: Group,
    pub dataset: ResponseDataset,
    pub summaries: Vec<TrialSummary>,
    pub traces: Vec<TrialTrace>,
}

impl GroupRun {
    pub fn excluded(&self) -> usize {
        self.summaries
            .iter()
            .filter(|s| !s.max_gain_reached)
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub groups: Vec<GroupRun>,
}

impl Simulation {
    /// Summary rows in trial-id order.
    pub fn summaries(&self) -> Vec<TrialSummary> {
        let mut rows: Vec<TrialSummary> = self
            .groups
            .iter()
            .flat_map(|g| g.summaries.iter().cloned())
            .collect();
        rows.sort_by_key(|r| r.trial_id);
        rows
    }

    pub fn traces(&self) -> impl Iterator<Item = (u64, &TrialTrace)> {
        self.groups
            .iter()
            .flat_map(|g| g.summaries.iter().map(|s| s.trial_id).zip(&g.traces))
    }
}

/// Runs every participant through every configured group.
///
/// Trial ids are `participant * groups * block + group_index * block + i`, with `block`
/// the number of trials per group.
pub fn simulate(cfg: &RunConfig) -> Result<Simulation> {
    cfg.validate()?;
    let ctx = cfg.batch_context();
    let plan_cfg = &cfg.plan;
    let block = (plan_cfg.gains.len() * plan_cfg.repetitions) as u64;
    let n_groups = plan_cfg.groups.len() as u64;

    let mut runs: Vec<GroupRun> = plan_cfg
        .groups
        .iter()
        .map(|&group| GroupRun {
            group,
            dataset: ResponseDataset::new(Vec::new()).expect("empty dataset is valid"),
            summaries: Vec::new(),
            traces: Vec::new(),
        })
        .collect();

    for participant in 0..plan_cfg.participants as u64 {
        let seq_seed = plan_cfg.seed.wrapping_add(participant);
        for (gi, run) in runs.iter_mut().enumerate() {
            let mut plan =
                TrialPlan::shuffled(run.group, &plan_cfg.gains, plan_cfg.repetitions, seq_seed)?;
            plan.first_trial_id = participant * n_groups * block + gi as u64 * block;
            let responder = SyntheticResponder::Psychometric(cfg.responder_for(run.group));
            let BatchResult {
                summaries, traces, ..
            } = batch_run(&plan, &ctx, &responder, plan_cfg.seed)?;
            run.summaries.extend(summaries);
            run.traces.extend(traces);
        }
    }
    for run in &mut runs {
        run.dataset = crate::sim::batch_dataset(&run.summaries)?;
    }
    Ok(Simulation { groups: runs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let cfg = RunConfig::default();
        let text = cfg.to_json().unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_documents_take_defaults() {
        let cfg = RunConfig::from_json(r#"{"plan": {"participants": 3}, "dt": 0.02}"#).unwrap();
        assert_eq!(cfg.plan.participants, 3);
        assert_eq!(cfg.plan.repetitions, 5);
        assert_eq!(cfg.dt, 0.02);
        assert_eq!(cfg.attention, AttentionParams::default());
    }

    #[test]
    fn validation_names_the_field() {
        let err = RunConfig::from_json(r#"{"attention": {"a": -1}}"#).unwrap_err();
        assert!(err.to_string().contains("attention"), "{err}");
        let err = RunConfig::from_json(r#"{"plan": {"groups": []}}"#).unwrap_err();
        assert!(err.to_string().contains("plan.groups"), "{err}");
        let err = RunConfig::from_json(r#"{"scenaro": {}}"#).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn group_responder_overrides() {
        let cfg = RunConfig::from_json(
            r#"{"group_responders": {"switch": {"alpha": 1.0, "beta": 7.0, "gamma": 0.0, "lambda": 0.0}}}"#,
        )
        .unwrap();
        assert_eq!(cfg.responder_for(Group::Switch).beta, 7.0);
        assert_eq!(cfg.responder_for(Group::WithDistractor).beta, 5.62);
    }

    #[test]
    fn default_simulation_shape() {
        let cfg = RunConfig {
            write_frames: false,
            ..Default::default()
        };
        let sim = simulate(&cfg).unwrap();
        let rows = sim.summaries();
        assert_eq!(rows.len(), 165);
        assert!(rows.iter().enumerate().all(|(i, r)| r.trial_id == i as u64));
        // one sequence per participant, reused across groups
        let seq = |g: Group| -> Vec<f64> {
            rows.iter()
                .filter(|r| r.group == g)
                .map(|r| r.target_gain)
                .collect()
        };
        assert_eq!(seq(Group::WithDistractor), seq(Group::Switch));
        assert_eq!(seq(Group::WithoutDistractor), seq(Group::Switch));
    }
}
