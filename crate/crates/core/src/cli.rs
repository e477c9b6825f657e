//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 analysis degeneracy.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{simulate, RunConfig, Simulation};
use crate::error::{Error, Result};
use crate::psycho::{chi_square_2x2, fit_psychometric, FitOptions, PsyFit, ResponseDataset};
use crate::sim::{self, log, t1_statistics, Group};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RDWLAB_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "rdwlab",
    version,
    about = "Attention-driven translation gain lab"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides plan.seed and fit.seed)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Restrict to these groups (with_distractor, without_distractor, switch)
    #[arg(long = "group", global = true, value_delimiter = ',')]
    groups: Vec<Group>,
    /// Output directory
    #[arg(long = "out", global = true, env = OUT_DIR_ENV)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate trials and write frame logs and the batch summary
    Simulate {
        /// Simulated participants (overrides plan.participants)
        #[arg(long)]
        participants: Option<usize>,
        /// Skip per-trial frame logs
        #[arg(long)]
        no_frames: bool,
    },
    /// Fit a psychometric function to a `gain,n,k` CSV or a simulation summary CSV
    Fit {
        /// Input CSV
        dataset: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Simulate, fit every group and write a threshold table
    Pipeline {
        /// Simulated participants (overrides plan.participants)
        #[arg(long)]
        participants: Option<usize>,
        /// Skip per-trial frame logs
        #[arg(long)]
        no_frames: bool,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Emit Fisher–Yates gain sequences
    Sequence {
        /// Number of sequences
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Repetitions of each gain per sequence
        #[arg(long, default_value_t = sim::DEFAULT_REPETITIONS)]
        reps: usize,
    },
    /// Pearson chi-square test on a 2x2 table given row-major as A B C D
    Chisq {
        #[arg(num_args = 4, required = true)]
        cells: Vec<u64>,
    },
}

#[derive(Debug, Args, Default)]
struct FitArgs {
    /// Fixed guess rate (lower asymptote)
    #[arg(long)]
    fix_gamma: Option<f64>,
    /// Fixed lapse rate (upper asymptote is 1 - lapse)
    #[arg(long)]
    fix_lambda: Option<f64>,
    /// Bootstrap replicates for the PSE interval (0 disables)
    #[arg(long)]
    n_boot: Option<usize>,
    /// Confidence level of the PSE interval
    #[arg(long)]
    ci_level: Option<f64>,
}

impl FitArgs {
    fn apply(&self, base: FitOptions) -> FitOptions {
        FitOptions {
            fix_gamma: self.fix_gamma.or(base.fix_gamma),
            fix_lambda: self.fix_lambda.or(base.fix_lambda),
            n_boot: self.n_boot.unwrap_or(base.n_boot),
            ci_level: self.ci_level.unwrap_or(base.ci_level),
            ..base
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Csv(_) => 2,
        Error::FitDegenerate(_)
        | Error::NotConverged
        | Error::CiUnreliable { .. }
        | Error::EmptyStatistics
        | Error::ZeroMarginal
        | Error::ThresholdUndefined(_) => 3,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// human-readable output to `stdout`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load_config(global: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = match &global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = global.seed {
        cfg.plan.seed = seed;
        cfg.fit.seed = seed;
    }
    if !global.groups.is_empty() {
        cfg.plan.groups = global.groups.clone();
    }
    if let Some(out) = &global.out {
        cfg.output_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let global = cli.global;
    match cli.command {
        Command::Simulate {
            participants,
            no_frames,
        } => {
            let mut cfg = load_config(&global)?;
            if let Some(p) = participants {
                cfg.plan.participants = p;
            }
            if no_frames {
                cfg.write_frames = false;
            }
            cfg.validate()?;
            cmd_simulate(&cfg, stdout)
        }
        Command::Fit { dataset, fit } => {
            let cfg = load_config(&global)?;
            let options = fit.apply(cfg.fit);
            let group = match global.groups.as_slice() {
                [] => None,
                [g] => Some(*g),
                _ => return Err(Error::Config("fit accepts at most one --group".into())),
            };
            cmd_fit(&dataset, group, &options, &cfg.output_dir, stdout)
        }
        Command::Pipeline {
            participants,
            no_frames,
            fit,
        } => {
            let mut cfg = load_config(&global)?;
            if let Some(p) = participants {
                cfg.plan.participants = p;
            }
            if no_frames {
                cfg.write_frames = false;
            }
            cfg.fit = fit.apply(cfg.fit);
            cfg.validate()?;
            cmd_pipeline(&cfg, stdout).map(|_| ())
        }
        Command::Sequence { count, reps } => {
            let cfg = load_config(&global)?;
            cmd_sequence(&cfg, count, reps, stdout)
        }
        Command::Chisq { cells } => cmd_chisq(&cells, stdout),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_simulation(cfg: &RunConfig, sim: &Simulation) -> Result<()> {
    let dir = &cfg.output_dir;
    create_dir(dir)?;
    write_json(&dir.join("config.json"), cfg)?;
    log::write_summary(fs::File::create(dir.join("summary.csv"))?, &sim.summaries())?;
    for run in &sim.groups {
        run.dataset.to_csv(fs::File::create(
            dir.join(format!("dataset_{}.csv", run.group)),
        )?)?;
    }
    if cfg.write_frames {
        let trials = dir.join("trials");
        create_dir(&trials)?;
        for (id, trace) in sim.traces() {
            let file = fs::File::create(trials.join(format!("trial_{id:05}.csv")))?;
            log::write_frames(std::io::BufWriter::new(file), &trace.frames)?;
        }
    }
    Ok(())
}

fn report_simulation(sim: &Simulation, stdout: &mut dyn Write) -> Result<()> {
    for run in &sim.groups {
        writeln!(
            stdout,
            "{:<20} trials {:>5}  excluded {:>4}",
            run.group,
            run.summaries.len(),
            run.excluded()
        )?;
    }
    let all = sim
        .groups
        .iter()
        .flat_map(|g| g.summaries.iter().map(|s| s.t1));
    match t1_statistics(all) {
        Ok(s) => writeln!(
            stdout,
            "t1: n={} min={:.3} max={:.3} median={:.3} mean={:.3} sd={:.3} s",
            s.count, s.min, s.max, s.median, s.mean, s.sd
        )?,
        Err(_) => writeln!(stdout, "t1: no dynamic episodes reached full attention")?,
    }
    Ok(())
}

pub fn cmd_simulate(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let sim = simulate(cfg)?;
    write_simulation(cfg, &sim)?;
    report_simulation(&sim, stdout)
}

/// Reads either a `gain,n,k` table or a simulation summary (detected by its header).
pub fn load_dataset(path: &Path, group: Option<Group>) -> Result<ResponseDataset> {
    let text = fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or_default();
    if header.split(',').any(|c| c.trim() == "trial_id") {
        let rows = log::read_summary(text.as_bytes())?;
        let groups: std::collections::BTreeSet<Group> = rows.iter().map(|r| r.group).collect();
        if group.is_none() && groups.len() > 1 {
            return Err(Error::Config(format!(
                "{} holds {} groups; choose one with --group",
                path.display(),
                groups.len()
            )));
        }
        let rows: Vec<_> = rows
            .into_iter()
            .filter(|r| group.is_none_or(|g| r.group == g))
            .collect();
        sim::batch_dataset(&rows)
    } else {
        ResponseDataset::from_csv(text.as_bytes())
    }
}

/// Rows of the plot-data CSV.
#[derive(Debug, Serialize)]
struct PlotRow<'a> {
    series: &'a str,
    gain: f64,
    empirical_proportion: Option<f64>,
    fitted_psi: f64,
}

pub const PLOT_POINTS: usize = 200;
pub const PLOT_RANGE: (f64, f64) = (0.5, 1.5);

/// Plot data: the fitted curve at 200 points over [0.5, 1.5], the empirical levels and
/// one marker row per threshold.
pub fn write_plot_csv<W: Write>(writer: W, data: &ResponseDataset, fit: &PsyFit) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let p = fit.params;
    let (lo, hi) = PLOT_RANGE;
    for i in 0..PLOT_POINTS {
        let x = lo + (hi - lo) * i as f64 / (PLOT_POINTS - 1) as f64;
        w.serialize(PlotRow {
            series: "curve",
            gain: x,
            empirical_proportion: None,
            fitted_psi: p.psi(x),
        })?;
    }
    for l in data.levels() {
        w.serialize(PlotRow {
            series: "data",
            gain: l.x,
            empirical_proportion: Some(l.proportion()),
            fitted_psi: p.psi(l.x),
        })?;
    }
    for (series, x) in [("ldt", fit.ldt), ("pse", fit.pse), ("udt", fit.udt)] {
        w.serialize(PlotRow {
            series,
            gain: x,
            empirical_proportion: None,
            fitted_psi: p.psi(x),
        })?;
    }
    w.flush()?;
    Ok(())
}

fn fit_and_write(
    data: &ResponseDataset,
    options: &FitOptions,
    dir: &Path,
    stem: &str,
) -> Result<PsyFit> {
    let fit = fit_psychometric(data, options)?;
    create_dir(dir)?;
    let mut json = crate::psycho::fit_report_json(&fit)?;
    json.push('\n');
    fs::write(dir.join(format!("fit{stem}.json")), json)?;
    write_plot_csv(
        fs::File::create(dir.join(format!("plot{stem}.csv")))?,
        data,
        &fit,
    )?;
    Ok(fit)
}

pub fn cmd_fit(
    dataset: &Path,
    group: Option<Group>,
    options: &FitOptions,
    out_dir: &Path,
    stdout: &mut dyn Write,
) -> Result<()> {
    let data = load_dataset(dataset, group)?;
    let fit = fit_and_write(&data, options, out_dir, "")?;
    writeln!(stdout, "{}", crate::psycho::fit_report_json(&fit)?)?;
    Ok(())
}

/// One row of the pipeline threshold table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub group: Group,
    pub ldt: f64,
    pub pse: f64,
    pub udt: f64,
    pub aic: f64,
    pub sse: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub trials: u64,
    pub excluded: usize,
    pub converged: bool,
}

pub fn cmd_pipeline(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Vec<ReportRow>> {
    let sim = simulate(cfg)?;
    write_simulation(cfg, &sim)?;
    report_simulation(&sim, stdout)?;
    let mut rows = Vec::new();
    for run in &sim.groups {
        let fit = fit_and_write(
            &run.dataset,
            &cfg.fit,
            &cfg.output_dir,
            &format!("_{}", run.group),
        )
        .map_err(|e| match e {
            Error::FitDegenerate(msg) => Error::FitDegenerate(format!("{}: {msg}", run.group)),
            other => other,
        })?;
        rows.push(ReportRow {
            group: run.group,
            ldt: fit.ldt,
            pse: fit.pse,
            udt: fit.udt,
            aic: fit.aic,
            sse: fit.sse,
            ci_low: fit.pse_ci.map(|c| c[0]),
            ci_high: fit.pse_ci.map(|c| c[1]),
            trials: run.dataset.total_trials(),
            excluded: run.excluded(),
            converged: fit.converged,
        });
    }
    let mut w = csv::Writer::from_path(cfg.output_dir.join("report.csv"))?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    write_json(&cfg.output_dir.join("report.json"), &rows)?;

    writeln!(
        stdout,
        "{:<20} {:>6} {:>6} {:>6} {:>8} {:>7} {:>15} {:>8}",
        "group", "LDT", "PSE", "UDT", "AIC", "SSE", "PSE CI", "excluded"
    )?;
    for r in &rows {
        let ci = match (r.ci_low, r.ci_high) {
            (Some(a), Some(b)) => format!("[{a:.3}, {b:.3}]"),
            _ => "-".to_string(),
        };
        writeln!(
            stdout,
            "{:<20} {:>6.3} {:>6.3} {:>6.3} {:>8.1} {:>7.4} {:>15} {:>8}",
            r.group, r.ldt, r.pse, r.udt, r.aic, r.sse, ci, r.excluded
        )?;
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
struct Sequences {
    seed: u64,
    repetitions: usize,
    gains: Vec<f64>,
    sequences: Vec<Vec<f64>>,
}

/// Writes `count` sequences; sequence `i` is shuffled with `seed + i`, matching the
/// per-participant sequences of `simulate`.
pub fn cmd_sequence(
    cfg: &RunConfig,
    count: usize,
    reps: usize,
    stdout: &mut dyn Write,
) -> Result<()> {
    if count == 0 || reps == 0 {
        return Err(Error::Config("--count and --reps must be >= 1".into()));
    }
    let seed = cfg.plan.seed;
    let seqs = Sequences {
        seed,
        repetitions: reps,
        gains: cfg.plan.gains.clone(),
        sequences: (0..count as u64)
            .map(|i| sim::shuffle_gains(seed.wrapping_add(i), &cfg.plan.gains, reps))
            .collect(),
    };
    create_dir(&cfg.output_dir)?;
    write_json(&cfg.output_dir.join("sequences.json"), &seqs)?;
    writeln!(stdout, "{}", serde_json::to_string(&seqs)?)?;
    Ok(())
}

pub fn cmd_chisq(cells: &[u64], stdout: &mut dyn Write) -> Result<()> {
    let [a, b, c, d] = cells else {
        return Err(Error::Config("chisq expects four counts".into()));
    };
    let r = chi_square_2x2([[*a, *b], [*c, *d]])?;
    writeln!(stdout, "{}", serde_json::to_string(&r)?)?;
    writeln!(
        stdout,
        "chi2({}, N = {}) = {:.3}, p = {:.4}",
        r.df, r.n, r.statistic, r.p_value
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), 1);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 2);
        assert_eq!(exit_code(&Error::FitDegenerate("x".into())), 3);
    }

    #[test]
    fn chisq_command() {
        let mut out = Vec::new();
        assert_eq!(run(["rdwlab", "chisq", "4", "10", "10", "4"], &mut out), 0);
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("chi2(1, N = 28) = 5.143"), "{text}");
        let mut out = Vec::new();
        assert_eq!(run(["rdwlab", "chisq", "0", "0", "1", "1"], &mut out), 3);
    }

    #[test]
    fn bad_usage_is_a_config_error() {
        let mut out = Vec::new();
        assert_eq!(run(["rdwlab", "simulate", "--group", "nope"], &mut out), 1);
        assert_eq!(run(["rdwlab", "chisq", "1", "2"], &mut out), 1);
    }

    #[test]
    fn plot_rows() {
        let data =
            ResponseDataset::from_csv("gain,n,k\n0.8,20,3\n1.0,20,10\n1.2,20,17\n".as_bytes())
                .unwrap();
        let fit = fit_psychometric(&data, &FitOptions::without_bootstrap()).unwrap();
        let mut buf = Vec::new();
        write_plot_csv(&mut buf, &data, &fit).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "series,gain,empirical_proportion,fitted_psi");
        assert_eq!(lines.len(), 1 + PLOT_POINTS + 3 + 3);
        assert!(lines[1].starts_with("curve,0.5,,"));
        assert!(lines[PLOT_POINTS].starts_with("curve,1.5,,"));
        assert!(lines.last().unwrap().starts_with("udt,"));
    }
}
