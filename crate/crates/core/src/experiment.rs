//! Experiment harness: batches of seeded runs over instances and
//! algorithms, per-instance reference fronts, indicators and the files the
//! analysis tooling consumes.
//!
//! Output layout under `output_dir`:
//!
//! ```text
//! manifest.json            plan, decision constants, every run seed
//! runs.csv                 one row per (instance, algorithm, replication)
//! consolidated.csv         one row per (instance, algorithm)
//! instances/<inst>.txt     the instance files used
//! fronts/<inst>/<alg>_r<k>.csv, <alg>_consolidated.csv, reference.csv
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{self, AlgoConfig, Algorithm, RunResult};
use crate::error::{Error, Result};
use crate::instance::{generate_instance, parse_instance, serialize_instance, GeneratorConfig, Instance};
use crate::metrics::{
    consolidate, relative_hypervolume, save_front, spread, ParetoFront, ReferenceFront, HV_REFERENCE,
};
use crate::rng::run_seed;
use crate::schedule::N_OBJECTIVES;

/// Where an instance of a plan comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceSource {
    File(PathBuf),
    Generate(GeneratorConfig),
}

impl InstanceSource {
    pub fn load(&self) -> Result<Instance> {
        match self {
            InstanceSource::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                parse_instance(&text)
            }
            InstanceSource::Generate(cfg) => generate_instance(cfg),
        }
    }
}

/// An algorithm preset with optional overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoSpec {
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossover_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_evaluations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighborhood_frac: Option<f64>,
}

impl AlgoSpec {
    pub fn preset(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            population: None,
            crossover_prob: None,
            mutation_prob: None,
            max_evaluations: None,
            neighborhood_frac: None,
        }
    }

    pub fn with_budget(algorithm: Algorithm, max_evaluations: u64) -> Self {
        Self {
            max_evaluations: Some(max_evaluations),
            ..Self::preset(algorithm)
        }
    }

    pub fn config(&self, seed: u64) -> AlgoConfig {
        let p = AlgoConfig::preset(self.algorithm, seed);
        AlgoConfig {
            population: self.population.unwrap_or(p.population),
            crossover_prob: self.crossover_prob.unwrap_or(p.crossover_prob),
            mutation_prob: self.mutation_prob.unwrap_or(p.mutation_prob),
            max_evaluations: self.max_evaluations.unwrap_or(p.max_evaluations),
            neighborhood_frac: self.neighborhood_frac.unwrap_or(p.neighborhood_frac),
            ..p
        }
    }
}

fn default_replications() -> usize {
    30
}

/// A batch of runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub instances: Vec<InstanceSource>,
    pub algorithms: Vec<AlgoSpec>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub base_seed: u64,
    pub output_dir: PathBuf,
}

impl ExperimentPlan {
    /// 3 job counts x 2 machine counts x 3 missing levels, all four presets,
    /// 30 replications.
    pub fn full_factorial(base_seed: u64, output_dir: impl Into<PathBuf>) -> Self {
        let mut instances = Vec::new();
        for n in [30, 40, 50] {
            for m in [10, 20] {
                for p in [0.0, 0.1, 0.2] {
                    let seed = run_seed(base_seed, &format!("{n}x{m}"), 0, 0);
                    instances.push(InstanceSource::Generate(GeneratorConfig::new(n, m, p, seed)));
                }
            }
        }
        Self {
            instances,
            algorithms: Algorithm::ALL.into_iter().map(AlgoSpec::preset).collect(),
            replications: default_replications(),
            base_seed,
            output_dir: output_dir.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.instances.is_empty() {
            return Err(Error::Config("plan lists no instances".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("plan lists no algorithms".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        for spec in &self.algorithms {
            spec.config(0).validate()?;
        }
        Ok(())
    }

    pub fn run_count(&self) -> usize {
        self.instances.len() * self.algorithms.len() * self.replications
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Indicator values and bookkeeping for one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub replication: usize,
    pub seed: u64,
    /// `None` on success, otherwise the failure message.
    pub error: Option<String>,
    pub evaluations: u64,
    pub rhv: Option<f64>,
    pub spread: Option<f64>,
    pub front_points: usize,
    pub wall_time: Duration,
    pub front_file: Option<PathBuf>,
}

/// Consolidated front of one algorithm on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsolidatedRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub rhv: Option<f64>,
    pub spread: Option<f64>,
    pub front_points: usize,
    pub front_file: PathBuf,
}

/// The reference front of one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceOutcome {
    pub instance: Instance,
    pub reference: ParetoFront,
    pub reference_file: PathBuf,
}

/// Everything [`run_experiment`] produced.
#[derive(Clone, Debug)]
pub struct ExperimentSummary {
    pub runs: Vec<RunRecord>,
    pub consolidated: Vec<ConsolidatedRecord>,
    pub instances: Vec<InstanceOutcome>,
}

impl ExperimentSummary {
    pub fn failed_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.error.is_some()).count()
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'static str,
    plan: &'a ExperimentPlan,
    constants: Constants,
    instances: Vec<ManifestInstance<'a>>,
    runs: Vec<ManifestRun>,
}

#[derive(Serialize)]
struct Constants {
    hv_reference: [f64; N_OBJECTIVES],
    normalization: &'static str,
    spread_distance: &'static str,
    spread_extremes: &'static str,
    seed_derivation: &'static str,
    moead_scalarizer: &'static str,
    moead_neighborhood: &'static str,
    nsga3_reference_points: &'static str,
    duplicate_offspring: &'static str,
    due_dates: &'static str,
    weights: &'static str,
}

const CONSTANTS: Constants = Constants {
    hv_reference: HV_REFERENCE,
    normalization: "per instance, (v - ideal) / (nadir - ideal) of the reference front, clamped to [0, 1]",
    spread_distance: "euclidean in normalized space",
    spread_extremes: "per-objective minimizers of the reference front",
    seed_derivation: "splitmix64 chain over base_seed ^ fnv1a64(instance), algorithm ordinal (NSGA2=0, NSGA3=1, SPEA2=2, MOEAD=3), replication",
    moead_scalarizer: "tchebycheff on raw objectives, zero weights raised to 1e-6",
    moead_neighborhood: "max(2, round(frac * population))",
    nsga3_reference_points: "largest Das-Dennis lattice not exceeding the population",
    duplicate_offspring: "offspring equal to a population genome are re-bred before evaluation, up to 10 * population rejections per generation",
    due_dates: "round(u * total work), u ~ U[tightness]",
    weights: "uniform integer in weight_range",
};

#[derive(Serialize)]
struct ManifestInstance<'a> {
    name: &'a str,
    file: PathBuf,
    source: &'a InstanceSource,
    reference_front: PathBuf,
    /// Runs (`algorithm/replication`) whose fronts fed the reference front.
    reference_runs: Vec<String>,
}

#[derive(Serialize)]
struct ManifestRun {
    instance: String,
    replication: usize,
    config: AlgoConfig,
    status: String,
}

/// File-system friendly form of an instance name.
pub fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| match c {
            '%' => "pct".to_string(),
            c if c.is_ascii_alphanumeric() || c == '-' || c == '_' => c.to_string(),
            _ => "_".to_string(),
        })
        .collect()
}

struct Job {
    instance: usize,
    algorithm: usize,
    replication: usize,
    config: AlgoConfig,
}

/// Executes every run of `plan` on a pool of `workers` threads and writes
/// the result files. Failed runs are recorded and excluded from reference
/// fronts; only configuration and I/O problems abort the batch.
pub fn run_experiment(plan: &ExperimentPlan, workers: usize) -> Result<ExperimentSummary> {
    plan.validate()?;
    let instances: Vec<Instance> = plan
        .instances
        .iter()
        .map(InstanceSource::load)
        .collect::<Result<_>>()?;
    let mut names = HashSet::new();
    for inst in &instances {
        if !names.insert(file_stem(inst.name())) {
            return Err(Error::Config(format!(
                "instance name `{}` appears twice in the plan",
                inst.name()
            )));
        }
    }

    let mut jobs = Vec::with_capacity(plan.run_count());
    for (i, inst) in instances.iter().enumerate() {
        for (a, spec) in plan.algorithms.iter().enumerate() {
            for r in 0..plan.replications {
                let seed = run_seed(plan.base_seed, inst.name(), spec.algorithm.ordinal(), r as u64);
                jobs.push(Job {
                    instance: i,
                    algorithm: a,
                    replication: r,
                    config: spec.config(seed),
                });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<RunResult, String>> = pool.install(|| {
        jobs.par_iter()
            .map(|job| execute(&instances[job.instance], &job.config))
            .collect()
    });

    write_outputs(plan, &instances, &jobs, results)
}

fn execute(inst: &Instance, cfg: &AlgoConfig) -> Result<RunResult, String> {
    match panic::catch_unwind(AssertUnwindSafe(|| algorithms::run(inst, cfg))) {
        Ok(Ok(r)) => Ok(r),
        Ok(Err(e)) => Err(e.to_string()),
        Err(payload) => Err(payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "run panicked".into())),
    }
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn write_outputs(
    plan: &ExperimentPlan,
    instances: &[Instance],
    jobs: &[Job],
    results: Vec<Result<RunResult, String>>,
) -> Result<ExperimentSummary> {
    let out = &plan.output_dir;
    create_dir(&out.join("instances"))?;
    let mut runs = Vec::with_capacity(jobs.len());
    let mut consolidated = Vec::new();
    let mut outcomes = Vec::new();
    let mut manifest_instances = Vec::new();
    let mut manifest_runs = Vec::new();

    for (i, inst) in instances.iter().enumerate() {
        let stem = file_stem(inst.name());
        let front_dir = out.join("fronts").join(&stem);
        create_dir(&front_dir)?;
        let inst_file = PathBuf::from("instances").join(format!("{stem}.txt"));
        write_file(&out.join(&inst_file), &serialize_instance(inst))?;

        let mine: Vec<(&Job, &Result<RunResult, String>)> = jobs
            .iter()
            .zip(&results)
            .filter(|(j, _)| j.instance == i)
            .collect();
        let ok_fronts: Vec<&ParetoFront> = mine
            .iter()
            .filter_map(|(_, r)| r.as_ref().ok().map(|r| &r.front))
            .collect();
        let reference_front = consolidate(ok_fronts);
        let reference_file = PathBuf::from("fronts").join(&stem).join("reference.csv");
        save_front(&reference_front, &out.join(&reference_file))?;
        let reference = ReferenceFront::new(reference_front.clone()).ok();
        let indicators = |front: &ParetoFront| -> (Option<f64>, Option<f64>) {
            match (&reference, front.is_empty()) {
                (Some(r), false) => (
                    // a run front is covered by the reference, so only
                    // rounding can push the ratio past 1
                    relative_hypervolume(front, r).ok().map(|v| v.clamp(0.0, 1.0)),
                    spread(front, r).ok(),
                ),
                _ => (None, None),
            }
        };

        let mut reference_runs = Vec::new();
        for (a, spec) in plan.algorithms.iter().enumerate() {
            let alg = spec.algorithm;
            let mut alg_fronts = Vec::new();
            for (job, result) in mine.iter().filter(|(j, _)| j.algorithm == a) {
                let run_name = format!("{}_r{}", alg.label(), job.replication);
                let record = match result {
                    Ok(res) => {
                        let file = PathBuf::from("fronts").join(&stem).join(format!("{run_name}.csv"));
                        save_front(&res.front, &out.join(&file))?;
                        let (rhv, spr) = indicators(&res.front);
                        alg_fronts.push(&res.front);
                        reference_runs.push(format!("{}/{}", alg.label(), job.replication));
                        RunRecord {
                            instance: inst.name().to_string(),
                            algorithm: alg,
                            replication: job.replication,
                            seed: job.config.seed,
                            error: None,
                            evaluations: res.evaluations_used,
                            rhv,
                            spread: spr,
                            front_points: res.front.len(),
                            wall_time: res.wall_time,
                            front_file: Some(file),
                        }
                    }
                    Err(msg) => {
                        log::error!("{} {run_name} failed: {msg}", inst.name());
                        RunRecord {
                            instance: inst.name().to_string(),
                            algorithm: alg,
                            replication: job.replication,
                            seed: job.config.seed,
                            error: Some(msg.clone()),
                            evaluations: 0,
                            rhv: None,
                            spread: None,
                            front_points: 0,
                            wall_time: Duration::ZERO,
                            front_file: None,
                        }
                    }
                };
                manifest_runs.push(ManifestRun {
                    instance: inst.name().to_string(),
                    replication: job.replication,
                    config: job.config.clone(),
                    status: record.error.clone().map_or_else(|| "ok".into(), |e| format!("error: {e}")),
                });
                runs.push(record);
            }
            let front = consolidate(alg_fronts.iter().copied());
            let file = PathBuf::from("fronts").join(&stem).join(format!("{}_consolidated.csv", alg.label()));
            save_front(&front, &out.join(&file))?;
            let (rhv, spr) = indicators(&front);
            consolidated.push(ConsolidatedRecord {
                instance: inst.name().to_string(),
                algorithm: alg,
                runs: alg_fronts.len(),
                rhv,
                spread: spr,
                front_points: front.len(),
                front_file: file,
            });
        }

        manifest_instances.push(ManifestInstance {
            name: inst.name(),
            file: inst_file,
            source: &plan.instances[i],
            reference_front: reference_file.clone(),
            reference_runs,
        });
        outcomes.push(InstanceOutcome {
            instance: inst.clone(),
            reference: reference_front,
            reference_file,
        });
    }

    write_file(&out.join("runs.csv"), &runs_csv(&runs))?;
    write_file(&out.join("consolidated.csv"), &consolidated_csv(&consolidated))?;
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        plan,
        constants: CONSTANTS,
        instances: manifest_instances,
        runs: manifest_runs,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    write_file(&out.join("manifest.json"), &json)?;

    Ok(ExperimentSummary {
        runs,
        consolidated,
        instances: outcomes,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.10}")).unwrap_or_default()
}

fn path_text(p: &Path) -> String {
    p.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("/")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Header of `runs.csv`; `wall_time_ms` is the only nondeterministic column.
pub const RUNS_HEADER: &str =
    "instance,algorithm,replication,seed,status,evaluations,rhv,spread,front_points,front_file,wall_time_ms";

fn runs_csv(runs: &[RunRecord]) -> String {
    let mut s = String::from(RUNS_HEADER);
    s.push('\n');
    for r in runs {
        let status = r.error.as_deref().map_or_else(|| "ok".to_string(), |e| format!("error: {e}"));
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.instance),
            r.algorithm,
            r.replication,
            r.seed,
            csv_field(&status),
            r.evaluations,
            opt(r.rhv),
            opt(r.spread),
            r.front_points,
            r.front_file.as_deref().map(path_text).unwrap_or_default(),
            r.wall_time.as_millis(),
        );
    }
    s
}

pub const CONSOLIDATED_HEADER: &str = "instance,algorithm,runs,rhv,spread,front_points,front_file";

fn consolidated_csv(rows: &[ConsolidatedRecord]) -> String {
    let mut s = String::from(CONSOLIDATED_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            csv_field(&r.instance),
            r.algorithm,
            r.runs,
            opt(r.rhv),
            opt(r.spread),
            r.front_points,
            path_text(&r.front_file),
        );
    }
    s
}

/// Options shared by every level of a missing-operations sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    pub algorithms: Vec<AlgoSpec>,
    pub replications: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub workers: usize,
}

/// Minimum and median of each objective over a front.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ObjectiveStats {
    pub min: [f64; N_OBJECTIVES],
    pub median: [f64; N_OBJECTIVES],
}

impl ObjectiveStats {
    pub fn of(front: &ParetoFront) -> Option<Self> {
        if front.is_empty() {
            return None;
        }
        let mut min = [0.0; N_OBJECTIVES];
        let mut median = [0.0; N_OBJECTIVES];
        for o in 0..N_OBJECTIVES {
            let mut col: Vec<u64> = front.objectives().map(|v| v.component(o)).collect();
            col.sort_unstable();
            min[o] = col[0] as f64;
            let k = col.len();
            median[o] = if k % 2 == 1 {
                col[k / 2] as f64
            } else {
                (col[k / 2 - 1] as f64 + col[k / 2] as f64) / 2.0
            };
        }
        Some(Self { min, median })
    }
}

/// One missing-operation level of a sweep.
#[derive(Clone, Debug)]
pub struct SweepLevel {
    pub missing_prob: f64,
    pub instance_name: String,
    pub front: ParetoFront,
    pub stats: Option<ObjectiveStats>,
}

/// Direction of the objective medians across a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTrend {
    pub makespan_median_non_increasing: bool,
    pub wtct_median_non_increasing: bool,
    pub tardiness_median_non_increasing: bool,
    /// `(last - first) / first` of each objective's median.
    pub relative_change: [f64; N_OBJECTIVES],
    /// Whether the makespan range `[min, max]` of consecutive levels overlap.
    pub makespan_range_overlap: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub levels: Vec<SweepLevel>,
    pub experiment: ExperimentSummary,
}

impl SweepReport {
    pub fn trend(&self) -> Option<SweepTrend> {
        let stats: Vec<ObjectiveStats> = self.levels.iter().map(|l| l.stats).collect::<Option<_>>()?;
        let non_increasing = |o: usize| stats.windows(2).all(|w| w[1].median[o] <= w[0].median[o]);
        let first = stats.first()?;
        let last = stats.last()?;
        let relative_change = std::array::from_fn(|o| {
            if first.median[o] == 0.0 {
                if last.median[o] == 0.0 { 0.0 } else { f64::INFINITY }
            } else {
                (last.median[o] - first.median[o]) / first.median[o]
            }
        });
        let ranges: Vec<(u64, u64)> = self
            .levels
            .iter()
            .map(|l| {
                let mk: Vec<u64> = l.front.objectives().map(|v| v.makespan).collect();
                (
                    mk.iter().copied().min().unwrap_or(0),
                    mk.iter().copied().max().unwrap_or(0),
                )
            })
            .collect();
        Some(SweepTrend {
            makespan_median_non_increasing: non_increasing(0),
            wtct_median_non_increasing: non_increasing(1),
            tardiness_median_non_increasing: non_increasing(2),
            relative_change,
            makespan_range_overlap: ranges
                .windows(2)
                .map(|w| w[0].0 <= w[1].1 && w[1].0 <= w[0].1)
                .collect(),
        })
    }
}

pub const SWEEP_HEADER: &str = "missing_prob,instance,points,makespan_min,makespan_median,wtct_min,wtct_median,tardiness_min,tardiness_median,front_file";

/// Generates one instance per missing probability from the same base
/// configuration, runs the plan on all of them and summarizes the
/// consolidated front of each level. Writes `sweep.csv` and
/// `sweep_trend.json` next to the experiment outputs.
pub fn missing_ops_sweep(base: &GeneratorConfig, probs: &[f64], options: &SweepOptions) -> Result<SweepReport> {
    if probs.is_empty() {
        return Err(Error::Config("sweep needs at least one probability".into()));
    }
    if let Some(w) = probs.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!(
            "sweep probabilities must be strictly ascending, got {} then {}",
            w[0], w[1]
        )));
    }
    let configs: Vec<GeneratorConfig> = probs
        .iter()
        .map(|&p| GeneratorConfig {
            missing_prob: p,
            ..base.clone()
        })
        .collect();
    for cfg in &configs {
        cfg.validate()?;
    }
    let plan = ExperimentPlan {
        instances: configs.iter().cloned().map(InstanceSource::Generate).collect(),
        algorithms: options.algorithms.clone(),
        replications: options.replications,
        base_seed: options.base_seed,
        output_dir: options.output_dir.clone(),
    };
    let experiment = run_experiment(&plan, options.workers)?;

    let levels: Vec<SweepLevel> = probs
        .iter()
        .zip(&experiment.instances)
        .map(|(&p, outcome)| SweepLevel {
            missing_prob: p,
            instance_name: outcome.instance.name().to_string(),
            stats: ObjectiveStats::of(&outcome.reference),
            front: outcome.reference.clone(),
        })
        .collect();

    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for (level, outcome) in levels.iter().zip(&experiment.instances) {
        let cell = |f: Option<f64>| f.map(|x| x.to_string()).unwrap_or_default();
        let st = level.stats;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            level.missing_prob,
            csv_field(&level.instance_name),
            level.front.len(),
            cell(st.map(|s| s.min[0])),
            cell(st.map(|s| s.median[0])),
            cell(st.map(|s| s.min[1])),
            cell(st.map(|s| s.median[1])),
            cell(st.map(|s| s.min[2])),
            cell(st.map(|s| s.median[2])),
            path_text(&outcome.reference_file),
        );
    }
    write_file(&options.output_dir.join("sweep.csv"), &csv)?;

    let report = SweepReport { levels, experiment };
    if let Some(trend) = report.trend() {
        let mut json = serde_json::to_string_pretty(&trend)?;
        json.push('\n');
        write_file(&options.output_dir.join("sweep_trend.json"), &json)?;
    }
    Ok(report)
}
