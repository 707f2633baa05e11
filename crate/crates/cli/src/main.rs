use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use flowshop_core::experiment::{missing_ops_sweep, run_experiment, AlgoSpec, ExperimentPlan, SweepOptions};
use flowshop_core::metrics::{load_front, relative_hypervolume, spread, ReferenceFront};
use flowshop_core::{generate_instance, serialize_instance, Algorithm, Error, GeneratorConfig};

/// Multi-objective evolutionary algorithms for permutation flowshops with
/// missing operations.
#[derive(Parser)]
#[command(name = "flowshop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen {
        #[arg(long)]
        jobs: usize,
        #[arg(long)]
        machines: usize,
        /// Probability that an operation is missing, in [0, 1).
        #[arg(long, default_value_t = 0.0)]
        missing: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute every run of an experiment plan.
    Run {
        #[arg(long)]
        plan: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Overrides the plan's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the same plan over instances that differ only in the
    /// missing-operation probability.
    Sweep(SweepArgs),
    /// Relative hypervolume and spread of a front against a reference front.
    Metrics {
        #[arg(long)]
        front: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Base generator configuration as JSON; overrides --jobs/--machines/--seed.
    #[arg(long)]
    base: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    jobs: usize,
    #[arg(long, default_value_t = 20)]
    machines: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated, strictly ascending probabilities.
    #[arg(long, value_delimiter = ',', required = true)]
    probs: Vec<f64>,
    /// Comma-separated algorithms; all four when omitted.
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = 30)]
    replications: usize,
    /// Evaluation budget per run; the presets' budget when omitted.
    #[arg(long)]
    max_evaluations: Option<u64>,
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: PathBuf,
}

/// A failure mapped to the documented exit codes.
enum Failure {
    Config(anyhow::Error),
    PartialRuns(usize),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.into())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::PartialRuns(n)) => {
            eprintln!("error: {n} run(s) failed; see runs.csv");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen {
            jobs,
            machines,
            missing,
            seed,
            out,
        } => {
            let inst = generate_instance(&GeneratorConfig::new(jobs, machines, missing, seed))?;
            let text = serialize_instance(&inst);
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Run { plan, workers, out } => {
            let mut plan = ExperimentPlan::load(&plan)?;
            if let Some(dir) = out {
                plan.output_dir = dir;
            }
            log::info!("{} runs on {workers} worker(s)", plan.run_count());
            let summary = run_experiment(&plan, workers)?;
            println!(
                "{} runs written to {}",
                summary.runs.len(),
                plan.output_dir.display()
            );
            match summary.failed_runs() {
                0 => Ok(()),
                n => Err(Failure::PartialRuns(n)),
            }
        }
        Command::Sweep(args) => sweep(args),
        Command::Metrics { front, reference } => {
            let front = load_front(&front)?;
            let reference = ReferenceFront::new(load_front(&reference)?)?;
            println!("rhv,spread");
            println!(
                "{:.10},{:.10}",
                relative_hypervolume(&front, &reference)?,
                spread(&front, &reference)?
            );
            Ok(())
        }
    }
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let base = match &args.base {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => GeneratorConfig::new(args.jobs, args.machines, 0.0, args.seed),
    };
    let algorithms = if args.algorithms.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        args.algorithms
    };
    let options = SweepOptions {
        algorithms: algorithms
            .into_iter()
            .map(|a| AlgoSpec {
                max_evaluations: args.max_evaluations,
                ..AlgoSpec::preset(a)
            })
            .collect(),
        replications: args.replications,
        base_seed: args.base_seed,
        output_dir: args.out.clone(),
        workers: args.workers,
    };
    let report = missing_ops_sweep(&base, &args.probs, &options)?;
    println!("missing_prob,instance,points,makespan_median,wtct_median,tardiness_median");
    for level in &report.levels {
        let median = level.stats.map(|s| s.median).unwrap_or([f64::NAN; 3]);
        println!(
            "{},{},{},{},{},{}",
            level.missing_prob,
            level.instance_name,
            level.front.len(),
            median[0],
            median[1],
            median[2]
        );
    }
    match report.experiment.failed_runs() {
        0 => Ok(()),
        n => Err(Failure::PartialRuns(n)),
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
