//! The four solvers. Each owns its random stream and evaluation counter and
//! stops at the first generation boundary where the counter has reached the
//! budget, so a run overshoots by at most one generation (`#P` evaluations).
//!
//! Offspring whose permutation is already in the population are re-bred
//! before evaluation (see [`Breeder`]); distinct permutations with equal
//! objective vectors are all kept.

mod moead;
mod nsga2;
mod nsga3;
pub mod reference_dirs;
mod spea2;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use moead::{neighborhood_size, tchebycheff};
pub use spea2::{spea2_fitness, Spea2Fitness};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::metrics::{FrontPoint, ParetoFront};
use crate::moea::{pmx_crossover, random_permutation, swap_mutation};
use crate::rng::ChaCha8Rng;
use crate::schedule::{Evaluator, ObjectiveVector, Permutation};

/// Objective evaluations per run used by every preset.
pub const DEFAULT_MAX_EVALUATIONS: u64 = 150_000;
/// MOEA/D neighborhood as a fraction of the population.
pub const DEFAULT_NEIGHBORHOOD_FRAC: f64 = 0.03;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Algorithm {
    Nsga2,
    Nsga3,
    Spea2,
    Moead,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Nsga2,
        Algorithm::Nsga3,
        Algorithm::Spea2,
        Algorithm::Moead,
    ];

    /// Stable ordinal used in seed derivation.
    pub fn ordinal(self) -> u64 {
        match self {
            Algorithm::Nsga2 => 0,
            Algorithm::Nsga3 => 1,
            Algorithm::Spea2 => 2,
            Algorithm::Moead => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "NSGA2",
            Algorithm::Nsga3 => "NSGA3",
            Algorithm::Spea2 => "SPEA2",
            Algorithm::Moead => "MOEAD",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        match key.as_str() {
            "NSGA2" | "NSGAII" => Ok(Algorithm::Nsga2),
            "NSGA3" | "NSGAIII" => Ok(Algorithm::Nsga3),
            "SPEA2" => Ok(Algorithm::Spea2),
            "MOEAD" => Ok(Algorithm::Moead),
            _ => Err(Error::Config(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// Parameters of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    pub algorithm: Algorithm,
    /// Population size `#P`.
    pub population: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub max_evaluations: u64,
    /// Neighborhood size as a fraction of `#P` (MOEA/D only).
    pub neighborhood_frac: f64,
    pub seed: u64,
}

impl AlgoConfig {
    /// The tuned configuration for `algorithm` with the default budget.
    pub fn preset(algorithm: Algorithm, seed: u64) -> Self {
        let (population, crossover_prob) = match algorithm {
            Algorithm::Moead => (50, 0.5),
            Algorithm::Nsga2 => (100, 0.7),
            Algorithm::Nsga3 => (50, 0.7),
            Algorithm::Spea2 => (100, 0.9),
        };
        Self {
            algorithm,
            population,
            crossover_prob,
            mutation_prob: 0.1,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
            neighborhood_frac: DEFAULT_NEIGHBORHOOD_FRAC,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("crossover", self.crossover_prob),
            ("mutation", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} probability {p} outside [0, 1]")));
            }
        }
        if self.population < 4 || !self.population.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "population {} must be even and at least 4",
                self.population
            )));
        }
        if self.max_evaluations < self.population as u64 {
            return Err(Error::Config(format!(
                "budget {} below the population size {}",
                self.max_evaluations, self.population
            )));
        }
        if !(self.neighborhood_frac > 0.0 && self.neighborhood_frac <= 1.0) {
            return Err(Error::Config(format!(
                "neighborhood fraction {} outside (0, 1]",
                self.neighborhood_frac
            )));
        }
        Ok(())
    }
}

/// Outcome of one run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub front: ParetoFront,
    pub evaluations_used: u64,
    pub wall_time: Duration,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub instance_name: String,
}

/// State exposed to observers at every generation boundary.
#[derive(Debug)]
pub struct Generation<'a> {
    pub index: usize,
    pub evaluations: u64,
    /// Objectives of the retained population (the archive for SPEA2).
    pub retained: &'a [ObjectiveVector],
}

/// Runs `cfg.algorithm` on `inst`.
pub fn run(inst: &Instance, cfg: &AlgoConfig) -> Result<RunResult> {
    run_observed(inst, cfg, |_| {})
}

/// Like [`run`], calling `observer` at every generation boundary.
pub fn run_observed<F>(inst: &Instance, cfg: &AlgoConfig, mut observer: F) -> Result<RunResult>
where
    F: FnMut(&Generation<'_>),
{
    cfg.validate()?;
    let start = Instant::now();
    let (front, evaluations_used) = match cfg.algorithm {
        Algorithm::Nsga2 => nsga2::run(inst, cfg, &mut observer)?,
        Algorithm::Nsga3 => nsga3::run(inst, cfg, &mut observer)?,
        Algorithm::Spea2 => spea2::run(inst, cfg, &mut observer)?,
        Algorithm::Moead => moead::run(inst, cfg, &mut observer)?,
    };
    Ok(RunResult {
        front,
        evaluations_used,
        wall_time: start.elapsed(),
        seed: cfg.seed,
        algorithm: cfg.algorithm,
        instance_name: inst.name().to_string(),
    })
}

/// Run entry points checking that the dispatch matches.
pub fn run_nsga2(inst: &Instance, cfg: &AlgoConfig) -> Result<RunResult> {
    expect(cfg, Algorithm::Nsga2)?;
    run(inst, cfg)
}

pub fn run_nsga3(inst: &Instance, cfg: &AlgoConfig) -> Result<RunResult> {
    expect(cfg, Algorithm::Nsga3)?;
    run(inst, cfg)
}

pub fn run_spea2(inst: &Instance, cfg: &AlgoConfig) -> Result<RunResult> {
    expect(cfg, Algorithm::Spea2)?;
    run(inst, cfg)
}

pub fn run_moead(inst: &Instance, cfg: &AlgoConfig) -> Result<RunResult> {
    expect(cfg, Algorithm::Moead)?;
    run(inst, cfg)
}

fn expect(cfg: &AlgoConfig, algorithm: Algorithm) -> Result<()> {
    if cfg.algorithm != algorithm {
        return Err(Error::Config(format!(
            "configuration is for {}, not {algorithm}",
            cfg.algorithm
        )));
    }
    Ok(())
}

type Member = (Permutation, ObjectiveVector);

/// Rejected offspring allowed per generation, as a multiple of `#P`.
const RETRY_FACTOR: usize = 10;

/// Offspring admission that turns away genomes already present in the
/// population, before they cost an evaluation. After `RETRY_FACTOR * #P`
/// rejections in one generation duplicates are admitted, which keeps tiny
/// search spaces (fewer permutations than `#P`) from stalling.
struct Breeder {
    seen: HashMap<Permutation, usize>,
    retries_left: usize,
}

impl Breeder {
    fn new<'a>(genomes: impl IntoIterator<Item = &'a Permutation>, population: usize) -> Self {
        let mut seen = HashMap::new();
        for g in genomes {
            *seen.entry(g.clone()).or_insert(0) += 1;
        }
        Self {
            seen,
            retries_left: RETRY_FACTOR * population,
        }
    }

    /// Whether `child` may enter; a refusal spends one retry.
    fn is_fresh(&mut self, child: &Permutation) -> bool {
        if self.retries_left > 0 && self.seen.contains_key(child) {
            self.retries_left -= 1;
            return false;
        }
        true
    }

    /// Registers `child` unless it is a duplicate that may still be refused.
    fn admit(&mut self, child: &Permutation) -> bool {
        if !self.is_fresh(child) {
            return false;
        }
        self.insert(child);
        true
    }

    fn insert(&mut self, child: &Permutation) {
        *self.seen.entry(child.clone()).or_insert(0) += 1;
    }

    fn remove(&mut self, genome: &Permutation) {
        if let Some(c) = self.seen.get_mut(genome) {
            *c -= 1;
            if *c == 0 {
                self.seen.remove(genome);
            }
        }
    }

    fn refill(&mut self, population: usize) {
        self.retries_left = RETRY_FACTOR * population;
    }
}

/// `size` evaluated random genomes, distinct while the retry budget lasts.
fn initial_population(ev: &mut Evaluator<'_>, size: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Member>> {
    let n = ev.instance().n_jobs();
    let mut breeder = Breeder::new([], size);
    let mut pop = Vec::with_capacity(size);
    while pop.len() < size {
        let g = random_permutation(n, rng);
        if breeder.admit(&g) {
            let o = ev.evaluate(&g)?;
            pop.push((g, o));
        }
    }
    Ok(pop)
}

/// PMX on the pair with probability `p_c`, then swap mutation on each child
/// with probability `p_m`. Genomes shorter than two jobs are copied.
fn vary(
    a: &Permutation,
    b: &Permutation,
    cfg: &AlgoConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Permutation, Permutation)> {
    if a.len() < 2 {
        return Ok((a.clone(), b.clone()));
    }
    let (mut c1, mut c2) = if rng.gen::<f64>() < cfg.crossover_prob {
        pmx_crossover(a, b, rng)?
    } else {
        (a.clone(), b.clone())
    };
    for c in [&mut c1, &mut c2] {
        if rng.gen::<f64>() < cfg.mutation_prob {
            *c = swap_mutation(c, rng)?;
        }
    }
    Ok((c1, c2))
}

fn front_of(members: &[Member]) -> ParetoFront {
    ParetoFront::from_points(members.iter().map(|(g, o)| FrontPoint {
        objectives: *o,
        permutation: g.clone(),
    }))
}

fn objectives_of(members: &[Member]) -> Vec<ObjectiveVector> {
    members.iter().map(|m| m.1).collect()
}
