//! Multi-objective evolutionary optimization for the permutation flowshop
//! with missing operations.
//!
//! Schedules are job permutations evaluated on makespan, weighted total
//! completion time and total tardiness. The crate provides an instance
//! generator, the schedule evaluator, NSGA-II, NSGA-III, SPEA2 and MOEA/D,
//! the spread and relative-hypervolume indicators, and a reproducible
//! experiment harness.

pub mod algorithms;
pub mod error;
pub mod experiment;
pub mod instance;
pub mod metrics;
pub mod moea;
pub mod rng;
pub mod schedule;

pub use algorithms::{run, AlgoConfig, Algorithm, RunResult};
pub use error::{Error, Result};
pub use instance::{generate_instance, instance_name, parse_instance, serialize_instance, GeneratorConfig, Instance};
pub use metrics::{consolidate, relative_hypervolume, spread, FrontPoint, ParetoFront, ReferenceFront};
pub use schedule::{completion_times, dominates, objectives, Evaluator, ObjectiveVector, Permutation};
pub use experiment::{missing_ops_sweep, run_experiment, AlgoSpec, ExperimentPlan, ExperimentSummary, InstanceSource, SweepOptions, SweepReport};
