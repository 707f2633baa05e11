//! Shared fixtures for the criterion benchmarks.

use flowshop_core::{generate_instance, GeneratorConfig, Instance};

/// A generated instance of the given shape with a fixed seed.
pub fn instance(n_jobs: usize, n_machines: usize, missing_prob: f64) -> Instance {
    generate_instance(&GeneratorConfig::new(n_jobs, n_machines, missing_prob, 2024))
        .expect("valid generator config")
}
