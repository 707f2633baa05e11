//! Building blocks shared by every algorithm: the permutation genome and its
//! operators, non-dominated sorting, crowding and mating selection.

mod operators;
mod ranking;
mod selection;

pub use operators::{
    init_population, pmx_crossover, pmx_with_cuts, random_permutation, swap_mutation,
    swap_positions,
};
pub use ranking::{crowding_distance, fast_nondominated_sort, nondominated_indices};
pub use selection::binary_tournament;

use crate::error::{Error, Result};
use crate::schedule::{ObjectiveVector, Permutation};

/// A genome together with its objectives once evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub genome: Permutation,
    pub objectives: Option<ObjectiveVector>,
}

impl Individual {
    pub fn new(genome: Permutation) -> Self {
        Self {
            genome,
            objectives: None,
        }
    }

    pub fn evaluated(genome: Permutation, objectives: ObjectiveVector) -> Self {
        Self {
            genome,
            objectives: Some(objectives),
        }
    }
}

/// Members bounded by a capacity `#P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Population {
    pub members: Vec<Individual>,
    pub capacity: usize,
}

impl Population {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Objective vectors of every member, failing on the first unevaluated one.
    pub fn objectives(&self) -> Result<Vec<ObjectiveVector>> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| m.objectives.ok_or(Error::Unevaluated(i)))
            .collect()
    }

    /// Non-dominated fronts of the population, as member indices.
    pub fn fronts(&self) -> Result<Vec<Vec<usize>>> {
        Ok(fast_nondominated_sort(&self.objectives()?))
    }
}
