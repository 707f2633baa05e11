//! Completion times and objective evaluation for permutation schedules.
//!
//! A missing operation (`p_jm = 0`) stays inside the standard recurrence as
//! a zero-duration step, so jobs never overtake each other on any machine:
//!
//! ```text
//! c[j][0] = c[prev][0] + p[j][0]
//! c[j][m] = max(c[j][m-1], c[prev][m]) + p[j][m]
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;

/// A job ordering: a bijection on `0..n_jobs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        if !is_permutation(&order) {
            return Err(Error::Permutation(format!("{order:?} is not a bijection")));
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Wraps `order` without validation. Operators that are closed over
    /// permutations use this; debug builds still check the bijection.
    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&order), "operator produced {order:?}");
        Self(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [usize] {
        &mut self.0
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(order: Vec<usize>) -> Result<Self> {
        Self::new(order)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    /// Dash-separated job indices, e.g. `2-0-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, job) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{job}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let order = s
            .split('-')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Permutation(format!("bad job index `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(order)
    }
}

/// Whether `order` contains every value of `0..order.len()` exactly once.
pub fn is_permutation(order: &[usize]) -> bool {
    let mut seen = vec![false; order.len()];
    order.iter().all(|&j| {
        j < seen.len() && !std::mem::replace(&mut seen[j], true)
    })
}

/// Finish times of every operation, indexed by job then machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionMatrix {
    n_machines: usize,
    c: Vec<u64>,
}

impl CompletionMatrix {
    pub fn get(&self, job: usize, machine: usize) -> u64 {
        self.c[job * self.n_machines + machine]
    }

    pub fn row(&self, job: usize) -> &[u64] {
        &self.c[job * self.n_machines..(job + 1) * self.n_machines]
    }

    /// `C(j)`: the finish time of `job` on the last machine.
    pub fn completion(&self, job: usize) -> u64 {
        self.get(job, self.n_machines - 1)
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.c.chunks(self.n_machines).map(<[u64]>::to_vec).collect()
    }
}

fn check_dims(inst: &Instance, perm: &Permutation) -> Result<()> {
    if perm.len() != inst.n_jobs() {
        return Err(Error::Dimension(format!(
            "permutation of {} jobs for an instance with {} jobs",
            perm.len(),
            inst.n_jobs()
        )));
    }
    Ok(())
}

/// Computes the full completion-time matrix of `perm` on `inst`.
pub fn completion_times(inst: &Instance, perm: &Permutation) -> Result<CompletionMatrix> {
    check_dims(inst, perm)?;
    let m = inst.n_machines();
    let mut c = vec![0u64; inst.n_jobs() * m];
    let mut prev: Option<usize> = None;
    for &job in perm.as_slice() {
        let row = inst.job_row(job);
        let mut ready = 0u64;
        for (machine, &p) in row.iter().enumerate() {
            let machine_free = prev.map_or(0, |q| c[q * m + machine]);
            ready = ready.max(machine_free) + u64::from(p);
            c[job * m + machine] = ready;
        }
        prev = Some(job);
    }
    Ok(CompletionMatrix { n_machines: m, c })
}

/// The three minimized objectives of a schedule.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct ObjectiveVector {
    pub makespan: u64,
    /// Weighted total completion time.
    pub total_completion_time: u64,
    pub total_tardiness: u64,
}

pub const N_OBJECTIVES: usize = 3;

impl ObjectiveVector {
    pub fn new(makespan: u64, total_completion_time: u64, total_tardiness: u64) -> Self {
        Self {
            makespan,
            total_completion_time,
            total_tardiness,
        }
    }

    pub fn to_array(self) -> [u64; N_OBJECTIVES] {
        [self.makespan, self.total_completion_time, self.total_tardiness]
    }

    pub fn to_f64(self) -> [f64; N_OBJECTIVES] {
        self.to_array().map(|v| v as f64)
    }

    pub fn component(&self, objective: usize) -> u64 {
        self.to_array()[objective]
    }
}

impl From<[u64; N_OBJECTIVES]> for ObjectiveVector {
    fn from(a: [u64; N_OBJECTIVES]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

/// Pareto dominance for minimization: `a` is no worse everywhere and differs.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    a.makespan <= b.makespan
        && a.total_completion_time <= b.total_completion_time
        && a.total_tardiness <= b.total_tardiness
        && a != b
}

/// Pure objective evaluation, without touching any evaluation counter.
pub fn objectives(inst: &Instance, perm: &Permutation) -> Result<ObjectiveVector> {
    check_dims(inst, perm)?;
    let mut machine_free = vec![0u64; inst.n_machines()];
    Ok(objectives_with(inst, perm.as_slice(), &mut machine_free))
}

fn objectives_with(inst: &Instance, order: &[usize], machine_free: &mut [u64]) -> ObjectiveVector {
    machine_free.fill(0);
    let mut makespan = 0;
    let mut weighted: u64 = 0;
    let mut tardiness: u64 = 0;
    for &job in order {
        let mut ready = 0u64;
        for (free, &p) in machine_free.iter_mut().zip(inst.job_row(job)) {
            ready = ready.max(*free) + u64::from(p);
            *free = ready;
        }
        makespan = makespan.max(ready);
        weighted = inst.weights()[job]
            .checked_mul(ready)
            .and_then(|x| weighted.checked_add(x))
            .expect("weighted completion time overflows u64");
        tardiness += ready.saturating_sub(inst.due_dates()[job]);
    }
    ObjectiveVector::new(makespan, weighted, tardiness)
}

/// Objective evaluation bound to one run; counts every call.
#[derive(Debug)]
pub struct Evaluator<'a> {
    instance: &'a Instance,
    evaluations: u64,
    scratch: Vec<u64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Self {
            instance,
            evaluations: 0,
            scratch: vec![0; instance.n_machines()],
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    /// Evaluates `perm` and increments the evaluation counter by one.
    pub fn evaluate(&mut self, perm: &Permutation) -> Result<ObjectiveVector> {
        check_dims(self.instance, perm)?;
        self.evaluations += 1;
        Ok(objectives_with(self.instance, perm.as_slice(), &mut self.scratch))
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(p: Vec<Vec<u32>>, d: Vec<u64>, w: Vec<u64>) -> Instance {
        Instance::new("t", 0, p, d, w).unwrap()
    }

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_by_two_schedule() {
        let i = inst(vec![vec![3, 2], vec![1, 4]], vec![10, 10], vec![1, 1]);
        let c = completion_times(&i, &perm(&[0, 1])).unwrap();
        assert_eq!(c.to_rows(), vec![vec![3, 5], vec![4, 9]]);
        assert_eq!(objectives(&i, &perm(&[0, 1])).unwrap(), ObjectiveVector::new(9, 14, 0));
    }

    #[test]
    fn missing_operation_passes_through() {
        let i = inst(vec![vec![3, 0], vec![1, 4]], vec![10, 10], vec![1, 1]);
        let c = completion_times(&i, &perm(&[0, 1])).unwrap();
        assert_eq!(c.to_rows(), vec![vec![3, 3], vec![4, 8]]);
    }

    #[test]
    fn zero_work_job_first_completes_at_zero() {
        let i = inst(vec![vec![0, 0], vec![1, 4]], vec![0, 0], vec![1, 1]);
        let c = completion_times(&i, &perm(&[0, 1])).unwrap();
        assert_eq!(c.completion(0), 0);
    }

    #[test]
    fn tardiness_against_due_dates() {
        let i = inst(vec![vec![3, 2], vec![1, 4]], vec![4, 8], vec![1, 1]);
        assert_eq!(objectives(&i, &perm(&[0, 1])).unwrap().total_tardiness, 2);
    }

    #[test]
    fn single_job_single_machine() {
        let i = inst(vec![vec![5]], vec![0], vec![3]);
        assert_eq!(
            objectives(&i, &perm(&[0])).unwrap(),
            ObjectiveVector::new(5, 15, 5)
        );
    }

    #[test]
    fn evaluator_counts_calls() {
        let i = inst(vec![vec![3, 2], vec![1, 4]], vec![10, 10], vec![1, 1]);
        let mut ev = Evaluator::new(&i);
        ev.evaluate(&perm(&[0, 1])).unwrap();
        ev.evaluate(&perm(&[1, 0])).unwrap();
        assert_eq!(ev.evaluations(), 2);
        assert!(ev.evaluate(&perm(&[0])).is_err());
        assert_eq!(ev.evaluations(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        let i = inst(vec![vec![3, 2], vec![1, 4]], vec![10, 10], vec![1, 1]);
        assert!(matches!(
            completion_times(&i, &perm(&[0, 1, 2])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn dominance_cases() {
        let a = ObjectiveVector::new(1, 1, 1);
        let b = ObjectiveVector::new(2, 2, 2);
        let c = ObjectiveVector::new(1, 3, 1);
        assert!(dominates(&a, &b));
        assert!(!dominates(&a, &a));
        assert!(!dominates(&c, &b) && !dominates(&b, &c));
    }

    #[test]
    fn permutation_validation_and_text() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![1, 2]).is_err());
        let p: Permutation = "2-0-1".parse().unwrap();
        assert_eq!(p.as_slice(), &[2, 0, 1]);
        assert_eq!(p.to_string(), "2-0-1");
        assert!("2-x".parse::<Permutation>().is_err());
    }
}
