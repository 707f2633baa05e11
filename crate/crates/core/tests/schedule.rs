mod common;

use flowshop_core::{completion_times, dominates, objectives, Instance, ObjectiveVector, Permutation};
use proptest::prelude::*;

fn instance_strategy(max_jobs: usize, max_machines: usize) -> impl Strategy<Value = Instance> {
    (1..=max_jobs, 1..=max_machines).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(prop_oneof![Just(0u32), 1..=100u32], m), n),
            prop::collection::vec(0..2_000u64, n),
            prop::collection::vec(1..=10u64, n),
        )
            .prop_filter_map("all-zero matrix", |(rows, due, w)| {
                Instance::new("prop", 0, rows, due, w).ok()
            })
    })
}

fn with_order(max_jobs: usize, max_machines: usize) -> impl Strategy<Value = (Instance, Permutation)> {
    instance_strategy(max_jobs, max_machines).prop_flat_map(|inst| {
        let n = inst.n_jobs();
        (Just(inst), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|(inst, order)| (inst, Permutation::new(order).unwrap()))
    })
}

fn rebuild(inst: &Instance, rows: Vec<Vec<u32>>) -> Instance {
    Instance::new(inst.name(), 0, rows, inst.due_dates().to_vec(), inst.weights().to_vec()).unwrap()
}

proptest! {
    #[test]
    fn recurrence_matches_event_simulation((inst, perm) in with_order(10, 5)) {
        let fast = completion_times(&inst, &perm).unwrap().to_rows();
        prop_assert_eq!(fast, common::simulate(&inst, perm.as_slice()));
    }

    #[test]
    fn objectives_follow_completion_times((inst, perm) in with_order(8, 4)) {
        let c = completion_times(&inst, &perm).unwrap();
        let f = objectives(&inst, &perm).unwrap();
        let last = *perm.as_slice().last().unwrap();
        prop_assert_eq!(f.makespan, c.completion(last));
        let wtct: u64 = (0..inst.n_jobs()).map(|j| inst.weights()[j] * c.completion(j)).sum();
        let tard: u64 = (0..inst.n_jobs())
            .map(|j| c.completion(j).saturating_sub(inst.due_dates()[j]))
            .sum();
        prop_assert_eq!(f.total_completion_time, wtct);
        prop_assert_eq!(f.total_tardiness, tard);
        // the makespan is at least the busiest machine's load and the
        // longest job's own work
        for machine in 0..inst.n_machines() {
            let load: u64 = (0..inst.n_jobs()).map(|j| u64::from(inst.processing_time(j, machine))).sum();
            prop_assert!(f.makespan >= load);
        }
        for j in 0..inst.n_jobs() {
            prop_assert!(f.makespan >= inst.total_work(j));
        }
    }

    #[test]
    fn completion_is_monotone_in_processing_times(
        (inst, perm) in with_order(8, 4),
        pick in any::<prop::sample::Index>(),
        bump in 1..=20u32,
    ) {
        let mut rows: Vec<Vec<u32>> = inst.rows().map(<[u32]>::to_vec).collect();
        let cell = pick.index(inst.n_jobs() * inst.n_machines());
        let (j, m) = (cell / inst.n_machines(), cell % inst.n_machines());
        rows[j][m] = (rows[j][m] + bump).min(100);
        let longer = rebuild(&inst, rows);
        let before = completion_times(&inst, &perm).unwrap();
        let after = completion_times(&longer, &perm).unwrap();
        for job in 0..inst.n_jobs() {
            for machine in 0..inst.n_machines() {
                prop_assert!(after.get(job, machine) >= before.get(job, machine));
            }
        }
        let (a, b) = (objectives(&inst, &perm).unwrap(), objectives(&longer, &perm).unwrap());
        prop_assert!(b.makespan >= a.makespan);
        prop_assert!(b.total_completion_time >= a.total_completion_time);
        prop_assert!(b.total_tardiness >= a.total_tardiness);
    }

    #[test]
    fn job_without_operations_is_transparent(
        (inst, perm) in with_order(7, 4),
        slot in any::<prop::sample::Index>(),
    ) {
        // append a job with no operations and schedule it anywhere
        let n = inst.n_jobs();
        let mut rows: Vec<Vec<u32>> = inst.rows().map(<[u32]>::to_vec).collect();
        rows.push(vec![0; inst.n_machines()]);
        let mut due = inst.due_dates().to_vec();
        due.push(0);
        let mut w = inst.weights().to_vec();
        w.push(1);
        let bigger = Instance::new("prop+1", 0, rows, due, w).unwrap();
        let at = slot.index(n + 1);
        let mut order = perm.as_slice().to_vec();
        order.insert(at, n);
        let c_old = completion_times(&inst, &perm).unwrap();
        let c_new = completion_times(&bigger, &Permutation::new(order.clone()).unwrap()).unwrap();
        for j in 0..n {
            prop_assert_eq!(c_new.row(j), c_old.row(j));
        }
        // it leaves as soon as its predecessor does
        let expected = if at == 0 { 0 } else { c_new.completion(order[at - 1]) };
        prop_assert_eq!(c_new.completion(n), expected);
    }

    #[test]
    fn dominance_is_a_strict_partial_order(
        a in prop::array::uniform3(0..5u64),
        b in prop::array::uniform3(0..5u64),
        c in prop::array::uniform3(0..5u64),
    ) {
        let (a, b, c) = (ObjectiveVector::from(a), ObjectiveVector::from(b), ObjectiveVector::from(c));
        prop_assert!(!dominates(&a, &a));
        prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
        if dominates(&a, &b) && dominates(&b, &c) {
            prop_assert!(dominates(&a, &c));
        }
    }
}

#[test]
fn wrong_length_permutation_is_rejected() {
    let inst = Instance::new("x", 0, vec![vec![1, 2], vec![3, 4]], vec![0, 0], vec![1, 1]).unwrap();
    assert!(completion_times(&inst, &Permutation::identity(3)).is_err());
}
