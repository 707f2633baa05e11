use crate::schedule::{dominates, ObjectiveVector, N_OBJECTIVES};

/// Deb's fast non-dominated sort. Front `k` holds the indices that are
/// non-dominated once fronts `0..k` are removed; indices within a front are
/// ascending.
pub fn fast_nondominated_sort(points: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates(&points[i], &points[j]) {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominated_by_me[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Indices of the points not dominated by any other point.
pub fn nondominated_indices(points: &[ObjectiveVector]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !points.iter().any(|q| dominates(q, &points[i])))
        .collect()
}

/// NSGA-II crowding distance. Boundary points of every objective get
/// infinity; interior points sum the neighbor gap normalized by the
/// objective's range. Objectives with zero range add nothing.
pub fn crowding_distance(front: &[ObjectiveVector]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut distance = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for o in 0..N_OBJECTIVES {
        order.sort_by(|&a, &b| {
            front[a]
                .component(o)
                .cmp(&front[b].component(o))
                .then(a.cmp(&b))
        });
        let lo = front[order[0]].component(o);
        let hi = front[order[n - 1]].component(o);
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        if hi == lo {
            continue;
        }
        let range = (hi - lo) as f64;
        for k in 1..n - 1 {
            let gap = front[order[k + 1]].component(o) - front[order[k - 1]].component(o);
            distance[order[k]] += gap as f64 / range;
        }
    }
    distance
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(a: u64, b: u64, c: u64) -> ObjectiveVector {
        ObjectiveVector::new(a, b, c)
    }

    #[test]
    fn sort_small_example() {
        let pts = [ov(1, 1, 1), ov(2, 2, 2), ov(1, 2, 3)];
        assert_eq!(fast_nondominated_sort(&pts), vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn identical_members_share_a_front() {
        let pts = [ov(4, 4, 4); 5];
        assert_eq!(fast_nondominated_sort(&pts), vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn chain_gives_singletons() {
        let pts = [ov(3, 3, 3), ov(1, 1, 1), ov(2, 2, 2)];
        assert_eq!(fast_nondominated_sort(&pts), vec![vec![1], vec![2], vec![0]]);
        assert!(fast_nondominated_sort(&[]).is_empty());
    }

    #[test]
    fn crowding_boundary_cases() {
        assert_eq!(crowding_distance(&[ov(1, 2, 3)]), vec![f64::INFINITY]);
        assert!(crowding_distance(&[ov(1, 2, 3), ov(3, 2, 1)])
            .iter()
            .all(|d| d.is_infinite()));
    }

    #[test]
    fn crowding_collinear_middle() {
        // objectives 0 and 1 vary, objective 2 is constant
        let d = crowding_distance(&[ov(0, 10, 5), ov(1, 5, 5), ov(2, 0, 5)]);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert_eq!(d[1], 2.0);
    }

    #[test]
    fn crowding_duplicates_finite() {
        let d = crowding_distance(&[ov(0, 4, 0), ov(2, 2, 0), ov(2, 2, 0), ov(2, 2, 0), ov(4, 0, 0)]);
        assert_eq!(d.iter().filter(|x| x.is_finite()).count(), 3);
        assert!(d.iter().all(|&x| x >= 0.0));
        assert!(d[2] == 0.0);
    }
}
