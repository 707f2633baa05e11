//! Pareto-front bookkeeping and the quality indicators: exact 3-objective
//! hypervolume, relative hypervolume and spread.
//!
//! Indicators are computed in normalized objective space. A reference front
//! fixes the ideal and nadir points; every coordinate maps to
//! `(v - ideal) / (nadir - ideal)` and is clamped to `[0, 1]`.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::{dominates, ObjectiveVector, Permutation, N_OBJECTIVES};

/// Hypervolume reference point in normalized space.
pub const HV_REFERENCE: [f64; N_OBJECTIVES] = [1.1, 1.1, 1.1];

/// One schedule on a front.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FrontPoint {
    pub objectives: ObjectiveVector,
    pub permutation: Permutation,
}

/// Mutually non-dominated points with distinct objective vectors, kept in
/// lexicographic objective order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParetoFront {
    points: Vec<FrontPoint>,
}

impl ParetoFront {
    /// Filters `points` down to its non-dominated, deduplicated subset. Among
    /// points sharing an objective vector the smallest permutation is kept.
    pub fn from_points(points: impl IntoIterator<Item = FrontPoint>) -> Self {
        let mut all: Vec<FrontPoint> = points.into_iter().collect();
        all.sort_unstable();
        all.dedup_by(|b, a| a.objectives == b.objectives);
        // a dominator is lexicographically smaller, so it is already kept
        let mut kept: Vec<FrontPoint> = Vec::new();
        for p in all {
            if !kept.iter().any(|k| dominates(&k.objectives, &p.objectives)) {
                kept.push(p);
            }
        }
        Self { points: kept }
    }

    pub fn points(&self) -> &[FrontPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objectives(&self) -> impl Iterator<Item = ObjectiveVector> + '_ {
        self.points.iter().map(|p| p.objectives)
    }

    /// Archive update. Returns false when `point` is dominated by or equal
    /// to a member; otherwise inserts it and drops the members it dominates.
    pub fn insert(&mut self, point: FrontPoint) -> bool {
        let v = point.objectives;
        if self
            .points
            .iter()
            .any(|k| k.objectives == v || dominates(&k.objectives, &v))
        {
            return false;
        }
        self.points.retain(|k| !dominates(&v, &k.objectives));
        let at = self.points.partition_point(|k| k < &point);
        self.points.insert(at, point);
        true
    }

    pub fn ideal(&self) -> Option<ObjectiveVector> {
        self.bound(Iterator::min)
    }

    pub fn nadir(&self) -> Option<ObjectiveVector> {
        self.bound(Iterator::max)
    }

    fn bound(&self, pick: impl Fn(std::vec::IntoIter<u64>) -> Option<u64>) -> Option<ObjectiveVector> {
        if self.points.is_empty() {
            return None;
        }
        let mut out = [0u64; N_OBJECTIVES];
        for (o, slot) in out.iter_mut().enumerate() {
            let column: Vec<u64> = self.objectives().map(|v| v.component(o)).collect();
            *slot = pick(column.into_iter()).unwrap_or_default();
        }
        Some(out.into())
    }
}

/// Union of `fronts`, filtered for dominance and duplicates.
pub fn consolidate<'a>(fronts: impl IntoIterator<Item = &'a ParetoFront>) -> ParetoFront {
    ParetoFront::from_points(fronts.into_iter().flat_map(|f| f.points.iter().cloned()))
}

/// Approximation of the true front with its bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceFront {
    front: ParetoFront,
    ideal: ObjectiveVector,
    nadir: ObjectiveVector,
}

impl ReferenceFront {
    pub fn new(front: ParetoFront) -> Result<Self> {
        let ideal = front.ideal().ok_or(Error::Empty("reference front"))?;
        let nadir = front.nadir().ok_or(Error::Empty("reference front"))?;
        Ok(Self { front, ideal, nadir })
    }

    pub fn front(&self) -> &ParetoFront {
        &self.front
    }

    pub fn ideal(&self) -> ObjectiveVector {
        self.ideal
    }

    pub fn nadir(&self) -> ObjectiveVector {
        self.nadir
    }

    fn scale(&self, v: ObjectiveVector, clamped: &mut usize) -> [f64; N_OBJECTIVES] {
        let mut out = [0.0; N_OBJECTIVES];
        for (o, slot) in out.iter_mut().enumerate() {
            let lo = self.ideal.component(o);
            let hi = self.nadir.component(o);
            if hi == lo {
                continue;
            }
            let x = (v.component(o) as f64 - lo as f64) / (hi - lo) as f64;
            if !(0.0..=1.0).contains(&x) {
                *clamped += 1;
            }
            *slot = x.clamp(0.0, 1.0);
        }
        out
    }
}

/// Maps `front` into the unit cube spanned by the reference front's ideal
/// and nadir points. Zero-range objectives map to 0.
pub fn normalize(front: &ParetoFront, reference: &ReferenceFront) -> Vec<[f64; N_OBJECTIVES]> {
    normalize_vectors(front.objectives(), reference)
}

pub fn normalize_vectors(
    vectors: impl IntoIterator<Item = ObjectiveVector>,
    reference: &ReferenceFront,
) -> Vec<[f64; N_OBJECTIVES]> {
    if reference.ideal == reference.nadir {
        log::debug!("single-point reference front: normalizing everything to the origin");
    }
    let mut clamped = 0;
    let out = vectors
        .into_iter()
        .map(|v| reference.scale(v, &mut clamped))
        .collect();
    if clamped > 0 {
        log::debug!("{clamped} normalized coordinates fell outside [0, 1] and were clamped");
    }
    out
}

/// Exact hypervolume of the union of boxes `[p, reference]` for minimization
/// in three dimensions, by sweeping along the third objective and keeping a
/// two-dimensional staircase of the points seen so far.
pub fn hypervolume3(points: &[[f64; N_OBJECTIVES]], reference: [f64; N_OBJECTIVES]) -> f64 {
    let mut pts: Vec<[f64; 3]> = points
        .iter()
        .copied()
        .filter(|p| p.iter().zip(&reference).all(|(x, r)| x <= r))
        .collect();
    if pts.len() < points.len() {
        log::warn!(
            "{} points beyond the hypervolume reference were dropped",
            points.len() - pts.len()
        );
    }
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));

    // staircase: x ascending, y strictly descending
    let mut stairs: Vec<(f64, f64)> = Vec::new();
    let mut volume = 0.0;
    for (i, p) in pts.iter().enumerate() {
        insert_stair(&mut stairs, p[0], p[1]);
        let z_next = pts.get(i + 1).map_or(reference[2], |q| q[2]);
        if z_next > p[2] {
            volume += area2(&stairs, reference[0], reference[1]) * (z_next - p[2]);
        }
    }
    volume
}

fn insert_stair(stairs: &mut Vec<(f64, f64)>, x: f64, y: f64) {
    // a point with x' <= x has y' > y unless it dominates (x, y)
    let at = stairs.partition_point(|&(sx, _)| sx <= x);
    if at > 0 && stairs[at - 1].1 <= y {
        return;
    }
    let mut end = at;
    while end < stairs.len() && stairs[end].1 >= y {
        end += 1;
    }
    let start = if at > 0 && stairs[at - 1].0 == x { at - 1 } else { at };
    stairs.splice(start..end, std::iter::once((x, y)));
}

fn area2(stairs: &[(f64, f64)], rx: f64, ry: f64) -> f64 {
    stairs
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let x_next = stairs.get(i + 1).map_or(rx, |s| s.0);
            (x_next - x) * (ry - y)
        })
        .sum()
}

/// Ratio of the hypervolume of `front` to that of the reference front, both
/// normalized by the reference and measured against [`HV_REFERENCE`].
pub fn relative_hypervolume(front: &ParetoFront, reference: &ReferenceFront) -> Result<f64> {
    let ref_hv = hypervolume3(&normalize(&reference.front, reference), HV_REFERENCE);
    if ref_hv <= 0.0 {
        return Err(Error::DegenerateReference(
            "reference front has zero hypervolume".into(),
        ));
    }
    let hv = hypervolume3(&normalize(front, reference), HV_REFERENCE);
    Ok(hv / ref_hv)
}

/// Intermediate quantities of the spread indicator.
#[derive(Clone, Debug, PartialEq)]
pub struct SpreadTerms {
    /// Distance from each objective's extreme reference point to the
    /// closest front point.
    pub extreme_dists: [f64; N_OBJECTIVES],
    /// Distance from each front point to its nearest neighbor on the front.
    pub neighbor_dists: Vec<f64>,
    pub mean_neighbor: f64,
}

impl SpreadTerms {
    pub fn value(&self) -> f64 {
        if self.neighbor_dists.len() < 2 {
            return 1.0;
        }
        let extremes: f64 = self.extreme_dists.iter().sum();
        let deviation: f64 = self
            .neighbor_dists
            .iter()
            .map(|d| (self.mean_neighbor - d).abs())
            .sum();
        let denominator = extremes + self.neighbor_dists.len() as f64 * self.mean_neighbor;
        if denominator == 0.0 {
            return 0.0;
        }
        (extremes + deviation) / denominator
    }
}

fn euclid(a: &[f64; N_OBJECTIVES], b: &[f64; N_OBJECTIVES]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Extreme points of the reference front: for each objective, the member
/// minimizing it, ties going to the lexicographically smallest vector.
pub fn extreme_points(reference: &ReferenceFront) -> [ObjectiveVector; N_OBJECTIVES] {
    let pts = reference.front.points();
    std::array::from_fn(|o| {
        pts.iter()
            .map(|p| p.objectives)
            .min_by(|a, b| a.component(o).cmp(&b.component(o)).then(a.cmp(b)))
            .expect("reference front is never empty")
    })
}

pub fn spread_terms(front: &ParetoFront, reference: &ReferenceFront) -> Result<SpreadTerms> {
    if front.is_empty() {
        return Err(Error::Empty("front for spread"));
    }
    let pts = normalize(front, reference);
    let extremes = normalize_vectors(extreme_points(reference), reference);
    let extreme_dists = std::array::from_fn(|o| {
        pts.iter()
            .map(|p| euclid(p, &extremes[o]))
            .fold(f64::INFINITY, f64::min)
    });
    let neighbor_dists: Vec<f64> = if pts.len() < 2 {
        Vec::new()
    } else {
        (0..pts.len())
            .map(|i| {
                (0..pts.len())
                    .filter(|&j| j != i)
                    .map(|j| euclid(&pts[i], &pts[j]))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    };
    let mean_neighbor = if neighbor_dists.is_empty() {
        0.0
    } else {
        neighbor_dists.iter().sum::<f64>() / neighbor_dists.len() as f64
    };
    Ok(SpreadTerms {
        extreme_dists,
        neighbor_dists,
        mean_neighbor,
    })
}

/// Spread of `front` against the reference; 0 is a perfectly uniform front
/// covering the extremes. A single-point front scores 1.
pub fn spread(front: &ParetoFront, reference: &ReferenceFront) -> Result<f64> {
    Ok(spread_terms(front, reference)?.value())
}

#[derive(Serialize, Deserialize)]
struct FrontRecord {
    makespan: u64,
    wtct: u64,
    tardiness: u64,
    permutation: String,
}

/// Writes `front` as CSV with header `makespan,wtct,tardiness,permutation`.
pub fn write_front_csv<W: Write>(front: &ParetoFront, writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    if front.is_empty() {
        w.write_record(["makespan", "wtct", "tardiness", "permutation"])?;
    }
    for p in front.points() {
        w.serialize(FrontRecord {
            makespan: p.objectives.makespan,
            wtct: p.objectives.total_completion_time,
            tardiness: p.objectives.total_tardiness,
            permutation: p.permutation.to_string(),
        })?;
    }
    w.flush().map_err(|e| Error::io("<front csv>", e))?;
    Ok(())
}

/// Reads a front CSV. The rows are filtered into a proper front.
pub fn read_front_csv<R: Read>(reader: R) -> Result<ParetoFront> {
    let mut r = csv::Reader::from_reader(reader);
    let mut points = Vec::new();
    for rec in r.deserialize() {
        let rec: FrontRecord = rec?;
        points.push(FrontPoint {
            objectives: ObjectiveVector::new(rec.makespan, rec.wtct, rec.tardiness),
            permutation: rec.permutation.parse()?,
        });
    }
    Ok(ParetoFront::from_points(points))
}

pub fn save_front(front: &ParetoFront, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_front_csv(front, std::io::BufWriter::new(file))
}

pub fn load_front(path: &Path) -> Result<ParetoFront> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_front_csv(std::io::BufReader::new(file))
}
