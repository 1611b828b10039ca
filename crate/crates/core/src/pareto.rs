//! Pareto-dominance machinery shared by the rest of the crate.
//!
//! All objectives are minimized. Equality inside [`dominance`] is exact
//! floating-point equality; [`dominance_with_tolerance`] exists for checks
//! that need to absorb rounding noise.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relation between two objective vectors under minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Dominance {
    ADominates,
    BDominates,
    Incomparable,
    Equal,
}

impl Dominance {
    /// The same relation seen from the other side.
    pub fn flip(self) -> Self {
        match self {
            Dominance::ADominates => Dominance::BDominates,
            Dominance::BDominates => Dominance::ADominates,
            other => other,
        }
    }
}

/// Compares `a` against `b`.
///
/// Returns a contract error when the lengths differ.
pub fn dominance(a: &[f64], b: &[f64]) -> Result<Dominance> {
    if a.len() != b.len() {
        return Err(Error::contract(format!(
            "objective vectors have different lengths ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    Ok(relation(a, b))
}

/// Like [`dominance`], but components closer than `tol` count as equal.
pub fn dominance_with_tolerance(a: &[f64], b: &[f64], tol: f64) -> Result<Dominance> {
    if a.len() != b.len() {
        return Err(Error::contract(format!(
            "objective vectors have different lengths ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let mut a_better = false;
    let mut b_better = false;
    for (&x, &y) in a.iter().zip(b) {
        if (x - y).abs() <= tol {
            continue;
        }
        if x < y {
            a_better = true;
        } else {
            b_better = true;
        }
    }
    Ok(classify(a_better, b_better))
}

/// Default tolerance used by [`dominance_with_tolerance`] callers in `verify`.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[inline]
pub(crate) fn relation(a: &[f64], b: &[f64]) -> Dominance {
    debug_assert_eq!(a.len(), b.len());
    let mut a_better = false;
    let mut b_better = false;
    for (&x, &y) in a.iter().zip(b) {
        if x < y {
            a_better = true;
        } else if y < x {
            b_better = true;
        }
        if a_better && b_better {
            return Dominance::Incomparable;
        }
    }
    classify(a_better, b_better)
}

#[inline]
fn classify(a_better: bool, b_better: bool) -> Dominance {
    match (a_better, b_better) {
        (true, false) => Dominance::ADominates,
        (false, true) => Dominance::BDominates,
        (true, true) => Dominance::Incomparable,
        (false, false) => Dominance::Equal,
    }
}

/// `true` when `a` Pareto-dominates `b`.
#[inline]
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    relation(a, b) == Dominance::ADominates
}

/// A decision vector together with its objective vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
}

/// Members evaluated on one problem instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub members: Vec<Individual>,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Result<Self> {
        if let Some(first) = members.first() {
            let (n, m) = (first.x.len(), first.f.len());
            if members.iter().any(|ind| ind.x.len() != n || ind.f.len() != m) {
                return Err(Error::contract(
                    "population members disagree on decision or objective dimension",
                ));
            }
        }
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn objectives(&self) -> Vec<&[f64]> {
        self.members.iter().map(|ind| ind.f.as_slice()).collect()
    }

    /// Objective vectors of the members in the first nondominated front.
    pub fn nondominated_objectives(&self) -> Vec<Vec<f64>> {
        let objs = self.objectives();
        nondominated_indices(&objs)
            .into_iter()
            .map(|i| self.members[i].f.clone())
            .collect()
    }
}

/// Fast nondominated sorting.
///
/// Returns the fronts as ascending index lists; front 0 is the nondominated
/// set. An empty input yields no fronts.
pub fn nondominated_sort<P: AsRef<[f64]>>(points: &[P]) -> Vec<Vec<usize>> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let mut dominated_by_count = vec![0usize; n];
    let mut dominated_sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            match relation(points[i].as_ref(), points[j].as_ref()) {
                Dominance::ADominates => {
                    dominated_sets[i].push(j);
                    dominated_by_count[j] += 1;
                }
                Dominance::BDominates => {
                    dominated_sets[j].push(i);
                    dominated_by_count[i] += 1;
                }
                _ => {}
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_sets[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Indices of the nondominated points, ascending.
///
/// Points are visited in lexicographic order so that every dominator is seen
/// before the points it dominates; each candidate is then only compared with
/// the archive of points already accepted. Exact duplicates are all kept.
pub fn nondominated_indices<P: AsRef<[f64]>>(points: &[P]) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lexicographic(points[a].as_ref(), points[b].as_ref()).then(a.cmp(&b)));

    let mut archive: Vec<usize> = Vec::new();
    if points[0].as_ref().len() == 2 {
        // Sweep: in lexicographic order a point survives iff its second
        // objective beats everything accepted so far (or ties the last one
        // with an equal first objective).
        let mut best_second = f64::INFINITY;
        let mut last: Option<usize> = None;
        for &i in &order {
            let p = points[i].as_ref();
            let keep = match last {
                Some(l) if points[l].as_ref() == p => true,
                _ => p[1] < best_second,
            };
            if keep {
                best_second = best_second.min(p[1]);
                archive.push(i);
                last = Some(i);
            }
        }
    } else {
        for &i in &order {
            let p = points[i].as_ref();
            if !archive.iter().any(|&a| dominates(points[a].as_ref(), p)) {
                archive.push(i);
            }
        }
    }
    archive.sort_unstable();
    archive
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Crowding distance of every point of a front.
///
/// Per objective, the front is sorted (ties by index) and the two boundary
/// points receive `f64::INFINITY`; interior points accumulate the gap between
/// their neighbours divided by the objective's range. Objectives with zero
/// range contribute nothing. Fronts of one or two points are all boundary.
pub fn crowding_distance<P: AsRef<[f64]>>(front: &[P]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].as_ref().len();
    let mut distance = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..m {
        order.sort_by(|&a, &b| {
            front[a].as_ref()[obj]
                .total_cmp(&front[b].as_ref()[obj])
                .then(a.cmp(&b))
        });
        let lo = front[order[0]].as_ref()[obj];
        let hi = front[order[n - 1]].as_ref()[obj];
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        for w in 1..n - 1 {
            let i = order[w];
            if distance[i].is_infinite() {
                continue;
            }
            let gap = front[order[w + 1]].as_ref()[obj] - front[order[w - 1]].as_ref()[obj];
            distance[i] += gap / range;
        }
    }
    distance
}

/// Orders `indices` by descending crowding distance, ties by lower index.
pub fn sort_by_crowding(indices: &mut [usize], crowding: &[f64]) {
    indices.sort_by(|&a, &b| crowding[b].total_cmp(&crowding[a]).then(a.cmp(&b)));
}
