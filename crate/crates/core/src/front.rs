//! Exact reference fronts and Pareto-front membership.
//!
//! Fronts are sampled in the parameters of the essential manifold with the
//! distance variables at their optimum, lifted through each problem's own
//! transforming layer, filtered for dominance, deduplicated and reduced to
//! the requested size by farthest-point selection.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::Path;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::nondominated_indices;
use crate::problems::shapes::{sphere_chain, threshold_merge};
use crate::problems::{self, ProblemInstance, ProblemKind, DPF5_BRANCH};

/// Default membership tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

const SAMPLING_SEED: u64 = 0x5eed_f00d;
const OVERSAMPLING: usize = 3;
const DPF2_OVERSAMPLING: usize = 20;

/// Points sampled from the true Pareto front of one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFront {
    pub instance: ProblemInstance,
    pub points: Vec<Vec<f64>>,
    /// DPF5/DPF5A only: how many points come from each segment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<SegmentCounts>,
}

/// Split of a DPF5-type front between its two segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentCounts {
    /// Points from the `(m-1)`-dimensional full-sphere segment (`x_1 < 1/3`).
    pub full_sphere: usize,
    /// Points from the `(d-1)`-dimensional degenerate segment.
    pub degenerate: usize,
}

impl ReferenceFront {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Writes the points as CSV with header `f1,...,fm`.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_points_csv(&self.points, self.instance.m(), path)
    }
}

/// Samples exactly `count` points from the true Pareto front of `inst`.
pub fn sample_front(inst: &ProblemInstance, count: usize) -> Result<ReferenceFront> {
    if count == 0 {
        return Err(Error::contract("front size must be at least 1"));
    }
    let mut factor = match inst.kind() {
        ProblemKind::Dpf2 => DPF2_OVERSAMPLING,
        _ => OVERSAMPLING,
    };
    loop {
        let (points, branches) = candidates(inst, factor * count)?;
        let (points, branches) = filter_candidates(inst, points, branches);
        if points.len() >= count {
            let chosen = farthest_point_subset(&points, count);
            let segments = branches.map(|b| {
                let full_sphere = chosen.iter().filter(|&&i| b[i]).count();
                SegmentCounts {
                    full_sphere,
                    degenerate: count - full_sphere,
                }
            });
            let points = chosen.into_iter().map(|i| points[i].clone()).collect();
            return Ok(ReferenceFront {
                instance: inst.clone(),
                points,
                segments,
            });
        }
        if factor > 1 << 12 {
            return Err(Error::config(format!(
                "could only place {} distinct front points for {}",
                points.len(),
                inst.label()
            )));
        }
        log::debug!(
            "{}: {} of {} front points after filtering, oversampling more",
            inst.label(),
            points.len(),
            count
        );
        factor *= 2;
    }
}

/// `size` values in `[0, 1]^dim`: an even grid when `dim == 1`, seeded
/// uniform draws otherwise.
fn unit_samples(size: usize, dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    if dim == 0 {
        return vec![Vec::new(); size.min(1)];
    }
    if dim == 1 {
        let denom = (size.max(2) - 1) as f64;
        return (0..size.max(2)).map(|i| vec![i as f64 / denom]).collect();
    }
    (0..size)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

/// Uniform points on the simplex `{w ≥ 0, Σw = 1}` in `dim` coordinates.
fn simplex_samples(size: usize, dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    if dim == 2 {
        return unit_samples(size, 1, rng)
            .into_iter()
            .map(|t| vec![t[0], 1.0 - t[0]])
            .collect();
    }
    (0..size)
        .map(|_| {
            let e: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = e.iter().sum();
            e.into_iter().map(|v| v / total).collect()
        })
        .collect()
}

type Candidates = (Vec<Vec<f64>>, Option<Vec<bool>>);

fn candidates(inst: &ProblemInstance, size: usize) -> Result<Candidates> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
    let d = inst.d();
    let kind = inst.kind();
    let points = match kind {
        ProblemKind::Dpf1 => simplex_samples(size, d, &mut rng)
            .into_iter()
            .map(|w| {
                let gamma: Vec<f64> = w.into_iter().map(|v| 0.5 * v).collect();
                inst.lift(&gamma)
            })
            .collect::<Result<_>>()?,
        ProblemKind::Dpf2 => unit_samples(size, d - 1, &mut rng)
            .into_iter()
            .map(|xl| inst.objectives(&inst.optimal_decision(&xl)?))
            .collect::<Result<_>>()?,
        ProblemKind::Dpf3 | ProblemKind::Dpf4 => unit_samples(size, d - 1, &mut rng)
            .into_iter()
            .map(|t| {
                let angles: Vec<f64> = t.iter().map(|v| FRAC_PI_2 * v).collect();
                let gamma: Vec<f64> = sphere_chain(&angles).into_iter().map(|p| 1.0 - p).collect();
                inst.lift(&gamma)
            })
            .collect::<Result<_>>()?,
        ProblemKind::Dpf1a | ProblemKind::Dpf2a | ProblemKind::Dpf3a | ProblemKind::Dpf4a => {
            unit_samples(size, d - 1, &mut rng)
                .into_iter()
                .map(|t| {
                    let angles: Vec<f64> = t.iter().map(|v| FRAC_PI_2 * v).collect();
                    inst.lift(&problems::dtlz5_essential(&angles, 0.0))
                })
                .collect::<Result<_>>()?
        }
        ProblemKind::Dpf5 | ProblemKind::Dpf5a => return dpf5_candidates(inst, size, &mut rng),
        ProblemKind::Dtlz5Im => unit_samples(size, d - 1, &mut rng)
            .into_iter()
            .map(|t| {
                let mut x = vec![0.5; inst.n()];
                x[..d - 1].copy_from_slice(&t);
                inst.objectives(&x)
            })
            .collect::<Result<_>>()?,
        ProblemKind::DemoImplicit => unit_samples(size, 1, &mut rng)
            .into_iter()
            .map(|t| {
                let mut x = vec![0.5; inst.n()];
                x[0] = t[0];
                inst.objectives(&x)
            })
            .collect::<Result<_>>()?,
        ProblemKind::DemoPartial => (0..size)
            .map(|_| {
                let mut x = vec![0.5; inst.n()];
                x[0] = rng.gen();
                if x[0] > 0.5 {
                    x[1] = rng.gen();
                }
                inst.objectives(&x)
            })
            .collect::<Result<_>>()?,
    };
    Ok((points, None))
}

/// Half the candidates from each DPF5 segment, with `g = 0`.
fn dpf5_candidates(inst: &ProblemInstance, size: usize, rng: &mut ChaCha8Rng) -> Result<Candidates> {
    let m = inst.m();
    let d = inst.d();
    let half = size.div_ceil(2);
    let mut points = Vec::with_capacity(2 * half);
    let mut branches = Vec::with_capacity(2 * half);
    // Full-sphere segment: x_1 in [0, 1/3), the other m-2 angles free.
    for t in unit_samples(half, m - 1, rng) {
        let mut xl = t;
        xl[0] *= DPF5_BRANCH;
        if xl[0] >= DPF5_BRANCH {
            continue;
        }
        points.push(inst.objectives(&inst.optimal_decision(&xl)?)?);
        branches.push(true);
    }
    // Degenerate segment: x_1 in [1/3, 1], only x_1..x_{d-1} matter.
    for t in unit_samples(half, d - 1, rng) {
        let mut xl = vec![0.5; m - 1];
        xl[0] = DPF5_BRANCH + (1.0 - DPF5_BRANCH) * t[0];
        xl[1..d - 1].copy_from_slice(&t[1..]);
        points.push(inst.objectives(&inst.optimal_decision(&xl)?)?);
        branches.push(false);
    }
    Ok((points, Some(branches)))
}

/// Nondominated filter followed by exact deduplication.
fn filter_candidates(
    inst: &ProblemInstance,
    points: Vec<Vec<f64>>,
    branches: Option<Vec<bool>>,
) -> (Vec<Vec<f64>>, Option<Vec<bool>>) {
    let keep: Vec<usize> = if inst.kind() == ProblemKind::Dpf2 {
        // The exact front of DPF2 is the set of strict running maxima of its
        // wave term in each position variable, which is also the
        // nondominated set of any sample drawn from it.
        (0..points.len())
            .filter(|&i| {
                points[i][..inst.d() - 1]
                    .iter()
                    .all(|&f| dpf2_records().contains(f / 2.0, 0.0))
            })
            .collect()
    } else {
        nondominated_indices(&points)
    };
    let mut seen = std::collections::HashSet::new();
    let keep: Vec<usize> = keep
        .into_iter()
        .filter(|&i| seen.insert(points[i].iter().map(|v| v.to_bits()).collect::<Vec<_>>()))
        .collect();
    let branches = branches.map(|b| keep.iter().map(|&i| b[i]).collect());
    let points = keep.into_iter().map(|i| points[i].clone()).collect();
    (points, branches)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Greedy max-min selection of `count` indices, seeded by the minimiser and
/// maximiser of every objective (ties by lower index).
fn farthest_point_subset(points: &[Vec<f64>], count: usize) -> Vec<usize> {
    let n = points.len();
    if count >= n {
        return (0..n).collect();
    }
    let m = points[0].len();
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    for j in 0..m {
        let lo = (0..n).min_by(|&a, &b| points[a][j].total_cmp(&points[b][j]).then(a.cmp(&b)));
        let hi = (0..n).max_by(|&a, &b| points[a][j].total_cmp(&points[b][j]).then(b.cmp(&a)));
        for idx in [lo, hi].into_iter().flatten() {
            if chosen.len() < count && !chosen.contains(&idx) {
                chosen.push(idx);
            }
        }
    }
    let flat: Vec<f64> = points.iter().flatten().copied().collect();
    let mut nearest = vec![f64::INFINITY; n];
    for &c in &chosen {
        update_nearest(&flat, m, &mut nearest, c);
    }
    while chosen.len() < count {
        let next = update_nearest(&flat, m, &mut nearest, *chosen.last().unwrap());
        chosen.push(next);
    }
    chosen
}

const CHUNK: usize = 4096;

/// Lowers each nearest-distance slot by the distance to point `chosen` and
/// returns the index with the largest remaining slot (ties by lower index).
fn update_nearest(flat: &[f64], m: usize, nearest: &mut [f64], chosen: usize) -> usize {
    let c = &flat[chosen * m..(chosen + 1) * m];
    nearest[chosen] = f64::NEG_INFINITY;
    let best = |a: (f64, usize), b: (f64, usize)| {
        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    };
    nearest
        .par_chunks_mut(CHUNK)
        .zip(flat.par_chunks(CHUNK * m))
        .enumerate()
        .map(|(k, (slots, block))| {
            let mut local = (f64::NEG_INFINITY, usize::MAX);
            for (offset, (slot, p)) in slots.iter_mut().zip(block.chunks_exact(m)).enumerate() {
                let dist = squared_distance(p, c);
                if dist < *slot {
                    *slot = dist;
                }
                if *slot > local.0 {
                    local = (*slot, k * CHUNK + offset);
                }
            }
            local
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), best)
        .1
}

/// Strict running-maximum intervals of `a(x) = x (1 + sin 6πx)` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct RecordSet {
    intervals: Vec<(f64, f64)>,
}

fn wave(x: f64) -> f64 {
    x * (1.0 + (6.0 * PI * x).sin())
}

fn wave_slope(x: f64) -> f64 {
    1.0 + (6.0 * PI * x).sin() + 6.0 * PI * x * (6.0 * PI * x).cos()
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl RecordSet {
    fn compute() -> Self {
        // Critical points of `a` from sign changes of its slope on a fine grid.
        const GRID: usize = 1 << 14;
        let mut peaks = Vec::new();
        let mut troughs = vec![0.0];
        let mut prev = 0.0;
        for i in 1..=GRID {
            let x = i as f64 / GRID as f64;
            let (s0, s1) = (wave_slope(prev), wave_slope(x));
            if s0 > 0.0 && s1 <= 0.0 {
                peaks.push(bisect(prev, x, wave_slope));
            } else if s0 < 0.0 && s1 >= 0.0 {
                troughs.push(bisect(prev, x, wave_slope));
            }
            prev = x;
        }
        if wave_slope(1.0) > 0.0 {
            peaks.push(1.0);
        }
        let mut intervals = Vec::new();
        let mut best = f64::NEG_INFINITY;
        for &p in &peaks {
            let value = wave(p);
            if value <= best {
                continue;
            }
            let start = if best == f64::NEG_INFINITY {
                0.0
            } else {
                let trough = troughs.iter().copied().filter(|&t| t < p).fold(0.0, f64::max);
                bisect(trough, p, |x| wave(x) - best)
            };
            intervals.push((start, p));
            best = value;
        }
        Self { intervals }
    }

    /// Closed intervals `[start, peak]` making up the set.
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// `true` when `x` lies within `tol` of the set.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(lo, hi)| x >= lo - tol && x <= hi + tol)
    }
}

/// Position values of DPF2 that lie on its Pareto front.
pub fn dpf2_records() -> &'static RecordSet {
    static RECORDS: OnceLock<RecordSet> = OnceLock::new();
    RECORDS.get_or_init(RecordSet::compute)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn lifted_matches(inst: &ProblemInstance, gamma: &[f64], f: &[f64], tol: f64) -> bool {
    match inst.lift(gamma) {
        Ok(lifted) => lifted.iter().zip(f).all(|(a, b)| close(*a, *b, tol)),
        Err(_) => false,
    }
}

/// `‖(γ_1 / sin(π/4), γ_2, …, γ_d)‖² = 1` with every component nonnegative.
fn on_leading_scaled_sphere(gamma: &[f64], tol: f64) -> bool {
    let lead = gamma[0] / FRAC_PI_4.sin();
    let norm = lead * lead + gamma[1..].iter().map(|v| v * v).sum::<f64>();
    gamma.iter().all(|&v| v >= -tol) && close(norm, 1.0, tol)
}

/// `true` iff `f` lies on the true Pareto front of `inst` within `tol`.
pub fn pf_membership(inst: &ProblemInstance, f: &[f64], tol: f64) -> bool {
    if f.len() != inst.m() || f.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let (m, d) = (inst.m(), inst.d());
    match inst.kind() {
        ProblemKind::Dpf1 => {
            let gamma = &f[..d];
            gamma.iter().all(|&v| v >= -tol)
                && close(gamma.iter().sum(), 0.5, tol)
                && lifted_matches(inst, gamma, f, tol)
        }
        ProblemKind::Dpf1a | ProblemKind::Dpf2a => {
            let gamma = &f[..d];
            on_leading_scaled_sphere(gamma, tol) && lifted_matches(inst, gamma, f, tol)
        }
        ProblemKind::Dpf2 => {
            let gamma = &f[..d];
            let records = dpf2_records();
            let positions: Vec<f64> = gamma[..d - 1].iter().map(|v| v / 2.0).collect();
            if positions.iter().any(|&x| !(-tol..=1.0 + tol).contains(&x) || !records.contains(x, tol)) {
                return false;
            }
            let last = 2.0 * (d as f64 - positions.iter().map(|&x| wave(x.clamp(0.0, 1.0))).sum::<f64>());
            close(gamma[d - 1], last, tol) && lifted_matches(inst, gamma, f, tol)
        }
        ProblemKind::Dpf3 | ProblemKind::Dpf4 | ProblemKind::Dpf3a | ProblemKind::Dpf4a => {
            let phi = inst.transform();
            let raw: Vec<f64> = f.iter().map(|&v| phi.invert(v)).collect();
            let mut gamma = raw[..d - 1].to_vec();
            gamma.push(threshold_merge(&raw[d - 1..], inst.thresholds()));
            let on_shape = if matches!(inst.kind(), ProblemKind::Dpf3 | ProblemKind::Dpf4) {
                let norm: f64 = gamma.iter().map(|g| (1.0 - g) * (1.0 - g)).sum();
                gamma.iter().all(|&g| (-tol..=1.0 + tol).contains(&g)) && close(norm, 1.0, tol)
            } else {
                on_leading_scaled_sphere(&gamma, tol)
            };
            on_shape && lifted_matches(inst, &gamma, f, tol)
        }
        ProblemKind::Dpf5 | ProblemKind::Dpf5a => {
            if f.iter().any(|&v| v < -tol) {
                return false;
            }
            let shared = m - d + 1;
            let last = f[m - 1];
            let sphere = close(f.iter().map(|v| v * v).sum(), 1.0, tol);
            let full_segment = sphere && last < 0.5 + tol;
            let tied = f[..shared].iter().all(|&v| close(v, f[0], tol));
            let degenerate = tied && last >= 0.5 - tol && {
                let mut gamma = vec![f[0]];
                gamma.extend_from_slice(&f[shared..]);
                if inst.kind() == ProblemKind::Dpf5 {
                    let lead = f[0] * (shared as f64).sqrt();
                    let norm = lead * lead + gamma[1..].iter().map(|v| v * v).sum::<f64>();
                    close(norm, 1.0, tol)
                } else {
                    on_leading_scaled_sphere(&gamma, tol)
                }
            };
            full_segment || degenerate
        }
        ProblemKind::Dtlz5Im => {
            let free = m - d;
            f.iter().all(|&v| v >= -tol)
                && close(f.iter().map(|v| v * v).sum(), 1.0, tol)
                && (free == 0
                    || (close(f[0], f[1], tol)
                        && (1..free).all(|i| close(f[i + 1], std::f64::consts::SQRT_2 * f[i], tol))))
        }
        ProblemKind::DemoImplicit => {
            let c = FRAC_PI_4.cos();
            let (f1, f2, f3) = (f[0], f[1], f[2]);
            let left = f1 <= c + tol && close(f3, c, tol) && close(f1 * f1 + f2 * f2, 1.0, tol);
            let right = f1 >= c - tol && close(f2, c, tol) && close(f1 * f1 + f3 * f3, 1.0, tol);
            f.iter().all(|&v| v >= -tol) && (left || right)
        }
        ProblemKind::DemoPartial => demo_partial_membership(f, tol),
    }
}

fn demo_partial_membership(f: &[f64], tol: f64) -> bool {
    if f.iter().any(|&v| v < -tol) {
        return false;
    }
    let scale: f64 = f.iter().sum();
    let x1 = 1.0 - f[2] / scale;
    let g = scale - 1.0;
    if x1 <= 0.5 + tol && close(g, 0.0, tol) && close(f[0], f[1], tol) && close(f[0], x1 / 2.0, tol) {
        return true;
    }
    if x1 < 0.5 - tol || f[0] + f[1] <= 0.0 {
        return false;
    }
    let x2 = f[1] / (f[0] + f[1]);
    close(g, (x2 - 0.5) * (x2 - 0.5), tol)
}

/// Writes objective vectors as CSV with header `f1,...,fm` and shortest
/// round-trip decimal formatting.
pub fn write_points_csv(points: &[Vec<f64>], m: usize, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let header: Vec<String> = (1..=m).map(|j| format!("f{j}")).collect();
    writer.write_record(&header).map_err(|e| csv_error(path, e))?;
    for p in points {
        if p.len() != m {
            return Err(Error::contract(format!(
                "point has {} objectives, expected {m}",
                p.len()
            )));
        }
        writer
            .write_record(p.iter().map(|v| format!("{v:?}")))
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Reads objective vectors written by [`write_points_csv`].
pub fn read_points_csv(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let m = reader.headers().map_err(|e| csv_error(path, e))?.len();
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let point = record
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Format {
                path: path.to_path_buf(),
                message: format!("row {}: {e}", line + 1),
            })?;
        if point.len() != m {
            return Err(Error::Format {
                path: path.to_path_buf(),
                message: format!("row {} has {} fields, header has {m}", line + 1, point.len()),
            });
        }
        points.push(point);
    }
    Ok(points)
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    if err.is_io_error() {
        match err.into_kind() {
            csv::ErrorKind::Io(e) => Error::io(path, e),
            other => Error::Format {
                path: path.to_path_buf(),
                message: format!("{other:?}"),
            },
        }
    } else {
        Error::Format {
            path: path.to_path_buf(),
            message: err.to_string(),
        }
    }
}
