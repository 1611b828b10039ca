//! Simplex-lattice weight vectors and the PBI scalarization.

use crate::error::{Error, Result};

/// Shrinkage of the inner layer of a two-layer lattice towards the centroid.
pub const INNER_LAYER_SHRINKAGE: f64 = 0.5;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn layer_size(m: usize, h: usize) -> usize {
    binomial(h + m - 1, m - 1)
}

/// All `m`-component vectors with entries in `{0, 1/h, …, 1}` summing to one,
/// in lexicographic order of the integer compositions.
pub fn lattice_layer(m: usize, h: usize) -> Result<Vec<Vec<f64>>> {
    if m < 2 || h == 0 {
        return Err(Error::contract(format!(
            "lattice needs m >= 2 and H >= 1 (got m = {m}, H = {h})"
        )));
    }
    let mut out = Vec::with_capacity(layer_size(m, h));
    let mut current = vec![0usize; m];
    compositions(&mut current, 0, h, &mut |c| {
        out.push(c.iter().map(|&v| v as f64 / h as f64).collect())
    });
    Ok(out)
}

fn compositions(current: &mut [usize], pos: usize, left: usize, emit: &mut dyn FnMut(&[usize])) {
    let m = current.len();
    if pos == m - 1 {
        current[pos] = left;
        emit(current);
        return;
    }
    for v in 0..=left {
        current[pos] = v;
        compositions(current, pos + 1, left - v, emit);
    }
}

/// Weight vectors for `m` objectives and a target population size.
///
/// A single layer is used when some `H` gives exactly `target` vectors;
/// otherwise a boundary layer plus an inner layer shrunk by
/// [`INNER_LAYER_SHRINKAGE`] when two layers add up to `target`; otherwise the
/// largest single layer not exceeding `target`.
pub fn simplex_lattice(m: usize, target: usize) -> Result<Vec<Vec<f64>>> {
    if m < 2 {
        return Err(Error::contract("lattice needs m >= 2"));
    }
    if target < m {
        return Err(Error::config(format!(
            "a lattice for {m} objectives needs at least {m} vectors"
        )));
    }
    let max_h = (1..).take_while(|&h| layer_size(m, h) <= target).last().unwrap_or(1);
    if layer_size(m, max_h) == target {
        return lattice_layer(m, max_h);
    }
    for outer in (1..=max_h).rev() {
        let rest = target - layer_size(m, outer);
        if let Some(inner) = (1..=outer).find(|&h| layer_size(m, h) == rest) {
            let mut out = lattice_layer(m, outer)?;
            let centre = (1.0 - INNER_LAYER_SHRINKAGE) / m as f64;
            out.extend(lattice_layer(m, inner)?.into_iter().map(|w| {
                w.into_iter()
                    .map(|v| centre + INNER_LAYER_SHRINKAGE * v)
                    .collect::<Vec<f64>>()
            }));
            return Ok(out);
        }
    }
    log::warn!(
        "no lattice of {target} vectors for m = {m}; using {}",
        layer_size(m, max_h)
    );
    lattice_layer(m, max_h)
}

/// Penalty-based boundary intersection: `d1 + penalty · d2`, where `d1` is
/// the length of the projection of `f - z` on `w` and `d2` the distance from
/// `f - z` to the line spanned by `w`.
pub fn pbi(f: &[f64], w: &[f64], z: &[f64], penalty: f64) -> f64 {
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    debug_assert!(norm > 0.0, "PBI weight vector must be nonzero");
    let d1 = f.iter().zip(z).zip(w).map(|((fi, zi), wi)| (fi - zi) * wi).sum::<f64>() / norm;
    let d2 = f
        .iter()
        .zip(z)
        .zip(w)
        .map(|((fi, zi), wi)| {
            let r = fi - zi - d1 * wi / norm;
            r * r
        })
        .sum::<f64>()
        .sqrt();
    d1 + penalty * d2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_sizes() {
        assert_eq!(simplex_lattice(3, 105).unwrap().len(), 105);
        assert_eq!(simplex_lattice(6, 132).unwrap().len(), 132);
        assert_eq!(simplex_lattice(10, 275).unwrap().len(), 275);
        assert_eq!(lattice_layer(3, 13).unwrap().len(), 105);
    }

    #[test]
    fn two_objective_enumeration() {
        let w = lattice_layer(2, 4).unwrap();
        assert_eq!(
            w,
            vec![
                vec![0.0, 1.0],
                vec![0.25, 0.75],
                vec![0.5, 0.5],
                vec![0.75, 0.25],
                vec![1.0, 0.0]
            ]
        );
    }

    #[test]
    fn fallback_uses_largest_layer_below_target() {
        assert_eq!(simplex_lattice(3, 4).unwrap().len(), 3);
        // 55 + 45: outer H = 9, inner H = 8.
        assert_eq!(simplex_lattice(3, 100).unwrap().len(), 100);
    }

    #[test]
    fn pbi_examples() {
        assert_eq!(pbi(&[0.3, 0.4], &[1.0, 2.0], &[0.3, 0.4], 5.0), 0.0);
        assert!((pbi(&[1.0, 1.0], &[1.0, 0.0], &[0.0, 0.0], 5.0) - 6.0).abs() < 1e-15);
        let v = pbi(&[3.0, 4.0], &[3.0, 4.0], &[0.0, 0.0], 5.0);
        assert!((v - 5.0).abs() < 1e-12);
    }
}
