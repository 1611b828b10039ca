//! Logistic-map generator for per-instance problem constants.
//!
//! Every problem instance draws its weight vectors or thresholds from a fresh
//! stream started at `c0 = 0.1` with `alpha = 3.8`, so an instance is fully
//! determined by `(kind, m, d)` and never by construction order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 3.8;
pub const DEFAULT_SEED: f64 = 0.1;

/// State of the logistic map `c_i = alpha * c_{i-1} * (1 - c_{i-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaosStream {
    pub alpha: f64,
    pub current: f64,
    pub count: u64,
}

impl Default for ChaosStream {
    fn default() -> Self {
        Self::new(DEFAULT_ALPHA, DEFAULT_SEED)
    }
}

impl ChaosStream {
    pub fn new(alpha: f64, c0: f64) -> Self {
        Self {
            alpha,
            current: c0,
            count: 0,
        }
    }

    /// One step of the map. Returns the emitted value and the advanced state.
    pub fn step(self) -> (f64, ChaosStream) {
        let value = self.alpha * self.current * (1.0 - self.current);
        (
            value,
            ChaosStream {
                alpha: self.alpha,
                current: value,
                count: self.count + 1,
            },
        )
    }

    /// Emits the next value, advancing in place.
    pub fn next_value(&mut self) -> f64 {
        let (value, next) = self.step();
        *self = next;
        value
    }
}

impl Iterator for ChaosStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_value())
    }
}

/// Per-instance constants: weight vectors `u_j` (DPF1/DPF2 families) or
/// ascending thresholds `eta_j` (DPF3/DPF4 families).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_vectors: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<f64>>,
}

impl ProblemParams {
    /// Checks the sign and ordering invariants of the generated constants.
    pub fn validate(&self) -> Result<()> {
        if let Some(u) = &self.weight_vectors {
            if u.iter().flatten().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::contract("weight vector entries must be finite and nonnegative"));
            }
        }
        if let Some(eta) = &self.thresholds {
            check_ascending(eta)?;
        }
        Ok(())
    }
}

fn check_degenerate(m: usize, d: usize) -> Result<()> {
    if d < 2 || m <= d {
        return Err(Error::contract(format!(
            "parameters need m > d >= 2 (got m = {m}, d = {d})"
        )));
    }
    Ok(())
}

pub(crate) fn check_ascending(eta: &[f64]) -> Result<()> {
    if eta.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::contract(format!(
            "thresholds must be strictly ascending: {eta:?}"
        )));
    }
    if eta.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::contract("thresholds must lie in (0, 1)"));
    }
    Ok(())
}

/// Fills `u_1, ..., u_{m-d}` (each of length `d`) from a fresh stream, `u_1`
/// first.
pub fn derive_weight_vectors(m: usize, d: usize) -> Result<ProblemParams> {
    check_degenerate(m, d)?;
    let mut stream = ChaosStream::default();
    let weights = (0..m - d)
        .map(|_| (0..d).map(|_| stream.next_value()).collect())
        .collect();
    Ok(ProblemParams {
        weight_vectors: Some(weights),
        thresholds: None,
    })
}

/// Draws `m - d` values from a fresh stream and sorts them ascending.
pub fn derive_thresholds(m: usize, d: usize) -> Result<ProblemParams> {
    check_degenerate(m, d)?;
    let mut eta: Vec<f64> = ChaosStream::default().take(m - d).collect();
    eta.sort_by(f64::total_cmp);
    check_ascending(&eta)?;
    Ok(ProblemParams {
        weight_vectors: None,
        thresholds: Some(eta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values_match_hand_evaluation() {
        let s = ChaosStream::default();
        let (c1, s) = s.step();
        assert_eq!(c1, 0.342);
        assert_eq!(s.count, 1);
        let (c2, s) = s.step();
        assert!((c2 - 0.8551368).abs() <= 1e-15);
        let (c3, _) = s.step();
        let expected = 3.8 * 0.8551368 * (1.0 - 0.8551368);
        assert!((c3 - expected).abs() <= 1e-15 * expected);
    }

    #[test]
    fn output_bounded_by_alpha_over_four() {
        let mut s = ChaosStream::new(3.8, 0.5);
        assert_eq!(s.next_value(), 0.95);
        for c in [1e-9, 0.25, 0.5, 0.75, 1.0 - 1e-9] {
            let (v, _) = ChaosStream::new(3.8, c).step();
            assert!(v > 0.0 && v <= 0.95);
        }
    }

    #[test]
    fn weight_vectors_consume_stream_in_order() {
        let p = derive_weight_vectors(3, 2).unwrap();
        let u = p.weight_vectors.unwrap();
        assert_eq!(u.len(), 1);
        assert_eq!(u[0][0], 0.342);

        let p4 = derive_weight_vectors(4, 2).unwrap().weight_vectors.unwrap();
        let stream: Vec<f64> = ChaosStream::default().take(4).collect();
        assert_eq!(p4, vec![vec![stream[0], stream[1]], vec![stream[2], stream[3]]]);
        assert!(p4.iter().flatten().all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn thresholds_sorted() {
        assert_eq!(derive_thresholds(3, 2).unwrap().thresholds.unwrap(), vec![0.342]);
        let two = derive_thresholds(4, 2).unwrap().thresholds.unwrap();
        assert_eq!(two[0], 0.342);
        assert!(two[0] < two[1]);
        let three = derive_thresholds(5, 2).unwrap().thresholds.unwrap();
        let mut raw: Vec<f64> = ChaosStream::default().take(3).collect();
        raw.sort_by(f64::total_cmp);
        assert_eq!(three, raw);
        assert!(three.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_non_degenerate_shapes() {
        assert!(derive_weight_vectors(2, 2).is_err());
        assert!(derive_thresholds(3, 3).is_err());
        assert!(derive_thresholds(5, 1).is_err());
    }

    #[test]
    fn thresholds_ascending_up_to_twenty() {
        for d in 2..6 {
            for extra in 1..=20 {
                let eta = derive_thresholds(d + extra, d).unwrap().thresholds.unwrap();
                assert_eq!(eta.len(), extra);
            }
        }
    }

    #[test]
    fn validate_flags_negative_weights() {
        let p = ProblemParams {
            weight_vectors: Some(vec![vec![-0.1, 0.5]]),
            thresholds: None,
        };
        assert!(p.validate().is_err());
    }
}
