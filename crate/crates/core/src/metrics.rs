//! Inverted generational distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// IGD value together with the sizes it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IgdResult {
    pub value: f64,
    pub reference_size: usize,
    pub solution_size: usize,
}

/// Mean Euclidean distance from each reference point to its nearest
/// solution, in raw objective space.
///
/// The nearest neighbour is found by comparing squared distances with an
/// early exit and taking one square root per reference point. Per-point
/// distances are summed sequentially in reference order, so the result is
/// bit-identical to [`igd_bruteforce`].
pub fn igd<R, S>(reference: &[R], solutions: &[S]) -> Result<IgdResult>
where
    R: AsRef<[f64]> + Sync,
    S: AsRef<[f64]> + Sync,
{
    let m = check_sets(reference, solutions)?;
    let nearest: Vec<f64> = reference
        .par_iter()
        .map(|r| {
            let r = r.as_ref();
            let mut best = f64::INFINITY;
            for s in solutions {
                let s = s.as_ref();
                let mut acc = 0.0;
                for j in 0..m {
                    let diff = r[j] - s[j];
                    acc += diff * diff;
                    if acc >= best {
                        break;
                    }
                }
                if acc < best {
                    best = acc;
                }
            }
            best.sqrt()
        })
        .collect();
    Ok(IgdResult {
        value: nearest.iter().sum::<f64>() / reference.len() as f64,
        reference_size: reference.len(),
        solution_size: solutions.len(),
    })
}

/// Plain double loop over every (reference, solution) pair.
pub fn igd_bruteforce<R, S>(reference: &[R], solutions: &[S]) -> Result<f64>
where
    R: AsRef<[f64]>,
    S: AsRef<[f64]>,
{
    check_sets(reference, solutions)?;
    let mut total = 0.0;
    for r in reference {
        let best = solutions
            .iter()
            .map(|s| {
                r.as_ref()
                    .iter()
                    .zip(s.as_ref())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        total += best.sqrt();
    }
    Ok(total / reference.len() as f64)
}

fn check_sets<R: AsRef<[f64]>, S: AsRef<[f64]>>(reference: &[R], solutions: &[S]) -> Result<usize> {
    if reference.is_empty() || solutions.is_empty() {
        return Err(Error::contract("IGD needs non-empty reference and solution sets"));
    }
    let m = reference[0].as_ref().len();
    if reference.iter().any(|r| r.as_ref().len() != m) || solutions.iter().any(|s| s.as_ref().len() != m) {
        return Err(Error::contract("IGD sets disagree on the number of objectives"));
    }
    Ok(m)
}
