//! Simulated binary crossover and polynomial mutation on `[0, 1]^n`.

use rand::Rng;

use crate::error::{Error, Result};

/// SBX on two parents.
///
/// With probability `probability` the pair is recombined; each variable is
/// then copied unchanged with probability 0.5, otherwise spread by the factor
/// `β` drawn from the distribution with index `eta`, with a random sign. The
/// two children are symmetric about the parents' midpoint before clamping.
pub fn sbx<R: Rng + ?Sized>(
    a: &[f64],
    b: &[f64],
    probability: f64,
    eta: f64,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.len() != b.len() {
        return Err(Error::contract(format!(
            "SBX parents differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let crossover = rng.gen::<f64>() < probability;
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    for i in 0..a.len() {
        let u: f64 = rng.gen();
        let mut beta = if u <= 0.5 {
            (2.0 * u).powf(1.0 / (eta + 1.0))
        } else {
            (2.0 - 2.0 * u).powf(-1.0 / (eta + 1.0))
        };
        if rng.gen::<bool>() {
            beta = -beta;
        }
        if rng.gen::<f64>() < 0.5 || !crossover {
            continue;
        }
        let mid = 0.5 * (a[i] + b[i]);
        let half = 0.5 * beta * (a[i] - b[i]);
        c1[i] = (mid + half).clamp(0.0, 1.0);
        c2[i] = (mid - half).clamp(0.0, 1.0);
    }
    Ok((c1, c2))
}

/// Bounded polynomial mutation in place; returns how many variables were
/// selected for mutation.
pub fn poly_mutation<R: Rng + ?Sized>(x: &mut [f64], probability: f64, eta: f64, rng: &mut R) -> usize {
    let mut mutated = 0;
    let power = 1.0 / (eta + 1.0);
    for v in x.iter_mut() {
        if rng.gen::<f64>() >= probability {
            continue;
        }
        mutated += 1;
        let y = v.clamp(0.0, 1.0);
        let u: f64 = rng.gen();
        let dq = if u <= 0.5 {
            let val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - y).powf(eta + 1.0);
            val.powf(power) - 1.0
        } else {
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * y.powf(eta + 1.0);
            1.0 - val.powf(power)
        };
        *v = (y + dq).clamp(0.0, 1.0);
    }
    mutated
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn identical_parents_give_identical_children() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = vec![0.3, 0.7, 0.1];
        let (a, b) = sbx(&p, &p, 1.0, 20.0, &mut rng).unwrap();
        assert_eq!(a, p);
        assert_eq!(b, p);
    }

    #[test]
    fn children_symmetric_about_midpoint() {
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b) = sbx(&[0.2], &[0.8], 1.0, 20.0, &mut rng).unwrap();
            if a[0] > 0.0 && a[0] < 1.0 && b[0] > 0.0 && b[0] < 1.0 {
                assert!((a[0] + b[0] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_mutation_probability_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut x = vec![0.0, 0.5, 1.0];
        assert_eq!(poly_mutation(&mut x, 0.0, 20.0, &mut rng), 0);
        assert_eq!(x, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn mutation_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let mut x = vec![0.0, 1.0, 1e-12, 1.0 - 1e-12];
            poly_mutation(&mut x, 1.0, 20.0, &mut rng);
            assert!(x.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(sbx(&[0.1], &[0.1, 0.2], 1.0, 20.0, &mut rng).is_err());
    }
}
