//! Shape (`p`) and landscape (`g`) building blocks shared by the problems.

use std::f64::consts::PI;

/// Spherical chain over `angles` (length `q`), returning `q + 1` components:
/// `p_1 = cos θ_1 ⋯ cos θ_q`, `p_i = cos θ_1 ⋯ cos θ_{q+1-i} · sin θ_{q+2-i}`.
/// The components lie on the unit sphere.
pub fn sphere_chain(angles: &[f64]) -> Vec<f64> {
    let q = angles.len();
    let mut out = Vec::with_capacity(q + 1);
    // prefix[j] = cos θ_1 ⋯ cos θ_j
    let mut prefix = Vec::with_capacity(q + 1);
    prefix.push(1.0);
    for &t in angles {
        let last = *prefix.last().unwrap();
        prefix.push(last * t.cos());
    }
    out.push(prefix[q]);
    for i in 1..=q {
        out.push(prefix[q - i] * angles[q - i].sin());
    }
    out
}

/// Linear (simplex) chain over `x` (length `q`), returning `q + 1` components
/// that sum to one: `x_1 ⋯ x_q`, `x_1 ⋯ x_{q-1}(1 - x_q)`, …, `1 - x_1`.
pub fn linear_chain(x: &[f64]) -> Vec<f64> {
    let q = x.len();
    let mut prefix = Vec::with_capacity(q + 1);
    prefix.push(1.0);
    for &v in x {
        let last = *prefix.last().unwrap();
        prefix.push(last * v);
    }
    let mut out = Vec::with_capacity(q + 1);
    out.push(prefix[q]);
    for i in 1..=q {
        out.push(prefix[q - i] * (1.0 - x[q - i]));
    }
    out
}

/// `Σ (x_i - 0.5)^2`.
pub fn sphere_landscape(xr: &[f64]) -> f64 {
    xr.iter().map(|&v| (v - 0.5) * (v - 0.5)).sum()
}

/// Multimodal landscape `100 [k + Σ ((x_i - 0.5)^2 - cos(20π (x_i - 0.5)))]`
/// with `k = xr.len()`; minimum 0 at `x_i = 0.5`.
pub fn rastrigin_landscape(xr: &[f64]) -> f64 {
    let sum: f64 = xr
        .iter()
        .map(|&v| {
            let t = v - 0.5;
            t * t - (20.0 * PI * t).cos()
        })
        .sum();
    100.0 * (xr.len() as f64 + sum)
}

/// `1 + (9 / k) Σ x_i`; minimum 1 at `x = 0`.
pub fn linear_landscape(xr: &[f64]) -> f64 {
    1.0 + 9.0 / xr.len() as f64 * xr.iter().sum::<f64>()
}

/// Clamped split of `gamma` over ascending thresholds:
/// `min(γ, η_1)`, `min(max(γ, η_j), η_{j+1})`, …, `max(γ, η_last)`.
pub fn threshold_split(gamma: f64, eta: &[f64]) -> Vec<f64> {
    let t = eta.len();
    let mut out = Vec::with_capacity(t + 1);
    out.push(gamma.min(eta[0]));
    for j in 0..t.saturating_sub(1) {
        out.push(gamma.max(eta[j]).min(eta[j + 1]));
    }
    out.push(gamma.max(eta[t - 1]));
    out
}

/// Inverse of [`threshold_split`]: the telescoping sum recovers `γ`.
pub fn threshold_merge(split: &[f64], eta: &[f64]) -> f64 {
    split[0]
        + split[1..]
            .iter()
            .zip(eta)
            .map(|(&f, &e)| f - e)
            .sum::<f64>()
}
