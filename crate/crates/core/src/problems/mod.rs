//! Closed-form test problems.
//!
//! Every problem is written as `f = h(γ)` with essential objectives
//! `γ = p(x^l) ∘ (1 + g(x^r))`. The decision vector is split into position
//! variables `x^l` (which fix the location on the front) and distance
//! variables `x^r` (which fix the distance to it).

pub mod shapes;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chaos::{self, ProblemParams};
use crate::error::{Error, Result};
use shapes::{
    linear_chain, linear_landscape, rastrigin_landscape, sphere_chain, sphere_landscape,
    threshold_split,
};

/// Problem family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "DPF1")]
    Dpf1,
    #[serde(rename = "DPF2")]
    Dpf2,
    #[serde(rename = "DPF3")]
    Dpf3,
    #[serde(rename = "DPF4")]
    Dpf4,
    #[serde(rename = "DPF5")]
    Dpf5,
    #[serde(rename = "DPF1A")]
    Dpf1a,
    #[serde(rename = "DPF2A")]
    Dpf2a,
    #[serde(rename = "DPF3A")]
    Dpf3a,
    #[serde(rename = "DPF4A")]
    Dpf4a,
    #[serde(rename = "DPF5A")]
    Dpf5a,
    #[serde(rename = "DTLZ5IM")]
    Dtlz5Im,
    #[serde(rename = "DEMO_IMPLICIT")]
    DemoImplicit,
    #[serde(rename = "DEMO_PARTIAL")]
    DemoPartial,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 13] = [
        ProblemKind::Dpf1,
        ProblemKind::Dpf2,
        ProblemKind::Dpf3,
        ProblemKind::Dpf4,
        ProblemKind::Dpf5,
        ProblemKind::Dpf1a,
        ProblemKind::Dpf2a,
        ProblemKind::Dpf3a,
        ProblemKind::Dpf4a,
        ProblemKind::Dpf5a,
        ProblemKind::Dtlz5Im,
        ProblemKind::DemoImplicit,
        ProblemKind::DemoPartial,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ProblemKind::Dpf1 => "DPF1",
            ProblemKind::Dpf2 => "DPF2",
            ProblemKind::Dpf3 => "DPF3",
            ProblemKind::Dpf4 => "DPF4",
            ProblemKind::Dpf5 => "DPF5",
            ProblemKind::Dpf1a => "DPF1A",
            ProblemKind::Dpf2a => "DPF2A",
            ProblemKind::Dpf3a => "DPF3A",
            ProblemKind::Dpf4a => "DPF4A",
            ProblemKind::Dpf5a => "DPF5A",
            ProblemKind::Dtlz5Im => "DTLZ5IM",
            ProblemKind::DemoImplicit => "DEMO_IMPLICIT",
            ProblemKind::DemoPartial => "DEMO_PARTIAL",
        }
    }

    /// Redundant objectives are weighted sums of the essential ones.
    pub fn is_explicit(self) -> bool {
        matches!(
            self,
            ProblemKind::Dpf1 | ProblemKind::Dpf2 | ProblemKind::Dpf1a | ProblemKind::Dpf2a
        )
    }

    /// The last essential objective is split over thresholds.
    pub fn is_implicit(self) -> bool {
        matches!(
            self,
            ProblemKind::Dpf3 | ProblemKind::Dpf4 | ProblemKind::Dpf3a | ProblemKind::Dpf4a
        )
    }

    pub fn is_demo(self) -> bool {
        matches!(self, ProblemKind::DemoImplicit | ProblemKind::DemoPartial)
    }

    /// Kinds whose objectives pass through the instance transform `φ`.
    pub fn uses_transform(self) -> bool {
        matches!(
            self,
            ProblemKind::Dpf2 | ProblemKind::Dpf4 | ProblemKind::Dpf2a | ProblemKind::Dpf4a
        )
    }

    pub fn default_k(self) -> usize {
        match self {
            ProblemKind::Dpf2 => 20,
            _ => 10,
        }
    }

    pub fn default_transform(self) -> Transform {
        if self.uses_transform() {
            Transform::Quadratic
        } else {
            Transform::Identity
        }
    }

    /// Number of decision variables for `(m, d, k)`.
    pub fn variable_count(self, m: usize, d: usize, k: usize) -> usize {
        match self {
            ProblemKind::Dpf5 | ProblemKind::Dpf5a | ProblemKind::Dtlz5Im => m + k - 1,
            _ => d + k - 1,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        let norm = match norm.as_str() {
            "DTLZ5" | "DTLZ5IM" => "DTLZ5IM".to_string(),
            _ => norm,
        };
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.label().replace('_', "") == norm)
            .ok_or_else(|| Error::config(format!("unknown problem kind '{s}'")))
    }
}

/// Non-decreasing map applied by the transforming layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Transform {
    Identity,
    Quadratic,
    Sigmoid,
}

impl Transform {
    #[inline]
    pub fn apply(self, tau: f64) -> f64 {
        match self {
            Transform::Identity => tau,
            Transform::Quadratic => tau * tau,
            Transform::Sigmoid => tau.exp() / (1.0 + tau.exp()),
        }
    }

    /// Inverse on the range used by the problems (`τ ≥ 0` for the quadratic).
    pub fn invert(self, value: f64) -> f64 {
        match self {
            Transform::Identity => value,
            Transform::Quadratic => value.max(0.0).sqrt(),
            Transform::Sigmoid => (value / (1.0 - value)).ln(),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::Identity => "identity",
            Transform::Quadratic => "quadratic",
            Transform::Sigmoid => "sigmoid",
        })
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "identity" | "none" => Ok(Transform::Identity),
            "quadratic" | "square" => Ok(Transform::Quadratic),
            "sigmoid" | "logistic" => Ok(Transform::Sigmoid),
            _ => Err(Error::config(format!("unknown transform '{s}'"))),
        }
    }
}

/// A frozen problem definition.
///
/// For DTLZ5(I,M) `d` plays the role of `I` and `m` of `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct ProblemInstance {
    kind: ProblemKind,
    m: usize,
    d: usize,
    k: usize,
    n: usize,
    transform: Transform,
    #[serde(flatten)]
    params: ProblemParams,
}

#[derive(Deserialize)]
struct RawInstance {
    kind: ProblemKind,
    m: usize,
    d: usize,
    k: usize,
    n: usize,
    transform: Transform,
    #[serde(flatten)]
    params: ProblemParams,
}

impl TryFrom<RawInstance> for ProblemInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let inst = ProblemInstance::new(raw.kind, raw.m, raw.d)?
            .with_k(raw.k)?
            .with_transform(raw.transform)?
            .with_params(raw.params)?;
        if inst.n != raw.n {
            return Err(Error::config(format!(
                "descriptor declares n = {} but (kind, m, d, k) gives {}",
                raw.n, inst.n
            )));
        }
        Ok(inst)
    }
}

impl ProblemInstance {
    /// Builds an instance with the default `k`, the default transform and
    /// constants materialized from a fresh chaos stream.
    pub fn new(kind: ProblemKind, m: usize, d: usize) -> Result<Self> {
        match kind {
            _ if kind.is_demo() => {
                if m != 3 || d != 2 {
                    return Err(Error::config(format!(
                        "{kind} is fixed at m = 3, d = 2 (got m = {m}, d = {d})"
                    )));
                }
            }
            ProblemKind::Dtlz5Im => {
                if d < 2 || d > m {
                    return Err(Error::config(format!(
                        "DTLZ5(I,M) needs 2 <= I <= M (got I = {d}, M = {m})"
                    )));
                }
            }
            _ => {
                if d < 2 || d >= m {
                    return Err(Error::config(format!(
                        "{kind} needs 2 <= d < m (got m = {m}, d = {d})"
                    )));
                }
            }
        }
        let params = if kind.is_explicit() {
            chaos::derive_weight_vectors(m, d)?
        } else if kind.is_implicit() {
            chaos::derive_thresholds(m, d)?
        } else {
            ProblemParams::default()
        };
        let k = kind.default_k();
        Ok(Self {
            kind,
            m,
            d,
            k,
            n: kind.variable_count(m, d, k),
            transform: kind.default_transform(),
            params,
        })
    }

    /// Sets the number of distance variables.
    pub fn with_k(mut self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("k must be at least 1"));
        }
        self.k = k;
        self.n = self.kind.variable_count(self.m, self.d, k);
        Ok(self)
    }

    pub fn with_transform(mut self, transform: Transform) -> Result<Self> {
        if !self.kind.uses_transform() && transform != Transform::Identity {
            return Err(Error::config(format!(
                "{} has no transforming function; only identity is accepted",
                self.kind
            )));
        }
        self.transform = transform;
        Ok(self)
    }

    /// Replaces the materialized constants.
    ///
    /// Only shapes and threshold ordering are checked: weight signs are left
    /// to the caller so that non-monotone layers can be probed on purpose.
    pub fn with_params(mut self, params: ProblemParams) -> Result<Self> {
        let redundant = self.m.saturating_sub(self.d);
        if self.kind.is_explicit() {
            let ok = params.weight_vectors.as_ref().is_some_and(|u| {
                u.len() == redundant && u.iter().all(|w| w.len() == self.d && w.iter().all(|v| v.is_finite()))
            });
            if !ok {
                return Err(Error::config(format!(
                    "{} needs {} weight vectors of length {}",
                    self.kind, redundant, self.d
                )));
            }
        } else if self.kind.is_implicit() {
            match &params.thresholds {
                Some(eta) if eta.len() == redundant => chaos::check_ascending(eta)?,
                _ => {
                    return Err(Error::config(format!(
                        "{} needs {} ascending thresholds",
                        self.kind, redundant
                    )))
                }
            }
        } else if params != ProblemParams::default() {
            return Err(Error::config(format!("{} takes no parameters", self.kind)));
        }
        self.params = params;
        Ok(self)
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Number of objectives.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of essential objectives.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of distance variables.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of decision variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn transform(&self) -> Transform {
        self.transform
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    /// `u_1, …, u_{m-d}`; empty for kinds without weights.
    pub fn weight_vectors(&self) -> &[Vec<f64>] {
        self.params.weight_vectors.as_deref().unwrap_or(&[])
    }

    /// `η_1 < … < η_{m-d}`; empty for kinds without thresholds.
    pub fn thresholds(&self) -> &[f64] {
        self.params.thresholds.as_deref().unwrap_or(&[])
    }

    /// A short label such as `DPF1_m3_d2`.
    pub fn label(&self) -> String {
        format!("{}_m{}_d{}", self.kind, self.m, self.d)
    }

    /// Number of position variables (`x^l`).
    pub fn position_count(&self) -> usize {
        match self.kind {
            ProblemKind::Dpf5 | ProblemKind::Dpf5a | ProblemKind::Dtlz5Im => self.m - 1,
            _ => self.d - 1,
        }
    }

    /// Value of each distance variable at the landscape optimum, and the
    /// resulting minimum of `g`.
    pub fn landscape_optimum(&self) -> (f64, f64) {
        match self.kind {
            ProblemKind::Dpf2 => (0.0, 1.0),
            _ => (0.5, 0.0),
        }
    }

    /// A decision vector with the given position variables and the distance
    /// variables at their optimum (DPF5 also ties `x_m` to `x_1`).
    pub fn optimal_decision(&self, position: &[f64]) -> Result<Vec<f64>> {
        let p = self.position_count();
        if position.len() != p {
            return Err(Error::contract(format!(
                "expected {p} position variables, got {}",
                position.len()
            )));
        }
        let mut x = vec![self.landscape_optimum().0; self.n];
        x[..p].copy_from_slice(position);
        if matches!(self.kind, ProblemKind::Dpf5 | ProblemKind::Dpf5a) {
            x[self.m - 1] = position[0];
        }
        Ok(x)
    }

    fn check_decision(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::contract(format!(
                "{} expects {} decision variables, got {}",
                self.label(),
                self.n,
                x.len()
            )));
        }
        if let Some(v) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::contract(format!(
                "decision variable {v} outside [0, 1]"
            )));
        }
        Ok(())
    }

    fn expect_kind(&self, allowed: &[ProblemKind]) -> Result<()> {
        if allowed.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::contract(format!(
                "evaluator for {:?} called on a {} instance",
                allowed, self.kind
            )))
        }
    }

    /// Evaluates `x`, returning every intermediate quantity.
    pub fn evaluate(&self, x: &[f64]) -> Result<EvaluationBreakdown> {
        match self.kind {
            ProblemKind::Dpf1 => evaluate_dpf1(self, x),
            ProblemKind::Dpf2 => evaluate_dpf2(self, x),
            ProblemKind::Dpf3 => evaluate_dpf3(self, x),
            ProblemKind::Dpf4 => evaluate_dpf4(self, x),
            ProblemKind::Dpf5 => evaluate_dpf5(self, x),
            ProblemKind::Dpf1a
            | ProblemKind::Dpf2a
            | ProblemKind::Dpf3a
            | ProblemKind::Dpf4a
            | ProblemKind::Dpf5a => evaluate_dpfa(self, x),
            ProblemKind::Dtlz5Im => evaluate_dtlz5im(self, x),
            ProblemKind::DemoImplicit | ProblemKind::DemoPartial => {
                self.check_decision(x)?;
                Ok(demo_breakdown(self.kind, x))
            }
        }
    }

    /// Objective vector of `x`.
    pub fn objectives(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.evaluate(x).map(|b| b.objectives)
    }

    /// The transforming layer `h` for kinds whose objectives depend on the
    /// essential objectives alone (DPF1–DPF4 and DPF1A–DPF4A).
    pub fn lift(&self, essential: &[f64]) -> Result<Vec<f64>> {
        if !(self.kind.is_explicit() || self.kind.is_implicit()) {
            return Err(Error::contract(format!(
                "{} objectives are not a function of the essential objectives alone",
                self.kind
            )));
        }
        if essential.len() != self.d {
            return Err(Error::contract(format!(
                "expected {} essential objectives, got {}",
                self.d,
                essential.len()
            )));
        }
        Ok(if self.kind.is_explicit() {
            self.lift_explicit(essential)
        } else {
            self.lift_implicit(essential)
        })
    }

    fn lift_explicit(&self, gamma: &[f64]) -> Vec<f64> {
        let phi = self.transform;
        let mut f = gamma.to_vec();
        f.extend(self.weight_vectors().iter().map(|u| {
            let dot: f64 = gamma.iter().zip(u).map(|(g, w)| g * w).sum();
            phi.apply(dot)
        }));
        f
    }

    fn lift_implicit(&self, gamma: &[f64]) -> Vec<f64> {
        let phi = self.transform;
        let d = self.d;
        let mut f: Vec<f64> = gamma[..d - 1].to_vec();
        f.extend(threshold_split(gamma[d - 1], self.thresholds()));
        for v in &mut f {
            *v = phi.apply(*v);
        }
        f
    }
}

/// Everything computed while evaluating one decision vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationBreakdown {
    /// Essential objectives `γ`.
    pub essential: Vec<f64>,
    /// Landscape value `g`.
    pub landscape: f64,
    /// Angles `θ` (empty for the linear-shape problems).
    pub angles: Vec<f64>,
    /// Full spherical chain `β` (DPF5 and DPF5A only).
    pub sphere_full: Option<Vec<f64>>,
    pub objectives: Vec<f64>,
}

fn split_decision(inst: &ProblemInstance, x: &[f64]) -> (usize, usize) {
    (inst.position_count(), x.len())
}

pub fn evaluate_dpf1(inst: &ProblemInstance, x: &[f64]) -> Result<EvaluationBreakdown> {
    inst.expect_kind(&[ProblemKind::Dpf1])?;
    inst.check_decision(x)?;
    let (p, _) = split_decision(inst, x);
    let g = rastrigin_landscape(&x[p..]);
    let gamma: Vec<f64> = linear_chain(&x[..p])
        .into_iter()
        .map(|v| 0.5 * v * (1.0 + g))
        .collect();
    let objectives = inst.lift_explicit(&gamma);
    Ok(EvaluationBreakdown {
        essential: gamma,
        landscape: g,
        angles: Vec::new(),
        sphere_full: None,
        objectives,
    })
}

pub fn evaluate_dpf2(inst: &ProblemInstance, x: &[f64]) -> Result<EvaluationBreakdown> {
    inst.expect_kind(&[ProblemKind::Dpf2])?;
    inst.check_decision(x)?;
    let d = inst.d;
    let g = linear_landscape(&x[d - 1..]);
    let scale = 1.0 + g;
    let mut gamma: Vec<f64> = x[..d - 1].iter().map(|&v| v * scale).collect();
    let h = d as f64
        - gamma
            .iter()
            .map(|&f| f / scale * (1.0 + (3.0 * PI * f).sin()))
            .sum::<f64>();
    gamma.push(h * scale);
    let objectives = inst.lift_explicit(&gamma);
    Ok(EvaluationBreakdown {
        essential: gamma,
        landscape: g,
        angles: Vec::new(),
        sphere_full: None,
        objectives,
    })
}

fn concave_essential(angles: &[f64], g: f64) -> Vec<f64> {
    sphere_chain(angles)
        .into_iter()
        .map(|p| (1.0 - p) * (1.0 + g))
        .collect()
}

pub fn evaluate_dpf3(inst: &ProblemInstance, x: &[f64]) -> Result<EvaluationBreakdown> {
    inst.expect_kind(&[ProblemKind::Dpf3])?;
    inst.check_decision(x)?;
    let p = inst.d - 1;
    let angles: Vec<f64> = x[..p].iter().map(|&v| FRAC_PI_2 * v.powi(100)).collect();
    let g = sphere_landscape(&x[p..]);
    let gamma = concave_essential(&angles, g);
    let objectives = inst.lift_implicit(&gamma);
    Ok(EvaluationBreakdown {
        essential: gamma,
        landscape: g,
        angles,
        sphere_full: None,
        objectives,
    })
}

pub fn evaluate_dpf4(inst: &ProblemInstance, x: &[f64]) -> Result<EvaluationBreakdown> {
    inst.expect_kind(&[ProblemKind::Dpf4])?;
    inst.check_decision(x)?;
    let p = inst.d - 1;
    let angles: Vec<f64> = x[..p].iter().map(|&v| FRAC_PI_2 * v).collect();
    let g = rastrigin_landscape(&x[p..]);
    let gamma = concave_essential(&angles, g);
    let objectives = inst.lift_implicit(&gamma);
    Ok(EvaluationBreakdown {
        essential: gamma,
        landscape: g,
        angles,
        sphere_full: None,
        objectives,
    })
}

/// Branch boundary of DPF5: `x_1 < 1/3` selects the full-sphere segment.
pub const DPF5_BRANCH: f64 = 1.0 / 3.0;

/// Leading factor of `γ_1` for DPF5 (`√(1/(m-d+1))`) and DPF5A (`sin(π/4)`).
pub(crate) fn dpf5_leading_factor(kind: ProblemKind, m: usize, d: usize) -> f64 {
    match kind {
        ProblemKind::Dpf5a => FRAC_PI_4.sin(),
        _ => (1.0 / (m - d + 1) as f64).sqrt(),
    }
}

fn branch_problem(inst: &ProblemInstance, x: &[f64]) -> EvaluationBreakdown {
    let (m, d) = (inst.m, inst.d);
    let angles: Vec<f64> = x[..m - 1].iter().map(|&v| FRAC_PI_2 * v).collect();
    let g = (x[m - 1] - x[0]).powi(2) + sphere_landscape(&x[m..]);
    let scale = 1.0 + g;
    let beta: Vec<f64> = sphere_chain(&angles).into_iter().map(|v| v * scale).collect();
    let mut gamma: Vec<f64> = sphere_chain(&angles[..d - 1])
        .into_iter()
        .map(|v| v * scale)
        .collect();
    gamma[0] *= dpf5_leading_factor(inst.kind, m, d);

    let shared = m - d + 1;
    let mut objectives = Vec::with_capacity(m);
    if x[0] < DPF5_BRANCH {
        objectives.extend_from_slice(&beta[..shared]);
    } else {
        objectives.extend(std::iter::repeat(gamma[0]).take(shared));
    }
    objectives.extend_from_slice(&gamma[1..]);
    EvaluationBreakdown {
        essential: gamma,
        landscape: g,
        angles,
        sphere_full: Some(beta),
        objectives,
    }
}

pub fn evaluate_dpf5(inst: &ProblemInstance, x: &[f64]) -> Result<EvaluationBreakdown> {
    inst.expect_kind(&[ProblemKind::Dpf5])?;
    inst.check_decision(x)?;
    Ok(branch_problem(inst, x))
}

/// DPF1A–DPF5A: the essential objectives of DTLZ5(I,M) under each DPF
/// family's transforming layer.
pub fn evaluate_dpfa(inst: &ProblemInstance, x: &[f64]) -> Result<EvaluationBreakdown> {
    inst.expect_kind(&[
        ProblemKind::Dpf1a,
        ProblemKind::Dpf2a,
        ProblemKind::Dpf3a,
        ProblemKind::Dpf4a,
        ProblemKind::Dpf5a,
    ])?;
    inst.check_decision(x)?;
    if inst.kind == ProblemKind::Dpf5a {
        return Ok(branch_problem(inst, x));
    }
    let p = inst.d - 1;
    let angles: Vec<f64> = x[..p].iter().map(|&v| FRAC_PI_2 * v).collect();
    let g = sphere_landscape(&x[p..]);
    let gamma = dtlz5_essential(&angles, g);
    let objectives = if inst.kind.is_explicit() {
        inst.lift_explicit(&gamma)
    } else {
        inst.lift_implicit(&gamma)
    };
    Ok(EvaluationBreakdown {
        essential: gamma,
        landscape: g,
        angles,
        sphere_full: None,
        objectives,
    })
}

/// Sphere chain with `sin(π/4)` on the leading component, scaled by `1 + g`.
pub(crate) fn dtlz5_essential(angles: &[f64], g: f64) -> Vec<f64> {
    let mut gamma: Vec<f64> = sphere_chain(angles).into_iter().map(|v| v * (1.0 + g)).collect();
    gamma[0] *= FRAC_PI_4.sin();
    gamma
}

/// Standard DTLZ5(I,M) with `I = d` and `M = m`.
pub fn evaluate_dtlz5im(inst: &ProblemInstance, x: &[f64]) -> Result<EvaluationBreakdown> {
    inst.expect_kind(&[ProblemKind::Dtlz5Im])?;
    inst.check_decision(x)?;
    let (m, i) = (inst.m, inst.d);
    let g = sphere_landscape(&x[m - 1..]);
    let angles: Vec<f64> = x[..m - 1]
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            if j + 1 < i {
                FRAC_PI_2 * v
            } else {
                PI / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * v)
            }
        })
        .collect();
    let objectives: Vec<f64> = sphere_chain(&angles).into_iter().map(|v| v * (1.0 + g)).collect();
    Ok(EvaluationBreakdown {
        essential: objectives[m - i..].to_vec(),
        landscape: g,
        angles,
        sphere_full: None,
        objectives,
    })
}

/// Which illustrative three-objective problem to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DemoVariant {
    /// Two essential objectives hidden behind a branch at `x_1 = 0.5`.
    Implicit,
    /// `f_1` and `f_2` coincide for `x_1 <= 0.5` and conflict above it.
    Partial,
}

/// Evaluates one of the two illustrative problems on any `x` with at least
/// two variables in `[0, 1]`.
pub fn evaluate_demo(variant: DemoVariant, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() < 2 {
        return Err(Error::contract("the illustrative problems need n >= 2"));
    }
    if x.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::contract("decision variables must lie in [0, 1]"));
    }
    let kind = match variant {
        DemoVariant::Implicit => ProblemKind::DemoImplicit,
        DemoVariant::Partial => ProblemKind::DemoPartial,
    };
    Ok(demo_breakdown(kind, x).objectives)
}

fn demo_breakdown(kind: ProblemKind, x: &[f64]) -> EvaluationBreakdown {
    let g = sphere_landscape(&x[1..]);
    let scale = 1.0 + g;
    let x1 = x[0];
    match kind {
        ProblemKind::DemoImplicit => {
            let theta = FRAC_PI_2 * x1;
            let gamma = vec![theta.sin() * scale, theta.cos() * scale];
            let flat = FRAC_PI_4.cos() * scale;
            let objectives = if x1 < 0.5 {
                vec![gamma[0], gamma[1], flat]
            } else {
                vec![gamma[0], flat, gamma[1]]
            };
            EvaluationBreakdown {
                essential: gamma,
                landscape: g,
                angles: vec![theta],
                sphere_full: None,
                objectives,
            }
        }
        _ => {
            let x2 = x[1];
            let (f1, f2) = if x1 > 0.5 {
                (x1 * (1.0 - x2) * scale, x1 * x2 * scale)
            } else {
                (x1 / 2.0 * scale, x1 / 2.0 * scale)
            };
            let objectives = vec![f1, f2, (1.0 - x1) * scale];
            EvaluationBreakdown {
                essential: objectives.clone(),
                landscape: g,
                angles: Vec::new(),
                sphere_full: None,
                objectives,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(kind: ProblemKind, m: usize, d: usize) -> ProblemInstance {
        ProblemInstance::new(kind, m, d).unwrap()
    }

    #[test]
    fn transform_examples() {
        assert_eq!(Transform::Quadratic.apply(2.0), 4.0);
        assert_eq!(Transform::Sigmoid.apply(0.0), 0.5);
        assert_eq!(Transform::Identity.apply(0.37), 0.37);
        for t in [Transform::Identity, Transform::Quadratic, Transform::Sigmoid] {
            let v = 0.731;
            assert!((t.invert(t.apply(v)) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn variable_counts_and_defaults() {
        let p = inst(ProblemKind::Dpf1, 3, 2);
        assert_eq!((p.k(), p.n()), (10, 11));
        let p = inst(ProblemKind::Dpf2, 3, 2);
        assert_eq!((p.k(), p.n()), (20, 21));
        assert_eq!(p.transform(), Transform::Quadratic);
        let p = inst(ProblemKind::Dpf5, 3, 2);
        assert_eq!(p.n(), 12);
        let p = inst(ProblemKind::Dtlz5Im, 10, 3);
        assert_eq!(p.n(), 19);
        let p = inst(ProblemKind::DemoPartial, 3, 2);
        assert_eq!(p.n(), 11);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ProblemInstance::new(ProblemKind::Dpf1, 2, 2).is_err());
        assert!(ProblemInstance::new(ProblemKind::Dpf3, 5, 1).is_err());
        assert!(ProblemInstance::new(ProblemKind::DemoImplicit, 4, 2).is_err());
        assert!(inst(ProblemKind::Dpf1, 3, 2).with_k(0).is_err());
        assert!(inst(ProblemKind::Dpf3, 3, 2).with_transform(Transform::Sigmoid).is_err());
    }

    #[test]
    fn rejects_bad_decisions_and_wrong_kind() {
        let p = inst(ProblemKind::Dpf1, 3, 2);
        assert!(p.evaluate(&[0.5; 10]).is_err());
        let mut x = vec![0.5; 11];
        x[3] = 1.5;
        assert!(p.evaluate(&x).is_err());
        assert!(evaluate_dpf2(&p, &[0.5; 11]).is_err());
        assert!(evaluate_dpfa(&p, &[0.5; 11]).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("dpf3a".parse::<ProblemKind>().unwrap(), ProblemKind::Dpf3a);
        assert_eq!("DTLZ5(I,M)".parse::<ProblemKind>().unwrap(), ProblemKind::Dtlz5Im);
        assert_eq!("demo_partial".parse::<ProblemKind>().unwrap(), ProblemKind::DemoPartial);
        assert!("DPF9".parse::<ProblemKind>().is_err());
        assert_eq!("Sigmoid".parse::<Transform>().unwrap(), Transform::Sigmoid);
    }

    #[test]
    fn descriptor_round_trip() {
        let p = inst(ProblemKind::Dpf4, 6, 3).with_transform(Transform::Sigmoid).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: ProblemInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let tampered = text.replace("\"n\":12", "\"n\":13");
        assert!(serde_json::from_str::<ProblemInstance>(&tampered).is_err());
    }

    #[test]
    fn with_params_checks_shape_not_sign() {
        let p = inst(ProblemKind::Dpf1, 3, 2);
        let neg = ProblemParams {
            weight_vectors: Some(vec![vec![-1.0, 0.5]]),
            thresholds: None,
        };
        assert!(p.clone().with_params(neg).is_ok());
        let short = ProblemParams {
            weight_vectors: Some(vec![vec![1.0]]),
            thresholds: None,
        };
        assert!(p.with_params(short).is_err());
    }
}
