//! Benchmark library for multiobjective optimization problems with degenerate
//! Pareto fronts.
//!
//! The crate is organised around the composition `f = h(γ)`, `γ = p ∘ (1 + g)`:
//! a problem computes a small set of essential objectives from shape and
//! landscape functions and lifts them into the full objective space with a
//! monotone transforming layer.
//!
//! - [`pareto`]: dominance, nondominated sorting, crowding distance.
//! - [`chaos`]: logistic-map parameter generator for per-instance constants.
//! - [`problems`]: DPF1–DPF5, DPF1A–DPF5A, DTLZ5(I,M) and two small
//!   illustrative problems.
//! - [`front`]: exact reference-front sampling and Pareto-front membership.
//! - [`metrics`]: inverted generational distance.
//! - [`optimizers`]: NSGA-II, MOEA/D (PBI) and the SBX / polynomial mutation
//!   operators.
//! - [`verify`]: brute-force dominance-preservation checks.
//! - [`experiment`]: seeded batch runs, summaries and artifact export.

pub mod chaos;
pub mod error;
pub mod experiment;
pub mod front;
pub mod metrics;
pub mod optimizers;
pub mod pareto;
pub mod problems;
pub mod verify;

pub use error::{Error, Result};
pub use pareto::{crowding_distance, dominance, nondominated_sort, Dominance, Individual, Population};
pub use problems::{ProblemInstance, ProblemKind, Transform};
