//! Poisson brackets of polynomial Hamiltonians on `ℝ^{2n}`, the composition
//! lemma, explicit hyperbola smoothings for intersections and unions of
//! sublevel sets, and a grid checker for weakly Poisson commuting families.

mod cover;
mod poly;
mod smoothing;
mod surd;

pub use cover::{check_weak_cover_conditions, BulletResult, Grid, Region, WeakCoverReport};
pub use poly::{
    check_composition_lemma, poisson_bracket, random_commuting_family, random_poly_function, random_polynomial, CompositionCheck, PolyFunction,
    Polynomial,
};
pub use smoothing::{
    build_cover_functions, required_delta_decay, smooth_pair, smoothing_h, CoverExpr, CoverFunction, DeltaDecay, SmoothingCurve, SmoothingMode, Value,
};
pub use surd::Surd;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvolutiveError {
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("cannot parse polynomial `{0}`")]
    Parse(String),
    #[error("{{f_{i}, f_{j}}} = {bracket} ≠ 0")]
    HypothesisFailure { i: usize, j: usize, bracket: String },
    #[error("composites do not commute: bracket {0}")]
    LemmaViolation(String),
    #[error("bad sequence: {0}")]
    BadSequence(String),
}
