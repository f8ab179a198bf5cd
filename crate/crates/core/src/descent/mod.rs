//! Presheaves on finite covers and their global constructions: the Čech
//! complex, `Tot` (normalized cochains) and `TW` (polynomial forms), with
//! augmentations, comparison maps, the inclusion–exclusion identity and
//! descent checks. Coefficients are rational throughout.

mod cosimplicial;
mod fixtures;
mod induction;
mod presheaf;
mod totalization;
mod verify;

pub use cosimplicial::{cech, cech_total, nerve, CechComplex, CosimplicialComplex, Nerve, PresheafCech};
pub use fixtures::{
    closure, constant, disjoint, intersection, random_presheaf, square_complex, triangle_boundary, triangle_three_edges,
    triangle_two_arcs, union, RandomShape, SimplicialComplex, Subcomplex,
};
pub use induction::{induction_pipeline, InductionReport, InductionStep};
pub use presheaf::{label, parse_label, subsets_of_size, CoverPresheaf, MAX_MEMBERS, TOP};
pub(crate) use presheaf::covering_pairs;
pub use totalization::{required_cutoff, tot, tot_cech_iso, totalize, tw, tw_to_tot, whitney_section, ModelKind, Totalization};
pub use verify::{
    check_tot_cech, check_tw_tot, inclusion_exclusion, verify_descent, CoconeDecomposition, DescentReport,
    InclusionExclusionCertificate, TotCechCertificate, TwCertificate,
};

use crate::complexes::ComplexError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DescentError {
    #[error("restrictions are not functorial: {from} → {via} → {to} differs from {from} → {to}")]
    Functoriality { from: String, via: String, to: String },
    #[error("cosimplicial identity fails at level {level} for d_{i}, d_{j}")]
    CosimplicialIdentity { level: usize, i: usize, j: usize },
    #[error("no value for index set {0}")]
    MissingValue(String),
    #[error("no restriction {0} → {1}")]
    MissingRestriction(String, String),
    #[error("map does not preserve the equalizer: {0}")]
    NotEqualized(String),
    #[error("weight cutoff {given} is below the Whitney weight {needed}")]
    CutoffTooSmall { needed: usize, given: usize },
    #[error("bad cover: {0}")]
    BadCover(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
