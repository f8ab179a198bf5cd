//! Algebra structures: polyvector fields with their divergence BV operator,
//! CDGA presheaves, the Čech cup product and the product on `TW`.

mod bv;
mod cdga;
mod json;
mod p1;
mod polyvector;
mod products;

pub use bv::{bv_axiom_check, bv_axiom_report, AxiomResult, BvOperator, BvReport, PolyvectorBv};
pub use cdga::{constant_cdga, locally_constant, random_cdga_presheaf, triangle_locally_constant, CdgaPresheaf, MulTable};
pub use p1::{change_chart, p1_polyvector_presheaf, weight, DeltaDiscrepancy, P1Polyvectors, CHART_X, CHART_Y, OVERLAP};
pub use polyvector::{PolyRing, Polyvector, PvMonomial};
pub use products::{
    cech_cup, cocycle_representatives, compare_products, is_coboundary, tw_product, CechAlgebra, CupWitness, ProductCheck,
    ProductComparison, TwAlgebra,
};

use std::collections::BTreeMap;

use crate::complexes::ComplexError;
use crate::descent::DescentError;
use crate::scalars::Rational;

/// A sparse vector `(index, coefficient)`, ascending, without zeros.
pub type Vector = Vec<(usize, Rational)>;

pub(crate) fn accumulate(acc: BTreeMap<usize, Rational>) -> Vector {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperadError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("not an element of the ring: {0}")]
    NotInRing(String),
    #[error("cannot parse polyvector `{0}`")]
    Parse(String),
    #[error("axiom `{axiom}` fails on {witness:?}")]
    AxiomFailure { axiom: String, witness: Vec<String> },
    #[error("product leaves the truncation window: {0}")]
    OutOfWindow(String),
    #[error("not a CDGA presheaf: {0}")]
    Cdga(String),
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
