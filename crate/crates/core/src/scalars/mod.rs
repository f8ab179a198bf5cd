//! Exact coefficient arithmetic: rationals and a truncated Novikov ring.

mod novikov;
mod rational;

use std::fmt;

pub use novikov::{NovikovElem, NovikovRing, Valuation};
pub use rational::{rational_from_json, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("element of positive valuation is not invertible in the truncated ring")]
    NotInvertible,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("invalid ring parameters: {0}")]
    BadRing(String),
}

/// Coefficients usable as matrix entries.
///
/// `Ring` carries whatever context is needed to build constants (nothing for
/// rationals, the denominator and cutoff for Novikov elements). All values
/// inside one matrix or complex share a ring; mixing rings is a logic error
/// and panics in the infallible operations below.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn zero_in(ring: &Self::Ring) -> Self;
    fn one_in(ring: &Self::Ring) -> Self;
    fn from_rational_in(ring: &Self::Ring, q: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Human-readable ring name used in reports.
    fn ring_name(ring: &Self::Ring) -> String;
}

impl Coeff for Rational {
    type Ring = ();

    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn one_in(_: &()) -> Self {
        Rational::one()
    }
    fn from_rational_in(_: &(), q: Rational) -> Self {
        q
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn ring_name(_: &()) -> String {
        "Q".to_string()
    }
}

impl Coeff for NovikovElem {
    type Ring = NovikovRing;

    fn zero_in(ring: &NovikovRing) -> Self {
        NovikovElem::zero(ring.clone())
    }
    fn one_in(ring: &NovikovRing) -> Self {
        NovikovElem::constant(ring.clone(), Rational::one())
    }
    fn from_rational_in(ring: &NovikovRing, q: Rational) -> Self {
        NovikovElem::constant(ring.clone(), q)
    }
    fn is_zero(&self) -> bool {
        NovikovElem::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("Novikov ring mismatch")
    }
    fn sub(&self, other: &Self) -> Self {
        self.checked_add(&other.negate()).expect("Novikov ring mismatch")
    }
    fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("Novikov ring mismatch")
    }
    fn neg(&self) -> Self {
        self.negate()
    }
    fn ring_name(ring: &NovikovRing) -> String {
        ring.to_string()
    }
}
