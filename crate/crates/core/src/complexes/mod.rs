//! Bounded cochain complexes (differential raises degree by one), chain maps,
//! the standard constructions, and homology.

mod constructions;
mod homology;
mod json;
mod telescope;

use std::collections::BTreeMap;

use crate::linalg::SparseMatrix;
use crate::scalars::{Coeff, Rational, ScalarError};

pub use constructions::{cocone, cone, direct_sum, shift, shift_map, tensor, tensor_swap, Cone, DirectSum};
pub use homology::{homology, image_homology, is_quasi_iso, DegreeHomology, HomologyCoeff, HomologyReport, QuasiIsoCertificate};
pub use json::JsonCoeff;
pub use telescope::{colimit_homology, complete, telescope, ColimitReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComplexError {
    #[error("d∘d is nonzero starting in degree {0}")]
    NotAComplex(i32),
    #[error("map does not commute with the differentials in source degree {0}")]
    NotAChainMap(i32),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("coefficient rings differ")]
    RingMismatch,
    #[error("operation not supported over {0}")]
    UnsupportedRing(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A bounded complex `C^lo → C^{lo+1} → … → C^hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<S: Coeff> {
    ring: S::Ring,
    lo: i32,
    dims: Vec<usize>,
    /// `diffs[i]: C^{lo+i} → C^{lo+i+1}`; one fewer than `dims`.
    diffs: Vec<SparseMatrix<S>>,
    completed_at: Option<Rational>,
}

impl<S: Coeff> Complex<S> {
    /// Checks matrix shapes (but not `d² = 0`; see [`Complex::validate`]).
    pub fn new(ring: S::Ring, lo: i32, dims: Vec<usize>, diffs: Vec<SparseMatrix<S>>) -> Result<Self, ComplexError> {
        if diffs.len() + 1 != dims.len() && !(dims.is_empty() && diffs.is_empty()) {
            return Err(ComplexError::ShapeMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[i + 1], dims[i]) {
                return Err(ComplexError::ShapeMismatch(format!(
                    "d^{} is {}x{}, expected {}x{}",
                    lo + i as i32,
                    d.nrows(),
                    d.ncols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        Ok(Complex { ring, lo, dims, diffs, completed_at: None })
    }

    /// Builds from per-degree dimensions and differentials keyed by source
    /// degree; missing differentials are zero.
    pub fn from_map(
        ring: S::Ring,
        dims: &BTreeMap<i32, usize>,
        diffs: &BTreeMap<i32, SparseMatrix<S>>,
    ) -> Result<Self, ComplexError> {
        let lo = match (dims.keys().next(), diffs.keys().next()) {
            (Some(a), Some(b)) => *a.min(b),
            (Some(a), None) => *a,
            (None, Some(b)) => *b,
            (None, None) => return Ok(Self::zero(ring)),
        };
        let hi = dims.keys().copied().chain(diffs.keys().map(|k| k + 1)).max().unwrap_or(lo);
        let dim_vec: Vec<usize> = (lo..=hi).map(|n| dims.get(&n).copied().unwrap_or(0)).collect();
        let diff_vec = (lo..hi)
            .map(|n| {
                let (r, c) = (dim_vec[(n + 1 - lo) as usize], dim_vec[(n - lo) as usize]);
                diffs.get(&n).cloned().unwrap_or_else(|| SparseMatrix::zeros(r, c))
            })
            .collect();
        Self::new(ring, lo, dim_vec, diff_vec)
    }

    pub fn zero(ring: S::Ring) -> Self {
        Complex { ring, lo: 0, dims: Vec::new(), diffs: Vec::new(), completed_at: None }
    }

    /// `S^dim` concentrated in one degree.
    pub fn concentrated(ring: S::Ring, degree: i32, dim: usize) -> Self {
        Complex { ring, lo: degree, dims: vec![dim], diffs: Vec::new(), completed_at: None }
    }

    pub fn ring(&self) -> &S::Ring {
        &self.ring
    }

    /// `[lo, hi]`, or `None` for the complex with no degrees.
    pub fn support(&self) -> Option<(i32, i32)> {
        if self.dims.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.dims.len() as i32 - 1))
        }
    }

    /// Degrees in the support, ascending.
    pub fn degrees(&self) -> std::ops::Range<i32> {
        self.lo..self.lo + self.dims.len() as i32
    }

    pub fn dim(&self, n: i32) -> usize {
        if n < self.lo {
            return 0;
        }
        self.dims.get((n - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d^n: C^n → C^{n+1}` (a zero matrix outside the support).
    pub fn diff(&self, n: i32) -> SparseMatrix<S> {
        if n >= self.lo {
            if let Some(d) = self.diffs.get((n - self.lo) as usize) {
                return d.clone();
            }
        }
        SparseMatrix::zeros(self.dim(n + 1), self.dim(n))
    }

    pub(crate) fn diff_ref(&self, n: i32) -> Option<&SparseMatrix<S>> {
        if n < self.lo {
            return None;
        }
        self.diffs.get((n - self.lo) as usize)
    }

    /// Checks `d^{n+1} ∘ d^n = 0` in every degree.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for w in 0..self.diffs.len().saturating_sub(1) {
            if !self.diffs[w + 1].mul(&self.diffs[w]).is_zero() {
                return Err(ComplexError::NotAComplex(self.lo + w as i32));
            }
        }
        Ok(())
    }

    /// Truncation level recorded by [`complete`], if any.
    pub fn completed_at(&self) -> Option<&Rational> {
        self.completed_at.as_ref()
    }

    pub(crate) fn set_completed_at(&mut self, e: Option<Rational>) {
        self.completed_at = e;
    }

    /// Same complex with the support widened to include `[lo, hi]`.
    pub fn widen(&self, lo: i32, hi: i32) -> Self {
        let (a, b) = match self.support() {
            Some((a, b)) => (a.min(lo), b.max(hi)),
            None => (lo, hi),
        };
        if a > b {
            return self.clone();
        }
        let dims: Vec<usize> = (a..=b).map(|n| self.dim(n)).collect();
        let diffs = (a..b).map(|n| self.diff(n)).collect();
        Complex { ring: self.ring.clone(), lo: a, dims, diffs, completed_at: self.completed_at.clone() }
    }

    /// Drops zero-dimensional degrees at both ends.
    pub fn trimmed(&self) -> Self {
        let first = self.dims.iter().position(|d| *d > 0);
        let last = self.dims.iter().rposition(|d| *d > 0);
        match (first, last) {
            (Some(f), Some(l)) => Complex {
                ring: self.ring.clone(),
                lo: self.lo + f as i32,
                dims: self.dims[f..=l].to_vec(),
                diffs: self.diffs[f..l].to_vec(),
                completed_at: self.completed_at.clone(),
            },
            _ => Complex { completed_at: self.completed_at.clone(), ..Self::zero(self.ring.clone()) },
        }
    }

    /// Applies a change of basis `g_n` in every degree: `d'^n = g_{n+1} d^n g_n^{-1}`.
    /// The caller supplies both `g` and its inverse.
    pub fn conjugate(&self, g: &BTreeMap<i32, (SparseMatrix<S>, SparseMatrix<S>)>) -> Self {
        let mut out = self.clone();
        for n in self.degrees().take(self.diffs.len()) {
            let d = self.diff(n);
            let left = g.get(&(n + 1)).map(|p| p.0.clone());
            let right = g.get(&n).map(|p| p.1.clone());
            let mut m = d;
            if let Some(r) = right {
                m = m.mul(&r);
            }
            if let Some(l) = left {
                m = l.mul(&m);
            }
            out.diffs[(n - self.lo) as usize] = m;
        }
        out
    }
}

/// A family of maps `C^n → D^{n+shift}`.
///
/// For `shift = s` the compatibility condition is `f ∘ d_C = (−1)^s d_D ∘ f`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap<S: Coeff> {
    source: Complex<S>,
    target: Complex<S>,
    shift: i32,
    maps: BTreeMap<i32, SparseMatrix<S>>,
}

impl<S: Coeff> ChainMap<S> {
    /// Checks shapes (not commutation; see [`ChainMap::validate`]). Missing
    /// degrees are zero maps; zero matrices are not stored.
    pub fn new(
        source: Complex<S>,
        target: Complex<S>,
        shift: i32,
        maps: BTreeMap<i32, SparseMatrix<S>>,
    ) -> Result<Self, ComplexError> {
        if source.ring() != target.ring() {
            return Err(ComplexError::RingMismatch);
        }
        let mut kept = BTreeMap::new();
        for (n, m) in maps {
            let want = (target.dim(n + shift), source.dim(n));
            if m.shape() != want {
                return Err(ComplexError::ShapeMismatch(format!(
                    "map in degree {n} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    want.0,
                    want.1
                )));
            }
            if !m.is_zero() {
                kept.insert(n, m);
            }
        }
        Ok(ChainMap { source, target, shift, maps: kept })
    }

    pub fn identity(c: &Complex<S>) -> Self {
        let maps = c.degrees().map(|n| (n, SparseMatrix::identity(c.dim(n), c.ring()))).collect();
        ChainMap::new(c.clone(), c.clone(), 0, maps).expect("identity shapes")
    }

    pub fn zero(source: &Complex<S>, target: &Complex<S>) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), shift: 0, maps: BTreeMap::new() }
    }

    pub fn source(&self) -> &Complex<S> {
        &self.source
    }

    pub fn target(&self) -> &Complex<S> {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// The component `C^n → D^{n+shift}`.
    pub fn map(&self, n: i32) -> SparseMatrix<S> {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.target.dim(n + self.shift), self.source.dim(n)))
    }

    /// Nonzero components, keyed by source degree.
    pub fn components(&self) -> &BTreeMap<i32, SparseMatrix<S>> {
        &self.maps
    }

    /// Checks `f ∘ d = (−1)^shift d ∘ f` in every degree.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let (lo, hi) = match (self.source.support(), self.target.support()) {
            (Some(a), Some(b)) => (a.0.min(b.0 - self.shift) - 1, a.1.max(b.1 - self.shift)),
            _ => return Ok(()),
        };
        let sign_odd = self.shift.rem_euclid(2) == 1;
        for n in lo..=hi {
            let lhs = self.map(n + 1).mul(&self.source.diff(n));
            let mut rhs = self.target.diff(n + self.shift).mul(&self.map(n));
            if sign_odd {
                rhs = rhs.neg();
            }
            if lhs != rhs {
                return Err(ComplexError::NotAChainMap(n));
            }
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap<S>) -> Result<ChainMap<S>, ComplexError> {
        if self.target.dims_signature() != other.source.dims_signature() {
            return Err(ComplexError::ShapeMismatch("composable maps need matching complexes".into()));
        }
        let maps = self
            .maps
            .iter()
            .map(|(n, m)| (*n, other.map(n + self.shift).mul(m)))
            .collect();
        ChainMap::new(self.source.clone(), other.target.clone(), self.shift + other.shift, maps)
    }

    /// `self + sign·other` for maps between the same complexes.
    pub fn combine(&self, other: &ChainMap<S>, subtract: bool) -> Result<ChainMap<S>, ComplexError> {
        if self.shift != other.shift
            || self.source.dims_signature() != other.source.dims_signature()
            || self.target.dims_signature() != other.target.dims_signature()
        {
            return Err(ComplexError::ShapeMismatch("maps have different shapes".into()));
        }
        let keys: std::collections::BTreeSet<i32> = self.maps.keys().chain(other.maps.keys()).copied().collect();
        let maps = keys
            .into_iter()
            .map(|n| {
                let (a, b) = (self.map(n), other.map(n));
                (n, if subtract { a.sub(&b) } else { a.add(&b) })
            })
            .collect();
        ChainMap::new(self.source.clone(), self.target.clone(), self.shift, maps)
    }

    /// `true` if every component is square and invertible. Requires
    /// field coefficients; see [`HomologyCoeff::rank_of`].
    pub fn is_bijective(&self) -> bool
    where
        S: HomologyCoeff,
    {
        let degs: std::collections::BTreeSet<i32> =
            self.source.degrees().chain(self.target.degrees().map(|n| n - self.shift)).collect();
        degs.into_iter().all(|n| {
            let m = self.map(n);
            m.nrows() == m.ncols() && S::rank_of(&m) == Some(m.ncols())
        })
    }
}

impl<S: Coeff> Complex<S> {
    /// `(lo, dims)` after trimming — two complexes with equal signatures have
    /// the same underlying graded module.
    pub(crate) fn dims_signature(&self) -> Vec<(i32, usize)> {
        self.degrees().map(|n| (n, self.dim(n))).filter(|(_, d)| *d > 0).collect()
    }
}
