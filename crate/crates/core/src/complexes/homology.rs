use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{cone, ChainMap, Complex, ComplexError};
use crate::exec::Execution;
use crate::linalg::{kernel, rank, SparseMatrix};
use crate::scalars::{Coeff, NovikovElem, NovikovRing, Rational};

/// Homology of one degree: `free_rank` copies of the coefficient ring plus a
/// cyclic torsion summand `R/(T^a)` for each `a` in `torsion`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub degree: i32,
    pub free_rank: usize,
    pub torsion: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub ring: String,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyReport {
    pub fn free_rank(&self, n: i32) -> usize {
        self.degrees.iter().find(|d| d.degree == n).map_or(0, |d| d.free_rank)
    }

    pub fn torsion(&self, n: i32) -> &[Rational] {
        self.degrees.iter().find(|d| d.degree == n).map_or(&[], |d| &d.torsion)
    }

    /// Nonzero free ranks by degree (Betti numbers over a field).
    pub fn betti(&self) -> BTreeMap<i32, usize> {
        self.degrees.iter().filter(|d| d.free_rank > 0).map(|d| (d.degree, d.free_rank)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.free_rank == 0 && d.torsion.is_empty())
    }

    /// Alternating sum of free ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|d| if d.degree.rem_euclid(2) == 0 { d.free_rank as i64 } else { -(d.free_rank as i64) })
            .sum()
    }
}

impl fmt::Display for HomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "homology over {}", self.ring)?;
        writeln!(f, "{:>6}  {:>9}  torsion", "degree", "free rank")?;
        for d in &self.degrees {
            let tors: Vec<String> = d.torsion.iter().map(|a| format!("T^({a})")).collect();
            let tors = if tors.is_empty() { "-".to_string() } else { tors.join(", ") };
            writeln!(f, "{:>6}  {:>9}  {}", d.degree, d.free_rank, tors)?;
        }
        Ok(())
    }
}

/// Outcome of a quasi-isomorphism test over a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoCertificate {
    pub is_quasi_iso: bool,
    /// Lowest degree in which `H(f)` is not an isomorphism.
    pub witness_degree: Option<i32>,
    pub source_betti: BTreeMap<i32, usize>,
    pub target_betti: BTreeMap<i32, usize>,
    /// Rank of `H^n(f)` by degree.
    pub map_rank: BTreeMap<i32, usize>,
    /// Betti numbers of the cone (all zero iff quasi-isomorphism).
    pub cone_betti: BTreeMap<i32, usize>,
}

/// Coefficient rings with a homology algorithm.
pub trait HomologyCoeff: Coeff {
    /// Rank of a matrix, when the ring is a field.
    fn rank_of(m: &SparseMatrix<Self>) -> Option<usize>;

    fn homology_with(c: &Complex<Self>, exec: Execution) -> HomologyReport;

    /// Module type of the image of `H(f)` inside `H(target)`.
    fn image_homology_with(f: &ChainMap<Self>, exec: Execution) -> HomologyReport;

    fn quasi_iso_with(f: &ChainMap<Self>, exec: Execution) -> Result<QuasiIsoCertificate, ComplexError>;

    /// Truncation level of the ring, if it is a truncated ring.
    fn truncation(ring: &Self::Ring) -> Option<Rational>;

    /// `dim_ℚ` of the ring.
    fn rational_dim(ring: &Self::Ring) -> usize;
}

pub fn homology<S: HomologyCoeff>(c: &Complex<S>) -> HomologyReport {
    S::homology_with(c, Execution::best())
}

pub fn image_homology<S: HomologyCoeff>(f: &ChainMap<S>) -> HomologyReport {
    S::image_homology_with(f, Execution::best())
}

/// Certifies `f` as a quasi-isomorphism by acyclicity of its cone, with a
/// per-degree Betti comparison as witness. Field coefficients only.
pub fn is_quasi_iso<S: HomologyCoeff>(f: &ChainMap<S>) -> Result<QuasiIsoCertificate, ComplexError> {
    S::quasi_iso_with(f, Execution::best())
}

fn rational_ranks(c: &Complex<Rational>, exec: Execution) -> BTreeMap<i32, usize> {
    let degs: Vec<i32> = c.degrees().collect();
    let ranks = exec.map(&degs, |n| c.diff_ref(*n).map_or(0, rank));
    degs.into_iter().zip(ranks).collect()
}

fn rational_image_ranks(f: &ChainMap<Rational>, exec: Execution) -> BTreeMap<i32, usize> {
    let degs: Vec<i32> = f.source().degrees().collect();
    let ranks = exec.map(&degs, |n| {
        let n = *n;
        let (src, tgt) = (f.source(), f.target());
        let z = kernel(&src.diff(n)).basis;
        let fz = f.map(n).mul(&z);
        let b = tgt.diff(n + f.shift() - 1);
        rank(&b.hstack(&fz)) - rank(&b)
    });
    degs.into_iter().zip(ranks).collect()
}

impl HomologyCoeff for Rational {
    fn rank_of(m: &SparseMatrix<Self>) -> Option<usize> {
        Some(rank(m))
    }

    fn homology_with(c: &Complex<Self>, exec: Execution) -> HomologyReport {
        let ranks = rational_ranks(c, exec);
        let degrees = c
            .degrees()
            .map(|n| {
                let r_out = ranks.get(&n).copied().unwrap_or(0);
                let r_in = ranks.get(&(n - 1)).copied().unwrap_or(0);
                DegreeHomology { degree: n, free_rank: c.dim(n) - r_out - r_in, torsion: Vec::new() }
            })
            .collect();
        HomologyReport { ring: "Q".into(), degrees }
    }

    fn image_homology_with(f: &ChainMap<Self>, exec: Execution) -> HomologyReport {
        let ranks = rational_image_ranks(f, exec);
        let degrees = ranks
            .into_iter()
            .map(|(n, r)| DegreeHomology { degree: n + f.shift(), free_rank: r, torsion: Vec::new() })
            .collect();
        HomologyReport { ring: "Q".into(), degrees }
    }

    fn quasi_iso_with(f: &ChainMap<Self>, exec: Execution) -> Result<QuasiIsoCertificate, ComplexError> {
        if f.shift() != 0 {
            return Err(ComplexError::ShapeMismatch("quasi-isomorphism test needs a degree-0 map".into()));
        }
        let hc = Self::homology_with(f.source(), exec);
        let hd = Self::homology_with(f.target(), exec);
        let map_rank: BTreeMap<i32, usize> =
            rational_image_ranks(f, exec).into_iter().filter(|(_, r)| *r > 0).collect();
        let cone_h = Self::homology_with(&cone(f)?.complex, exec);
        let (sb, tb) = (hc.betti(), hd.betti());
        let degs: std::collections::BTreeSet<i32> = sb.keys().chain(tb.keys()).copied().collect();
        let witness_degree = degs.into_iter().find(|n| {
            let (a, b, r) = (sb.get(n).copied().unwrap_or(0), tb.get(n).copied().unwrap_or(0), map_rank.get(n).copied().unwrap_or(0));
            a != r || b != r
        });
        let is_quasi_iso = cone_h.is_zero();
        debug_assert_eq!(is_quasi_iso, witness_degree.is_none());
        Ok(QuasiIsoCertificate {
            is_quasi_iso,
            witness_degree,
            source_betti: sb,
            target_betti: tb,
            map_rank,
            cone_betti: cone_h.betti(),
        })
    }

    fn truncation(_: &()) -> Option<Rational> {
        None
    }

    fn rational_dim(_: &()) -> usize {
        1
    }
}

/// `ℚ`-matrix of a map of free `ℚ[u]/(u^M)`-modules, `u = T^(1/den)`.
/// Basis vector `i·M + j` is `u^j e_i`.
pub fn expand_novikov(m: &SparseMatrix<NovikovElem>, ring: &NovikovRing) -> SparseMatrix<Rational> {
    let levels = ring.levels() as usize;
    let mut trip = Vec::new();
    for (r, c, v) in m.entries() {
        for (k, coeff) in v.terms() {
            let k = k as usize;
            for j in 0..levels.saturating_sub(k) {
                trip.push((r * levels + j + k, c * levels + j, coeff.clone()));
            }
        }
    }
    SparseMatrix::from_triplets(m.nrows() * levels, m.ncols() * levels, trip)
}

/// Multiplies every column of an expanded vector family by `u^j`.
fn u_power(v: &SparseMatrix<Rational>, j: usize, levels: usize) -> SparseMatrix<Rational> {
    let trip = v
        .entries()
        .filter(|(r, _, _)| r % levels + j < levels)
        .map(|(r, c, x)| (r + j, c, x.clone()))
        .collect::<Vec<_>>();
    SparseMatrix::from_triplets(v.nrows(), v.ncols(), trip)
}

/// Cyclic decomposition of the submodule `(span(gens) + B)/B`.
///
/// With `ℓ_j = dim_ℚ u^j·(gens + B)/B`, the number of summands `R/(u^k)` is
/// `(ℓ_{k−1} − ℓ_k) − (ℓ_k − ℓ_{k+1})`.
fn cyclic_type(gens: &SparseMatrix<Rational>, b: &SparseMatrix<Rational>, ring: &NovikovRing) -> (usize, Vec<Rational>) {
    let levels = ring.levels() as usize;
    let rb = rank(b);
    let mut ell: Vec<usize> = (0..levels).map(|j| rank(&b.hstack(&u_power(gens, j, levels))) - rb).collect();
    ell.push(0);
    ell.push(0);
    let mut free = 0;
    let mut torsion = Vec::new();
    for k in 1..=levels {
        let count = (ell[k - 1] - ell[k]) - (ell[k] - ell[k + 1]);
        if k == levels {
            free = count;
        } else {
            torsion.extend(std::iter::repeat_n(ring.exponent(k as u32), count));
        }
    }
    (free, torsion)
}

impl HomologyCoeff for NovikovElem {
    fn rank_of(_: &SparseMatrix<Self>) -> Option<usize> {
        None
    }

    fn homology_with(c: &Complex<Self>, exec: Execution) -> HomologyReport {
        let ring = c.ring();
        let degs: Vec<i32> = c.degrees().collect();
        let degrees = exec.map(&degs, |n| {
            let n = *n;
            let z = kernel(&expand_novikov(&c.diff(n), ring)).basis;
            let b = expand_novikov(&c.diff(n - 1), ring);
            let (free_rank, torsion) = cyclic_type(&z, &b, ring);
            DegreeHomology { degree: n, free_rank, torsion }
        });
        HomologyReport { ring: ring.to_string(), degrees }
    }

    fn image_homology_with(f: &ChainMap<Self>, exec: Execution) -> HomologyReport {
        let ring = f.source().ring();
        let degs: Vec<i32> = f.source().degrees().collect();
        let degrees = exec.map(&degs, |n| {
            let n = *n;
            let z = kernel(&expand_novikov(&f.source().diff(n), ring)).basis;
            let fz = expand_novikov(&f.map(n), ring).mul(&z);
            let b = expand_novikov(&f.target().diff(n + f.shift() - 1), ring);
            let (free_rank, torsion) = cyclic_type(&fz, &b, ring);
            DegreeHomology { degree: n + f.shift(), free_rank, torsion }
        });
        HomologyReport { ring: ring.to_string(), degrees }
    }

    fn quasi_iso_with(f: &ChainMap<Self>, _: Execution) -> Result<QuasiIsoCertificate, ComplexError> {
        Err(ComplexError::UnsupportedRing(f.source().ring().to_string()))
    }

    fn truncation(ring: &NovikovRing) -> Option<Rational> {
        Some(ring.cutoff().clone())
    }

    fn rational_dim(ring: &NovikovRing) -> usize {
        ring.levels() as usize
    }
}
