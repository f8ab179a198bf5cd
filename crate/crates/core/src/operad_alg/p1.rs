//! Polyvector fields on the two-chart cover of ℙ¹: `O_1 = ℚ[x]`,
//! `O_2 = ℚ[y]`, `O_12 = ℚ[x, 1/x]` with `y = 1/x`, `∂_y = −x²∂_x`.
//!
//! Everything is graded by the torus weight (`x` has weight 1, `∂_x`
//! weight −1), which the gluing preserves; truncating to weights in
//! `[−D, D]` therefore cuts out a direct summand of the Čech complex.

use std::collections::BTreeMap;

use serde::Serialize;

use super::bv::PolyvectorBv;
use super::cdga::{CdgaPresheaf, MulTable};
use super::polyvector::{PolyRing, Polyvector, PvMonomial};
use super::{OperadError, Vector};
use crate::complexes::{homology, ChainMap, Complex};
use crate::descent::{cech, covering_pairs, CoverPresheaf, TOP};
use crate::linalg::SparseMatrix;
use crate::scalars::Rational;

pub const CHART_X: u32 = 0b01;
pub const CHART_Y: u32 = 0b10;
pub const OVERLAP: u32 = 0b11;

/// `x^a ξ^k ↦ (−1)^k y^{2k−a} η^k`; the same formula maps back.
pub fn change_chart(m: &PvMonomial) -> (PvMonomial, bool) {
    let k = m.degree() as i32;
    (PvMonomial { exps: vec![2 * k - m.exps[0]], xi: m.xi }, k % 2 == 1)
}

/// Torus weight of a monomial written in the `x` coordinate.
pub fn weight(m: &PvMonomial) -> i32 {
    m.exps[0] - m.degree() as i32
}

fn mono(a: i32, k: usize) -> PvMonomial {
    PvMonomial { exps: vec![a], xi: if k == 1 { 1 } else { 0 } }
}

/// Basis of `F(J)` in polyvector degree `k`, in the chart's own coordinate.
fn basis(j: u32, k: usize, d: i32) -> Vec<PvMonomial> {
    match (j, k) {
        (TOP, 0) => vec![mono(0, 0)],
        (TOP, _) => (0..=2).map(|a| mono(a, 1)).collect(),
        // y^b η^k has weight k − b, so the y chart has the same exponent ranges
        (CHART_X | CHART_Y, 0) => (0..=d).map(|a| mono(a, 0)).collect(),
        (CHART_X | CHART_Y, _) => (0..=d + 1).map(|a| mono(a, 1)).collect(),
        (_, 0) => (-d..=d).map(|a| mono(a, 0)).collect(),
        _ => (1 - d..=d + 1).map(|a| mono(a, 1)).collect(),
    }
}

fn ring(j: u32) -> PolyRing {
    match j {
        CHART_X | CHART_Y => PolyRing::polynomial(1),
        _ => PolyRing::laurent(1),
    }
}

/// Moves a monomial of `F(from)` into the coordinate of `F(to)`.
fn transport(from: u32, to: u32, m: &PvMonomial) -> (PvMonomial, bool) {
    let in_y = |j: u32| j == CHART_Y;
    if in_y(from) != in_y(to) {
        change_chart(m)
    } else {
        (m.clone(), false)
    }
}

#[derive(Clone, Debug)]
pub struct P1Polyvectors {
    pub cutoff: i32,
    pub cdga: CdgaPresheaf,
    bases: BTreeMap<(u32, usize), Vec<PvMonomial>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaDiscrepancy {
    pub from: String,
    pub checked: usize,
    pub mismatched: usize,
    /// `Δ(r(s)) − r(Δ s)` for the first mismatch, in the overlap coordinate.
    pub example: Option<(String, String)>,
}

/// The polyvector presheaf with torus weights in `[−D, D]`, `D ≥ 3`.
pub fn p1_polyvector_presheaf(d: i32) -> Result<P1Polyvectors, OperadError> {
    if d < 3 {
        return Err(OperadError::OutOfWindow(format!("Laurent cutoff {d} < 3")));
    }
    let masks = [TOP, CHART_X, CHART_Y, OVERLAP];
    let bases: BTreeMap<(u32, usize), Vec<PvMonomial>> =
        masks.iter().flat_map(|j| (0..2).map(move |k| ((*j, k), basis(*j, k, d)))).collect();
    let value = |j: u32| Complex::new((), 0, vec![bases[&(j, 0)].len(), bases[&(j, 1)].len()], vec![SparseMatrix::zeros(bases[&(j, 1)].len(), bases[&(j, 0)].len())]).expect("shapes");
    let values: BTreeMap<u32, Complex<Rational>> = masks.iter().map(|j| (*j, value(*j))).collect();
    let mut restrictions = BTreeMap::new();
    for (a, b) in covering_pairs(2) {
        let mut maps = BTreeMap::new();
        for k in 0..2 {
            let tgt = &bases[&(b, k)];
            let trip: Vec<_> = bases[&(a, k)]
                .iter()
                .enumerate()
                .map(|(c, m)| {
                    let (img, neg) = transport(a, b, m);
                    let r = tgt.iter().position(|t| *t == img).ok_or_else(|| OperadError::OutOfWindow(format!("{m:?} restricted to {b}")))?;
                    Ok((r, c, if neg { -Rational::one() } else { Rational::one() }))
                })
                .collect::<Result<_, OperadError>>()?;
            maps.insert(k as i32, SparseMatrix::from_triplets(tgt.len(), bases[&(a, k)].len(), trip));
        }
        restrictions.insert((a, b), ChainMap::new(values[&a].clone(), values[&b].clone(), 0, maps)?);
    }
    let presheaf = CoverPresheaf::new(2, values, restrictions)?;
    let mut products = BTreeMap::new();
    let mut units = BTreeMap::new();
    for j in masks {
        let r = ring(j);
        let mut t = MulTable::new();
        for k1 in 0..2 {
            for (i, m1) in bases[&(j, k1)].iter().enumerate() {
                for k2 in 0..2 - k1 {
                    for (i2, m2) in bases[&(j, k2)].iter().enumerate() {
                        let p = Polyvector::monomial(r, m1.clone(), 1.into())?.wedge(&Polyvector::monomial(r, m2.clone(), 1.into())?)?;
                        let (mm, c) = p.terms().next().expect("monomials multiply to a monomial");
                        let tgt = &bases[&(j, k1 + k2)];
                        let v = tgt.iter().position(|t| t == mm).map(|idx| vec![(idx, c.clone())]);
                        t.set((k1 as i32, i), (k2 as i32, i2), v);
                    }
                }
            }
        }
        products.insert(j, t);
        let unit = bases[&(j, 0)].iter().position(|m| m.exps[0] == 0).expect("constants are in the window");
        units.insert(j, vec![(unit, Rational::one())]);
    }
    let cdga = CdgaPresheaf::new(presheaf, products, units)?;
    Ok(P1Polyvectors { cutoff: d, cdga, bases })
}

impl P1Polyvectors {
    pub fn basis(&self, j: u32, k: usize) -> &[PvMonomial] {
        &self.bases[&(j, k)]
    }

    pub fn ring(&self, j: u32) -> PolyRing {
        ring(j)
    }

    /// Basis vector `i` of `F(J)^k` as a polyvector in the chart coordinate.
    pub fn element(&self, j: u32, k: usize, i: usize) -> Polyvector {
        Polyvector::monomial(ring(j), self.bases[&(j, k)][i].clone(), 1.into()).expect("basis lies in the ring")
    }

    /// Coordinates of a polyvector of degree `k` in the basis of `F(J)^k`.
    pub fn coords(&self, j: u32, k: usize, p: &Polyvector) -> Result<Vector, OperadError> {
        let basis = &self.bases[&(j, k)];
        p.terms()
            .map(|(m, c)| {
                basis
                    .iter()
                    .position(|b| b == m)
                    .map(|i| (i, c.clone()))
                    .ok_or_else(|| OperadError::OutOfWindow(format!("{m:?} on {}", crate::descent::label(j))))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|mut v| {
                v.sort_by_key(|e| e.0);
                v
            })
    }

    /// The divergence BV structure of a chart or of the overlap, on the
    /// truncated basis.
    pub fn bv(&self, j: u32) -> PolyvectorBv {
        let basis = (0..2).flat_map(|k| self.bases[&(j, k)].iter().cloned()).collect();
        PolyvectorBv::with_basis(ring(j), basis)
    }

    /// Compares `Δ_{12} ∘ r` with `r ∘ Δ_j` on the degree-1 basis of chart
    /// `j`. The two divergences use different volume forms, so they need
    /// not agree; the mismatch is reported rather than asserted.
    pub fn delta_discrepancy(&self, j: u32) -> Result<DeltaDiscrepancy, OperadError> {
        let r = self.cdga.presheaf().restriction(j, OVERLAP);
        let mut mismatched = 0;
        let mut example = None;
        let basis = &self.bases[&(j, 1)];
        for i in 0..basis.len() {
            let s = self.element(j, 1, i);
            let rs = r.map(1).apply(&[(i, Rational::one())]);
            let rs_pv = self.polyvector(OVERLAP, 1, &rs);
            let lhs = rs_pv.bv_delta();
            let ds = self.coords(j, 0, &s.bv_delta())?;
            let rhs = self.polyvector(OVERLAP, 0, &r.map(0).apply(&ds));
            if lhs != rhs {
                mismatched += 1;
                if example.is_none() {
                    example = Some((s.to_string(), lhs.sub(&rhs).to_string()));
                }
            }
        }
        Ok(DeltaDiscrepancy { from: crate::descent::label(j), checked: basis.len(), mismatched, example })
    }

    pub fn polyvector(&self, j: u32, k: usize, v: &[(usize, Rational)]) -> Polyvector {
        v.iter().fold(Polyvector::zero(ring(j)), |acc, (i, c)| acc.add(&self.element(j, k, *i).scale(c)))
    }

    /// The sub-presheaf of polyvectors of degree `k`, placed in degree 0.
    pub fn degree_part(&self, k: usize) -> Result<CoverPresheaf, OperadError> {
        let f = self.cdga.presheaf();
        let value = |j: u32| {
            let d = self.bases[&(j, k)].len();
            if d == 0 {
                Complex::zero(())
            } else {
                Complex::concentrated((), 0, d)
            }
        };
        let values: BTreeMap<u32, Complex<Rational>> = f.values().keys().map(|j| (*j, value(*j))).collect();
        let mut restrictions = BTreeMap::new();
        for (a, b) in covering_pairs(2) {
            let m = f.restriction(a, b).map(k as i32);
            restrictions.insert((a, b), ChainMap::new(values[&a].clone(), values[&b].clone(), 0, BTreeMap::from([(0, m)]))?);
        }
        Ok(CoverPresheaf::new(2, values, restrictions)?)
    }

    /// Čech Betti numbers `k ↦ (p ↦ dim Ȟ^p)` of the degree-`k` polyvectors.
    pub fn cohomology(&self) -> Result<BTreeMap<usize, BTreeMap<i32, usize>>, OperadError> {
        (0..2)
            .map(|k| {
                let c = cech(&self.degree_part(k)?)?;
                let mut b = homology(c.complex()).betti();
                b.retain(|_, v| *v > 0);
                Ok((k, b))
            })
            .collect()
    }
}
