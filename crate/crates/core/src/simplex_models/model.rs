//! Finite bases for the two simplex models, as used by the totalisations.

use std::collections::HashMap;

use super::inj::faces;
use super::{InjMap, Monomial, NCochain, PolyForm};
use crate::linalg::SparseMatrix;
use crate::scalars::Rational;

/// A semi-cosimplicial cochain complex `p ↦ M(Δ^p)` with a chosen basis
/// in each bidegree `(p, k)`.
pub trait SimplexModel: Sync {
    fn name(&self) -> String;

    /// Highest form/cochain degree on `Δ^p`.
    fn max_degree(&self, p: usize) -> usize {
        p
    }

    fn dim(&self, p: usize, k: usize) -> usize;

    /// `d: M^k(Δ^p) → M^{k+1}(Δ^p)`.
    fn differential(&self, p: usize, k: usize) -> SparseMatrix<Rational>;

    /// Pullback `f^*: M^k(Δ^q) → M^k(Δ^r)` along `f: Δ^r → Δ^q`.
    fn pullback(&self, f: &InjMap, k: usize) -> SparseMatrix<Rational>;

    /// Coordinates of the unit (the constant function 1) in `M^0(Δ^p)`.
    fn unit(&self, p: usize) -> Vec<(usize, Rational)>;
}

/// Normalized cochains, basis = faces in ascending bitmask order.
#[derive(Clone, Debug, Default)]
pub struct NcModel;

impl NcModel {
    pub fn basis(p: usize, k: usize) -> Vec<u32> {
        faces(p, k)
    }

    pub fn to_vector(x: &NCochain, k: usize) -> Vec<(usize, Rational)> {
        let basis = Self::basis(x.dim(), k);
        x.homogeneous(k).values().map(|(f, v)| (basis.binary_search(&f).expect("face of right size"), v.clone())).collect()
    }

    pub fn from_vector(p: usize, k: usize, v: &[(usize, Rational)]) -> NCochain {
        let basis = Self::basis(p, k);
        v.iter().fold(NCochain::zero(p), |acc, (i, c)| acc.add(&NCochain::from_face(p, basis[*i], c.clone())))
    }
}

fn cochain_matrix(
    src_basis: &[u32],
    src_p: usize,
    tgt_basis: &[u32],
    op: impl Fn(&NCochain) -> NCochain,
) -> SparseMatrix<Rational> {
    let tgt_index: HashMap<u32, usize> = tgt_basis.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut trip = Vec::new();
    for (j, f) in src_basis.iter().enumerate() {
        let y = op(&NCochain::from_face(src_p, *f, Rational::one()));
        for (g, v) in y.values() {
            trip.push((tgt_index[&g], j, v.clone()));
        }
    }
    SparseMatrix::from_triplets(tgt_basis.len(), src_basis.len(), trip)
}

impl SimplexModel for NcModel {
    fn name(&self) -> String {
        "normalized cochains".into()
    }

    fn dim(&self, p: usize, k: usize) -> usize {
        Self::basis(p, k).len()
    }

    fn differential(&self, p: usize, k: usize) -> SparseMatrix<Rational> {
        cochain_matrix(&Self::basis(p, k), p, &Self::basis(p, k + 1), NCochain::differential)
    }

    fn pullback(&self, f: &InjMap, k: usize) -> SparseMatrix<Rational> {
        let r = f.source_dim() as usize;
        cochain_matrix(&Self::basis(f.target_dim(), k), f.target_dim(), &Self::basis(r, k), |x| {
            x.pullback(f).expect("matching simplex")
        })
    }

    fn unit(&self, p: usize) -> Vec<(usize, Rational)> {
        Self::to_vector(&NCochain::unit(p), 0)
    }
}

/// Polynomial forms of weight `≤ cutoff` (polynomial degree plus form degree).
#[derive(Clone, Debug)]
pub struct FormModel {
    pub cutoff: usize,
}

/// Exponent vectors in `p` variables with total degree `≤ d`, in a fixed order.
fn exponent_vectors(p: usize, d: usize) -> Vec<Vec<u32>> {
    if p == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in exponent_vectors(p - 1, d - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

impl FormModel {
    pub fn new(cutoff: usize) -> Self {
        FormModel { cutoff }
    }

    /// Monomials `t^a dt_I` with `|I| = k` and weight `≤ cutoff`.
    pub fn basis(&self, p: usize, k: usize) -> Vec<Monomial> {
        if k > p || k > self.cutoff {
            return Vec::new();
        }
        let masks: Vec<u32> = (0u32..1 << p).filter(|m| m.count_ones() as usize == k).collect();
        let mut out = Vec::new();
        for dt in masks {
            for exps in exponent_vectors(p, self.cutoff - k) {
                out.push(Monomial { exps, dt });
            }
        }
        out
    }

    pub fn to_vector(&self, w: &PolyForm, k: usize) -> Vec<(usize, Rational)> {
        let index: HashMap<Monomial, usize> = self.basis(w.dim(), k).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        w.terms()
            .filter(|(m, _)| m.form_degree() == k)
            .map(|(m, c)| (*index.get(m).expect("form exceeds the weight cutoff"), c.clone()))
            .collect()
    }

    pub fn from_vector(&self, p: usize, k: usize, v: &[(usize, Rational)]) -> PolyForm {
        let basis = self.basis(p, k);
        v.iter().fold(PolyForm::zero(p), |acc, (i, c)| acc.add(&PolyForm::monomial(p, basis[*i].clone(), c.clone())))
    }

    fn matrix(&self, src_p: usize, k_src: usize, tgt_p: usize, k_tgt: usize, op: impl Fn(&PolyForm) -> PolyForm) -> SparseMatrix<Rational> {
        let src = self.basis(src_p, k_src);
        let tgt = self.basis(tgt_p, k_tgt);
        let index: HashMap<&Monomial, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut trip = Vec::new();
        for (j, m) in src.iter().enumerate() {
            let y = op(&PolyForm::monomial(src_p, m.clone(), Rational::one()));
            for (mm, c) in y.terms() {
                let i = index.get(mm).expect("operation preserves the weight filtration");
                trip.push((*i, j, c.clone()));
            }
        }
        SparseMatrix::from_triplets(tgt.len(), src.len(), trip)
    }
}

impl SimplexModel for FormModel {
    fn name(&self) -> String {
        format!("polynomial forms of weight <= {}", self.cutoff)
    }

    fn dim(&self, p: usize, k: usize) -> usize {
        self.basis(p, k).len()
    }

    fn differential(&self, p: usize, k: usize) -> SparseMatrix<Rational> {
        self.matrix(p, k, p, k + 1, PolyForm::differential)
    }

    fn pullback(&self, f: &InjMap, k: usize) -> SparseMatrix<Rational> {
        let r = f.source_dim() as usize;
        self.matrix(f.target_dim(), k, r, k, |w| w.pullback(f).expect("matching simplex"))
    }

    fn unit(&self, p: usize) -> Vec<(usize, Rational)> {
        self.to_vector(&PolyForm::constant(p, Rational::one()), 0)
    }
}

/// Integration `I: Ω^{≤P}(Δ^p) → NC(Δ^p)` in degree `k`, as a matrix.
pub fn integration_matrix(model: &FormModel, p: usize, k: usize) -> SparseMatrix<Rational> {
    let src = model.basis(p, k);
    let tgt = NcModel::basis(p, k);
    let mut trip = Vec::new();
    for (j, m) in src.iter().enumerate() {
        let x = PolyForm::monomial(p, m.clone(), Rational::one()).integration_cochain();
        for (i, v) in NcModel::to_vector(&x, k) {
            trip.push((i, j, v));
        }
    }
    SparseMatrix::from_triplets(tgt.len(), src.len(), trip)
}

/// Whitney map `E: NC(Δ^p) → Ω^{≤P}(Δ^p)` in degree `k`, as a matrix.
pub fn whitney_matrix(model: &FormModel, p: usize, k: usize) -> SparseMatrix<Rational> {
    let src = NcModel::basis(p, k);
    let mut cols = Vec::new();
    for f in &src {
        let w = PolyForm::whitney_face(p, *f);
        cols.push(model.to_vector(&w, k));
    }
    SparseMatrix::from_columns(model.dim(p, k), &cols)
}

/// Largest weight of a Whitney form on `Δ^p`.
pub fn whitney_weight(p: usize) -> usize {
    (0..=p).flat_map(|k| faces(p, k)).map(|f| PolyForm::whitney_face(p, f).weight()).max().unwrap_or(0)
}
