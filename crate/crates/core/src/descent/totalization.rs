//! `Tot` and `TW` as explicit equalizers
//! `eq(∏_p D^p ⊗ M(Δ^p) ⇉ ∏_{p, i} D^{p+1} ⊗ M(Δ^p))`, computed as the
//! kernel of the difference `(d_i ⊗ id) − (id ⊗ δ_i^*)`.

use std::collections::BTreeMap;

use super::cosimplicial::{CechComplex, CosimplicialComplex};
use super::DescentError;
use crate::complexes::{ChainMap, Complex};
use crate::exec::Execution;
use crate::linalg::{kernel, Kernel, SparseMatrix};
use crate::scalars::Rational;
use crate::simplex_models::{integration_matrix, whitney_matrix, whitney_weight, FormModel, InjMap, NcModel, SimplexModel};

/// Which simplex model a totalization was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Cochains,
    Forms { cutoff: usize },
}

/// One block `(D^p)^{n−k} ⊗ M^k(Δ^p)` of the ambient product in degree `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Block {
    pub(crate) p: usize,
    pub(crate) k: usize,
    pub(crate) offset: usize,
    pub(crate) a_dim: usize,
    pub(crate) b_dim: usize,
}

#[derive(Clone, Debug)]
pub struct Totalization {
    pub complex: Complex<Rational>,
    pub kind: ModelKind,
    /// `D^{−1} → Tot`, when the input is augmented.
    pub augmentation: Option<ChainMap<Rational>>,
    layout: BTreeMap<i32, Vec<Block>>,
    ambient_dims: BTreeMap<i32, usize>,
    kernels: BTreeMap<i32, Kernel>,
}

fn layout(dc: &CosimplicialComplex, model: &dyn SimplexModel, n: i32) -> (Vec<Block>, usize) {
    let mut out = Vec::new();
    let mut offset = 0;
    for p in 0..dc.num_levels() {
        for k in 0..=model.max_degree(p) {
            let a_dim = dc.level(p).dim(n - k as i32);
            let b_dim = model.dim(p, k);
            out.push(Block { p, k, offset, a_dim, b_dim });
            offset += a_dim * b_dim;
        }
    }
    (out, offset)
}

fn find(blocks: &[Block], p: usize, k: usize) -> Option<&Block> {
    blocks.iter().find(|b| b.p == p && b.k == k)
}

/// Ambient differential `d(a ⊗ b) = da ⊗ b + (−1)^{|a|} a ⊗ db` in degree `n`.
fn ambient_diff(dc: &CosimplicialComplex, model: &dyn SimplexModel, src: &[Block], tgt: &[Block], n: i32, rows: usize, cols: usize) -> SparseMatrix<Rational> {
    let mut d = SparseMatrix::zeros(rows, cols);
    for b in src {
        if b.a_dim * b.b_dim == 0 {
            continue;
        }
        let deg_a = n - b.k as i32;
        if let Some(t) = find(tgt, b.p, b.k) {
            let da = dc.level(b.p).diff(deg_a);
            d.add_block(t.offset, b.offset, &da.kron(&SparseMatrix::identity(b.b_dim, &())));
        }
        if let Some(t) = find(tgt, b.p, b.k + 1) {
            let db = model.differential(b.p, b.k);
            let mut blk = SparseMatrix::identity(b.a_dim, &()).kron(&db);
            if deg_a.rem_euclid(2) == 1 {
                blk = blk.neg();
            }
            d.add_block(t.offset, b.offset, &blk);
        }
    }
    d
}

/// The equalizer constraint in degree `n`: for each `p`, `i`, `k` a block
/// row `(d_i ⊗ id) x_p − (id ⊗ δ_i^*) x_{p+1}` in `(D^{p+1})^{n−k} ⊗ M^k(Δ^p)`.
fn constraint(dc: &CosimplicialComplex, model: &dyn SimplexModel, blocks: &[Block], n: i32, cols: usize) -> SparseMatrix<Rational> {
    let mut trip = Vec::new();
    let mut row = 0;
    for p in 0..dc.num_levels().saturating_sub(1) {
        for i in 0..=p + 1 {
            let delta_i = InjMap::coface(p + 1, i);
            for k in 0..=model.max_degree(p) {
                let deg = n - k as i32;
                let rows_a = dc.level(p + 1).dim(deg);
                let b_dim = model.dim(p, k);
                if rows_a * b_dim == 0 {
                    continue;
                }
                if let Some(src) = find(blocks, p, k) {
                    let blk = dc.coface(p, i).map(deg).kron(&SparseMatrix::identity(b_dim, &()));
                    trip.extend(blk.entries().map(|(r, c, v)| (row + r, src.offset + c, v.clone())));
                }
                if let Some(src) = find(blocks, p + 1, k) {
                    let blk = SparseMatrix::identity(rows_a, &()).kron(&model.pullback(&delta_i, k));
                    trip.extend(blk.entries().map(|(r, c, v)| (row + r, src.offset + c, -v)));
                }
                row += rows_a * b_dim;
            }
        }
    }
    SparseMatrix::from_triplets(row, cols, trip)
}

/// Totalization of `dc` against any simplex model; independent degrees are
/// solved on `exec`.
pub fn totalize(dc: &CosimplicialComplex, model: &dyn SimplexModel, kind: ModelKind, exec: Execution) -> Result<Totalization, DescentError> {
    let top_level = dc.num_levels() - 1;
    let lo = (0..dc.num_levels()).filter_map(|p| dc.level(p).support().map(|s| s.0)).min();
    let hi = (0..dc.num_levels()).filter_map(|p| dc.level(p).support().map(|s| s.1)).max();
    let (lo, hi) = match (lo, hi) {
        (Some(a), Some(b)) => (a, b + top_level as i32),
        _ => (0, -1),
    };
    let degrees: Vec<i32> = (lo..=hi + 1).collect();
    let layouts: BTreeMap<i32, (Vec<Block>, usize)> = degrees.iter().map(|n| (*n, layout(dc, model, *n))).collect();
    let kernels: Vec<Kernel> = exec.map(&degrees, |n| {
        let (blocks, cols) = &layouts[n];
        kernel(&constraint(dc, model, blocks, *n, *cols))
    });
    let kernels: BTreeMap<i32, Kernel> = degrees.iter().copied().zip(kernels).collect();
    let inner: Vec<i32> = (lo..=hi).collect();
    let diffs: Vec<SparseMatrix<Rational>> = exec.map(&inner[..inner.len().saturating_sub(1)], |n| {
        let (src, cols) = &layouts[n];
        let (tgt, rows) = &layouts[&(n + 1)];
        let d = ambient_diff(dc, model, src, tgt, *n, *rows, *cols);
        kernels[&(n + 1)].coords_matrix(&d.mul(&kernels[n].basis))
    });
    let dims: Vec<usize> = inner.iter().map(|n| kernels[n].dim()).collect();
    let complex = if dims.is_empty() {
        Complex::zero(())
    } else {
        Complex::new((), lo, dims, diffs)?
    };
    let layout: BTreeMap<i32, Vec<Block>> = layouts.iter().map(|(n, (b, _))| (*n, b.clone())).collect();
    let ambient_dims = layouts.iter().map(|(n, (_, d))| (*n, *d)).collect();
    let mut out = Totalization { complex, kind, augmentation: None, layout, ambient_dims, kernels };
    if let Some(aug) = dc.augmentation() {
        out.augmentation = Some(out.augmentation_map(dc, model, aug.source())?);
    }
    Ok(out)
}

impl Totalization {
    pub(crate) fn blocks(&self, n: i32) -> &[Block] {
        self.layout.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub(crate) fn ambient_dim(&self, n: i32) -> usize {
        self.ambient_dims.get(&n).copied().unwrap_or(0)
    }

    /// The ambient vector of an element given in basis coordinates.
    pub(crate) fn to_ambient(&self, n: i32, x: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
        match self.kernels.get(&n) {
            Some(k) if self.complex.dim(n) > 0 => k.basis.apply(x),
            _ => Vec::new(),
        }
    }

    /// Basis coordinates of an ambient vector, which must lie in the equalizer.
    pub(crate) fn coords_of_ambient(&self, n: i32, v: &[(usize, Rational)]) -> Result<Vec<(usize, Rational)>, DescentError> {
        if v.is_empty() {
            return Ok(Vec::new());
        }
        let k = self
            .kernels
            .get(&n)
            .ok_or_else(|| DescentError::NotEqualized(format!("no equalizer in degree {n}")))?;
        let mut sorted: Vec<(usize, Rational)> = v.iter().filter(|e| !e.1.is_zero()).cloned().collect();
        sorted.sort_by_key(|e| e.0);
        let coords = k.coords(&sorted);
        let back = k.basis.apply(&coords);
        if back != sorted {
            return Err(DescentError::NotEqualized(format!("product leaves the equalizer in degree {n}")));
        }
        Ok(coords)
    }

    /// Restricts a degreewise map of ambient products to the equalizers,
    /// checking that it lands inside.
    fn restrict(&self, target: &Totalization, ambient: &BTreeMap<i32, SparseMatrix<Rational>>) -> Result<ChainMap<Rational>, DescentError> {
        let mut maps = BTreeMap::new();
        for n in self.complex.degrees() {
            let (Some(src_k), Some(tgt_k)) = (self.kernels.get(&n), target.kernels.get(&n)) else { continue };
            let image = ambient[&n].mul(&src_k.basis);
            let coords = tgt_k.coords_matrix(&image);
            if tgt_k.basis.mul(&coords) != image {
                return Err(DescentError::NotEqualized(format!("ambient map leaves the equalizer in degree {n}")));
            }
            maps.insert(n, coords);
        }
        let f = ChainMap::new(self.complex.clone(), target.complex.clone(), 0, maps)?;
        f.validate()?;
        Ok(f)
    }

    /// `x ↦ (u_p(x) ⊗ 1)_p`.
    fn augmentation_map(&self, dc: &CosimplicialComplex, model: &dyn SimplexModel, base: &Complex<Rational>) -> Result<ChainMap<Rational>, DescentError> {
        let mut maps = BTreeMap::new();
        for n in base.degrees() {
            let Some(k) = self.kernels.get(&n) else { continue };
            let mut amb = SparseMatrix::zeros(self.ambient_dim(n), base.dim(n));
            for p in 0..dc.num_levels() {
                let Some(b) = find(self.blocks(n), p, 0) else { continue };
                let u = dc.augmentation_to(p).expect("augmented").map(n);
                let unit = SparseMatrix::from_columns(b.b_dim, &[model.unit(p)]);
                amb.add_block(b.offset, 0, &u.kron(&unit));
            }
            let coords = k.coords_matrix(&amb);
            if k.basis.mul(&coords) != amb {
                return Err(DescentError::NotEqualized(format!("augmentation leaves the equalizer in degree {n}")));
            }
            maps.insert(n, coords);
        }
        let f = ChainMap::new(base.clone(), self.complex.clone(), 0, maps)?;
        f.validate()?;
        Ok(f)
    }

    /// The map `id ⊗ g_{p,k}` between totalizations of the same
    /// cosimplicial complex.
    fn levelwise(&self, target: &Totalization, g: impl Fn(usize, usize) -> SparseMatrix<Rational>) -> Result<ChainMap<Rational>, DescentError> {
        let mut ambient = BTreeMap::new();
        for n in self.complex.degrees() {
            let mut m = SparseMatrix::zeros(target.ambient_dim(n), self.ambient_dim(n));
            for b in self.blocks(n) {
                let Some(t) = find(target.blocks(n), b.p, b.k) else { continue };
                if b.a_dim * b.b_dim == 0 || t.b_dim == 0 {
                    continue;
                }
                m.add_block(t.offset, b.offset, &SparseMatrix::identity(b.a_dim, &()).kron(&g(b.p, b.k)));
            }
            ambient.insert(n, m);
        }
        self.restrict(target, &ambient)
    }
}

/// `Tot` with normalized cochains.
pub fn tot(dc: &CosimplicialComplex, exec: Execution) -> Result<Totalization, DescentError> {
    totalize(dc, &NcModel, ModelKind::Cochains, exec)
}

/// Smallest weight cutoff that contains every Whitney form on the levels.
pub fn required_cutoff(dc: &CosimplicialComplex) -> usize {
    whitney_weight(dc.num_levels() - 1)
}

/// `TW` with polynomial forms of weight `≤ cutoff`.
pub fn tw(dc: &CosimplicialComplex, cutoff: usize, exec: Execution) -> Result<Totalization, DescentError> {
    let needed = required_cutoff(dc);
    if cutoff < needed {
        return Err(DescentError::CutoffTooSmall { needed, given: cutoff });
    }
    totalize(dc, &FormModel::new(cutoff), ModelKind::Forms { cutoff }, exec)
}

/// `id ⊗ I: TW → Tot`.
pub fn tw_to_tot(tw: &Totalization, tot: &Totalization) -> Result<ChainMap<Rational>, DescentError> {
    let (ModelKind::Forms { cutoff }, ModelKind::Cochains) = (tw.kind, tot.kind) else {
        return Err(DescentError::BadCover("tw_to_tot needs a TW and a Tot".into()));
    };
    let model = FormModel::new(cutoff);
    tw.levelwise(tot, |p, k| integration_matrix(&model, p, k))
}

/// `id ⊗ E: Tot → TW`, a right inverse of [`tw_to_tot`].
pub fn whitney_section(tot: &Totalization, tw: &Totalization) -> Result<ChainMap<Rational>, DescentError> {
    let (ModelKind::Cochains, ModelKind::Forms { cutoff }) = (tot.kind, tw.kind) else {
        return Err(DescentError::BadCover("whitney_section needs a Tot and a TW".into()));
    };
    let model = FormModel::new(cutoff);
    tot.levelwise(tw, |p, k| whitney_matrix(&model, p, k))
}

/// `Tot → Čech`, `(x_p) ↦ ((−1)^{p(n+1)} x_p(top face of Δ^p))` in degree `n`.
pub fn tot_cech_iso(tot: &Totalization, cech: &CechComplex) -> Result<ChainMap<Rational>, DescentError> {
    if tot.kind != ModelKind::Cochains {
        return Err(DescentError::BadCover("tot_cech_iso needs the cochain model".into()));
    }
    let mut maps = BTreeMap::new();
    for n in tot.complex.degrees() {
        let Some(k) = tot.kernels.get(&n) else { continue };
        let mut amb = SparseMatrix::zeros(cech.complex.dim(n), tot.ambient_dim(n));
        for b in tot.blocks(n).iter().filter(|b| b.k == b.p && b.a_dim > 0) {
            // NC^p(Δ^p) is spanned by the top face alone, so b_dim = 1.
            let sign = if (b.p as i64 * (n as i64 + 1)).rem_euclid(2) == 1 { -Rational::one() } else { Rational::one() };
            amb.add_block(cech.level_offset(n, b.p), b.offset, &SparseMatrix::scalar(b.a_dim, sign));
        }
        maps.insert(n, amb.mul(&k.basis));
    }
    let f = ChainMap::new(tot.complex.clone(), cech.complex.clone(), 0, maps)?;
    f.validate()?;
    Ok(f)
}
