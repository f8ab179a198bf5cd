use std::collections::BTreeMap;

use serde::Serialize;

use super::{cone, direct_sum, ChainMap, Complex, ComplexError, HomologyCoeff, HomologyReport};
use crate::exec::Execution;
use crate::linalg::SparseMatrix;
use crate::scalars::{Coeff, Rational};

fn check_diagram<S: Coeff>(diagram: &[Complex<S>], maps: &[ChainMap<S>]) -> Result<(), ComplexError> {
    if diagram.is_empty() || maps.len() + 1 != diagram.len() {
        return Err(ComplexError::ShapeMismatch(format!(
            "{} complexes need {} maps, got {}",
            diagram.len(),
            diagram.len().saturating_sub(1),
            maps.len()
        )));
    }
    for (i, k) in maps.iter().enumerate() {
        if k.shift() != 0
            || k.source().dims_signature() != diagram[i].dims_signature()
            || k.target().dims_signature() != diagram[i + 1].dims_signature()
        {
            return Err(ComplexError::ShapeMismatch(format!("map {i} does not go from C_{i} to C_{}", i + 1)));
        }
    }
    Ok(())
}

/// Telescope of `C_0 → C_1 → … → C_L`:
/// `cone(⊕_{i<L} C_i → ⊕_{i≤L} C_i)` for the map `x_i ↦ κ_i(x_i) − x_i`.
/// Its homology is `H(C_L)`.
pub fn telescope<S: Coeff>(diagram: &[Complex<S>], maps: &[ChainMap<S>]) -> Result<Complex<S>, ComplexError> {
    check_diagram(diagram, maps)?;
    let ring = diagram[0].ring().clone();
    if diagram.iter().any(|c| c.ring() != &ring) {
        return Err(ComplexError::RingMismatch);
    }
    let l = maps.len();
    if l == 0 {
        return Ok(diagram[0].clone());
    }
    let src = direct_sum(&ring, &diagram[..l])?;
    let tgt = direct_sum(&ring, diagram)?;
    let mut comps: BTreeMap<i32, SparseMatrix<S>> = BTreeMap::new();
    for n in src.complex.degrees() {
        let mut m = SparseMatrix::zeros(tgt.complex.dim(n), src.complex.dim(n));
        for (i, k) in maps.iter().enumerate() {
            let d = diagram[i].dim(n);
            if d == 0 {
                continue;
            }
            m.add_block(tgt.offset(n, i), src.offset(n, i), &SparseMatrix::identity(d, &ring).neg());
            m.add_block(tgt.offset(n, i + 1), src.offset(n, i), &k.map(n));
        }
        comps.insert(n, m);
    }
    let phi = ChainMap::new(src.complex, tgt.complex, 0, comps)?;
    Ok(cone(&phi)?.complex)
}

/// Homology of the ℕ-indexed colimit of a diagram whose last map is repeated
/// forever, together with the image of each `H(C_i)` in it.
#[derive(Clone, Debug, Serialize)]
pub struct ColimitReport {
    /// Homology of the last explicit stage, `H(C_L)` (the finite telescope).
    pub last_stage: HomologyReport,
    /// Image of `H(C_i)` in the colimit, for each explicit stage `i`.
    pub stage_images: Vec<HomologyReport>,
    /// The colimit itself.
    pub colimit: HomologyReport,
    /// How many times the tail map was iterated.
    pub tail_iterations: usize,
}

impl ColimitReport {
    /// `true` if no class of any stage survives to the colimit, i.e. every
    /// class is killed by a power of the tail map.
    pub fn is_pure_torsion(&self) -> bool {
        self.colimit.is_zero()
    }
}

/// Colimit of `C_0 → … → C_L → C_L → …` where the tail repeats the last
/// map `κ_{L−1}` (which must be an endomorphism of `C_L`).
///
/// For finite-dimensional stages the colimit of `V → V → …` under `φ` is
/// `im φ^K` for any `K ≥ dim V`, so the tail is iterated that many times.
pub fn colimit_homology<S: HomologyCoeff>(
    diagram: &[Complex<S>],
    maps: &[ChainMap<S>],
    exec: Execution,
) -> Result<ColimitReport, ComplexError> {
    check_diagram(diagram, maps)?;
    let l = maps.len();
    let last = &diagram[l];
    let tail = match maps.last() {
        Some(k) if k.source().dims_signature() == k.target().dims_signature() => k.clone(),
        Some(_) => return Err(ComplexError::ShapeMismatch("tail map must be an endomorphism".into())),
        None => ChainMap::identity(last),
    };
    let iterations = last.total_dim() * S::rational_dim(last.ring()) + 1;
    let mut power = ChainMap::identity(last);
    for _ in 0..iterations {
        power = power.then(&tail)?;
    }
    let mut stage_images = Vec::with_capacity(l + 1);
    for i in 0..=l {
        let mut to_last = ChainMap::identity(&diagram[i]);
        for k in &maps[i..] {
            to_last = to_last.then(k)?;
        }
        stage_images.push(S::image_homology_with(&to_last.then(&power)?, exec));
    }
    Ok(ColimitReport {
        last_stage: S::homology_with(last, exec),
        colimit: stage_images[l].clone(),
        stage_images,
        tail_iterations: iterations,
    })
}

/// Degreewise `T`-adic completion. At a finite truncation level every module
/// is already complete, so this is the identity; the truncation level is
/// recorded on the result. Unsupported over ℚ.
pub fn complete<S: HomologyCoeff>(c: &Complex<S>) -> Result<Complex<S>, ComplexError> {
    let e: Rational = S::truncation(c.ring()).ok_or_else(|| ComplexError::UnsupportedRing(S::ring_name(c.ring())))?;
    let mut out = c.clone();
    out.set_completed_at(Some(e));
    Ok(out)
}
