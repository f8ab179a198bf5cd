use std::collections::BTreeMap;

use super::{ChainMap, Complex, ComplexError};
use crate::linalg::{offsets, SparseMatrix};
use crate::scalars::Coeff;

/// `C[k]`: `C[k]^n = C^{n−k}`, differential negated for odd `k`.
pub fn shift<S: Coeff>(c: &Complex<S>, k: i32) -> Complex<S> {
    let mut out = c.clone();
    out.lo = c.lo + k;
    if k.rem_euclid(2) == 1 {
        out.diffs = c.diffs.iter().map(SparseMatrix::neg).collect();
    }
    out
}

/// `f[k]: C[k] → D[k]`, with the same matrices.
pub fn shift_map<S: Coeff>(f: &ChainMap<S>, k: i32) -> ChainMap<S> {
    let maps = f.maps.iter().map(|(n, m)| (n + k, m.clone())).collect();
    ChainMap { source: shift(&f.source, k), target: shift(&f.target, k), shift: f.shift, maps }
}

/// A direct sum with its block layout.
#[derive(Clone, Debug)]
pub struct DirectSum<S: Coeff> {
    pub complex: Complex<S>,
    summands: Vec<Complex<S>>,
    /// degree → block offsets (length `summands + 1`)
    offsets: BTreeMap<i32, Vec<usize>>,
}

impl<S: Coeff> DirectSum<S> {
    pub fn offset(&self, n: i32, i: usize) -> usize {
        self.offsets.get(&n).map(|o| o[i]).unwrap_or(0)
    }

    pub fn inclusion(&self, i: usize) -> ChainMap<S> {
        let s = &self.summands[i];
        let ring = self.complex.ring();
        let maps = s
            .degrees()
            .map(|n| {
                let mut m = SparseMatrix::zeros(self.complex.dim(n), s.dim(n));
                m.add_block(self.offset(n, i), 0, &SparseMatrix::identity(s.dim(n), ring));
                (n, m)
            })
            .collect();
        ChainMap::new(s.clone(), self.complex.clone(), 0, maps).expect("inclusion shapes")
    }

    pub fn projection(&self, i: usize) -> ChainMap<S> {
        let s = &self.summands[i];
        let ring = self.complex.ring();
        let maps = s
            .degrees()
            .map(|n| {
                let mut m = SparseMatrix::zeros(s.dim(n), self.complex.dim(n));
                m.add_block(0, self.offset(n, i), &SparseMatrix::identity(s.dim(n), ring));
                (n, m)
            })
            .collect();
        ChainMap::new(self.complex.clone(), s.clone(), 0, maps).expect("projection shapes")
    }
}

pub fn direct_sum<S: Coeff>(ring: &S::Ring, cs: &[Complex<S>]) -> Result<DirectSum<S>, ComplexError> {
    if cs.iter().any(|c| c.ring() != ring) {
        return Err(ComplexError::RingMismatch);
    }
    let lo = cs.iter().filter_map(|c| c.support()).map(|s| s.0).min();
    let hi = cs.iter().filter_map(|c| c.support()).map(|s| s.1).max();
    let (lo, hi) = match (lo, hi) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Ok(DirectSum { complex: Complex::zero(ring.clone()), summands: cs.to_vec(), offsets: BTreeMap::new() })
        }
    };
    let mut offs = BTreeMap::new();
    let mut dims = Vec::new();
    for n in lo..=hi {
        let o = offsets(&cs.iter().map(|c| c.dim(n)).collect::<Vec<_>>());
        dims.push(*o.last().unwrap());
        offs.insert(n, o);
    }
    let mut diffs = Vec::new();
    for n in lo..hi {
        let mut d = SparseMatrix::zeros(dims[(n + 1 - lo) as usize], dims[(n - lo) as usize]);
        for (i, c) in cs.iter().enumerate() {
            if let Some(m) = c.diff_ref(n) {
                d.add_block(offs[&(n + 1)][i], offs[&n][i], m);
            }
        }
        diffs.push(d);
    }
    let complex = Complex::new(ring.clone(), lo, dims, diffs)?;
    Ok(DirectSum { complex, summands: cs.to_vec(), offsets: offs })
}

/// A mapping cone together with its canonical maps.
#[derive(Clone, Debug)]
pub struct Cone<S: Coeff> {
    pub complex: Complex<S>,
    /// `D → cone(f)`, `x ↦ (0, x)`.
    pub from_target: ChainMap<S>,
    /// `cone(f) → C[−1]`, `(c, x) ↦ c`.
    pub to_shifted_source: ChainMap<S>,
}

/// `cone(f)^n = C^{n+1} ⊕ D^n`, `d(c, x) = (−d_C c, d_D x − f c)`.
pub fn cone<S: Coeff>(f: &ChainMap<S>) -> Result<Cone<S>, ComplexError> {
    if f.shift != 0 {
        return Err(ComplexError::ShapeMismatch("cone needs a degree-0 map".into()));
    }
    let (c, d) = (&f.source, &f.target);
    let ring = c.ring().clone();
    let c_sup = c.support().map(|(a, b)| (a - 1, b - 1));
    let (lo, hi) = match (c_sup, d.support()) {
        (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            let z = Complex::zero(ring);
            return Ok(Cone {
                from_target: ChainMap::zero(d, &z),
                to_shifted_source: ChainMap::zero(&z, &shift(c, -1)),
                complex: z,
            });
        }
    };
    let dims: Vec<usize> = (lo..=hi).map(|n| c.dim(n + 1) + d.dim(n)).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let rows = [c.dim(n + 2), d.dim(n + 1)];
            let cols = [c.dim(n + 1), d.dim(n)];
            let dc = c.diff(n + 1).neg();
            let fc = f.map(n + 1).neg();
            let dd = d.diff(n);
            SparseMatrix::from_blocks(&rows, &cols, &[(0, 0, &dc), (1, 0, &fc), (1, 1, &dd)])
        })
        .collect();
    let complex = Complex::new(ring.clone(), lo, dims, diffs)?;
    let from_target = {
        let maps = d
            .degrees()
            .map(|n| {
                let mut m = SparseMatrix::zeros(complex.dim(n), d.dim(n));
                m.add_block(c.dim(n + 1), 0, &SparseMatrix::identity(d.dim(n), &ring));
                (n, m)
            })
            .collect();
        ChainMap::new(d.clone(), complex.clone(), 0, maps)?
    };
    let shifted = shift(c, -1);
    let to_shifted_source = {
        let maps = complex
            .degrees()
            .map(|n| {
                let mut m = SparseMatrix::zeros(c.dim(n + 1), complex.dim(n));
                m.add_block(0, 0, &SparseMatrix::identity(c.dim(n + 1), &ring));
                (n, m)
            })
            .collect();
        ChainMap::new(complex.clone(), shifted, 0, maps)?
    };
    Ok(Cone { complex, from_target, to_shifted_source })
}

/// `cocone(f) = cone(f)[1]`: `cocone^n = C^n ⊕ D^{n−1}`,
/// `d(c, x) = (d_C c, f c − d_D x)`. Returns the complex and its projection to `C`.
pub fn cocone<S: Coeff>(f: &ChainMap<S>) -> Result<(Complex<S>, ChainMap<S>), ComplexError> {
    let cone = cone(f)?;
    let complex = shift(&cone.complex, 1);
    let c = &f.source;
    let ring = c.ring().clone();
    let maps = complex
        .degrees()
        .map(|n| {
            let mut m = SparseMatrix::zeros(c.dim(n), complex.dim(n));
            m.add_block(0, 0, &SparseMatrix::identity(c.dim(n), &ring));
            (n, m)
        })
        .collect();
    let proj = ChainMap::new(complex.clone(), c.clone(), 0, maps)?;
    Ok((complex, proj))
}

/// Block layout of `(C ⊗ D)^n`: `(i, offset)` for each `i` with `C^i ⊗ D^{n−i}`.
fn tensor_layout<S: Coeff>(c1: &Complex<S>, c2: &Complex<S>, n: i32) -> Vec<(i32, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for i in c1.degrees() {
        let sz = c1.dim(i) * c2.dim(n - i);
        if sz > 0 {
            out.push((i, off));
            off += sz;
        }
    }
    out
}

/// `(C ⊗ D)^n = ⊕ C^i ⊗ D^{n−i}`, `d(x ⊗ y) = dx ⊗ y + (−1)^{|x|} x ⊗ dy`.
/// The basis of `C^i ⊗ D^j` is `a·dim D^j + b`.
pub fn tensor<S: Coeff>(c1: &Complex<S>, c2: &Complex<S>) -> Result<Complex<S>, ComplexError> {
    if c1.ring() != c2.ring() {
        return Err(ComplexError::RingMismatch);
    }
    let ring = c1.ring().clone();
    let (s1, s2) = match (c1.support(), c2.support()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(Complex::zero(ring)),
    };
    let (lo, hi) = (s1.0 + s2.0, s1.1 + s2.1);
    let dims: Vec<usize> = (lo..=hi)
        .map(|n| c1.degrees().map(|i| c1.dim(i) * c2.dim(n - i)).sum())
        .collect();
    let mut diffs = Vec::new();
    for n in lo..hi {
        let mut d = SparseMatrix::zeros(dims[(n + 1 - lo) as usize], dims[(n - lo) as usize]);
        let src = tensor_layout(c1, c2, n);
        let tgt: BTreeMap<i32, usize> = tensor_layout(c1, c2, n + 1).into_iter().collect();
        for (i, off) in src {
            let j = n - i;
            if let Some(toff) = tgt.get(&(i + 1)) {
                let block = c1.diff(i).kron(&SparseMatrix::identity(c2.dim(j), &ring));
                d.add_block(*toff, off, &block);
            }
            if let Some(toff) = tgt.get(&i) {
                let mut block = SparseMatrix::identity(c1.dim(i), &ring).kron(&c2.diff(j));
                if i.rem_euclid(2) == 1 {
                    block = block.neg();
                }
                d.add_block(*toff, off, &block);
            }
        }
        diffs.push(d);
    }
    Complex::new(ring, lo, dims, diffs)
}

/// The symmetry `C ⊗ D → D ⊗ C`, `x ⊗ y ↦ (−1)^{|x||y|} y ⊗ x`.
pub fn tensor_swap<S: Coeff>(c1: &Complex<S>, c2: &Complex<S>) -> Result<ChainMap<S>, ComplexError> {
    let src = tensor(c1, c2)?;
    let tgt = tensor(c2, c1)?;
    let ring = c1.ring().clone();
    let one = S::one_in(&ring);
    let mut maps = BTreeMap::new();
    for n in src.degrees() {
        let tl: BTreeMap<i32, usize> = tensor_layout(c2, c1, n).into_iter().collect();
        let mut trip = Vec::new();
        for (i, off) in tensor_layout(c1, c2, n) {
            let j = n - i;
            let toff = tl[&j];
            let sign = if (i * j).rem_euclid(2) == 1 { one.neg() } else { one.clone() };
            let (da, db) = (c1.dim(i), c2.dim(j));
            for a in 0..da {
                for b in 0..db {
                    trip.push((toff + b * da + a, off + a * db + b, sign.clone()));
                }
            }
        }
        maps.insert(n, SparseMatrix::from_triplets(tgt.dim(n), src.dim(n), trip));
    }
    ChainMap::new(src, tgt, 0, maps)
}
