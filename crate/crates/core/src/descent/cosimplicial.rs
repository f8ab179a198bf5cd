use std::collections::BTreeMap;

use super::presheaf::{subsets_of_size, CoverPresheaf, TOP};
use super::DescentError;
use crate::complexes::{direct_sum, ChainMap, Complex, DirectSum};
use crate::linalg::SparseMatrix;
use crate::scalars::Rational;

/// A finite semi-cosimplicial complex `D^0 ⇉ D^1 ⇶ …` (no degeneracies),
/// optionally augmented by `D^{−1} → D^0`.
#[derive(Clone, Debug)]
pub struct CosimplicialComplex {
    levels: Vec<Complex<Rational>>,
    /// `cofaces[p][i] = d_i: D^p → D^{p+1}`, `i = 0..=p+1`.
    cofaces: Vec<Vec<ChainMap<Rational>>>,
    augmentation: Option<ChainMap<Rational>>,
}

impl CosimplicialComplex {
    /// Checks shapes, the cosimplicial identities `d_j d_i = d_i d_{j−1}`
    /// (`i < j`) and that the augmentation equalizes `d_0, d_1`.
    pub fn new(
        levels: Vec<Complex<Rational>>,
        cofaces: Vec<Vec<ChainMap<Rational>>>,
        augmentation: Option<ChainMap<Rational>>,
    ) -> Result<Self, DescentError> {
        if levels.is_empty() {
            return Err(DescentError::BadCover("a cosimplicial complex needs at least one level".into()));
        }
        if cofaces.len() + 1 != levels.len() || cofaces.iter().enumerate().any(|(p, c)| c.len() != p + 2) {
            return Err(DescentError::BadCover("level p needs exactly p + 2 cofaces".into()));
        }
        for (p, maps) in cofaces.iter().enumerate() {
            for (i, f) in maps.iter().enumerate() {
                if f.shift() != 0 || f.source() != &levels[p] || f.target() != &levels[p + 1] {
                    return Err(DescentError::BadCover(format!("coface d_{i} out of level {p} has the wrong shape")));
                }
                f.validate()?;
            }
        }
        if let Some(a) = &augmentation {
            if a.shift() != 0 || a.target() != &levels[0] {
                return Err(DescentError::BadCover("augmentation must land in level 0".into()));
            }
            a.validate()?;
        }
        let out = CosimplicialComplex { levels, cofaces, augmentation };
        out.check_identities()?;
        Ok(out)
    }

    pub fn single(level: Complex<Rational>) -> Self {
        CosimplicialComplex { levels: vec![level], cofaces: Vec::new(), augmentation: None }
    }

    pub fn with_augmentation(mut self, a: ChainMap<Rational>) -> Result<Self, DescentError> {
        self.augmentation = Some(a);
        Self::new(self.levels, self.cofaces, self.augmentation)
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, p: usize) -> &Complex<Rational> {
        &self.levels[p]
    }

    pub fn coface(&self, p: usize, i: usize) -> &ChainMap<Rational> {
        &self.cofaces[p][i]
    }

    pub fn augmentation(&self) -> Option<&ChainMap<Rational>> {
        self.augmentation.as_ref()
    }

    /// The composite `D^{−1} → D^p` (any composite of cofaces agrees).
    pub fn augmentation_to(&self, p: usize) -> Option<ChainMap<Rational>> {
        let mut u = self.augmentation.clone()?;
        for q in 0..p {
            u = u.then(&self.cofaces[q][0]).expect("composable cofaces");
        }
        Some(u)
    }

    pub fn check_identities(&self) -> Result<(), DescentError> {
        for p in 0..self.cofaces.len().saturating_sub(1) {
            for j in 1..=p + 2 {
                for i in 0..j {
                    let lhs = self.cofaces[p][i].then(&self.cofaces[p + 1][j])?;
                    let rhs = self.cofaces[p][j - 1].then(&self.cofaces[p + 1][i])?;
                    if lhs != rhs {
                        return Err(DescentError::CosimplicialIdentity { level: p, i, j });
                    }
                }
            }
        }
        if let (Some(a), Some(c)) = (&self.augmentation, self.cofaces.first()) {
            if a.then(&c[0])? != a.then(&c[1])? {
                return Err(DescentError::CosimplicialIdentity { level: 0, i: 0, j: 1 });
            }
        }
        Ok(())
    }
}

/// The nerve `p ↦ ⊕_{|J|=p+1} F(K_J)` of a cover presheaf, with its block
/// layout. Level `p` stops at `N − 1`.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub cosimplicial: CosimplicialComplex,
    /// Index sets of each level, ascending bitmasks.
    members: Vec<Vec<u32>>,
    sums: Vec<DirectSum<Rational>>,
}

impl Nerve {
    pub fn members(&self, p: usize) -> &[u32] {
        &self.members[p]
    }

    /// `(offset, dim)` of the summand `F(K_J)^m` inside `(D^p)^m`, `p = |J| − 1`.
    pub fn block(&self, j: u32, m: i32) -> (usize, usize) {
        let p = j.count_ones() as usize - 1;
        let idx = self.members[p].binary_search(&j).expect("index set of the nerve");
        let sum = &self.sums[p];
        let dim = sum.offset(m, idx + 1) - sum.offset(m, idx);
        (sum.offset(m, idx), dim)
    }
}

/// `(d_i x)_{J'} = r_{J'∖j'_i → J'}(x_{J'∖j'_i})` where `j'_0 < j'_1 < …`.
pub fn nerve(f: &CoverPresheaf) -> Result<Nerve, DescentError> {
    let n = f.n();
    let members: Vec<Vec<u32>> = (1..=n).map(|s| subsets_of_size(n, s)).collect();
    let mut sums = Vec::new();
    for js in &members {
        let parts: Vec<Complex<Rational>> = js.iter().map(|j| f.value(*j).clone()).collect();
        sums.push(direct_sum(&(), &parts)?);
    }
    let levels: Vec<Complex<Rational>> = sums.iter().map(|s| s.complex.clone()).collect();
    let mut cofaces = Vec::new();
    for p in 0..n - 1 {
        let (src, tgt) = (&levels[p], &levels[p + 1]);
        let mut level_maps = Vec::new();
        for i in 0..=p + 1 {
            let mut maps = BTreeMap::new();
            for m in src.degrees() {
                let mut mat = SparseMatrix::zeros(tgt.dim(m), src.dim(m));
                for (jt, big) in members[p + 1].iter().enumerate() {
                    let removed = nth_bit(*big, i);
                    let small = big & !(1 << removed);
                    let js = members[p].binary_search(&small).expect("face of an index set");
                    let r = f.restriction(small, *big).map(m);
                    mat.add_block(sums[p + 1].offset(m, jt), sums[p].offset(m, js), &r);
                }
                maps.insert(m, mat);
            }
            level_maps.push(ChainMap::new(src.clone(), tgt.clone(), 0, maps)?);
        }
        cofaces.push(level_maps);
    }
    let aug = {
        let top = f.top();
        let mut maps = BTreeMap::new();
        for m in top.degrees() {
            let mut mat = SparseMatrix::zeros(levels[0].dim(m), top.dim(m));
            for (idx, j) in members[0].iter().enumerate() {
                mat.add_block(sums[0].offset(m, idx), 0, &f.restriction(TOP, *j).map(m));
            }
            maps.insert(m, mat);
        }
        ChainMap::new(top.clone(), levels[0].clone(), 0, maps)?
    };
    let cosimplicial = CosimplicialComplex::new(levels, cofaces, Some(aug))?;
    Ok(Nerve { cosimplicial, members, sums })
}

/// Position of the `i`-th set bit.
fn nth_bit(mask: u32, i: usize) -> u32 {
    let mut m = mask;
    for _ in 0..i {
        m &= m - 1;
    }
    m.trailing_zeros()
}

/// The total complex `⊕_p D^p[−p]` with `D = δ + (−1)^p d`, where
/// `δ = Σ_i (−1)^i d_i`.
#[derive(Clone, Debug)]
pub struct CechComplex {
    pub complex: Complex<Rational>,
    /// degree → offset of each level (length `levels + 1`)
    offsets: BTreeMap<i32, Vec<usize>>,
    pub augmentation: Option<ChainMap<Rational>>,
}

impl CechComplex {
    /// Offset of `(D^p)^{n−p}` inside the degree-`n` part.
    pub fn level_offset(&self, n: i32, p: usize) -> usize {
        self.offsets.get(&n).map(|o| o[p]).unwrap_or(0)
    }
}

pub fn cech_total(dc: &CosimplicialComplex) -> Result<CechComplex, DescentError> {
    let levels = dc.num_levels();
    let lo = (0..levels).filter_map(|p| dc.level(p).support().map(|s| s.0 + p as i32)).min();
    let hi = (0..levels).filter_map(|p| dc.level(p).support().map(|s| s.1 + p as i32)).max();
    let (lo, hi) = match (lo, hi) {
        (Some(a), Some(b)) => (a, b),
        _ => (0, -1),
    };
    let layout = |n: i32| -> Vec<usize> {
        crate::linalg::offsets(&(0..levels).map(|p| dc.level(p).dim(n - p as i32)).collect::<Vec<_>>())
    };
    let offsets: BTreeMap<i32, Vec<usize>> = (lo..=hi + 1).map(|n| (n, layout(n))).collect();
    let dims: Vec<usize> = (lo..=hi).map(|n| *offsets[&n].last().unwrap()).collect();
    let mut diffs = Vec::new();
    for n in lo..hi {
        let (src, tgt) = (&offsets[&n], &offsets[&(n + 1)]);
        let mut d = SparseMatrix::zeros(*tgt.last().unwrap(), *src.last().unwrap());
        for p in 0..levels {
            let m = n - p as i32;
            let inner = dc.level(p).diff(m);
            d.add_block(tgt[p], src[p], &if p % 2 == 0 { inner } else { inner.neg() });
            if p + 1 < levels {
                let mut delta = SparseMatrix::zeros(dc.level(p + 1).dim(m), dc.level(p).dim(m));
                for i in 0..=p + 1 {
                    let di = dc.coface(p, i).map(m);
                    delta = if i % 2 == 0 { delta.add(&di) } else { delta.sub(&di) };
                }
                d.add_block(tgt[p + 1], src[p], &delta);
            }
        }
        diffs.push(d);
    }
    let complex = if dims.is_empty() { Complex::zero(()) } else { Complex::new((), lo, dims, diffs)? };
    let augmentation = match dc.augmentation() {
        None => None,
        Some(a) => {
            let base = a.source();
            let maps = base
                .degrees()
                .map(|n| {
                    let mut m = SparseMatrix::zeros(complex.dim(n), base.dim(n));
                    m.add_block(0, 0, &a.map(n));
                    (n, m)
                })
                .collect();
            let aug = ChainMap::new(base.clone(), complex.clone(), 0, maps)?;
            aug.validate()?;
            Some(aug)
        }
    };
    Ok(CechComplex { complex, offsets, augmentation })
}

/// The Čech complex of a cover presheaf together with the nerve it came from.
#[derive(Clone, Debug)]
pub struct PresheafCech {
    pub nerve: Nerve,
    pub cech: CechComplex,
}

impl PresheafCech {
    pub fn complex(&self) -> &Complex<Rational> {
        &self.cech.complex
    }

    /// The augmentation `F(K) → Čech(F)`.
    pub fn augmentation(&self) -> &ChainMap<Rational> {
        self.cech.augmentation.as_ref().expect("nerves are augmented")
    }

    /// `(offset, dim)` of `F(K_J)^{n−p}` inside `Čech^n`, `p = |J| − 1`.
    pub fn block(&self, j: u32, n: i32) -> (usize, usize) {
        let p = j.count_ones() as usize - 1;
        let (o, d) = self.nerve.block(j, n - p as i32);
        (self.cech.level_offset(n, p) + o, d)
    }
}

pub fn cech(f: &CoverPresheaf) -> Result<PresheafCech, DescentError> {
    let nerve = nerve(f)?;
    let cech = cech_total(&nerve.cosimplicial)?;
    cech.complex.validate()?;
    Ok(PresheafCech { nerve, cech })
}
