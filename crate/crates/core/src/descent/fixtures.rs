//! Surrogate presheaves: simplicial cochains on subcomplex covers, constant
//! and disjoint presheaves, and seeded random presheaves.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::presheaf::{covering_pairs, CoverPresheaf, TOP};
use super::DescentError;
use crate::complexes::{ChainMap, Complex};
use crate::linalg::SparseMatrix;
use crate::scalars::Rational;

/// A set of simplices (sorted vertex lists), closed under faces.
pub type Subcomplex = BTreeSet<Vec<usize>>;

/// Closure of the given simplices under taking faces.
pub fn closure(simplices: &[Vec<usize>]) -> Subcomplex {
    let mut out = BTreeSet::new();
    for s in simplices {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        for mask in 1u32..1 << s.len() {
            out.insert(s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect());
        }
    }
    out
}

/// A finite simplicial complex; simplicial cochains of its subcomplexes form
/// a presheaf with restriction = projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: Subcomplex,
    dim: usize,
}

impl SimplicialComplex {
    pub fn from_maximal(faces: &[Vec<usize>]) -> Self {
        let simplices = closure(faces);
        let dim = simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0);
        SimplicialComplex { simplices, dim }
    }

    pub fn simplices(&self) -> &Subcomplex {
        &self.simplices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn basis(sub: &Subcomplex, k: usize) -> Vec<&Vec<usize>> {
        sub.iter().filter(|s| s.len() == k + 1).collect()
    }

    /// `C^k(X) = ℚ^{k-simplices}`, `(δf)(σ) = Σ_i (−1)^i f(σ minus vertex i)`,
    /// in degrees `0..=dim`.
    pub fn cochains(&self, sub: &Subcomplex) -> Complex<Rational> {
        let mut dims = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for k in 0..=self.dim {
            let src = Self::basis(sub, k);
            dims.insert(k as i32, src.len());
            if k == self.dim {
                continue;
            }
            let tgt = Self::basis(sub, k + 1);
            let index: BTreeMap<&Vec<usize>, usize> = src.iter().enumerate().map(|(i, s)| (*s, i)).collect();
            let mut trip = Vec::new();
            for (r, sigma) in tgt.iter().enumerate() {
                for i in 0..sigma.len() {
                    let mut face = (*sigma).clone();
                    face.remove(i);
                    let c = index[&face];
                    trip.push((r, c, if i % 2 == 0 { Rational::one() } else { -Rational::one() }));
                }
            }
            diffs.insert(k as i32, SparseMatrix::from_triplets(tgt.len(), src.len(), trip));
        }
        Complex::from_map((), &dims, &diffs).expect("cochain shapes")
    }

    /// Restriction of cochains from `from` to a subcomplex `to ⊆ from`.
    pub fn restriction(&self, from: &Subcomplex, to: &Subcomplex) -> ChainMap<Rational> {
        let mut maps = BTreeMap::new();
        for k in 0..=self.dim {
            let src = Self::basis(from, k);
            let tgt = Self::basis(to, k);
            let index: BTreeMap<&Vec<usize>, usize> = src.iter().enumerate().map(|(i, s)| (*s, i)).collect();
            let trip = tgt.iter().enumerate().map(|(r, s)| (r, index[s], Rational::one())).collect::<Vec<_>>();
            maps.insert(k as i32, SparseMatrix::from_triplets(tgt.len(), src.len(), trip));
        }
        ChainMap::new(self.cochains(from), self.cochains(to), 0, maps).expect("projection shapes")
    }

    /// The cochain presheaf of the cover `members`, with `TOP` the union.
    pub fn cover_presheaf(&self, members: &[Subcomplex]) -> Result<CoverPresheaf, DescentError> {
        if members.iter().any(|m| !m.is_subset(&self.simplices) || !is_closed(m)) {
            return Err(DescentError::BadCover("cover members must be subcomplexes".into()));
        }
        let n = members.len();
        let region = |j: u32| -> Subcomplex {
            if j == TOP {
                return members.iter().flatten().cloned().collect();
            }
            let mut it = (0..n).filter(|m| j >> m & 1 == 1).map(|m| &members[m]);
            let first = it.next().expect("nonempty index set").clone();
            it.fold(first, |acc, m| acc.intersection(m).cloned().collect())
        };
        let regions: BTreeMap<u32, Subcomplex> = (0u32..1 << n).map(|j| (j, region(j))).collect();
        let values = regions.iter().map(|(j, r)| (*j, self.cochains(r))).collect();
        let restrictions = covering_pairs(n)
            .into_iter()
            .map(|(a, b)| ((a, b), self.restriction(&regions[&a], &regions[&b])))
            .collect();
        CoverPresheaf::new(n, values, restrictions)
    }
}

fn is_closed(sub: &Subcomplex) -> bool {
    sub.iter().all(|s| {
        (0..s.len()).all(|i| {
            let mut f = s.clone();
            f.remove(i);
            f.is_empty() || sub.contains(&f)
        })
    })
}

pub fn union(subs: &[Subcomplex]) -> Subcomplex {
    subs.iter().flatten().cloned().collect()
}

pub fn intersection(a: &Subcomplex, b: &Subcomplex) -> Subcomplex {
    a.intersection(b).cloned().collect()
}

/// The boundary of a triangle, a circle with three vertices.
pub fn triangle_boundary() -> SimplicialComplex {
    SimplicialComplex::from_maximal(&[vec![0, 1], vec![1, 2], vec![0, 2]])
}

/// Two arcs `0–1–2` and `0–2` meeting in the two vertices `0, 2`.
pub fn triangle_two_arcs() -> (SimplicialComplex, Vec<Subcomplex>) {
    (triangle_boundary(), vec![closure(&[vec![0, 1], vec![1, 2]]), closure(&[vec![0, 2]])])
}

/// The three edges of the triangle boundary.
pub fn triangle_three_edges() -> (SimplicialComplex, Vec<Subcomplex>) {
    (triangle_boundary(), vec![closure(&[vec![0, 1]]), closure(&[vec![1, 2]]), closure(&[vec![0, 2]])])
}

/// A square `0–1–2–3` with diagonal `0–2` and the triangle `012` filled,
/// covered by the filled triangle and the edges `23`, `03`.
pub fn square_complex() -> (SimplicialComplex, Vec<Subcomplex>) {
    let x = SimplicialComplex::from_maximal(&[vec![0, 1, 2], vec![2, 3], vec![0, 3]]);
    let cover = vec![closure(&[vec![0, 1, 2]]), closure(&[vec![2, 3]]), closure(&[vec![0, 3]])];
    (x, cover)
}

/// Restrictions that are "the identity where possible": `e_i ↦ e_i`.
fn diagonal_restrictions(n: usize, values: &BTreeMap<u32, Complex<Rational>>) -> BTreeMap<(u32, u32), ChainMap<Rational>> {
    covering_pairs(n)
        .into_iter()
        .map(|(a, b)| {
            let (src, tgt) = (&values[&a], &values[&b]);
            let maps = src
                .degrees()
                .map(|d| (d, SparseMatrix::from_triplets(tgt.dim(d), src.dim(d), (0..src.dim(d).min(tgt.dim(d))).map(|i| (i, i, Rational::one())))))
                .collect();
            ((a, b), ChainMap::new(src.clone(), tgt.clone(), 0, maps).expect("diagonal shapes"))
        })
        .collect()
}

/// `ℚ` in degree 0 on every index set, identity restrictions.
pub fn constant(n: usize) -> Result<CoverPresheaf, DescentError> {
    let values: BTreeMap<u32, Complex<Rational>> = (0u32..1 << n).map(|j| (j, Complex::concentrated((), 0, 1))).collect();
    let restrictions = diagonal_restrictions(n, &values);
    CoverPresheaf::new(n, values, restrictions)
}

/// `F(K) = F(K_1) = F(K_2) = ℚ`, `F(K_1 ∩ K_2) = 0`: the global sections see
/// one component, the cover two. Descent fails in degree 0.
pub fn disjoint() -> Result<CoverPresheaf, DescentError> {
    let mut values = BTreeMap::new();
    for j in [TOP, 0b01, 0b10] {
        values.insert(j, Complex::concentrated((), 0, 1));
    }
    values.insert(0b11, Complex::concentrated((), 0, 0));
    let restrictions = diagonal_restrictions(2, &values);
    CoverPresheaf::new(2, values, restrictions)
}

/// Shape of a random presheaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomShape {
    pub members: usize,
    /// Cells of `F(K)`; every value has at most this many.
    pub max_cells: usize,
    /// Degrees `0..width`.
    pub width: usize,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape { members: 3, max_cells: 4, width: 4 }
    }
}

/// A seeded random presheaf.
///
/// `F(K)` has a basis of cells, each with a degree and a support
/// `S_c ⊆ {1..N}`; `F(K_J)` keeps the cells with `J ⊆ S_c` and restrictions
/// are projections. The differential is `g E g^{-1}` with `E` a random sum
/// of elementary pieces `c → c'` and `g` a random unipotent change of basis,
/// both only ever mapping a cell `c` to cells `c'` with `S_{c'} ⊆ S_c`; that
/// makes every projection a chain map.
pub fn random_presheaf(seed: u64, shape: RandomShape) -> Result<CoverPresheaf, DescentError> {
    let RandomShape { members: n, max_cells, width } = shape;
    if n == 0 || max_cells == 0 || width == 0 {
        return Err(DescentError::BadCover("random presheaves need members, cells and degrees".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = rng.gen_range(1..=max_cells);
    let full = (1u32 << n) - 1;
    let mut info: Vec<(i32, u32)> = (0..cells)
        .map(|_| {
            let deg = rng.gen_range(0..width) as i32;
            let support = (0..n).filter(|_| rng.gen_bool(0.7)).fold(0u32, |s, m| s | 1 << m);
            (deg, support)
        })
        .collect();
    // Order cells by support size so that "support shrinks" means "index decreases".
    info.sort_by_key(|(d, s)| (s.count_ones(), *s, *d));
    let allowed = |from: usize, to: usize| -> bool { info[to].1 & !info[from].1 == 0 };
    let small = |rng: &mut ChaCha8Rng| -> Rational {
        let v = rng.gen_range(1..=3);
        Rational::from_int(if rng.gen_bool(0.5) { v } else { -v })
    };

    let mut e = SparseMatrix::<Rational>::zeros(cells, cells);
    let mut used = vec![false; cells];
    for c in 0..cells {
        for t in 0..cells {
            if !used[c] && !used[t] && c != t && info[t].0 == info[c].0 + 1 && allowed(c, t) && rng.gen_bool(0.6) {
                let v = small(&mut rng);
                e.add_block(t, c, &SparseMatrix::scalar(1, v));
                used[c] = true;
                used[t] = true;
            }
        }
    }
    // g = 1 + N with N strictly lower triangular in the sorted order.
    let mut nil = SparseMatrix::<Rational>::zeros(cells, cells);
    for c in 0..cells {
        for t in 0..c {
            if info[t].0 == info[c].0 && allowed(c, t) && rng.gen_bool(0.5) {
                let v = small(&mut rng);
                nil.add_block(t, c, &SparseMatrix::scalar(1, v));
            }
        }
    }
    let id = SparseMatrix::identity(cells, &());
    let g = id.add(&nil);
    let mut ginv = id.clone();
    let mut power = id;
    for k in 1..cells {
        power = power.mul(&nil);
        ginv = if k % 2 == 1 { ginv.sub(&power) } else { ginv.add(&power) };
    }
    let d = g.mul(&e).mul(&ginv);
    let d = &d;

    let kept = |j: u32| -> Vec<usize> { (0..cells).filter(|c| info[*c].1 & j == j).collect() };
    let value = |cells_j: &[usize]| -> Complex<Rational> {
        let by_deg = |k: i32| -> Vec<usize> { cells_j.iter().copied().filter(|c| info[*c].0 == k).collect() };
        let dims = (0..width as i32).map(|k| (k, by_deg(k).len())).collect();
        let diffs = (0..width as i32 - 1)
            .map(|k| {
                let (src, tgt) = (by_deg(k), by_deg(k + 1));
                let trip = tgt
                    .iter()
                    .enumerate()
                    .flat_map(|(r, t)| src.iter().enumerate().filter_map(move |(c, s)| d.get(*t, *s).map(|v| (r, c, v.clone()))))
                    .collect::<Vec<_>>();
                (k, SparseMatrix::from_triplets(tgt.len(), src.len(), trip))
            })
            .collect();
        Complex::from_map((), &dims, &diffs).expect("cell complex shapes")
    };
    let values: BTreeMap<u32, Complex<Rational>> = (0..=full).map(|j| (j, value(&kept(j)))).collect();
    let restrictions = covering_pairs(n)
        .into_iter()
        .map(|(a, b)| {
            let (ka, kb) = (kept(a), kept(b));
            let maps = (0..width as i32)
                .map(|k| {
                    let src: Vec<usize> = ka.iter().copied().filter(|c| info[*c].0 == k).collect();
                    let tgt: Vec<usize> = kb.iter().copied().filter(|c| info[*c].0 == k).collect();
                    let trip = tgt
                        .iter()
                        .enumerate()
                        .map(|(r, t)| (r, src.binary_search(t).expect("restriction keeps a subset of cells"), Rational::one()))
                        .collect::<Vec<_>>();
                    (k, SparseMatrix::from_triplets(tgt.len(), src.len(), trip))
                })
                .collect();
            ((a, b), ChainMap::new(values[&a].clone(), values[&b].clone(), 0, maps).expect("projection shapes"))
        })
        .collect();
    let out = CoverPresheaf::new(n, values, restrictions)?;
    for c in out.values().values() {
        c.validate()?;
    }
    Ok(out)
}
