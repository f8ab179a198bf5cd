//! Cover presheaves of commutative dg algebras, with products given by
//! (possibly partial) multiplication tables on the chosen bases.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{accumulate, OperadError, Vector};
use crate::complexes::{ChainMap, Complex};
use crate::descent::{closure, constant, covering_pairs, intersection, union, CoverPresheaf, Subcomplex, TOP};
use crate::linalg::SparseMatrix;
use crate::scalars::Rational;

/// Products of basis vectors `e^m_i · e^n_j ∈ A^{m+n}`. Absent entries are
/// zero; `None` marks a product that leaves a truncation window.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MulTable {
    entries: BTreeMap<(i32, usize, i32, usize), Option<Vector>>,
}

impl MulTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, left: (i32, usize), right: (i32, usize), value: Option<Vector>) {
        let key = (left.0, left.1, right.0, right.1);
        match value {
            Some(v) if v.is_empty() => {
                self.entries.remove(&key);
            }
            v => {
                self.entries.insert(key, v);
            }
        }
    }

    /// Stored entries `((m, i), (n, j), product)`; `None` marks an undefined product.
    pub fn entries(&self) -> impl Iterator<Item = ((i32, usize), (i32, usize), Option<&Vector>)> {
        self.entries.iter().map(|((m, i, n, j), v)| ((*m, *i), (*n, *j), v.as_ref()))
    }

    /// `None` if the product is undefined.
    pub fn basis_product(&self, left: (i32, usize), right: (i32, usize)) -> Option<Vector> {
        match self.entries.get(&(left.0, left.1, right.0, right.1)) {
            None => Some(Vec::new()),
            Some(v) => v.clone(),
        }
    }

    pub fn product(&self, m: i32, x: &[(usize, Rational)], n: i32, y: &[(usize, Rational)]) -> Result<Vector, OperadError> {
        let mut acc = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                let v = self
                    .basis_product((m, *i), (n, *j))
                    .ok_or_else(|| OperadError::OutOfWindow(format!("e^{m}_{i} · e^{n}_{j}")))?;
                let ab = a * b;
                for (k, c) in v {
                    *acc.entry(k).or_insert_with(Rational::zero) += &(&c * &ab);
                }
            }
        }
        Ok(accumulate(acc))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdgaPresheaf {
    presheaf: CoverPresheaf,
    products: BTreeMap<u32, MulTable>,
    units: BTreeMap<u32, Vector>,
}

fn unit_vec(i: usize) -> Vector {
    vec![(i, Rational::one())]
}

fn sub(a: &[(usize, Rational)], b: &[(usize, Rational)]) -> Vector {
    let mut acc: BTreeMap<usize, Rational> = a.iter().cloned().collect();
    for (i, c) in b {
        *acc.entry(*i).or_insert_with(Rational::zero) -= c;
    }
    accumulate(acc)
}

fn negate_if(odd: bool, v: Vector) -> Vector {
    if odd {
        v.into_iter().map(|(i, c)| (i, -c)).collect()
    } else {
        v
    }
}

/// Basis elements `(degree, index)` of a complex.
fn basis_of(c: &Complex<Rational>) -> Vec<(i32, usize)> {
    c.degrees().flat_map(|n| (0..c.dim(n)).map(move |i| (n, i))).collect()
}

impl CdgaPresheaf {
    /// Checks units, graded commutativity, Leibniz and associativity on every
    /// value, and that restrictions are unital algebra maps — wherever the
    /// products involved are defined.
    pub fn new(presheaf: CoverPresheaf, products: BTreeMap<u32, MulTable>, units: BTreeMap<u32, Vector>) -> Result<Self, OperadError> {
        let out = CdgaPresheaf { presheaf, products, units };
        for j in out.presheaf.values().keys() {
            if !out.products.contains_key(j) || !out.units.contains_key(j) {
                return Err(OperadError::Cdga(format!("no product or unit on {}", crate::descent::label(*j))));
            }
            out.check_value(*j)?;
        }
        for (a, b) in covering_pairs(out.presheaf.n()) {
            out.check_restriction(a, b)?;
        }
        Ok(out)
    }

    pub fn presheaf(&self) -> &CoverPresheaf {
        &self.presheaf
    }

    pub fn table(&self, j: u32) -> &MulTable {
        &self.products[&j]
    }

    pub fn unit(&self, j: u32) -> &Vector {
        &self.units[&j]
    }

    pub fn product(&self, j: u32, m: i32, x: &[(usize, Rational)], n: i32, y: &[(usize, Rational)]) -> Result<Vector, OperadError> {
        self.products[&j].product(m, x, n, y)
    }

    fn check_value(&self, j: u32) -> Result<(), OperadError> {
        let c = self.presheaf.value(j);
        let t = &self.products[&j];
        let lbl = crate::descent::label(j);
        let fail = |what: &str, items: &[(i32, usize)]| Err(OperadError::Cdga(format!("{what} fails on {lbl} at {items:?}")));
        let unit = &self.units[&j];
        if !c.diff(0).apply(unit).is_empty() {
            return fail("closedness of the unit", &[]);
        }
        let basis = basis_of(c);
        for &(m, i) in &basis {
            let e = unit_vec(i);
            if t.product(0, unit, m, &e)? != e || t.product(m, &e, 0, unit)? != e {
                return fail("unit law", &[(m, i)]);
            }
        }
        for &(m, i) in &basis {
            let x = unit_vec(i);
            let dx = c.diff(m).apply(&x);
            for &(n, jj) in &basis {
                let y = unit_vec(jj);
                let Some(xy) = t.basis_product((m, i), (n, jj)) else { continue };
                if let Some(yx) = t.basis_product((n, jj), (m, i)) {
                    if xy != negate_if((m * n).rem_euclid(2) == 1, yx) {
                        return fail("graded commutativity", &[(m, i), (n, jj)]);
                    }
                }
                // d(xy) = dx·y + (−1)^m x·dy
                let dy = c.diff(n).apply(&y);
                if let (Ok(a), Ok(b)) = (t.product(m + 1, &dx, n, &y), t.product(m, &x, n + 1, &dy)) {
                    let lhs = c.diff(m + n).apply(&xy);
                    let rhs = sub(&a, &negate_if(m.rem_euclid(2) == 0, b));
                    if lhs != rhs {
                        return fail("Leibniz rule", &[(m, i), (n, jj)]);
                    }
                }
                for &(k, kk) in &basis {
                    let z = unit_vec(kk);
                    let left = t.product(m + n, &xy, k, &z);
                    let right = t.basis_product((n, jj), (k, kk)).map(|yz| t.product(m, &x, n + k, &yz));
                    if let (Ok(l), Some(Ok(r))) = (left, right) {
                        if l != r {
                            return fail("associativity", &[(m, i), (n, jj), (k, kk)]);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_restriction(&self, a: u32, b: u32) -> Result<(), OperadError> {
        let r = self.presheaf.restriction(a, b);
        let src = self.presheaf.value(a);
        let what = format!("{} → {}", crate::descent::label(a), crate::descent::label(b));
        if r.map(0).apply(&self.units[&a]) != self.units[&b] {
            return Err(OperadError::Cdga(format!("restriction {what} is not unital")));
        }
        let basis = basis_of(src);
        for &(m, i) in &basis {
            let x = unit_vec(i);
            let rx = r.map(m).apply(&x);
            for &(n, j) in &basis {
                let y = unit_vec(j);
                let Some(xy) = self.products[&a].basis_product((m, i), (n, j)) else { continue };
                let ry = r.map(n).apply(&y);
                let Ok(rhs) = self.products[&b].product(m, &rx, n, &ry) else { continue };
                if r.map(m + n).apply(&xy) != rhs {
                    return Err(OperadError::Cdga(format!("restriction {what} is not multiplicative at {:?}", [(m, i), (n, j)])));
                }
            }
        }
        Ok(())
    }
}

/// `ℚ` on every index set.
pub fn constant_cdga(n: usize) -> Result<CdgaPresheaf, OperadError> {
    let presheaf = constant(n)?;
    let mut products = BTreeMap::new();
    let mut units = BTreeMap::new();
    for j in presheaf.values().keys() {
        let mut t = MulTable::new();
        t.set((0, 0), (0, 0), Some(unit_vec(0)));
        products.insert(*j, t);
        units.insert(*j, unit_vec(0));
    }
    CdgaPresheaf::new(presheaf, products, units)
}

/// Connected components of a subcomplex, as vertex sets ordered by least vertex.
fn components(sub: &Subcomplex) -> Vec<BTreeSet<usize>> {
    let mut comps: Vec<BTreeSet<usize>> = Vec::new();
    for s in sub {
        let verts: BTreeSet<usize> = s.iter().copied().collect();
        let (touching, rest): (Vec<_>, Vec<_>) = comps.into_iter().partition(|c| !c.is_disjoint(&verts));
        let merged = touching.into_iter().fold(verts, |mut acc, c| {
            acc.extend(c);
            acc
        });
        comps = rest;
        comps.push(merged);
    }
    comps.sort_by_key(|c| *c.iter().next().expect("nonempty"));
    comps
}

/// Locally constant functions `ℚ^{π_0(K_J)}` on the pieces of a cover of a
/// simplicial complex: the closed 0-cochains, with pointwise product.
pub fn locally_constant(members: &[Subcomplex]) -> Result<CdgaPresheaf, OperadError> {
    let n = members.len();
    let piece = |j: u32| -> Subcomplex {
        if j == TOP {
            return union(members);
        }
        let chosen: Vec<Subcomplex> = (0..n).filter(|m| j >> m & 1 == 1).map(|m| members[m].clone()).collect();
        chosen[1..].iter().fold(chosen[0].clone(), |acc, s| intersection(&acc, s))
    };
    let comps: BTreeMap<u32, Vec<BTreeSet<usize>>> = (0u32..1 << n).map(|j| (j, components(&piece(j)))).collect();
    let value = |j: u32| -> Complex<Rational> {
        let d = comps[&j].len();
        if d == 0 {
            Complex::zero(())
        } else {
            Complex::concentrated((), 0, d)
        }
    };
    let values: BTreeMap<u32, Complex<Rational>> = comps.keys().map(|j| (*j, value(*j))).collect();
    let mut restrictions = BTreeMap::new();
    for (a, b) in covering_pairs(n) {
        let (ca, cb) = (&comps[&a], &comps[&b]);
        let trip = cb.iter().enumerate().filter_map(|(r, small)| {
            let v = small.iter().next().expect("nonempty");
            ca.iter().position(|big| big.contains(v)).map(|c| (r, c, Rational::one()))
        });
        let m = SparseMatrix::from_triplets(cb.len(), ca.len(), trip);
        let maps = if cb.is_empty() || ca.is_empty() { BTreeMap::new() } else { BTreeMap::from([(0, m)]) };
        restrictions.insert((a, b), ChainMap::new(values[&a].clone(), values[&b].clone(), 0, maps)?);
    }
    let presheaf = CoverPresheaf::new(n, values, restrictions)?;
    let mut products = BTreeMap::new();
    let mut units = BTreeMap::new();
    for (j, cs) in &comps {
        let mut t = MulTable::new();
        for i in 0..cs.len() {
            t.set((0, i), (0, i), Some(unit_vec(i)));
        }
        products.insert(*j, t);
        units.insert(*j, (0..cs.len()).map(|i| (i, Rational::one())).collect());
    }
    CdgaPresheaf::new(presheaf, products, units)
}

/// The triangle boundary covered by its three edges, with locally constant
/// coefficients.
pub fn triangle_locally_constant() -> Result<CdgaPresheaf, OperadError> {
    let members: Vec<Subcomplex> = [[0, 1], [1, 2], [0, 2]].iter().map(|e| closure(&[e.to_vec()])).collect();
    locally_constant(&members)
}

/// `A = Λ(e) ⊗ ℚ[t]/t²`, `|e| = 1`, `|t| = 2`, `de = t`: basis `1, e, t, te`.
fn koszul_value() -> (Complex<Rational>, MulTable) {
    let one = |r, c| SparseMatrix::from_triplets(1, 1, [(r, c, Rational::one())]);
    let c = Complex::new((), 0, vec![1, 1, 1, 1], vec![SparseMatrix::zeros(1, 1), one(0, 0), SparseMatrix::zeros(1, 1)]).expect("shapes");
    let mut t = MulTable::new();
    for m in 0..4 {
        t.set((0, 0), (m, 0), Some(unit_vec(0)));
        t.set((m, 0), (0, 0), Some(unit_vec(0)));
    }
    t.set((1, 0), (2, 0), Some(unit_vec(0)));
    t.set((2, 0), (1, 0), Some(unit_vec(0)));
    (c, t)
}

/// A seeded presheaf whose values are `A`, `ℚ` (via the augmentation
/// `A → ℚ`) or `0`, decreasing along restrictions. `F(K) = A`.
pub fn random_cdga_presheaf(seed: u64, n: usize) -> Result<CdgaPresheaf, OperadError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let member_level: Vec<u8> = (0..n).map(|_| [2, 2, 2, 1, 0][rng.gen_range(0..5)]).collect();
    let cap: BTreeMap<u32, u8> = (1u32..1 << n).filter(|j| j.count_ones() >= 2).map(|j| (j, [2, 2, 1, 0][rng.gen_range(0..4)])).collect();
    let level = |j: u32| -> u8 {
        if j == TOP {
            return 2;
        }
        let m = (0..n).filter(|m| j >> m & 1 == 1).map(|m| member_level[m]).min().unwrap_or(2);
        cap.iter().filter(|(k, _)| *k & j == **k).map(|(_, c)| *c).fold(m, u8::min)
    };
    let (a, a_table) = koszul_value();
    let q = Complex::concentrated((), 0, 1);
    let mut q_table = MulTable::new();
    q_table.set((0, 0), (0, 0), Some(unit_vec(0)));
    let value = |l: u8| match l {
        2 => a.clone(),
        1 => q.clone(),
        _ => Complex::zero(()),
    };
    let values: BTreeMap<u32, Complex<Rational>> = (0u32..1 << n).map(|j| (j, value(level(j)))).collect();
    let mut restrictions = BTreeMap::new();
    for (s, t) in covering_pairs(n) {
        let (ls, lt) = (level(s), level(t));
        let maps = match (ls, lt) {
            (_, 0) => BTreeMap::new(),
            (2, 2) => (0..4).map(|m| (m, SparseMatrix::identity(1, &()))).collect(),
            _ => BTreeMap::from([(0, SparseMatrix::identity(1, &()))]),
        };
        restrictions.insert((s, t), ChainMap::new(values[&s].clone(), values[&t].clone(), 0, maps)?);
    }
    let presheaf = CoverPresheaf::new(n, values, restrictions)?;
    let mut products = BTreeMap::new();
    let mut units = BTreeMap::new();
    for j in 0u32..1 << n {
        let (t, u) = match level(j) {
            2 => (a_table.clone(), unit_vec(0)),
            1 => (q_table.clone(), unit_vec(0)),
            _ => (MulTable::new(), Vec::new()),
        };
        products.insert(j, t);
        units.insert(j, u);
    }
    CdgaPresheaf::new(presheaf, products, units)
}
