//! Products on the global constructions of a CDGA presheaf: the Čech cup
//! product and the levelwise product on `TW`, plus their comparison on
//! homology.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::cdga::CdgaPresheaf;
use super::{accumulate, OperadError, Vector};
use crate::complexes::{ChainMap, Complex};
use crate::descent::{cech, nerve, tot, tot_cech_iso, tw, tw_to_tot, DescentError, ModelKind, Nerve, PresheafCech, Totalization};
use crate::exec::Execution;
use crate::linalg::{in_column_span, kernel, SparseMatrix};
use crate::scalars::Rational;
use crate::simplex_models::{FormModel, PolyForm};

fn add_into(acc: &mut BTreeMap<usize, Rational>, offset: usize, v: &[(usize, Rational)], scale: &Rational) {
    for (i, c) in v {
        *acc.entry(offset + i).or_insert_with(Rational::zero) += &(c * scale);
    }
}

fn slice(v: &[(usize, Rational)], offset: usize, len: usize) -> Vector {
    v.iter().filter(|(i, _)| *i >= offset && *i < offset + len).map(|(i, c)| (i - offset, c.clone())).collect()
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

fn sub(a: &[(usize, Rational)], b: &[(usize, Rational)]) -> Vector {
    let mut acc: BTreeMap<usize, Rational> = a.iter().cloned().collect();
    add_into(&mut acc, 0, b, &-Rational::one());
    accumulate(acc)
}

/// Whether `v ∈ Z^n` is a coboundary.
pub fn is_coboundary(c: &Complex<Rational>, n: i32, v: &[(usize, Rational)]) -> bool {
    if v.is_empty() {
        return true;
    }
    let col = SparseMatrix::from_columns(c.dim(n), &[v.to_vec()]);
    in_column_span(&c.diff(n - 1), &col)
}

/// Cocycles whose classes form a basis of `H^n`.
pub fn cocycle_representatives(c: &Complex<Rational>, n: i32) -> Vec<Vector> {
    let z = kernel(&c.diff(n));
    let mut span = c.diff(n - 1);
    let mut out = Vec::new();
    for j in 0..z.dim() {
        let col = SparseMatrix::from_columns(c.dim(n), &[z.basis.column(j)]);
        if !in_column_span(&span, &col) {
            span = span.hstack(&col);
            out.push(z.basis.column(j));
        }
    }
    out
}

/// The Čech complex of a CDGA presheaf with its cup product
/// `(x ⌣ y)_{i_0..i_{p+q}} = (−1)^{s q} x_{i_0..i_p} · y_{i_p..i_{p+q}}`,
/// `s` the internal degree of `x`.
#[derive(Clone, Debug)]
pub struct CechAlgebra<'a> {
    cdga: &'a CdgaPresheaf,
    pub cech: PresheafCech,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CupWitness {
    pub degrees: (i32, i32),
    pub x: Vec<(usize, Rational)>,
    pub y: Vec<(usize, Rational)>,
    pub xy: Vec<(usize, Rational)>,
    pub yx: Vec<(usize, Rational)>,
}

pub fn cech_cup(cdga: &CdgaPresheaf) -> Result<CechAlgebra<'_>, OperadError> {
    Ok(CechAlgebra { cdga, cech: cech(cdga.presheaf())? })
}

impl CechAlgebra<'_> {
    pub fn complex(&self) -> &Complex<Rational> {
        self.cech.complex()
    }

    /// The image of the unit of `F(K)`.
    pub fn unit(&self) -> Vector {
        let top = self.cdga.unit(crate::descent::TOP);
        self.cech.augmentation().map(0).apply(top)
    }

    fn index_sets(&self) -> Vec<u32> {
        let n = self.cdga.presheaf().n();
        (0..n).flat_map(|p| self.cech.nerve.members(p).to_vec()).collect()
    }

    pub fn cup(&self, a: i32, x: &[(usize, Rational)], b: i32, y: &[(usize, Rational)]) -> Result<Vector, OperadError> {
        let f = self.cdga.presheaf();
        let sets = self.index_sets();
        let mut acc = BTreeMap::new();
        for &jx in &sets {
            let p = jx.count_ones() as i32 - 1;
            let s = a - p;
            let (ox, lx) = self.cech.block(jx, a);
            let xj = slice(x, ox, lx);
            if xj.is_empty() {
                continue;
            }
            let last = 31 - jx.leading_zeros();
            for &jy in &sets {
                if jy.trailing_zeros() != last {
                    continue;
                }
                let q = jy.count_ones() as i32 - 1;
                let t = b - q;
                let (oy, ly) = self.cech.block(jy, b);
                let yj = slice(y, oy, ly);
                if yj.is_empty() {
                    continue;
                }
                let j = jx | jy;
                let rx = f.restriction(jx, j).map(s).apply(&xj);
                let ry = f.restriction(jy, j).map(t).apply(&yj);
                let prod = self.cdga.product(j, s, &rx, t, &ry)?;
                let (o, _) = self.cech.block(j, a + b);
                add_into(&mut acc, o, &prod, &sign((s * q).rem_euclid(2) == 1));
            }
        }
        Ok(accumulate(acc))
    }

    /// A pair of basis cochains with `x ⌣ y ≠ ±(y ⌣ x)`, if any.
    pub fn commutativity_witness(&self) -> Result<Option<CupWitness>, OperadError> {
        let c = self.complex();
        for a in c.degrees() {
            for b in c.degrees() {
                for i in 0..c.dim(a) {
                    for j in 0..c.dim(b) {
                        let (x, y) = (vec![(i, Rational::one())], vec![(j, Rational::one())]);
                        let xy = self.cup(a, &x, b, &y)?;
                        let yx = self.cup(b, &y, a, &x)?;
                        let neg: Vector = yx.iter().map(|(k, v)| (*k, -v.clone())).collect();
                        if xy != yx && xy != neg {
                            return Ok(Some(CupWitness { degrees: (a, b), x, y, xy, yx }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// `TW` of the nerve of a CDGA presheaf at several weight cutoffs, with the
/// product `(a ⊗ ω)(b ⊗ η) = (−1)^{|ω||b|} ab ⊗ ω ∧ η`; a product of
/// elements of cutoffs `P_1`, `P_2` lands in cutoff `P_1 + P_2`.
#[derive(Clone, Debug)]
pub struct TwAlgebra<'a> {
    cdga: &'a CdgaPresheaf,
    pub nerve: Nerve,
    tws: BTreeMap<usize, Totalization>,
}

/// `TW` at cutoffs `P`, `2P` and `3P`, enough for products of two and three
/// elements of cutoff `P`.
pub fn tw_product(cdga: &CdgaPresheaf, p: usize, exec: Execution) -> Result<TwAlgebra<'_>, OperadError> {
    TwAlgebra::new(cdga, &[p, 2 * p, 3 * p], exec)
}

impl<'a> TwAlgebra<'a> {
    pub fn new(cdga: &'a CdgaPresheaf, cutoffs: &[usize], exec: Execution) -> Result<Self, OperadError> {
        let nerve = nerve(cdga.presheaf())?;
        let mut tws = BTreeMap::new();
        for &c in cutoffs {
            tws.insert(c, tw(&nerve.cosimplicial, c, exec)?);
        }
        Ok(TwAlgebra { cdga, nerve, tws })
    }

    pub fn tw(&self, cutoff: usize) -> Option<&Totalization> {
        self.tws.get(&cutoff)
    }

    fn cutoff_of(t: &Totalization) -> usize {
        match t.kind {
            ModelKind::Forms { cutoff } => cutoff,
            ModelKind::Cochains => unreachable!("TW uses forms"),
        }
    }

    /// `(D^p)^s` index `→ (J, index in F(J)^s)`.
    fn locate(&self, p: usize, s: i32, idx: usize) -> (u32, usize) {
        for &j in self.nerve.members(p) {
            let (o, d) = self.nerve.block(j, s);
            if idx >= o && idx < o + d {
                return (j, idx - o);
            }
        }
        unreachable!("index inside the level")
    }

    /// The product of `x ∈ TW_{P_1}^m` and `y ∈ TW_{P_2}^n`, in `TW_{P_1+P_2}^{m+n}`.
    pub fn product(&self, p1: usize, m: i32, x: &[(usize, Rational)], p2: usize, n: i32, y: &[(usize, Rational)]) -> Result<Vector, OperadError> {
        let needed = p1 + p2;
        let given = *self.tws.keys().next_back().unwrap_or(&0);
        let (Some(s1), Some(s2), Some(tgt)) = (self.tws.get(&p1), self.tws.get(&p2), self.tws.get(&needed)) else {
            return Err(DescentError::CutoffTooSmall { needed, given }.into());
        };
        let (f1, f2, ft) = (FormModel::new(Self::cutoff_of(s1)), FormModel::new(Self::cutoff_of(s2)), FormModel::new(needed));
        let xa = s1.to_ambient(m, x);
        let ya = s2.to_ambient(n, y);
        let mut forms: HashMap<(usize, usize, usize, usize, usize), Vector> = HashMap::new();
        let mut acc = BTreeMap::new();
        let tblocks = tgt.blocks(m + n);
        for b1 in s1.blocks(m) {
            let xs = slice(&xa, b1.offset, b1.a_dim * b1.b_dim);
            if xs.is_empty() {
                continue;
            }
            let basis1 = f1.basis(b1.p, b1.k);
            for b2 in s2.blocks(n).iter().filter(|b| b.p == b1.p) {
                let ys = slice(&ya, b2.offset, b2.a_dim * b2.b_dim);
                if ys.is_empty() {
                    continue;
                }
                let Some(bt) = tblocks.iter().find(|b| b.p == b1.p && b.k == b1.k + b2.k) else { continue };
                let basis2 = f2.basis(b2.p, b2.k);
                let (sa, sb) = (m - b1.k as i32, n - b2.k as i32);
                let koszul = sign((b1.k as i32 * sb).rem_euclid(2) == 1);
                for (ix, cx) in &xs {
                    let (ai, wi) = (ix / b1.b_dim, ix % b1.b_dim);
                    let (jx, li) = self.locate(b1.p, sa, ai);
                    for (iy, cy) in &ys {
                        let (bi, wj) = (iy / b2.b_dim, iy % b2.b_dim);
                        let (jy, lj) = self.locate(b2.p, sb, bi);
                        if jx != jy {
                            continue;
                        }
                        let ab = self.cdga.product(jx, sa, &[(li, Rational::one())], sb, &[(lj, Rational::one())])?;
                        if ab.is_empty() {
                            continue;
                        }
                        let key = (b1.p, b1.k, wi, b2.k, wj);
                        let w = forms
                            .entry(key)
                            .or_insert_with(|| {
                                let p = b1.p;
                                let a = PolyForm::monomial(p, basis1[wi].clone(), Rational::one());
                                let b = PolyForm::monomial(p, basis2[wj].clone(), Rational::one());
                                ft.to_vector(&a.wedge(&b).expect("same simplex"), b1.k + b2.k)
                            })
                            .clone();
                        let (o, _) = self.nerve.block(jx, sa + sb);
                        let coeff = &(cx * cy) * &koszul;
                        for (k, c) in &ab {
                            let row = o + k;
                            for (wk, cw) in &w {
                                let idx = bt.offset + row * bt.b_dim + wk;
                                *acc.entry(idx).or_insert_with(Rational::zero) += &(&(c * cw) * &coeff);
                            }
                        }
                    }
                }
            }
        }
        Ok(tgt.coords_of_ambient(m + n, &accumulate(acc))?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub checked: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

impl ProductCheck {
    fn new() -> Self {
        ProductCheck { checked: 0, passed: true, witness: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.passed {
            self.passed = false;
            self.witness = Some(what());
        }
    }
}

fn basis_vectors(c: &Complex<Rational>) -> Vec<(i32, Vector)> {
    c.degrees().flat_map(|n| (0..c.dim(n)).map(move |i| (n, vec![(i, Rational::one())]))).collect()
}

impl TwAlgebra<'_> {
    /// `xy = (−1)^{mn} yx` on all basis pairs of `TW_P`.
    pub fn check_commutative(&self, p: usize) -> Result<ProductCheck, OperadError> {
        let c = &self.tws[&p].complex;
        let basis = basis_vectors(c);
        let mut out = ProductCheck::new();
        for (m, x) in &basis {
            for (n, y) in &basis {
                let xy = self.product(p, *m, x, p, *n, y)?;
                let yx = self.product(p, *n, y, p, *m, x)?;
                let yx: Vector = yx.into_iter().map(|(i, v)| (i, &v * &sign((m * n).rem_euclid(2) == 1))).collect();
                out.record(xy == yx, || format!("{x:?} in degree {m}, {y:?} in degree {n}"));
            }
        }
        Ok(out)
    }

    /// `(xy)z = x(yz)` on all basis triples of `TW_P`.
    pub fn check_associative(&self, p: usize) -> Result<ProductCheck, OperadError> {
        let c = &self.tws[&p].complex;
        let basis = basis_vectors(c);
        let mut out = ProductCheck::new();
        for (m, x) in &basis {
            for (n, y) in &basis {
                let xy = self.product(p, *m, x, p, *n, y)?;
                for (k, z) in &basis {
                    let left = self.product(2 * p, m + n, &xy, p, *k, z)?;
                    let yz = self.product(p, *n, y, p, *k, z)?;
                    let right = self.product(p, *m, x, 2 * p, n + k, &yz)?;
                    out.record(left == right, || format!("{x:?}, {y:?}, {z:?} in degrees {m}, {n}, {k}"));
                }
            }
        }
        Ok(out)
    }

    /// `d(xy) = dx·y + (−1)^m x·dy` on all basis pairs of `TW_P`.
    pub fn check_leibniz(&self, p: usize) -> Result<ProductCheck, OperadError> {
        let c = &self.tws[&p].complex;
        let t = &self.tws[&(2 * p)].complex;
        let basis = basis_vectors(c);
        let mut out = ProductCheck::new();
        for (m, x) in &basis {
            let dx = c.diff(*m).apply(x);
            for (n, y) in &basis {
                let dy = c.diff(*n).apply(y);
                let lhs = t.diff(m + n).apply(&self.product(p, *m, x, p, *n, y)?);
                let a = self.product(p, m + 1, &dx, p, *n, y)?;
                let b = self.product(p, *m, x, p, n + 1, &dy)?;
                let rhs = if m.rem_euclid(2) == 0 { sub(&a, &b.iter().map(|(i, v)| (*i, -v.clone())).collect::<Vec<_>>()) } else { sub(&a, &b) };
                out.record(lhs == rhs, || format!("{x:?} in degree {m}, {y:?} in degree {n}"));
            }
        }
        Ok(out)
    }

    /// The augmentation `F(K) → TW` is an algebra map: `ε(ab) = ε(a)ε(b)`
    /// and `ε(1) = 1` (the unit of `TW_P` is `ε(1)` by definition, so the
    /// first check is the content).
    pub fn check_augmentation(&self, p: usize) -> Result<ProductCheck, OperadError> {
        let f = self.cdga.presheaf();
        let top = f.top();
        let (s, t) = (&self.tws[&p], &self.tws[&(2 * p)]);
        let (es, et) = (s.augmentation.as_ref().expect("augmented"), t.augmentation.as_ref().expect("augmented"));
        let basis = basis_vectors(top);
        let mut out = ProductCheck::new();
        for (m, a) in &basis {
            for (n, b) in &basis {
                let ab = self.cdga.product(crate::descent::TOP, *m, a, *n, b);
                let Ok(ab) = ab else { continue };
                let lhs = et.map(m + n).apply(&ab);
                let rhs = self.product(p, *m, &es.map(*m).apply(a), p, *n, &es.map(*n).apply(b))?;
                out.record(lhs == rhs, || format!("{a:?} in degree {m}, {b:?} in degree {n}"));
            }
        }
        Ok(out)
    }
}

/// Induced products on `H(TW)` and `H(Čech)` under
/// `Φ = tot_cech_iso ∘ tw_to_tot`, and graded commutativity of the cup
/// product on cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductComparison {
    pub cutoff: usize,
    pub agree: ProductCheck,
    pub cup_commutative_on_homology: ProductCheck,
    pub cup_associative: ProductCheck,
}

impl ProductComparison {
    pub fn passed(&self) -> bool {
        self.agree.passed && self.cup_commutative_on_homology.passed && self.cup_associative.passed
    }
}

pub fn compare_products(cdga: &CdgaPresheaf, p: usize, exec: Execution) -> Result<ProductComparison, OperadError> {
    let alg = TwAlgebra::new(cdga, &[p, 2 * p], exec)?;
    let cup = cech_cup(cdga)?;
    let t = tot(&alg.nerve.cosimplicial, exec)?;
    let iso = tot_cech_iso(&t, &cup.cech.cech)?;
    let phi = |c: usize| -> Result<ChainMap<Rational>, OperadError> { Ok(tw_to_tot(&alg.tws[&c], &t)?.then(&iso)?) };
    let (phi1, phi2) = (phi(p)?, phi(2 * p)?);
    let twp = &alg.tws[&p].complex;
    let cc = cup.complex();
    let reps: Vec<(i32, Vector)> = twp.degrees().flat_map(|n| cocycle_representatives(twp, n).into_iter().map(move |v| (n, v))).collect();
    let mut agree = ProductCheck::new();
    let mut comm = ProductCheck::new();
    for (m, u) in &reps {
        for (n, v) in &reps {
            let lhs = phi2.map(m + n).apply(&alg.product(p, *m, u, p, *n, v)?);
            let (pu, pv) = (phi1.map(*m).apply(u), phi1.map(*n).apply(v));
            let rhs = cup.cup(*m, &pu, *n, &pv)?;
            agree.record(is_coboundary(cc, m + n, &sub(&lhs, &rhs)), || format!("classes in degrees {m}, {n}"));
            let swapped: Vector = cup.cup(*n, &pv, *m, &pu)?.into_iter().map(|(i, c)| (i, &c * &sign((m * n).rem_euclid(2) == 1))).collect();
            comm.record(is_coboundary(cc, m + n, &sub(&rhs, &swapped)), || format!("classes in degrees {m}, {n}"));
        }
    }
    let mut assoc = ProductCheck::new();
    let basis = basis_vectors(cc);
    for (a, x) in &basis {
        for (b, y) in &basis {
            let xy = cup.cup(*a, x, *b, y)?;
            for (c, z) in &basis {
                let left = cup.cup(a + b, &xy, *c, z)?;
                let right = cup.cup(*a, x, b + c, &cup.cup(*b, y, *c, z)?)?;
                assoc.record(left == right, || format!("{x:?}, {y:?}, {z:?} in degrees {a}, {b}, {c}"));
            }
        }
    }
    Ok(ProductComparison { cutoff: p, agree, cup_commutative_on_homology: comm, cup_associative: assoc })
}
