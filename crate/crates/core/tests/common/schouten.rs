//! Polyvector oracle: terms keyed by (exponents, ascending list of ξ
//! indices), with the Schouten–Nijenhuis bracket written out by hand.

use std::collections::BTreeMap;

use descentlab::operad_alg::Polyvector;
use descentlab::scalars::Rational;

pub type OTerm = (Vec<i32>, Vec<usize>);
pub type OPoly = BTreeMap<OTerm, Rational>;

pub fn o_from(p: &Polyvector) -> OPoly {
    p.terms()
        .map(|(m, c)| ((m.exps.clone(), (0..32).filter(|i| m.xi >> i & 1 == 1).collect()), c.clone()))
        .collect()
}

pub fn o_add(acc: &mut OPoly, t: OTerm, c: Rational) {
    let e = acc.entry(t.clone()).or_insert_with(Rational::zero);
    *e += &c;
    if e.is_zero() {
        acc.remove(&t);
    }
}

/// Sorts a list of distinct indices, returning the parity of the permutation.
fn sort_sign(mut v: Vec<usize>) -> Option<(Vec<usize>, bool)> {
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    let mut d = v.clone();
    d.dedup();
    (d.len() == v.len()).then_some((v, odd))
}

pub fn o_mul(a: &OPoly, b: &OPoly) -> OPoly {
    let mut out = OPoly::new();
    for ((ea, xa), ca) in a {
        for ((eb, xb), cb) in b {
            let cat: Vec<usize> = xa.iter().chain(xb).copied().collect();
            let Some((xs, odd)) = sort_sign(cat) else { continue };
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = ca * cb;
            o_add(&mut out, (e, xs), if odd { -c } else { c });
        }
    }
    out
}

pub fn o_dx(a: &OPoly, i: usize) -> OPoly {
    let mut out = OPoly::new();
    for ((e, x), c) in a {
        if e[i] != 0 {
            let mut e2 = e.clone();
            e2[i] -= 1;
            o_add(&mut out, (e2, x.clone()), c * &Rational::from(e[i]));
        }
    }
    out
}

/// ∂/∂ξ_i acting from the left (`left = true`) or from the right.
pub fn o_dxi(a: &OPoly, i: usize, left: bool) -> OPoly {
    let mut out = OPoly::new();
    for ((e, x), c) in a {
        let Some(pos) = x.iter().position(|v| *v == i) else { continue };
        let moves = if left { pos } else { x.len() - 1 - pos };
        let mut x2 = x.clone();
        x2.remove(pos);
        o_add(&mut out, (e.clone(), x2), if moves % 2 == 1 { -c.clone() } else { c.clone() });
    }
    out
}

pub fn o_divergence(a: &OPoly, n: usize) -> OPoly {
    let mut out = OPoly::new();
    for i in 0..n {
        for (t, c) in o_dx(&o_dxi(a, i, true), i) {
            o_add(&mut out, t, c);
        }
    }
    out
}

/// Schouten–Nijenhuis bracket of homogeneous `P`, `Q` of degrees `p`, `q`:
/// `Σ_i (P ←∂_{ξ_i})(∂_{x_i} Q) − (−1)^{(p−1)(q−1)} (Q ←∂_{ξ_i})(∂_{x_i} P)`.
pub fn schouten(a: &OPoly, p: usize, b: &OPoly, q: usize, n: usize) -> OPoly {
    let mut out = OPoly::new();
    let odd = (p as i64 - 1) * (q as i64 - 1) % 2 != 0;
    for i in 0..n {
        for (t, c) in o_mul(&o_dxi(a, i, false), &o_dx(b, i)) {
            o_add(&mut out, t, c);
        }
        for (t, c) in o_mul(&o_dxi(b, i, false), &o_dx(a, i)) {
            o_add(&mut out, t, if odd { c } else { -c });
        }
    }
    out
}
