//! Canonical Poisson bracket on dense exponent maps.

use std::cmp::Ordering;
use std::collections::HashMap;

use descentlab::involutive::{PolyFunction, SmoothingMode};
use descentlab::scalars::Rational;

use super::q;

pub type Dense = HashMap<Vec<u32>, Rational>;

pub fn dense(p: &PolyFunction) -> Dense {
    p.polynomial().terms().map(|(e, c)| (e.clone(), c.clone())).collect()
}

pub fn clean(mut d: Dense) -> Dense {
    d.retain(|_, c| !c.is_zero());
    d
}

pub fn d_diff(a: &Dense, i: usize) -> Dense {
    let mut out = Dense::new();
    for (e, c) in a {
        if e[i] > 0 {
            let mut e2 = e.clone();
            e2[i] -= 1;
            *out.entry(e2).or_insert_with(Rational::zero) += &(c * &q(e[i] as i64));
        }
    }
    clean(out)
}

pub fn d_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rational::zero) += &(ca * cb);
        }
    }
    clean(out)
}

pub fn d_add(a: &Dense, b: &Dense, sign: i64) -> Dense {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(e.clone()).or_insert_with(Rational::zero) += &(c * &q(sign));
    }
    clean(out)
}

pub fn d_bracket(a: &Dense, b: &Dense, n: usize) -> Dense {
    (0..n).fold(Dense::new(), |acc, i| {
        let t = d_add(&d_mul(&d_diff(a, i), &d_diff(b, n + i)), &d_mul(&d_diff(a, n + i), &d_diff(b, i)), -1);
        d_add(&acc, &t, 1)
    })
}

/// `Less` on `B`, `Equal` on the hyperbola branch, `Greater` elsewhere.
pub fn region_oracle(delta: &Rational, mode: SmoothingMode, x: &Rational, y: &Rational) -> Ordering {
    let xy = x * y;
    match mode {
        SmoothingMode::Intersection => {
            if x.signum() < 0 && y.signum() < 0 {
                delta.cmp(&xy)
            } else {
                Ordering::Greater
            }
        }
        SmoothingMode::Union => {
            if x.signum() > 0 && y.signum() > 0 {
                xy.cmp(delta)
            } else {
                Ordering::Less
            }
        }
    }
}
