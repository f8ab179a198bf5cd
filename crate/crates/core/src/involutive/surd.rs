//! Exact real numbers of the form `Σ c_i √m_i` with rational `c_i` and
//! positive integer radicands. Closed under `+`, `−`, `×`; the sign is
//! decided exactly by repeated squaring.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalars::Rational;

#[derive(Clone, Default)]
pub struct Surd {
    /// radicand ↦ coefficient; radicand 1 is the rational part
    terms: BTreeMap<BigInt, Rational>,
}

fn big(n: &BigInt) -> Rational {
    Rational::from_bigints(n.clone(), BigInt::one()).expect("nonzero denominator")
}

/// `m = k² · rest`, pulling out perfect squares and small square factors.
fn split_square(m: &BigInt) -> (BigInt, BigInt) {
    let r = m.sqrt();
    if &r * &r == *m {
        return (r, BigInt::one());
    }
    let mut k = BigInt::one();
    let mut rest = m.clone();
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let pp = BigInt::from(p * p);
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            k *= p;
        }
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        return (k * r, BigInt::one());
    }
    (k, rest)
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn rational(c: Rational) -> Self {
        let mut s = Surd::zero();
        s.add_term(BigInt::one(), c);
        s
    }

    /// `√r` for `r ≥ 0`.
    pub fn sqrt(r: &Rational) -> Self {
        assert!(!r.is_negative(), "square root of a negative number");
        let (n, d) = (r.numer(), r.denom());
        let mut s = Surd::zero();
        s.add_term(n * &d, Rational::from_bigints(BigInt::one(), d).expect("positive denominator"));
        s
    }

    fn add_term(&mut self, m: BigInt, c: Rational) {
        if c.is_zero() || m.is_zero() {
            return;
        }
        let (k, rest) = split_square(&m);
        let c = &c * &big(&k);
        let slot = self.terms.entry(rest.clone()).or_insert_with(Rational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&rest);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    /// The value if it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Surd { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Surd::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Surd::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma == mb {
                    out.add_term(BigInt::one(), &(ca * cb) * &big(ma));
                } else {
                    out.add_term(ma * mb, ca * cb);
                }
            }
        }
        out
    }

    pub fn sign(&self) -> Ordering {
        let terms: Vec<(BigInt, Rational)> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        sign_of(&terms)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(m, c)| c.to_f64() * big(m).to_f64().sqrt()).sum()
    }
}

/// Sign of `Σ c_i √m_i`: split off the last term `T`; if `T` and the rest
/// `A` have opposite signs, compare `A²` with `T²`.
fn sign_of(terms: &[(BigInt, Rational)]) -> Ordering {
    let sig = |c: &Rational| c.signum().cmp(&0);
    match terms {
        [] => Ordering::Equal,
        [(_, c)] => sig(c),
        [rest @ .., (m, c)] => {
            let sa = sign_of(rest);
            let st = sig(c);
            if sa == Ordering::Equal || sa == st {
                return if sa == Ordering::Equal { st } else { sa };
            }
            let a = rest.iter().fold(Surd::zero(), |acc, (m, c)| {
                let mut t = Surd::zero();
                t.add_term(m.clone(), c.clone());
                acc.add(&t)
            });
            let diff = a.mul(&a).sub(&Surd::rational(&(c * c) * &big(m)));
            match diff.sign() {
                Ordering::Greater => sa,
                Ordering::Less => st,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).sign() == Ordering::Equal
    }
}

impl Eq for Surd {}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }
}

impl From<Rational> for Surd {
    fn from(c: Rational) -> Self {
        Surd::rational(c)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (m.is_one(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "√{m}")?,
                (false, false) => write!(f, "{abs}*√{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}
