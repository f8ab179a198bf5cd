//! The Novikov ring truncated at `T^E`, with exponents in `(1/den)·ℤ≥0`.
//!
//! An element is a finite sum `Σ c_k T^(k/den)` with `k/den < E`. Writing
//! `u = T^(1/den)`, the ring is `ℚ[u]/(u^levels)` with `levels = ⌈den·E⌉`,
//! which is how the homology code treats it.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;

use super::{Rational, ScalarError};

/// Ring parameters: exponent denominator and cutoff `E`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NovikovRing {
    den: u32,
    cutoff: Rational,
    levels: u32,
}

impl NovikovRing {
    pub fn new(den: u32, cutoff: Rational) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::BadRing("denominator must be positive".into()));
        }
        if cutoff.signum() <= 0 {
            return Err(ScalarError::BadRing("cutoff must be positive".into()));
        }
        let scaled = &cutoff * &Rational::from_int(den as i64);
        let levels = scaled
            .ceil()
            .to_u32()
            .filter(|&l| l <= 4096)
            .ok_or_else(|| ScalarError::BadRing("den·cutoff too large".into()))?;
        Ok(NovikovRing { den, cutoff, levels })
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    /// Number of surviving powers of `u = T^(1/den)`.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Exponent `k/den` of `u^k`.
    pub fn exponent(&self, k: u32) -> Rational {
        Rational::new(k as i64, self.den as i64)
    }

    /// `k` with `u^k = T^alpha`, if `alpha` lies on the exponent lattice.
    pub fn lattice_index(&self, alpha: &Rational) -> Option<u32> {
        let scaled = alpha * &Rational::from_int(self.den as i64);
        if alpha.is_negative() || !scaled.is_integer() {
            return None;
        }
        scaled.to_i64().and_then(|v| u32::try_from(v).ok())
    }
}

impl fmt::Display for NovikovRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Novikov(den={}, cutoff={})", self.den, self.cutoff)
    }
}

/// T-adic valuation: least exponent with nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// An element of the truncated Novikov ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NovikovElem {
    ring: NovikovRing,
    /// `k -> c` for the term `c·T^(k/den)`; no zero coefficients, all `k < levels`.
    terms: BTreeMap<u32, Rational>,
}

impl NovikovElem {
    pub fn zero(ring: NovikovRing) -> Self {
        NovikovElem { ring, terms: BTreeMap::new() }
    }

    pub fn constant(ring: NovikovRing, c: Rational) -> Self {
        Self::monomial(ring, c, 0)
    }

    /// `c·u^k`, truncated.
    pub fn monomial(ring: NovikovRing, c: Rational, k: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() && k < ring.levels {
            terms.insert(k, c);
        }
        NovikovElem { ring, terms }
    }

    /// `c·T^alpha`; `alpha` must be a multiple of `1/den`.
    pub fn term(ring: NovikovRing, c: Rational, alpha: &Rational) -> Result<Self, ScalarError> {
        let k = ring
            .lattice_index(alpha)
            .ok_or_else(|| ScalarError::Parse(format!("exponent {alpha} not in (1/{})ℤ≥0", ring.den)))?;
        Ok(Self::monomial(ring, c, k))
    }

    pub fn ring(&self) -> &NovikovRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `u^k`.
    pub fn coeff(&self, k: u32) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(k, c)` pairs with `c ≠ 0`, ascending in `k`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    fn check_ring(&self, other: &Self) -> Result<(), ScalarError> {
        if self.ring != other.ring {
            return Err(ScalarError::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        Ok(NovikovElem { ring: self.ring.clone(), terms })
    }

    /// Product with every term of exponent `>= E` discarded.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_ring(other)?;
        let levels = self.ring.levels;
        let mut terms: BTreeMap<u32, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let k = a + b;
                if k >= levels {
                    break;
                }
                *terms.entry(k).or_insert_with(Rational::zero) += &(ca * cb);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(NovikovElem { ring: self.ring.clone(), terms })
    }

    pub fn negate(&self) -> Self {
        NovikovElem {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return NovikovElem::zero(self.ring.clone());
        }
        NovikovElem {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect(),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(k) => Valuation::Finite(self.ring.exponent(*k)),
            None => Valuation::Infinite,
        }
    }

    /// Lattice valuation `k` of the leading `u^k`, `None` for zero.
    pub fn valuation_index(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    /// Multiplicative inverse modulo `T^E` for valuation-0 elements.
    ///
    /// Positive-valuation elements only become invertible over the Novikov
    /// field, which is outside the truncated ring.
    pub fn unitize(&self) -> Result<Self, ScalarError> {
        let c0 = match self.terms.get(&0) {
            Some(c) => c.clone(),
            None => return Err(ScalarError::NotInvertible),
        };
        let c0_inv = c0.recip()?;
        // a = c0·(1 + n) with n nilpotent; a⁻¹ = c0⁻¹·Σ (−n)^j.
        let mut neg_n = self.scale(&c0_inv).negate();
        neg_n.terms.remove(&0);
        let ring = self.ring.clone();
        let mut inv = NovikovElem::constant(ring.clone(), Rational::one());
        let mut power = inv.clone();
        for _ in 1..ring.levels {
            power = power.checked_mul(&neg_n)?;
            if power.is_zero() {
                break;
            }
            inv = inv.checked_add(&power)?;
        }
        Ok(inv.scale(&c0_inv))
    }

    /// Parses `"c1*T^(a1) + c2*T^(a2) + ..."`; also accepts `-` separators,
    /// bare constants, `T`, `T^(a)` and `T^a`.
    pub fn parse(ring: &NovikovRing, s: &str) -> Result<Self, ScalarError> {
        let bad = || ScalarError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut pieces: Vec<String> = Vec::new();
        let mut depth = 0i32;
        let mut current = String::new();
        for (i, ch) in compact.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let after_op = current.ends_with(['*', '^', '/']) || current.is_empty();
            if depth == 0 && (ch == '+' || ch == '-') && i > 0 && !after_op {
                pieces.push(std::mem::take(&mut current));
                if ch == '-' {
                    current.push('-');
                }
                continue;
            }
            current.push(ch);
        }
        pieces.push(current);
        let mut acc = NovikovElem::zero(ring.clone());
        for piece in pieces.iter().filter(|p| !p.is_empty() && p.as_str() != "+") {
            let piece = piece.strip_prefix('+').unwrap_or(piece);
            let (coeff, exponent) = match piece.find('T') {
                None => (piece.parse::<Rational>()?, Rational::zero()),
                Some(pos) => {
                    let (cpart, tpart) = piece.split_at(pos);
                    let cpart = cpart.strip_suffix('*').unwrap_or(cpart);
                    let coeff = match cpart {
                        "" => Rational::one(),
                        "-" => -Rational::one(),
                        c => c.parse::<Rational>()?,
                    };
                    let rest = &tpart[1..];
                    let exponent = if rest.is_empty() {
                        Rational::one()
                    } else {
                        let e = rest.strip_prefix('^').ok_or_else(bad)?;
                        let e = e.strip_prefix('(').and_then(|e| e.strip_suffix(')')).unwrap_or(e);
                        e.parse::<Rational>()?
                    };
                    (coeff, exponent)
                }
            };
            acc = acc.checked_add(&NovikovElem::term(ring.clone(), coeff, &exponent)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for NovikovElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*T^({})", self.ring.exponent(*k))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(den: u32, e: i64) -> NovikovRing {
        NovikovRing::new(den, Rational::from_int(e)).unwrap()
    }

    fn parse(r: &NovikovRing, s: &str) -> NovikovElem {
        NovikovElem::parse(r, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(2, 2);
        let a = parse(&r, "1 + T^(1/2)");
        let b = parse(&r, "1 - T^(1/2)");
        assert_eq!(a.checked_mul(&b).unwrap(), parse(&r, "1 - T"));
    }

    #[test]
    fn truncation_kills_high_powers() {
        let r = ring(2, 2);
        let a = parse(&r, "T^(3/2)");
        assert!(a.checked_mul(&a).unwrap().is_zero());
        let s = parse(&r, "T^(1/2) + T").checked_add(&parse(&r, "-1*T^(1/2)")).unwrap();
        assert_eq!(s, parse(&r, "T"));
    }

    #[test]
    fn ring_mismatch() {
        let a = NovikovElem::constant(ring(1, 2), Rational::one());
        let b = NovikovElem::constant(ring(2, 2), Rational::one());
        assert!(matches!(a.checked_add(&b), Err(ScalarError::RingMismatch(..))));
        assert!(matches!(a.checked_mul(&b), Err(ScalarError::RingMismatch(..))));
    }

    #[test]
    fn valuations() {
        let r = ring(2, 2);
        assert_eq!(parse(&r, "3*T^(1/2) + T").valuation(), Valuation::Finite(Rational::new(1, 2)));
        assert_eq!(NovikovElem::zero(r.clone()).valuation(), Valuation::Infinite);
        assert_eq!(parse(&r, "5").valuation(), Valuation::Finite(Rational::zero()));
    }

    #[test]
    fn unitize_cases() {
        let r = ring(1, 4);
        let a = parse(&r, "1 + T");
        let inv = a.unitize().unwrap();
        // geometric series 1 - T + T^2 - T^3, independently written down
        assert_eq!(inv, parse(&r, "1 - T + T^(2) - T^(3)"));
        assert_eq!(parse(&r, "2").unitize().unwrap(), parse(&r, "1/2"));
        let r2 = ring(2, 2);
        assert_eq!(parse(&r2, "T^(1/2)").unitize(), Err(ScalarError::NotInvertible));
    }

    #[test]
    fn text_round_trip() {
        let r = ring(3, 2);
        let a = parse(&r, "-2/3 + 4*T^(2/3) + T^(5/3)");
        assert_eq!(a.to_string(), "-2/3 + 4*T^(2/3) + 1*T^(5/3)");
        assert_eq!(parse(&r, &a.to_string()), a);
        assert!(NovikovElem::parse(&r, "T^(1/2)").is_err());
    }

    #[test]
    fn fractional_cutoff_rounds_levels_up() {
        let r = NovikovRing::new(2, Rational::new(3, 4)).unwrap();
        // exponents 0 and 1/2 are < 3/4
        assert_eq!(r.levels(), 2);
    }
}
