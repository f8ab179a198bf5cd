//! Polyvector fields `Sym(Der(O)[1])` over `O = ℚ[x_1..x_n]` or its Laurent
//! localization, written `x^a ξ_I` with `ξ_i` the odd generator for `∂/∂x_i`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use super::OperadError;
use crate::scalars::Rational;
use crate::simplex_models::wedge_sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct PolyRing {
    pub vars: usize,
    pub laurent: bool,
}

impl PolyRing {
    pub fn polynomial(vars: usize) -> Self {
        PolyRing { vars, laurent: false }
    }

    pub fn laurent(vars: usize) -> Self {
        PolyRing { vars, laurent: true }
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (1..=self.vars).map(|i| format!("x{i}")).collect();
        if self.laurent {
            let inv: Vec<String> = vars.iter().map(|v| format!("1/{v}")).collect();
            write!(f, "Q[{}, {}]", vars.join(", "), inv.join(", "))
        } else {
            write!(f, "Q[{}]", vars.join(", "))
        }
    }
}

/// `x^exps ξ_I`, bit `i` of `xi` standing for `ξ_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PvMonomial {
    pub exps: Vec<i32>,
    pub xi: u32,
}

impl PvMonomial {
    /// Polyvector degree: the number of `ξ`'s.
    pub fn degree(&self) -> usize {
        self.xi.count_ones() as usize
    }

    /// Total polynomial degree `Σ a_i`.
    pub fn poly_degree(&self) -> i32 {
        self.exps.iter().sum()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polyvector {
    ring: PolyRing,
    terms: BTreeMap<PvMonomial, Rational>,
}

impl Polyvector {
    pub fn zero(ring: PolyRing) -> Self {
        Polyvector { ring, terms: BTreeMap::new() }
    }

    pub fn one(ring: PolyRing) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: PolyRing, c: Rational) -> Self {
        let mut out = Self::zero(ring);
        out.add_term(PvMonomial { exps: vec![0; ring.vars], xi: 0 }, &c);
        out
    }

    pub fn monomial(ring: PolyRing, m: PvMonomial, c: Rational) -> Result<Self, OperadError> {
        if m.exps.len() != ring.vars || m.xi >> ring.vars != 0 {
            return Err(OperadError::NotInRing(format!("{m:?} has the wrong number of variables for {ring}")));
        }
        if !ring.laurent && m.exps.iter().any(|e| *e < 0) {
            return Err(OperadError::NotInRing(format!("negative exponent in {ring}")));
        }
        let mut out = Self::zero(ring);
        out.add_term(m, &c);
        Ok(out)
    }

    /// `x_i` (0-based index).
    pub fn x(ring: PolyRing, i: usize) -> Self {
        let mut exps = vec![0; ring.vars];
        exps[i] = 1;
        Self::monomial(ring, PvMonomial { exps, xi: 0 }, Rational::one()).expect("variable in range")
    }

    /// `ξ_i = ∂/∂x_i` (0-based index).
    pub fn xi(ring: PolyRing, i: usize) -> Self {
        Self::monomial(ring, PvMonomial { exps: vec![0; ring.vars], xi: 1 << i }, Rational::one()).expect("variable in range")
    }

    pub fn from_terms(ring: PolyRing, terms: impl IntoIterator<Item = (PvMonomial, Rational)>) -> Result<Self, OperadError> {
        let mut out = Self::zero(ring);
        for (m, c) in terms {
            out = out.add(&Self::monomial(ring, m, c)?);
        }
        Ok(out)
    }

    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PvMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PvMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(PvMonomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Polyvector-degree-`k` part.
    pub fn part(&self, k: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect();
        Polyvector { ring: self.ring, terms }
    }

    fn add_term(&mut self, m: PvMonomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        Polyvector { ring: self.ring, terms }
    }

    /// Exterior product, graded-commutative in the polyvector degree.
    pub fn wedge(&self, other: &Self) -> Result<Self, OperadError> {
        if self.ring != other.ring {
            return Err(OperadError::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        let mut out = Self::zero(self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let Some(neg) = wedge_sign(m1.xi, m2.xi) else { continue };
                let exps = m1.exps.iter().zip(&m2.exps).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                out.add_term(PvMonomial { exps, xi: m1.xi | m2.xi }, &if neg { -c } else { c });
            }
        }
        Ok(out)
    }

    pub fn partial_x(&self, i: usize) -> Self {
        let mut out = Self::zero(self.ring);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            out.add_term(PvMonomial { exps, xi: m.xi }, &(c * &Rational::from(e)));
        }
        out
    }

    /// Left derivative `∂/∂ξ_i`: moves `ξ_i` to the front, then deletes it.
    pub fn partial_xi(&self, i: usize) -> Self {
        let mut out = Self::zero(self.ring);
        for (m, c) in &self.terms {
            if m.xi & (1 << i) == 0 {
                continue;
            }
            let before = (m.xi & ((1 << i) - 1)).count_ones();
            let c = if before % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(PvMonomial { exps: m.exps.clone(), xi: m.xi & !(1 << i) }, &c);
        }
        out
    }

    /// Divergence `Δ = Σ_i ∂²/∂x_i∂ξ_i` against `dx_1 ∧ … ∧ dx_n`.
    pub fn bv_delta(&self) -> Self {
        self.delta_filtered(|_, _| true)
    }

    /// `Σ_i ∂_{x_i} ∂_{ξ_i}` restricted to the `(monomial, i)` pairs accepted by `keep`.
    pub(crate) fn delta_filtered(&self, keep: impl Fn(&PvMonomial, usize) -> bool) -> Self {
        let mut out = Self::zero(self.ring);
        for (m, c) in &self.terms {
            let mut rest = m.xi;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let e = m.exps[i];
                if e == 0 || !keep(m, i) {
                    continue;
                }
                let before = (m.xi & ((1 << i) - 1)).count_ones();
                let mut exps = m.exps.clone();
                exps[i] -= 1;
                let mut v = c * &Rational::from(e);
                if before % 2 == 1 {
                    v = -v;
                }
                out.add_term(PvMonomial { exps, xi: m.xi & !(1 << i) }, &v);
            }
        }
        out
    }

    /// `[a, b] = (−1)^{|a|+1} (Δ(ab) − Δ(a) b − (−1)^{|a|} a Δ(b))`, extended
    /// bilinearly over homogeneous parts; `[ξ_i, f] = ∂f/∂x_i`.
    pub fn bracket(&self, other: &Self) -> Result<Self, OperadError> {
        derived_bracket(self, other, Polyvector::bv_delta)
    }
}

/// The bracket measuring the failure of `delta` to be a derivation.
pub(crate) fn derived_bracket(a: &Polyvector, b: &Polyvector, delta: impl Fn(&Polyvector) -> Polyvector) -> Result<Polyvector, OperadError> {
    let mut out = Polyvector::zero(a.ring);
    let top = a.terms.keys().map(PvMonomial::degree).max().unwrap_or(0);
    for k in 0..=top {
        let ak = a.part(k);
        if ak.is_zero() {
            continue;
        }
        let odd = k % 2 == 1;
        let mut t = delta(&ak.wedge(b)?).sub(&delta(&ak).wedge(b)?);
        let third = ak.wedge(&delta(b))?;
        t = if odd { t.add(&third) } else { t.sub(&third) };
        out = if odd { out.add(&t) } else { out.sub(&t) };
    }
    Ok(out)
}

impl fmt::Display for Polyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            for (i, e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    e => factors.push(format!("x{}^{e}", i + 1)),
                }
            }
            if m.xi != 0 {
                let xis: Vec<String> = (0..32).filter(|i| m.xi & (1 << i) != 0).map(|i| format!("xi{}", i + 1)).collect();
                factors.push(xis.join("^"));
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polyvector({self})")
    }
}

impl Polyvector {
    /// Parses `2*x1^3*x2^-1*xi1^xi2 - 1/2*x1`: terms are `*`-products of a
    /// rational, powers `x<i>^<e>` and a wedge `xi<i>^xi<j>^…`.
    pub fn parse(ring: PolyRing, s: &str) -> Result<Self, OperadError> {
        let bad = || OperadError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let chars: Vec<char> = compact.chars().collect();
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..chars.len() {
            if (chars[i] == '+' || chars[i] == '-') && !matches!(chars[i - 1], '^' | '*' | '+' | '-') {
                pieces.push(chars[start..i].iter().collect::<String>());
                start = i;
            }
        }
        pieces.push(chars[start..].iter().collect());
        let mut out = Self::zero(ring);
        for piece in pieces {
            let (neg, body) = match piece.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let mut term = Self::one(ring);
            for factor in body.split('*') {
                let f = if factor.starts_with("xi") {
                    let mut w = Self::one(ring);
                    for g in factor.split('^') {
                        let i: usize = g.strip_prefix("xi").and_then(|n| n.parse().ok()).ok_or_else(bad)?;
                        if i == 0 || i > ring.vars {
                            return Err(bad());
                        }
                        w = w.wedge(&Self::xi(ring, i - 1))?;
                    }
                    w
                } else if let Some(rest) = factor.strip_prefix('x') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e.parse::<i32>().map_err(|_| bad())?),
                        None => (rest, 1),
                    };
                    let i: usize = var.parse().map_err(|_| bad())?;
                    if i == 0 || i > ring.vars {
                        return Err(bad());
                    }
                    let mut exps = vec![0; ring.vars];
                    exps[i - 1] = exp;
                    Self::monomial(ring, PvMonomial { exps, xi: 0 }, Rational::one())?
                } else {
                    Self::constant(ring, factor.parse().map_err(|_| bad())?)
                };
                term = term.wedge(&f)?;
            }
            out = if neg { out.sub(&term) } else { out.add(&term) };
        }
        Ok(out)
    }
}
