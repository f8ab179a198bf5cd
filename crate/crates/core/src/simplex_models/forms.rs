use std::collections::BTreeMap;
use std::fmt;

use super::inj::{faces, vertices};
use super::{InjMap, NCochain, SimplexError};
use crate::scalars::Rational;

/// A monomial `t^a dt_I` in reduced coordinates `t_1..t_p`: exponents
/// `a_1..a_p` and the bitmask `I` (bit `i−1` for `dt_i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub dt: u32,
}

impl Monomial {
    pub fn form_degree(&self) -> usize {
        self.dt.count_ones() as usize
    }

    /// Polynomial degree plus form degree.
    pub fn weight(&self) -> usize {
        self.exps.iter().sum::<u32>() as usize + self.form_degree()
    }
}

/// Sign of `dt_I ∧ dt_J` relative to `dt_{I∪J}`, or `None` if they overlap.
pub(crate) fn wedge_sign(i: u32, j: u32) -> Option<bool> {
    if i & j != 0 {
        return None;
    }
    // count pairs (a ∈ I, b ∈ J) with a > b
    let mut inversions = 0;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (i >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(inversions % 2 == 1)
}

/// A polynomial differential form on `Δ^p` in reduced coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyForm {
    p: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl PolyForm {
    pub fn zero(p: usize) -> Self {
        PolyForm { p, terms: BTreeMap::new() }
    }

    pub fn constant(p: usize, c: Rational) -> Self {
        Self::monomial(p, Monomial { exps: vec![0; p], dt: 0 }, c)
    }

    pub fn monomial(p: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.exps.len(), p, "monomial has wrong number of variables");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PolyForm { p, terms }
    }

    /// The reduced coordinate `t_i`, `1 ≤ i ≤ p`.
    pub fn t(p: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= p);
        let mut exps = vec![0; p];
        exps[i - 1] = 1;
        Self::monomial(p, Monomial { exps, dt: 0 }, Rational::one())
    }

    /// `dt_i`, `1 ≤ i ≤ p`.
    pub fn dt(p: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= p);
        Self::monomial(p, Monomial { exps: vec![0; p], dt: 1 << (i - 1) }, Rational::one())
    }

    /// Homogeneous coordinate `t_j`, `0 ≤ j ≤ p`, with `t_0 = 1 − Σ t_i`.
    pub fn barycentric(p: usize, j: usize) -> Self {
        if j > 0 {
            return Self::t(p, j);
        }
        let mut out = Self::constant(p, Rational::one());
        for i in 1..=p {
            out = out.sub(&Self::t(p, i));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial weight (0 for the zero form).
    pub fn weight(&self) -> usize {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "forms on different simplices");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.p);
        }
        PolyForm { p: self.p, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Exterior derivative.
    pub fn differential(&self) -> Self {
        let mut out = Self::zero(self.p);
        for (m, c) in &self.terms {
            for i in 0..self.p {
                let a = m.exps[i];
                if a == 0 {
                    continue;
                }
                // d(t^a) contributes a·t^{a−e_i} dt_i ∧ dt_I
                let Some(neg) = wedge_sign(1 << i, m.dt) else { continue };
                let mut exps = m.exps.clone();
                exps[i] -= 1;
                let mut coeff = c * &Rational::from_int(a as i64);
                if neg {
                    coeff = -coeff;
                }
                out.add_term(Monomial { exps, dt: m.dt | 1 << i }, &coeff);
            }
        }
        out
    }

    /// Wedge product with Koszul signs.
    pub fn wedge(&self, other: &Self) -> Result<Self, SimplexError> {
        if self.p != other.p {
            return Err(SimplexError::ShapeMismatch(format!("wedge of forms on Δ^{} and Δ^{}", self.p, other.p)));
        }
        let mut out = Self::zero(self.p);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let Some(neg) = wedge_sign(m1.dt, m2.dt) else { continue };
                let exps = m1.exps.iter().zip(&m2.exps).map(|(a, b)| a + b).collect();
                let mut c = c1 * c2;
                if neg {
                    c = -c;
                }
                out.add_term(Monomial { exps, dt: m1.dt | m2.dt }, &c);
            }
        }
        Ok(out)
    }

    /// Drops monomials of weight above `cutoff`.
    pub fn truncate(&self, cutoff: usize) -> Self {
        PolyForm {
            p: self.p,
            terms: self.terms.iter().filter(|(m, _)| m.weight() <= cutoff).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Pullback along `f: Δ^r → Δ^q` (`self` on `Δ^q`): substitute the
    /// homogeneous coordinate `t_j ↦ s_{f⁻¹(j)}` (or 0 off the image), then
    /// eliminate `s_0 = 1 − Σ s_i`.
    pub fn pullback(&self, f: &InjMap) -> Result<Self, SimplexError> {
        if f.target_dim() != self.p {
            return Err(SimplexError::ShapeMismatch(format!("{f} cannot pull back a form on Δ^{}", self.p)));
        }
        let r = f.source_dim();
        if r < 0 {
            return Err(SimplexError::ShapeMismatch("pullback to the empty simplex".into()));
        }
        let r = r as usize;
        // images of t_1..t_q and dt_1..dt_q as forms on Δ^r
        let coord: Vec<PolyForm> = (1..=self.p)
            .map(|j| match f.preimage(j) {
                Some(i) => Self::barycentric(r, i),
                None => Self::zero(r),
            })
            .collect();
        let dcoord: Vec<PolyForm> = coord.iter().map(PolyForm::differential).collect();
        let mut powers: Vec<Vec<PolyForm>> = coord.iter().map(|c| vec![Self::constant(r, Rational::one()), c.clone()]).collect();
        let mut out = Self::zero(r);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(r, c.clone());
            for (j, a) in m.exps.iter().enumerate() {
                let a = *a as usize;
                while powers[j].len() <= a {
                    let next = powers[j].last().unwrap().wedge(&coord[j])?;
                    powers[j].push(next);
                }
                acc = acc.wedge(&powers[j][a])?;
                if acc.is_zero() {
                    break;
                }
            }
            for (j, dc) in dcoord.iter().enumerate().take(self.p) {
                if acc.is_zero() {
                    break;
                }
                if m.dt >> j & 1 == 1 {
                    acc = acc.wedge(dc)?;
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// `∫_{Δ^p}`, with `dt_1 ∧ … ∧ dt_p` positively oriented:
    /// `∫ t^a dt_1…dt_p = ∏ a_i! / (p + Σ a_i)!`.
    pub fn integrate(&self) -> Rational {
        let top = if self.p == 0 { 0 } else { (1u32 << self.p) - 1 };
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            if m.dt != top {
                continue;
            }
            let num: Rational = m.exps.iter().map(|a| Rational::factorial(*a)).product();
            let den = Rational::factorial(self.p as u32 + m.exps.iter().sum::<u32>());
            total += &(c * &num.checked_div(&den).expect("factorial is nonzero"));
        }
        total
    }

    /// `I(ω)(F) = ∫_F ω|_F` for every face `F`.
    pub fn integration_cochain(&self) -> NCochain {
        let mut out = NCochain::zero(self.p);
        for k in 0..=self.p {
            for face in faces(self.p, k) {
                let v = self.pullback(&InjMap::face(self.p, face)).expect("face inclusion").integrate();
                out = out.add(&NCochain::from_face(self.p, face, v));
            }
        }
        out
    }

    /// Whitney elementary form of a face:
    /// `k!·Σ_j (−1)^j t_{i_j} dt_{i_0} ∧ … (omit j) … ∧ dt_{i_k}`.
    pub fn whitney_face(p: usize, face: u32) -> Self {
        let verts = vertices(face);
        let k = verts.len() - 1;
        let mut out = Self::zero(p);
        for j in 0..=k {
            let mut term = Self::barycentric(p, verts[j]);
            for (l, v) in verts.iter().enumerate() {
                if l != j {
                    term = term.wedge(&Self::barycentric(p, *v).differential()).expect("same simplex");
                }
            }
            if j % 2 == 1 {
                term = term.scale(&-Rational::one());
            }
            out = out.add(&term);
        }
        out.scale(&Rational::factorial(k as u32))
    }

    /// Whitney map `E: NC*(Δ^p) → Ω*(Δ^p)`.
    pub fn whitney(x: &NCochain) -> Self {
        let mut out = Self::zero(x.dim());
        for (face, v) in x.values() {
            out = out.add(&Self::whitney_face(x.dim(), face).scale(v));
        }
        out
    }
}

impl fmt::Display for PolyForm {
    /// `3/2*t1^2*t2*dt1^dt3 + …`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, a) in m.exps.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("t{}", i + 1)),
                    _ => factors.push(format!("t{}^{a}", i + 1)),
                }
            }
            let dts: Vec<String> = (0..self.p).filter(|i| m.dt >> i & 1 == 1).map(|i| format!("dt{}", i + 1)).collect();
            if !dts.is_empty() {
                factors.push(dts.join("^"));
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyForm(Δ^{}) {self}", self.p)
    }
}

impl PolyForm {
    /// Parses the text format produced by `Display` on `Δ^p`.
    pub fn parse(p: usize, s: &str) -> Result<Self, SimplexError> {
        let bad = || SimplexError::Parse(s.to_string());
        let mut out = Self::zero(p);
        let s = s.trim();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let mut coeff = Rational::one();
            let mut exps = vec![0u32; p];
            let mut dt = 0u32;
            let mut sign = false;
            for (n, factor) in term.trim().split('*').enumerate() {
                if factor.starts_with("dt") {
                    for d in factor.split('^') {
                        let i: usize = d.strip_prefix("dt").and_then(|v| v.parse().ok()).ok_or_else(bad)?;
                        if i == 0 || i > p || dt >> (i - 1) & 1 == 1 {
                            return Err(bad());
                        }
                        // dt's are listed in the order written; sort with signs
                        let higher = (dt >> i).count_ones();
                        sign ^= higher % 2 == 1;
                        dt |= 1 << (i - 1);
                    }
                } else if let Some(rest) = factor.strip_prefix('t') {
                    let (i, a) = match rest.split_once('^') {
                        Some((i, a)) => (i, a.parse::<u32>().map_err(|_| bad())?),
                        None => (rest, 1),
                    };
                    let i: usize = i.parse().map_err(|_| bad())?;
                    if i == 0 || i > p {
                        return Err(bad());
                    }
                    exps[i - 1] += a;
                } else if n == 0 {
                    coeff = factor.parse::<Rational>().map_err(|_| bad())?;
                } else {
                    return Err(bad());
                }
            }
            if sign {
                coeff = -coeff;
            }
            out.add_term(Monomial { exps, dt }, &coeff);
        }
        Ok(out)
    }
}
