use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::InvolutiveError;
use crate::scalars::Rational;

/// A polynomial over ℚ in `nvars` commuting variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], &c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of {nvars}");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, &Rational::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self, InvolutiveError> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(InvolutiveError::VariableMismatch(format!("exponent vector of length {} in {nvars} variables", e.len())));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials in different numbers of variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
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
            return Self::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.iter().zip(eb).map(|(a, b)| a + b).collect(), &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, &(c * &Rational::from(e[i] as i64)));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(c.clone(), |acc, (k, x)| &acc * &x.pow(*k)))
            .sum()
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(c.to_f64(), |acc, (k, x)| acc * x.powi(*k as i32)))
            .sum()
    }

    /// `self(subs[0], …, subs[n−1])`; all substitutes share one variable set.
    pub fn substitute(&self, subs: &[Polynomial]) -> Result<Polynomial, InvolutiveError> {
        if subs.len() != self.nvars {
            return Err(InvolutiveError::VariableMismatch(format!("{} substitutes for {} variables", subs.len(), self.nvars)));
        }
        let target = subs.first().map_or(0, |s| s.nvars);
        if subs.iter().any(|s| s.nvars != target) {
            return Err(InvolutiveError::VariableMismatch("substitutes in different variables".into()));
        }
        let mut powers: Vec<Vec<Polynomial>> = subs.iter().map(|s| vec![Polynomial::constant(target, Rational::one()), s.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, k) in e.iter().enumerate() {
                while powers[i].len() <= *k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][*k as usize]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, name: &dyn Fn(usize) -> String) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { name(i) } else { format!("{}^{k}", name(i)) })
                .collect();
            match (abs.is_one(), factors.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (true, false) => write!(f, "{}", factors.join("*"))?,
                (false, false) => write!(f, "{abs}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }

    fn parse_with(nvars: usize, s: &str, index: &dyn Fn(&str) -> Option<usize>) -> Result<Self, InvolutiveError> {
        let bad = || InvolutiveError::Parse(s.to_string());
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
        let mut out = Self::zero(nvars);
        for piece in pieces {
            let (neg, body) = match piece.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let mut coeff = if neg { -Rational::one() } else { Rational::one() };
            let mut exps = vec![0u32; nvars];
            for factor in body.split('*') {
                if factor.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    let (v, k) = match factor.split_once('^') {
                        Some((v, k)) => (v, k.parse::<u32>().map_err(|_| bad())?),
                        None => (factor, 1),
                    };
                    exps[index(v).ok_or_else(bad)?] += k;
                } else {
                    coeff = &coeff * &factor.parse::<Rational>().map_err(|_| bad())?;
                }
            }
            out.add_term(exps, &coeff);
        }
        Ok(out)
    }

    /// Parses `"x1^2*x2 - 1/2*x1 + 3"`.
    pub fn parse(nvars: usize, s: &str) -> Result<Self, InvolutiveError> {
        Self::parse_with(nvars, s, &|v| v.strip_prefix('x').and_then(|n| n.parse::<usize>().ok()).filter(|i| (1..=nvars).contains(i)).map(|i| i - 1))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|i| format!("x{}", i + 1))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// A polynomial on the standard symplectic `ℝ^{2n}` with coordinates
/// `q1..qn, p1..pn` (stored in that order).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFunction {
    n: usize,
    poly: Polynomial,
}

impl PolyFunction {
    pub fn zero(n: usize) -> Self {
        PolyFunction { n, poly: Polynomial::zero(2 * n) }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        PolyFunction { n, poly: Polynomial::constant(2 * n, c) }
    }

    pub fn q(n: usize, i: usize) -> Self {
        PolyFunction { n, poly: Polynomial::var(2 * n, i) }
    }

    pub fn p(n: usize, i: usize) -> Self {
        PolyFunction { n, poly: Polynomial::var(2 * n, n + i) }
    }

    pub fn from_polynomial(n: usize, poly: Polynomial) -> Result<Self, InvolutiveError> {
        if poly.nvars() != 2 * n {
            return Err(InvolutiveError::VariableMismatch(format!("{} variables for ℝ^{}", poly.nvars(), 2 * n)));
        }
        Ok(PolyFunction { n, poly })
    }

    /// Degrees of freedom `n`; points have `2n` coordinates.
    pub fn dof(&self) -> usize {
        self.n
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn lift(&self, poly: Polynomial) -> Self {
        PolyFunction { n: self.n, poly }
    }

    fn same(&self, other: &Self) -> Result<(), InvolutiveError> {
        if self.n != other.n {
            return Err(InvolutiveError::VariableMismatch(format!("ℝ^{} vs ℝ^{}", 2 * self.n, 2 * other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, InvolutiveError> {
        self.same(other)?;
        Ok(self.lift(self.poly.add(&other.poly)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, InvolutiveError> {
        self.same(other)?;
        Ok(self.lift(self.poly.sub(&other.poly)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, InvolutiveError> {
        self.same(other)?;
        Ok(self.lift(self.poly.mul(&other.poly)))
    }

    pub fn neg(&self) -> Self {
        self.lift(self.poly.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.lift(self.poly.scale(c))
    }

    pub fn dq(&self, i: usize) -> Self {
        self.lift(self.poly.derivative(i))
    }

    pub fn dp(&self, i: usize) -> Self {
        self.lift(self.poly.derivative(self.n + i))
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.poly.eval(point)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.poly.eval_f64(point)
    }

    /// Parses `"q1^2*p1 - 1/2*q2 + 3"` on `ℝ^{2n}`.
    pub fn parse(n: usize, s: &str) -> Result<Self, InvolutiveError> {
        let index = |v: &str| {
            let (off, rest) = match v.split_at_checked(1)? {
                ("q", r) => (0, r),
                ("p", r) => (n, r),
                _ => return None,
            };
            let i: usize = rest.parse().ok()?;
            (1..=n).contains(&i).then(|| off + i - 1)
        };
        Ok(PolyFunction { n, poly: Polynomial::parse_with(2 * n, s, &index)? })
    }
}

impl fmt::Display for PolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        self.poly.fmt_with(f, &|i| if i < n { format!("q{}", i + 1) } else { format!("p{}", i - n + 1) })
    }
}

impl fmt::Debug for PolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFunction({self})")
    }
}

/// `{f, g} = Σ_i ∂f/∂q_i ∂g/∂p_i − ∂f/∂p_i ∂g/∂q_i`.
pub fn poisson_bracket(f: &PolyFunction, g: &PolyFunction) -> Result<PolyFunction, InvolutiveError> {
    f.same(g)?;
    let mut out = Polynomial::zero(2 * f.n);
    for i in 0..f.n {
        out = out.add(&f.dq(i).poly.mul(&g.dp(i).poly)).sub(&f.dp(i).poly.mul(&g.dq(i).poly));
    }
    Ok(f.lift(out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositionCheck {
    pub g1: PolyFunction,
    pub g2: PolyFunction,
    pub bracket: PolyFunction,
}

/// Verifies that `{f_i, f_j} = 0` for all pairs, then that the composites
/// `G_l = g_l(f_1, …, f_N)` Poisson commute.
pub fn check_composition_lemma(fs: &[PolyFunction], g1: &Polynomial, g2: &Polynomial) -> Result<CompositionCheck, InvolutiveError> {
    let Some(first) = fs.first() else {
        return Err(InvolutiveError::VariableMismatch("empty function family".into()));
    };
    for f in fs {
        first.same(f)?;
    }
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let b = poisson_bracket(&fs[i], &fs[j])?;
            if !b.is_zero() {
                return Err(InvolutiveError::HypothesisFailure { i: i + 1, j: j + 1, bracket: b.to_string() });
            }
        }
    }
    let subs: Vec<Polynomial> = fs.iter().map(|f| f.poly.clone()).collect();
    let big1 = first.lift(g1.substitute(&subs)?);
    let big2 = first.lift(g2.substitute(&subs)?);
    let bracket = poisson_bracket(&big1, &big2)?;
    if !bracket.is_zero() {
        return Err(InvolutiveError::LemmaViolation(bracket.to_string()));
    }
    Ok(CompositionCheck { g1: big1, g2: big2, bracket })
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    let v = rng.gen_range(-3i64..=3);
    if rng.gen_bool(0.25) {
        Rational::new(v, 2)
    } else {
        Rational::from(v)
    }
}

/// A random polynomial of total degree `≤ max_degree` with at most `terms`
/// terms.
pub fn random_polynomial(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32, terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for _ in 0..terms {
        let mut e = vec![0u32; nvars];
        let deg = rng.gen_range(0..=max_degree);
        for _ in 0..deg {
            e[rng.gen_range(0..nvars)] += 1;
        }
        p.add_term(e, &small(rng));
    }
    p
}

pub fn random_poly_function(rng: &mut ChaCha8Rng, n: usize, max_degree: u32, terms: usize) -> PolyFunction {
    PolyFunction { n, poly: random_polynomial(rng, 2 * n, max_degree, terms) }
}

/// A seeded Poisson-commuting family with two random quadratics in as many
/// variables as the family has members.
///
/// Each degree of freedom `i` contributes one of `q_i`, `p_i`, `q_i p_i`;
/// these commute pairwise, so any polynomials in them do too.
pub fn random_commuting_family(seed: u64) -> (Vec<PolyFunction>, Polynomial, Polynomial) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=2);
    let coords: Vec<PolyFunction> = (0..n)
        .map(|i| match rng.gen_range(0..3) {
            0 => PolyFunction::q(n, i),
            1 => PolyFunction::p(n, i),
            _ => PolyFunction::q(n, i).mul(&PolyFunction::p(n, i)).expect("same space"),
        })
        .collect();
    let subs: Vec<Polynomial> = coords.iter().map(|c| c.poly.clone()).collect();
    let members = rng.gen_range(2..=3);
    let fs = (0..members)
        .map(|_| {
            let r = random_polynomial(&mut rng, n, 2, 3);
            PolyFunction { n, poly: r.substitute(&subs).expect("arity matches") }
        })
        .collect();
    let g1 = random_polynomial(&mut rng, members, 2, 4);
    let g2 = random_polynomial(&mut rng, members, 2, 4);
    (fs, g1, g2)
}
