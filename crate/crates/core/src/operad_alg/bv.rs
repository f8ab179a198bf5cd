//! BV structures on truncated polyvector algebras and an exhaustive axiom
//! checker over the monomial basis.

use std::collections::HashMap;

use serde::Serialize;

use super::polyvector::{derived_bracket, PolyRing, Polyvector, PvMonomial};
use super::OperadError;
use crate::exec::Execution;

/// Which degree −1 operator to use; `DropTerm` is a deliberately broken
/// divergence that omits the `∂_{x_i}∂_{ξ_i}` summand on polyvectors of
/// degree ≥ 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BvOperator {
    Divergence,
    DropTerm { var: usize },
}

#[derive(Clone, Debug)]
pub struct PolyvectorBv {
    pub ring: PolyRing,
    pub operator: BvOperator,
    basis: Vec<PvMonomial>,
}

/// Exponent vectors with entries `≥ 0` and sum `≤ d`.
fn bounded_exponents(vars: usize, d: i32) -> Vec<Vec<i32>> {
    if vars == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in bounded_exponents(vars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn box_exponents(vars: usize, lo: i32, hi: i32) -> Vec<Vec<i32>> {
    if vars == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in lo..=hi {
        for mut rest in box_exponents(vars - 1, lo, hi) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn with_all_xi(vars: usize, exps: Vec<Vec<i32>>) -> Vec<PvMonomial> {
    let mut out: Vec<PvMonomial> = exps.into_iter().flat_map(|e| (0u32..1 << vars).map(move |xi| PvMonomial { exps: e.clone(), xi })).collect();
    out.sort();
    out
}

impl PolyvectorBv {
    /// Polyvectors on `ℚ[x_1..x_n]` with polynomial degree `≤ max_degree`.
    pub fn polynomial(vars: usize, max_degree: i32) -> Self {
        let basis = with_all_xi(vars, bounded_exponents(vars, max_degree));
        PolyvectorBv { ring: PolyRing::polynomial(vars), operator: BvOperator::Divergence, basis }
    }

    /// Polyvectors on the Laurent ring with every exponent in `[lo, hi]`.
    pub fn laurent(vars: usize, lo: i32, hi: i32) -> Self {
        let basis = with_all_xi(vars, box_exponents(vars, lo, hi));
        PolyvectorBv { ring: PolyRing::laurent(vars), operator: BvOperator::Divergence, basis }
    }

    /// An explicit list of basis monomials.
    pub fn with_basis(ring: PolyRing, mut basis: Vec<PvMonomial>) -> Self {
        basis.sort();
        basis.dedup();
        PolyvectorBv { ring, operator: BvOperator::Divergence, basis }
    }

    pub fn with_operator(mut self, operator: BvOperator) -> Self {
        self.operator = operator;
        self
    }

    pub fn basis(&self) -> Vec<Polyvector> {
        self.basis.iter().map(|m| Polyvector::monomial(self.ring, m.clone(), 1.into()).expect("basis lies in the ring")).collect()
    }

    pub fn delta(&self, a: &Polyvector) -> Polyvector {
        match self.operator {
            BvOperator::Divergence => a.bv_delta(),
            BvOperator::DropTerm { var } => a.delta_filtered(|m, i| !(i == var && m.degree() >= 2)),
        }
    }

    pub fn bracket(&self, a: &Polyvector, b: &Polyvector) -> Result<Polyvector, OperadError> {
        derived_bracket(a, b, |x| self.delta(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub checked: usize,
    pub passed: bool,
    /// The offending basis elements of the first failure.
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BvReport {
    pub ring: String,
    pub operator: BvOperator,
    pub basis_size: usize,
    pub axioms: Vec<AxiomResult>,
}

impl BvReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }
}

fn sign(odd: bool, x: Polyvector) -> Polyvector {
    if odd {
        x.neg()
    } else {
        x
    }
}

/// Brackets of monomials, memoised.
struct Brackets<'a> {
    bv: &'a PolyvectorBv,
    cache: HashMap<(PvMonomial, PvMonomial), Polyvector>,
}

impl Brackets<'_> {
    fn of(&mut self, a: &Polyvector, b: &Polyvector) -> Result<Polyvector, OperadError> {
        let mut out = Polyvector::zero(a.ring());
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let key = (ma.clone(), mb.clone());
                if !self.cache.contains_key(&key) {
                    let x = Polyvector::monomial(a.ring(), ma.clone(), 1.into())?;
                    let y = Polyvector::monomial(b.ring(), mb.clone(), 1.into())?;
                    let v = self.bv.bracket(&x, &y)?;
                    self.cache.insert(key.clone(), v);
                }
                out = out.add(&self.cache[&key].scale(&(ca * cb)));
            }
        }
        Ok(out)
    }
}

type Failure = Option<Vec<usize>>;

/// Checks `Δ² = 0`, `Δ1 = 0`, antisymmetry, Leibniz in both slots, Jacobi
/// and the compatibility of `Δ` with the bracket on every basis tuple.
pub fn bv_axiom_report(bv: &PolyvectorBv, exec: Execution) -> Result<BvReport, OperadError> {
    let basis = bv.basis();
    let deg = |x: &Polyvector| x.degree().unwrap_or(0);
    let nb = basis.len();
    let ring = bv.ring;
    let mut axioms = Vec::new();
    let mut push = |axiom: &str, checked: usize, fail: Failure| {
        let witness = fail.map(|idx| idx.iter().map(|i| basis[*i].to_string()).collect());
        axioms.push(AxiomResult { axiom: axiom.into(), checked, passed: witness.is_none(), witness });
    };

    let delta_sq = basis.iter().position(|a| !bv.delta(&bv.delta(a)).is_zero()).map(|i| vec![i]);
    push("Δ² = 0", nb, delta_sq);
    let unit = (!bv.delta(&Polyvector::one(ring)).is_zero()).then(Vec::new);
    push("Δ(1) = 0", 1, unit);

    // pairs, parallel over the first slot
    let pair_failures: Vec<Result<(Failure, Failure), OperadError>> = exec.map_range(nb, |i| {
        let mut br = Brackets { bv, cache: HashMap::new() };
        let a = &basis[i];
        let (mut anti, mut compat) = (None, None);
        for (j, b) in basis.iter().enumerate() {
            let (da, db) = (deg(a) as i64 - 1, deg(b) as i64 - 1);
            let ab = br.of(a, b)?;
            let ba = br.of(b, a)?;
            if anti.is_none() && ab != sign(da * db % 2 == 0, ba) {
                anti = Some(vec![i, j]);
            }
            // Δ[a, b] = [Δa, b] + (−1)^{|a|−1} [a, Δb]
            let rhs = br.of(&bv.delta(a), b)?.add(&sign(da.rem_euclid(2) == 1, br.of(a, &bv.delta(b))?));
            if compat.is_none() && bv.delta(&ab) != rhs {
                compat = Some(vec![i, j]);
            }
        }
        Ok((anti, compat))
    });
    let mut anti = None;
    let mut compat = None;
    for r in pair_failures {
        let (a, c) = r?;
        anti = anti.or(a);
        compat = compat.or(c);
    }
    push("graded antisymmetry", nb * nb, anti);
    push("Δ is a derivation of the bracket", nb * nb, compat);

    let triple_failures: Vec<Result<[Failure; 3], OperadError>> = exec.map_range(nb, |i| {
        let mut br = Brackets { bv, cache: HashMap::new() };
        let a = &basis[i];
        let mut fails: [Failure; 3] = [None, None, None];
        let sa = deg(a) as i64;
        for (j, b) in basis.iter().enumerate() {
            let sb = deg(b) as i64;
            let ab = br.of(a, b)?;
            for (k, c) in basis.iter().enumerate() {
                let sc = deg(c) as i64;
                // [a, bc] = [a, b] c + (−1)^{(|a|−1)|b|} b [a, c]
                if fails[0].is_none() {
                    let lhs = br.of(a, &b.wedge(c)?)?;
                    let rhs = ab.wedge(c)?.add(&sign(((sa - 1) * sb).rem_euclid(2) == 1, b.wedge(&br.of(a, c)?)?));
                    if lhs != rhs {
                        fails[0] = Some(vec![i, j, k]);
                    }
                }
                // [ab, c] = a [b, c] + (−1)^{|b|(|c|−1)} [a, c] b
                if fails[1].is_none() {
                    let lhs = br.of(&a.wedge(b)?, c)?;
                    let rhs = a.wedge(&br.of(b, c)?)?.add(&sign((sb * (sc - 1)).rem_euclid(2) == 1, br.of(a, c)?.wedge(b)?));
                    if lhs != rhs {
                        fails[1] = Some(vec![i, j, k]);
                    }
                }
                // [a, [b, c]] = [[a, b], c] + (−1)^{(|a|−1)(|b|−1)} [b, [a, c]]
                if fails[2].is_none() {
                    let bc = br.of(b, c)?;
                    let ac = br.of(a, c)?;
                    let lhs = br.of(a, &bc)?;
                    let rhs = br.of(&ab, c)?.add(&sign(((sa - 1) * (sb - 1)).rem_euclid(2) == 1, br.of(b, &ac)?));
                    if lhs != rhs {
                        fails[2] = Some(vec![i, j, k]);
                    }
                }
            }
        }
        Ok(fails)
    });
    let mut fails: [Failure; 3] = [None, None, None];
    for r in triple_failures {
        for (slot, f) in fails.iter_mut().zip(r?) {
            if slot.is_none() {
                *slot = f;
            }
        }
    }
    let [second, first, jacobi] = fails;
    push("Leibniz in the second slot", nb * nb * nb, second);
    push("Leibniz in the first slot", nb * nb * nb, first);
    push("graded Jacobi", nb * nb * nb, jacobi);

    Ok(BvReport { ring: ring.to_string(), operator: bv.operator, basis_size: nb, axioms })
}

/// [`bv_axiom_report`], failing on the first violated axiom.
pub fn bv_axiom_check(bv: &PolyvectorBv, exec: Execution) -> Result<BvReport, OperadError> {
    let report = bv_axiom_report(bv, exec)?;
    if let Some(bad) = report.axioms.iter().find(|a| !a.passed) {
        return Err(OperadError::AxiomFailure { axiom: bad.axiom.clone(), witness: bad.witness.clone().unwrap_or_default() });
    }
    Ok(report)
}
