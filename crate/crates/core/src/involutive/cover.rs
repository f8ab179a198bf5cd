use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::poly::{poisson_bracket, PolyFunction};
use super::smoothing::{CoverFunction, Value};
use super::InvolutiveError;
use crate::exec::Execution;
use crate::scalars::Rational;

/// A target set described by polynomial sign conditions.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    /// `{f ≤ 0}`
    NonPositive(PolyFunction),
    /// `{f < 0}`
    Negative(PolyFunction),
    All(Vec<Region>),
    Any(Vec<Region>),
}

impl Region {
    pub fn contains(&self, x: &[Rational]) -> bool {
        match self {
            Region::NonPositive(f) => f.eval(x).signum() <= 0,
            Region::Negative(f) => f.eval(x).signum() < 0,
            Region::All(rs) => rs.iter().all(|r| r.contains(x)),
            Region::Any(rs) => rs.iter().any(|r| r.contains(x)),
        }
    }
}

/// A product grid: each axis runs from `lo` to `hi` (inclusive) in steps of
/// `step`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: Vec<(Rational, Rational, Rational)>,
}

impl Grid {
    pub fn new(axes: Vec<(Rational, Rational, Rational)>) -> Result<Self, InvolutiveError> {
        if let Some((lo, hi, st)) = axes.iter().find(|(lo, hi, st)| st.signum() <= 0 || hi < lo) {
            return Err(InvolutiveError::BadSequence(format!("grid axis [{lo}, {hi}] step {st}")));
        }
        Ok(Grid { axes })
    }

    /// The same axis `[lo, hi]` with `per_axis` evenly spaced points on
    /// each of `dim` coordinates.
    pub fn square(dim: usize, lo: Rational, hi: Rational, per_axis: usize) -> Result<Self, InvolutiveError> {
        let step = if per_axis < 2 { Rational::one() } else { (&hi - &lo).checked_div(&Rational::from(per_axis as i64 - 1)).expect("nonzero") };
        Grid::new(vec![(lo, hi, step); dim])
    }

    fn axis(&self, k: usize) -> Vec<Rational> {
        let (lo, hi, st) = &self.axes[k];
        let mut v = Vec::new();
        let mut x = lo.clone();
        while &x <= hi {
            v.push(x.clone());
            x += st;
        }
        v
    }

    pub fn points(&self) -> Vec<Vec<Rational>> {
        let mut pts: Vec<Vec<Rational>> = vec![vec![]];
        for k in 0..self.axes.len() {
            let ax = self.axis(k);
            pts = pts.into_iter().flat_map(|p| ax.iter().map(move |x| [p.clone(), vec![x.clone()]].concat())).collect();
        }
        pts
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BulletResult {
    pub bullet: &'static str,
    pub checked: usize,
    pub violations: usize,
    pub witness: Option<String>,
}

impl BulletResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakCoverReport {
    pub points: usize,
    /// whether every comparison was decided exactly
    pub exact: bool,
    pub bullets: Vec<BulletResult>,
}

impl WeakCoverReport {
    pub fn passed(&self) -> bool {
        self.bullets.iter().all(BulletResult::passed)
    }
}

fn fmt_point(x: &[Rational]) -> String {
    let v: Vec<String> = x.iter().map(|c| c.to_string()).collect();
    format!("({})", v.join(", "))
}

#[derive(Default)]
struct Tally {
    checked: usize,
    violations: usize,
    witness: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.violations += other.violations;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }

    fn finish(self, bullet: &'static str) -> BulletResult {
        BulletResult { bullet, checked: self.checked, violations: self.violations, witness: self.witness }
    }
}

/// Checks the defining conditions of a weakly Poisson commuting family on
/// a grid: `seqs[m][i]` is `f_{m,i}` and `targets[m]` is `K_m`.
///
/// * negative on `K_m`: `f_{m,i}(x) < 0` for sampled `x ∈ K_m`;
/// * increasing: `f_{m,i}(x) < f_{m,i+1}(x)` at every sample;
/// * eventually negative implies `K_m`: with finitely many terms, samples
///   where the last `f_{m,i}` is negative must lie in `K_m`;
/// * Poisson commuting: `{f_{m,i}, f_{m',i}} = 0` exactly, checked on the
///   polynomial leaves (which suffices for composites by the chain rule).
pub fn check_weak_cover_conditions(seqs: &[Vec<CoverFunction>], targets: &[Region], grid: &Grid, exec: Execution) -> Result<WeakCoverReport, InvolutiveError> {
    if seqs.len() != targets.len() {
        return Err(InvolutiveError::BadSequence(format!("{} function sequences for {} sets", seqs.len(), targets.len())));
    }
    let dims: Vec<usize> = seqs.iter().flatten().map(|f| 2 * f.dof()).collect();
    if dims.iter().any(|d| *d != grid.axes.len()) {
        return Err(InvolutiveError::VariableMismatch(format!("grid of dimension {} for functions on {dims:?}", grid.axes.len())));
    }
    let points = grid.points();
    let per_point = exec.map(&points, |x| {
        let mut t = [Tally::default(), Tally::default(), Tally::default()];
        let mut exact = true;
        for (m, seq) in seqs.iter().enumerate() {
            let vals: Vec<Value> = seq.iter().map(|f| f.eval(x)).collect();
            exact &= vals.iter().all(Value::is_exact);
            let inside = targets[m].contains(x);
            if inside {
                for (i, v) in vals.iter().enumerate() {
                    t[0].record(v.sign() == Ordering::Less, || format!("f_{{{},{}}}{} = {v} on K_{}", m + 1, i + 1, fmt_point(x), m + 1));
                }
            }
            for (i, w) in vals.windows(2).enumerate() {
                t[1].record(w[0].compare(&w[1]) == Ordering::Less, || {
                    format!("f_{{{m1},{i1}}}{p} = {} ≥ f_{{{m1},{i2}}}{p} = {}", w[0], w[1], m1 = m + 1, i1 = i + 1, i2 = i + 2, p = fmt_point(x))
                });
            }
            if let Some(last) = vals.last() {
                t[2].record(last.sign() != Ordering::Less || inside, || {
                    format!("f_{{{},{}}}{} = {last} < 0 outside K_{}", m + 1, vals.len(), fmt_point(x), m + 1)
                });
            }
        }
        (t, exact)
    });
    let mut tallies = [Tally::default(), Tally::default(), Tally::default()];
    let mut exact = true;
    for (t, e) in per_point {
        exact &= e;
        for (acc, x) in tallies.iter_mut().zip(t) {
            acc.merge(x);
        }
    }
    let mut brackets = Tally::default();
    let len = seqs.iter().map(Vec::len).min().unwrap_or(0);
    for i in 0..len {
        for m in 0..seqs.len() {
            for m2 in m + 1..seqs.len() {
                for a in seqs[m][i].leaves() {
                    for b in seqs[m2][i].leaves() {
                        let br = poisson_bracket(a, b)?;
                        brackets.record(br.is_zero(), || format!("{{{a}, {b}}} = {br} (sets {}, {}, index {})", m + 1, m2 + 1, i + 1));
                    }
                }
            }
        }
    }
    let [neg, inc, ev] = tallies;
    Ok(WeakCoverReport {
        points: points.len(),
        exact,
        bullets: vec![neg.finish("negative on K"), inc.finish("strictly increasing"), ev.finish("eventually negative implies K"), brackets.finish("Poisson commuting")],
    })
}
