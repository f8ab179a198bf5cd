use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::PolyFunction;
use super::surd::Surd;
use super::InvolutiveError;
use crate::scalars::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothingMode {
    Intersection,
    Union,
}

/// The hyperbola branch `xy = δ` in the negative quadrant (intersection) or
/// in the positive quadrant (union).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothingCurve {
    delta: Rational,
    mode: SmoothingMode,
}

impl SmoothingCurve {
    pub fn new(delta: Rational, mode: SmoothingMode) -> Result<Self, InvolutiveError> {
        if delta.signum() <= 0 {
            return Err(InvolutiveError::BadSequence(format!("δ = {delta} is not positive")));
        }
        Ok(SmoothingCurve { delta, mode })
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn mode(&self) -> SmoothingMode {
        self.mode
    }

    /// Where `(x, y)` sits relative to the region `B` cut out by the curve:
    /// `Less` inside, `Equal` on the curve, `Greater` outside.
    ///
    /// Intersection: `B = {x < 0, y < 0, xy > δ}`.
    /// Union: `B` is the complement of `{x > 0, y > 0, xy ≥ δ}`.
    pub fn locate(&self, x: &Rational, y: &Rational) -> Ordering {
        let xy = x * y;
        match self.mode {
            SmoothingMode::Intersection if x.is_negative() && y.is_negative() => self.delta.cmp(&xy),
            SmoothingMode::Intersection => Ordering::Greater,
            SmoothingMode::Union if x.signum() > 0 && y.signum() > 0 => xy.cmp(&self.delta),
            SmoothingMode::Union => Ordering::Less,
        }
    }
}

/// Signed length along the slope-1 line from `(x, y)` to the curve:
/// `((x + y) ± √((x − y)² + 4δ)) / √2`, `+` for intersection, `−` for union.
pub fn smoothing_h(c: &SmoothingCurve, x: &Rational, y: &Rational) -> Surd {
    let d = x - y;
    let disc = &(&d * &d) + &(&Rational::from(4) * &c.delta);
    let root = match c.mode {
        SmoothingMode::Intersection => Surd::sqrt(&disc),
        SmoothingMode::Union => Surd::sqrt(&disc).neg(),
    };
    let inv_sqrt2 = Surd::sqrt(&Rational::new(1, 2));
    Surd::rational(x + y).add(&root).mul(&inv_sqrt2)
}

fn smoothing_h_f64(c: &SmoothingCurve, x: f64, y: f64) -> f64 {
    let root = ((x - y) * (x - y) + 4.0 * c.delta.to_f64()).sqrt();
    let s = match c.mode {
        SmoothingMode::Intersection => root,
        SmoothingMode::Union => -root,
    };
    (x + y + s) / std::f64::consts::SQRT_2
}

/// A value of a cover function: exact when it is one smoothing step away from
/// polynomials, floating point for deeper compositions.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Surd),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(s) => s.to_f64(),
            Value::Approx(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn sign(&self) -> Ordering {
        match self {
            Value::Exact(s) => s.sign(),
            Value::Approx(v) => v.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    pub fn compare(&self, other: &Value) -> Ordering {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a.cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()).unwrap_or(Ordering::Equal),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(s) => write!(f, "{s}"),
            Value::Approx(v) => write!(f, "≈{v}"),
        }
    }
}

/// `g = h_δ(left, right)`, nested to any depth, with polynomial leaves.
#[derive(Clone, Debug, PartialEq)]
pub enum CoverFunction {
    Poly(PolyFunction),
    Smoothed { curve: SmoothingCurve, left: Box<CoverFunction>, right: Box<CoverFunction> },
}

impl CoverFunction {
    pub fn dof(&self) -> usize {
        match self {
            CoverFunction::Poly(f) => f.dof(),
            CoverFunction::Smoothed { left, .. } => left.dof(),
        }
    }

    /// The polynomial leaves, left to right.
    pub fn leaves(&self) -> Vec<&PolyFunction> {
        match self {
            CoverFunction::Poly(f) => vec![f],
            CoverFunction::Smoothed { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Value {
        match self {
            CoverFunction::Poly(f) => Value::Exact(f.eval(point).into()),
            CoverFunction::Smoothed { curve, left, right } => match (left.as_ref(), right.as_ref()) {
                (CoverFunction::Poly(a), CoverFunction::Poly(b)) => Value::Exact(smoothing_h(curve, &a.eval(point), &b.eval(point))),
                _ => {
                    let p: Vec<f64> = point.iter().map(Rational::to_f64).collect();
                    Value::Approx(self.eval_f64(&p))
                }
            },
        }
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        match self {
            CoverFunction::Poly(f) => f.eval_f64(point),
            CoverFunction::Smoothed { curve, left, right } => smoothing_h_f64(curve, left.eval_f64(point), right.eval_f64(point)),
        }
    }
}

impl fmt::Display for CoverFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverFunction::Poly(p) => write!(f, "{p}"),
            CoverFunction::Smoothed { curve, left, right } => {
                let tag = match curve.mode {
                    SmoothingMode::Intersection => "h∩",
                    SmoothingMode::Union => "h∪",
                };
                write!(f, "{tag}[δ={}]({left}, {right})", curve.delta)
            }
        }
    }
}

fn check_deltas(deltas: &[Rational]) -> Result<(), InvolutiveError> {
    if let Some(d) = deltas.iter().find(|d| d.signum() <= 0) {
        return Err(InvolutiveError::BadSequence(format!("δ = {d} is not positive")));
    }
    if let Some(w) = deltas.windows(2).find(|w| w[1] >= w[0]) {
        return Err(InvolutiveError::BadSequence(format!("δ sequence not strictly decreasing at {} → {}", w[0], w[1])));
    }
    Ok(())
}

/// `g_i = h_{δ_i}(a_i, b_i)` for sequences of arbitrary cover functions.
pub fn smooth_pair(a: &[CoverFunction], b: &[CoverFunction], mode: SmoothingMode, deltas: &[Rational]) -> Result<Vec<CoverFunction>, InvolutiveError> {
    check_deltas(deltas)?;
    if a.len() != deltas.len() || b.len() != deltas.len() {
        return Err(InvolutiveError::BadSequence(format!("sequence lengths {}, {}, δ: {}", a.len(), b.len(), deltas.len())));
    }
    a.iter()
        .zip(b)
        .zip(deltas)
        .map(|((l, r), d)| {
            if l.dof() != r.dof() {
                return Err(InvolutiveError::VariableMismatch(format!("ℝ^{} vs ℝ^{}", 2 * l.dof(), 2 * r.dof())));
            }
            Ok(CoverFunction::Smoothed { curve: SmoothingCurve::new(d.clone(), mode)?, left: Box::new(l.clone()), right: Box::new(r.clone()) })
        })
        .collect()
}

/// `g_i = h_{δ_i}(f_{1,i}, f_{2,i})`.
pub fn build_cover_functions(f1: &[PolyFunction], f2: &[PolyFunction], mode: SmoothingMode, deltas: &[Rational]) -> Result<Vec<CoverFunction>, InvolutiveError> {
    let wrap = |fs: &[PolyFunction]| fs.iter().cloned().map(CoverFunction::Poly).collect::<Vec<_>>();
    smooth_pair(&wrap(f1), &wrap(f2), mode, deltas)
}

/// A finite union of finite intersections of the base sets, as a binary
/// tree; each internal node carries its own `δ` sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverExpr {
    Set(usize),
    Intersection(Box<CoverExpr>, Box<CoverExpr>, Vec<Rational>),
    Union(Box<CoverExpr>, Box<CoverExpr>, Vec<Rational>),
}

impl CoverExpr {
    /// Folds the smoothing pairwise over the tree; `seqs[m]` are the
    /// functions of base set `m`.
    pub fn functions(&self, seqs: &[Vec<PolyFunction>]) -> Result<Vec<CoverFunction>, InvolutiveError> {
        match self {
            CoverExpr::Set(m) => seqs
                .get(*m)
                .map(|s| s.iter().cloned().map(CoverFunction::Poly).collect())
                .ok_or_else(|| InvolutiveError::BadSequence(format!("no function sequence for set {m}"))),
            CoverExpr::Intersection(a, b, d) => smooth_pair(&a.functions(seqs)?, &b.functions(seqs)?, SmoothingMode::Intersection, d),
            CoverExpr::Union(a, b, d) => smooth_pair(&a.functions(seqs)?, &b.functions(seqs)?, SmoothingMode::Union, d),
        }
    }

    /// The target set as a region built from the base regions.
    pub fn region(&self, base: &[super::cover::Region]) -> Result<super::cover::Region, InvolutiveError> {
        use super::cover::Region;
        Ok(match self {
            CoverExpr::Set(m) => base.get(*m).cloned().ok_or_else(|| InvolutiveError::BadSequence(format!("no region for set {m}")))?,
            CoverExpr::Intersection(a, b, _) => Region::All(vec![a.region(base)?, b.region(base)?]),
            CoverExpr::Union(a, b, _) => Region::Any(vec![a.region(base)?, b.region(base)?]),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaDecay {
    pub index: usize,
    pub delta: Rational,
    /// `F_i(K) ⊂ B_i` on the grid needs `δ_i` strictly below this.
    pub bound: Option<Rational>,
    pub satisfied: bool,
}

/// How small each `δ_i` must be for the sampled part of `K_1 ∩ K_2` to land
/// in `B_i`, i.e. `f_{1,i} f_{2,i} > δ_i` there. The union region always
/// contains `F_i(K_1 ∪ K_2)`, so it imposes no bound.
pub fn required_delta_decay(
    f1: &[PolyFunction],
    f2: &[PolyFunction],
    mode: SmoothingMode,
    deltas: &[Rational],
    samples_in_k: &[Vec<Rational>],
) -> Vec<DeltaDecay> {
    f1.iter()
        .zip(f2)
        .zip(deltas)
        .enumerate()
        .map(|(i, ((a, b), d))| {
            let bound = match mode {
                SmoothingMode::Union => None,
                SmoothingMode::Intersection => samples_in_k.iter().map(|x| &a.eval(x) * &b.eval(x)).min(),
            };
            let satisfied = bound.as_ref().is_none_or(|b| d < b);
            DeltaDecay { index: i + 1, delta: d.clone(), bound, satisfied }
        })
        .collect()
}
