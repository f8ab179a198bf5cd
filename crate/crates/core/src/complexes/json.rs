//! JSON encoding of complexes and chain maps.
//!
//! ```text
//! {"coeff": "Q" | {"novikov": {"den": 1, "cutoff": "3"}},
//!  "support": [lo, hi],
//!  "dims": {"0": 1, "1": 2},
//!  "diff": {"0": [[row, col, "scalar"], ...]}}
//! ```
//!
//! Chain maps are `{"shift": s, "maps": {"n": [[row, col, "scalar"], ...]}}`;
//! source and target come from context.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{ChainMap, Complex, ComplexError};
use crate::linalg::SparseMatrix;
use crate::scalars::{rational_from_json, Coeff, NovikovElem, NovikovRing, Rational};

/// Scalars with a JSON representation.
pub trait JsonCoeff: Coeff {
    fn ring_to_json(ring: &Self::Ring) -> Value;
    fn ring_from_json(v: &Value) -> Result<Self::Ring, ComplexError>;
    fn to_json(&self) -> Value;
    fn from_json(ring: &Self::Ring, v: &Value) -> Result<Self, ComplexError>;
}

impl JsonCoeff for Rational {
    fn ring_to_json(_: &()) -> Value {
        json!("Q")
    }

    fn ring_from_json(v: &Value) -> Result<(), ComplexError> {
        match v {
            Value::String(s) if s == "Q" => Ok(()),
            other => Err(ComplexError::Parse(format!("expected coefficient ring \"Q\", got {other}"))),
        }
    }

    fn to_json(&self) -> Value {
        json!(self.to_string())
    }

    fn from_json(_: &(), v: &Value) -> Result<Self, ComplexError> {
        Ok(rational_from_json(v)?)
    }
}

impl JsonCoeff for NovikovElem {
    fn ring_to_json(ring: &NovikovRing) -> Value {
        json!({"novikov": {"den": ring.den(), "cutoff": ring.cutoff().to_string()}})
    }

    fn ring_from_json(v: &Value) -> Result<NovikovRing, ComplexError> {
        let inner = v.get("novikov").ok_or_else(|| ComplexError::Parse(format!("expected a Novikov ring, got {v}")))?;
        let den = inner
            .get("den")
            .and_then(Value::as_u64)
            .and_then(|d| u32::try_from(d).ok())
            .ok_or_else(|| ComplexError::Parse("novikov.den must be a positive integer".into()))?;
        let cutoff = rational_from_json(inner.get("cutoff").unwrap_or(&Value::Null))?;
        Ok(NovikovRing::new(den, cutoff)?)
    }

    fn to_json(&self) -> Value {
        json!(self.to_string())
    }

    fn from_json(ring: &NovikovRing, v: &Value) -> Result<Self, ComplexError> {
        match v {
            Value::String(s) => Ok(NovikovElem::parse(ring, s)?),
            Value::Number(_) => Ok(NovikovElem::constant(ring.clone(), rational_from_json(v)?)),
            other => Err(ComplexError::Parse(format!("bad Novikov scalar {other}"))),
        }
    }
}

fn matrix_to_json<S: JsonCoeff>(m: &SparseMatrix<S>) -> Value {
    Value::Array(m.entries().map(|(r, c, v)| json!([r, c, v.to_json()])).collect())
}

fn matrix_from_json<S: JsonCoeff>(ring: &S::Ring, nrows: usize, ncols: usize, v: &Value) -> Result<SparseMatrix<S>, ComplexError> {
    let entries = v.as_array().ok_or_else(|| ComplexError::Parse("matrix must be a list of [row, col, scalar]".into()))?;
    let mut trip = Vec::with_capacity(entries.len());
    for e in entries {
        let bad = || ComplexError::Parse(format!("bad matrix entry {e}"));
        let parts = e.as_array().filter(|p| p.len() == 3).ok_or_else(bad)?;
        let r = parts[0].as_u64().ok_or_else(bad)? as usize;
        let c = parts[1].as_u64().ok_or_else(bad)? as usize;
        if r >= nrows || c >= ncols {
            return Err(ComplexError::ShapeMismatch(format!("entry ({r},{c}) outside a {nrows}x{ncols} matrix")));
        }
        trip.push((r, c, S::from_json(ring, &parts[2])?));
    }
    Ok(SparseMatrix::from_triplets(nrows, ncols, trip))
}

fn degree_key(k: &str) -> Result<i32, ComplexError> {
    k.trim().parse().map_err(|_| ComplexError::Parse(format!("bad degree `{k}`")))
}

impl<S: JsonCoeff> Complex<S> {
    pub fn to_json(&self) -> Value {
        let mut dims = Map::new();
        let mut diff = Map::new();
        for n in self.degrees() {
            dims.insert(n.to_string(), json!(self.dim(n)));
            let d = self.diff(n);
            if !d.is_zero() {
                diff.insert(n.to_string(), matrix_to_json(&d));
            }
        }
        let support = match self.support() {
            Some((lo, hi)) => json!([lo, hi]),
            None => Value::Null,
        };
        json!({"coeff": S::ring_to_json(self.ring()), "support": support, "dims": dims, "diff": diff})
    }

    /// Parses and validates (including `d² = 0`).
    pub fn from_json(v: &Value) -> Result<Self, ComplexError> {
        let ring = S::ring_from_json(v.get("coeff").unwrap_or(&json!("Q")))?;
        let mut dims = BTreeMap::new();
        if let Some(obj) = v.get("dims") {
            let obj = obj.as_object().ok_or_else(|| ComplexError::Parse("dims must be an object".into()))?;
            for (k, d) in obj {
                let d = d.as_u64().ok_or_else(|| ComplexError::Parse(format!("bad dimension {d}")))?;
                dims.insert(degree_key(k)?, d as usize);
            }
        }
        if let Some(support) = v.get("support").filter(|s| !s.is_null()) {
            let s = support
                .as_array()
                .filter(|s| s.len() == 2)
                .and_then(|s| Some((s[0].as_i64()? as i32, s[1].as_i64()? as i32)))
                .ok_or_else(|| ComplexError::Parse("support must be [lo, hi]".into()))?;
            if let Some(n) = dims.keys().find(|n| **n < s.0 || **n > s.1).filter(|n| dims[n] > 0) {
                return Err(ComplexError::ShapeMismatch(format!("degree {n} lies outside the stated support")));
            }
            for n in s.0..=s.1 {
                dims.entry(n).or_insert(0);
            }
        }
        let mut diffs = BTreeMap::new();
        if let Some(obj) = v.get("diff") {
            let obj = obj.as_object().ok_or_else(|| ComplexError::Parse("diff must be an object".into()))?;
            for (k, m) in obj {
                let n = degree_key(k)?;
                let (r, c) = (dims.get(&(n + 1)).copied().unwrap_or(0), dims.get(&n).copied().unwrap_or(0));
                diffs.insert(n, matrix_from_json(&ring, r, c, m)?);
            }
        }
        let c = Complex::from_map(ring, &dims, &diffs)?;
        c.validate()?;
        Ok(c)
    }
}

impl<S: JsonCoeff> ChainMap<S> {
    pub fn to_json(&self) -> Value {
        let maps: Map<String, Value> =
            self.components().iter().map(|(n, m)| (n.to_string(), matrix_to_json(m))).collect();
        json!({"shift": self.shift(), "maps": maps})
    }

    /// Parses a map between the given complexes and checks that it commutes
    /// with the differentials.
    pub fn from_json(source: &Complex<S>, target: &Complex<S>, v: &Value) -> Result<Self, ComplexError> {
        let shift = match v.get("shift") {
            None => 0,
            Some(s) => s.as_i64().ok_or_else(|| ComplexError::Parse("shift must be an integer".into()))? as i32,
        };
        let mut maps = BTreeMap::new();
        if let Some(obj) = v.get("maps") {
            let obj = obj.as_object().ok_or_else(|| ComplexError::Parse("maps must be an object".into()))?;
            for (k, m) in obj {
                let n = degree_key(k)?;
                maps.insert(n, matrix_from_json(source.ring(), target.dim(n + shift), source.dim(n), m)?);
            }
        }
        let f = ChainMap::new(source.clone(), target.clone(), shift, maps)?;
        f.validate()?;
        Ok(f)
    }
}
