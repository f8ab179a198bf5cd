//! JSON form of CDGA presheaves:
//! `{"presheaf": …, "products": {"[1]": [[m, i, n, j, [[k, "c"], …] | null], …]}, "units": {"[1]": [[i, "c"]]}}`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::cdga::{CdgaPresheaf, MulTable};
use super::{OperadError, Vector};
use crate::descent::{label, parse_label, CoverPresheaf};
use crate::scalars::rational_from_json;

fn vector_to_json(v: &[(usize, crate::scalars::Rational)]) -> Value {
    Value::Array(v.iter().map(|(i, c)| json!([i, c.to_string()])).collect())
}

fn vector_from_json(v: &Value) -> Result<Vector, OperadError> {
    let bad = || OperadError::Cdga(format!("malformed vector {v}"));
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|e| {
            let i = e.get(0).and_then(Value::as_u64).ok_or_else(bad)? as usize;
            let c = e.get(1).ok_or_else(bad).and_then(|c| rational_from_json(c).map_err(|_| bad()))?;
            Ok((i, c))
        })
        .collect()
}

impl CdgaPresheaf {
    pub fn to_json(&self) -> Value {
        let keys: Vec<u32> = self.presheaf().values().keys().copied().collect();
        let products: Map<String, Value> = keys
            .iter()
            .map(|j| {
                let rows = self
                    .table(*j)
                    .entries()
                    .map(|((m, i), (n, k), v)| json!([m, i, n, k, v.map(|v| vector_to_json(v)).unwrap_or(Value::Null)]))
                    .collect();
                (label(*j), Value::Array(rows))
            })
            .collect();
        let units: Map<String, Value> = keys.iter().map(|j| (label(*j), vector_to_json(self.unit(*j)))).collect();
        json!({ "presheaf": self.presheaf().to_json(), "products": products, "units": units })
    }

    pub fn from_json(v: &Value) -> Result<Self, OperadError> {
        let bad = |what: &str| OperadError::Cdga(format!("missing or malformed `{what}`"));
        let presheaf = CoverPresheaf::from_json(v.get("presheaf").ok_or_else(|| bad("presheaf"))?)?;
        let mut products = BTreeMap::new();
        for (key, rows) in v.get("products").and_then(Value::as_object).ok_or_else(|| bad("products"))? {
            let j = parse_label(key)?;
            let mut t = MulTable::new();
            for row in rows.as_array().ok_or_else(|| bad("products"))? {
                let r = row.as_array().filter(|r| r.len() == 5).ok_or_else(|| bad("products"))?;
                let int = |x: &Value| x.as_i64().ok_or_else(|| bad("products"));
                let (m, i, n, k) = (int(&r[0])? as i32, int(&r[1])? as usize, int(&r[2])? as i32, int(&r[3])? as usize);
                let value = if r[4].is_null() { None } else { Some(vector_from_json(&r[4])?) };
                t.set((m, i), (n, k), value);
            }
            products.insert(j, t);
        }
        let mut units = BTreeMap::new();
        for (key, u) in v.get("units").and_then(Value::as_object).ok_or_else(|| bad("units"))? {
            units.insert(parse_label(key)?, vector_from_json(u)?);
        }
        CdgaPresheaf::new(presheaf, products, units)
    }
}
