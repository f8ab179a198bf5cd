use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::DescentError;
use crate::complexes::{ChainMap, Complex};
use crate::scalars::Rational;

/// Index of the union `K = K_1 ∪ … ∪ K_N` (the empty intersection).
pub const TOP: u32 = 0;

/// Largest supported number of cover members.
pub const MAX_MEMBERS: usize = 8;

/// `"top"` or the 1-based member list, e.g. `"[1, 3]"`.
pub fn label(mask: u32) -> String {
    if mask == TOP {
        return "top".into();
    }
    let members: Vec<String> = (0..32).filter(|m| mask >> m & 1 == 1).map(|m| (m + 1).to_string()).collect();
    format!("[{}]", members.join(", "))
}

pub fn parse_label(s: &str) -> Result<u32, DescentError> {
    let s = s.trim();
    if s == "top" {
        return Ok(TOP);
    }
    let bad = || DescentError::Parse(format!("bad index set `{s}`"));
    let inner = s.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
    let mut mask = 0u32;
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: usize = part.parse().map_err(|_| bad())?;
        if m == 0 || m > MAX_MEMBERS || mask >> (m - 1) & 1 == 1 {
            return Err(bad());
        }
        mask |= 1 << (m - 1);
    }
    if mask == 0 {
        return Err(bad());
    }
    Ok(mask)
}

/// Nonempty subsets of `{0..n}` of the given size, ascending as bitmasks.
pub fn subsets_of_size(n: usize, size: usize) -> Vec<u32> {
    (1u32..1 << n).filter(|m| m.count_ones() as usize == size).collect()
}

/// Maps the bits of `mask` through `members` (bit `i` ↦ bit `members[i]`).
pub(crate) fn expand(mask: u32, members: &[usize]) -> u32 {
    members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |acc, (_, m)| acc | 1 << m)
}

/// A presheaf of complexes over ℚ on a finite cover `K = K_1 ∪ … ∪ K_N`.
///
/// Index sets are bitmasks over members `0..N` (`J ↔ K_J = ∩_{m∈J} K_m`),
/// with [`TOP`] standing for `K` itself. There is a restriction
/// `F(K_J) → F(K_{J'})` for every `J ⊊ J'`; identities are implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverPresheaf {
    n: usize,
    values: BTreeMap<u32, Complex<Rational>>,
    restrictions: BTreeMap<(u32, u32), ChainMap<Rational>>,
}

impl CoverPresheaf {
    /// Needs a value for `TOP` and every nonempty `J`, and a restriction for
    /// every covering relation `J ⊂ J ∪ {m}`; the remaining restrictions are
    /// filled in by composition. Checks that every triangle commutes.
    pub fn new(
        n: usize,
        values: BTreeMap<u32, Complex<Rational>>,
        mut restrictions: BTreeMap<(u32, u32), ChainMap<Rational>>,
    ) -> Result<Self, DescentError> {
        if n == 0 || n > MAX_MEMBERS {
            return Err(DescentError::BadCover(format!("need 1..={MAX_MEMBERS} members, got {n}")));
        }
        let full = (1u32 << n) - 1;
        for j in 0..=full {
            if !values.contains_key(&j) {
                return Err(DescentError::MissingValue(label(j)));
            }
        }
        if let Some(j) = values.keys().find(|j| **j > full) {
            return Err(DescentError::BadCover(format!("index set {} exceeds {n} members", label(*j))));
        }
        for ((from, to), f) in &restrictions {
            if from & !to != 0 || from == to || *to > full {
                return Err(DescentError::BadCover(format!("no containment {} → {}", label(*from), label(*to))));
            }
            if f.shift() != 0 || f.source() != &values[from] || f.target() != &values[to] {
                return Err(DescentError::BadCover(format!(
                    "restriction {} → {} does not connect the stated values",
                    label(*from),
                    label(*to)
                )));
            }
            f.validate()?;
        }
        // Fill composites, shortest gaps first.
        let mut pairs: Vec<(u32, u32)> =
            (0..=full).flat_map(|a| (0..=full).filter(move |b| a & !b == 0 && a != *b).map(move |b| (a, b))).collect();
        pairs.sort_by_key(|(a, b)| (b & !a).count_ones());
        for (a, b) in pairs {
            if restrictions.contains_key(&(a, b)) {
                continue;
            }
            let gap = b & !a;
            if gap.count_ones() == 1 {
                return Err(DescentError::MissingRestriction(label(a), label(b)));
            }
            let mid = a | 1 << gap.trailing_zeros();
            let f = restrictions[&(a, mid)].then(&restrictions[&(mid, b)])?;
            restrictions.insert((a, b), f);
        }
        let out = CoverPresheaf { n, values, restrictions };
        out.check_functoriality()?;
        Ok(out)
    }

    fn check_functoriality(&self) -> Result<(), DescentError> {
        for ((a, b), f) in &self.restrictions {
            for ((b2, c), g) in self.restrictions.range((*b, 0)..(*b + 1, 0)) {
                debug_assert_eq!(b, b2);
                if f.then(g)? != self.restrictions[&(*a, *c)] {
                    return Err(DescentError::Functoriality { from: label(*a), via: label(*b), to: label(*c) });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, j: u32) -> &Complex<Rational> {
        &self.values[&j]
    }

    pub fn top(&self) -> &Complex<Rational> {
        &self.values[&TOP]
    }

    pub fn values(&self) -> &BTreeMap<u32, Complex<Rational>> {
        &self.values
    }

    /// The restriction `F(K_from) → F(K_to)` (the identity when equal).
    pub fn restriction(&self, from: u32, to: u32) -> ChainMap<Rational> {
        if from == to {
            return ChainMap::identity(&self.values[&from]);
        }
        self.restrictions
            .get(&(from, to))
            .cloned()
            .unwrap_or_else(|| panic!("no containment {} → {}", label(from), label(to)))
    }

    /// The presheaf on the sub-cover `{K_m : m ∈ members}` (same `TOP`);
    /// new member `i` is old member `members[i]`.
    pub fn restrict_members(&self, members: &[usize]) -> Result<CoverPresheaf, DescentError> {
        if members.is_empty() || members.iter().any(|m| *m >= self.n) {
            return Err(DescentError::BadCover(format!("bad member list {members:?}")));
        }
        let k = members.len();
        let values = (0u32..1 << k).map(|j| (j, self.values[&expand(j, members)].clone())).collect();
        let restrictions = covering_pairs(k)
            .into_iter()
            .map(|(a, b)| ((a, b), self.restriction(expand(a, members), expand(b, members))))
            .collect();
        CoverPresheaf::new(k, values, restrictions)
    }

    /// The presheaf `J ↦ F(K_m ∩ K_J)` on the cover of `K_m` by the
    /// `K_m ∩ K_j`, `j ≠ m` (in increasing order). Needs `N ≥ 2`.
    pub fn link(&self, m: usize) -> Result<CoverPresheaf, DescentError> {
        if self.n < 2 || m >= self.n {
            return Err(DescentError::BadCover(format!("cannot take the link of member {} of {}", m + 1, self.n)));
        }
        let others: Vec<usize> = (0..self.n).filter(|j| *j != m).collect();
        let lift = |j: u32| expand(j, &others) | 1 << m;
        let k = others.len();
        let values = (0u32..1 << k).map(|j| (j, self.values[&lift(j)].clone())).collect();
        let restrictions =
            covering_pairs(k).into_iter().map(|(a, b)| ((a, b), self.restriction(lift(a), lift(b)))).collect();
        CoverPresheaf::new(k, values, restrictions)
    }

    /// Relabels members: old member `m` becomes `perm[m]`.
    pub fn permute(&self, perm: &[usize]) -> Result<CoverPresheaf, DescentError> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|p| *p >= self.n || std::mem::replace(&mut seen[*p], true)) {
            return Err(DescentError::BadCover(format!("{perm:?} is not a permutation of {} members", self.n)));
        }
        let values = self.values.iter().map(|(j, c)| (expand(*j, perm), c.clone())).collect();
        let restrictions =
            self.restrictions.iter().map(|((a, b), f)| ((expand(*a, perm), expand(*b, perm)), f.clone())).collect();
        CoverPresheaf::new(self.n, values, restrictions)
    }

    pub fn to_json(&self) -> Value {
        let values: Map<String, Value> = self.values.iter().map(|(j, c)| (label(*j), c.to_json())).collect();
        let restrictions: Map<String, Value> = self
            .restrictions
            .iter()
            .filter(|((a, b), _)| (b & !a).count_ones() == 1)
            .map(|((a, b), f)| (format!("{}→{}", label(*a), label(*b)), f.to_json()))
            .collect();
        json!({"N": self.n, "values": values, "restrictions": restrictions})
    }

    pub fn from_json(v: &Value) -> Result<Self, DescentError> {
        let n = v
            .get("N")
            .and_then(Value::as_u64)
            .ok_or_else(|| DescentError::Parse("missing member count N".into()))? as usize;
        let vals = v
            .get("values")
            .and_then(Value::as_object)
            .ok_or_else(|| DescentError::Parse("values must be an object".into()))?;
        let mut values = BTreeMap::new();
        for (k, c) in vals {
            values.insert(parse_label(k)?, Complex::from_json(c)?);
        }
        let mut restrictions = BTreeMap::new();
        if let Some(rs) = v.get("restrictions") {
            let rs = rs.as_object().ok_or_else(|| DescentError::Parse("restrictions must be an object".into()))?;
            for (k, f) in rs {
                let (a, b) = k
                    .split_once('→')
                    .or_else(|| k.split_once("->"))
                    .ok_or_else(|| DescentError::Parse(format!("bad restriction key `{k}`")))?;
                let (a, b) = (parse_label(a)?, parse_label(b)?);
                let (src, tgt) = match (values.get(&a), values.get(&b)) {
                    (Some(s), Some(t)) => (s, t),
                    _ => return Err(DescentError::MissingValue(format!("{} or {}", label(a), label(b)))),
                };
                restrictions.insert((a, b), ChainMap::from_json(src, tgt, f)?);
            }
        }
        CoverPresheaf::new(n, values, restrictions)
    }
}

/// All `(J, J ∪ {m})` with `m ∉ J`, including `J = TOP`.
pub(crate) fn covering_pairs(n: usize) -> Vec<(u32, u32)> {
    (0u32..1 << n).flat_map(|a| (0..n).filter(move |m| a >> m & 1 == 0).map(move |m| (a, a | 1 << m))).collect()
}
