use std::collections::BTreeMap;
use std::fmt;

use super::inj::{faces, vertices};
use super::{InjMap, SimplexError};
use crate::scalars::Rational;

/// A normalized cochain on `Δ^p`: a scalar for each nonempty face (vertex
/// bitmask). A face with `k + 1` vertices sits in degree `k`.
#[derive(Clone, PartialEq, Eq)]
pub struct NCochain {
    p: usize,
    values: BTreeMap<u32, Rational>,
}

/// Sign `(−1)^{|x|}` where `|x|` is the degree of face `f`.
fn face_degree(f: u32) -> usize {
    f.count_ones() as usize - 1
}

impl NCochain {
    pub fn zero(p: usize) -> Self {
        NCochain { p, values: BTreeMap::new() }
    }

    /// `δ_F` for the face with the given vertices.
    pub fn delta(p: usize, verts: &[usize]) -> Result<Self, SimplexError> {
        if verts.is_empty() || verts.windows(2).any(|w| w[0] >= w[1]) || verts.iter().any(|v| *v > p) {
            return Err(SimplexError::BadFace(verts.to_vec()));
        }
        Ok(Self::from_face(p, super::inj::mask(verts), Rational::one()))
    }

    pub fn from_face(p: usize, face: u32, c: Rational) -> Self {
        let mut values = BTreeMap::new();
        if !c.is_zero() {
            values.insert(face, c);
        }
        NCochain { p, values }
    }

    /// The constant function 1 (value 1 on every vertex).
    pub fn unit(p: usize) -> Self {
        NCochain { p, values: (0..=p).map(|v| (1u32 << v, Rational::one())).collect() }
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn get(&self, face: u32) -> Rational {
        self.values.get(&face).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero `(face, value)` pairs.
    pub fn values(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.values.iter().map(|(f, v)| (*f, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn add_at(&mut self, face: u32, c: &Rational) {
        let e = self.values.entry(face).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.values.remove(&face);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, v) in &other.values {
            out.add_at(*f, v);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.p);
        }
        NCochain { p: self.p, values: self.values.iter().map(|(f, v)| (*f, v * c)).collect() }
    }

    /// Degree-`k` part.
    pub fn homogeneous(&self, k: usize) -> Self {
        NCochain { p: self.p, values: self.values.iter().filter(|(f, _)| face_degree(**f) == k).map(|(f, v)| (*f, v.clone())).collect() }
    }

    /// `(dx)(F') = Σ_i (−1)^i x(F' minus its i-th vertex)`.
    pub fn differential(&self) -> Self {
        let mut out = Self::zero(self.p);
        for (f, v) in &self.values {
            for w in 0..=self.p {
                if f >> w & 1 == 1 {
                    continue;
                }
                let g = f | 1 << w;
                let pos = (g & ((1u32 << w) - 1)).count_ones();
                let c = if pos.is_multiple_of(2) { v.clone() } else { -v };
                out.add_at(g, &c);
            }
        }
        out
    }

    /// Pullback along `f: Δ^r → Δ^q`, where `self` lives on `Δ^q`.
    pub fn pullback(&self, f: &InjMap) -> Result<Self, SimplexError> {
        if f.target_dim() != self.p {
            return Err(SimplexError::ShapeMismatch(format!("{f} cannot pull back a cochain on Δ^{}", self.p)));
        }
        let r = f.source_dim();
        if r < 0 {
            return Err(SimplexError::ShapeMismatch("pullback to the empty simplex".into()));
        }
        let r = r as usize;
        let mut out = Self::zero(r);
        for k in 0..=r {
            for face in faces(r, k) {
                let v = self.get(f.map_face(face));
                if !v.is_zero() {
                    out.values.insert(face, v);
                }
            }
        }
        Ok(out)
    }

    /// Front-face/back-face cup product:
    /// `(x ⌣ y)[i_0..i_{k+l}] = x[i_0..i_k] · y[i_k..i_{k+l}]`.
    pub fn cup(&self, other: &Self) -> Result<Self, SimplexError> {
        if self.p != other.p {
            return Err(SimplexError::ShapeMismatch(format!("cup of cochains on Δ^{} and Δ^{}", self.p, other.p)));
        }
        let mut out = Self::zero(self.p);
        for (fx, vx) in &self.values {
            let last = 31 - fx.leading_zeros();
            for (fy, vy) in &other.values {
                let first = fy.trailing_zeros();
                if first == last && fx & fy == 1 << last {
                    out.add_at(fx | fy, &(vx * vy));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for NCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCochain(Δ^{}) {{", self.p)?;
        for (i, (face, v)) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}: {v}", vertices(*face))?;
        }
        write!(f, "}}")
    }
}

impl serde::Serialize for NCochain {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.values.len()))?;
        for (face, v) in &self.values {
            m.serialize_entry(&format!("{:?}", vertices(*face)), v)?;
        }
        m.end()
    }
}
