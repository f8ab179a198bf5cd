use std::fmt;

use super::SimplexError;

/// An injective order-preserving map `{0..p} → {0..q}` of simplex vertices.
/// `p = −1` is the empty simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InjMap {
    q: usize,
    image: Vec<usize>,
}

impl InjMap {
    pub fn new(q: usize, image: Vec<usize>) -> Result<Self, SimplexError> {
        if image.windows(2).any(|w| w[0] >= w[1]) || image.last().is_some_and(|v| *v > q) {
            return Err(SimplexError::NotInjective(image));
        }
        Ok(InjMap { q, image })
    }

    pub fn identity(p: usize) -> Self {
        InjMap { q: p, image: (0..=p).collect() }
    }

    /// The coface `δ_i: Δ^{q−1} → Δ^q` missing vertex `i`.
    pub fn coface(q: usize, i: usize) -> Self {
        assert!(q >= 1 && i <= q, "coface δ_{i} needs 1 <= q and i <= q");
        InjMap { q, image: (0..=q).filter(|v| *v != i).collect() }
    }

    /// Inclusion of the face spanned by the vertex bitmask `face`.
    pub fn face(q: usize, face: u32) -> Self {
        InjMap { q, image: (0..=q).filter(|v| face >> v & 1 == 1).collect() }
    }

    /// Source dimension `p` (−1 for the empty simplex).
    pub fn source_dim(&self) -> isize {
        self.image.len() as isize - 1
    }

    pub fn target_dim(&self) -> usize {
        self.q
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &InjMap) -> Result<InjMap, SimplexError> {
        if self.q as isize != other.source_dim() {
            return Err(SimplexError::ShapeMismatch(format!(
                "cannot compose Δ^{} → Δ^{} with Δ^{} → Δ^{}",
                self.source_dim(),
                self.q,
                other.source_dim(),
                other.q
            )));
        }
        Ok(InjMap { q: other.q, image: self.image.iter().map(|v| other.image[*v]).collect() })
    }

    /// Image of a vertex bitmask.
    pub fn map_face(&self, face: u32) -> u32 {
        let mut out = 0;
        for (i, v) in self.image.iter().enumerate() {
            if face >> i & 1 == 1 {
                out |= 1 << v;
            }
        }
        out
    }

    /// Preimage of a vertex, if it is hit.
    pub fn preimage(&self, v: usize) -> Option<usize> {
        self.image.binary_search(&v).ok()
    }

    /// Factorisation into cofaces `(target dim, index)`, in the order they are
    /// applied. Missing vertices are inserted in increasing order, so the
    /// `k`-th step is `δ_{m_k}` for the `k`-th smallest missing vertex `m_k`.
    pub fn as_cofaces(&self) -> Vec<(usize, usize)> {
        let missing: Vec<usize> = (0..=self.q).filter(|v| self.preimage(*v).is_none()).collect();
        let p = self.image.len();
        missing.iter().enumerate().map(|(k, m)| (p + k, *m)).collect()
    }
}

impl fmt::Display for InjMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ^{} → Δ^{} {:?}", self.source_dim(), self.q, self.image)
    }
}

/// Vertex bitmasks of all `k`-faces of `Δ^p` (`k + 1` vertices), ascending.
pub fn faces(p: usize, k: usize) -> Vec<u32> {
    if k > p {
        return Vec::new();
    }
    (0u32..1 << (p + 1)).filter(|m| m.count_ones() as usize == k + 1).collect()
}

/// Vertices of a bitmask, ascending.
pub fn vertices(face: u32) -> Vec<usize> {
    (0..32).filter(|v| face >> v & 1 == 1).collect()
}

/// Bitmask of a vertex list.
pub fn mask(verts: &[usize]) -> u32 {
    verts.iter().fold(0, |m, v| m | 1 << v)
}
