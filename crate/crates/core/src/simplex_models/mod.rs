//! Models of the standard simplex: normalized cochains `NC*(Δ^p)` and
//! polynomial differential forms `Ω*(Δ^p)`, with face maps, products,
//! integration and the Whitney forms.

mod cochains;
mod forms;
mod inj;
mod model;

pub use cochains::NCochain;
pub use forms::{Monomial, PolyForm};
pub(crate) use forms::wedge_sign;
pub use inj::{faces, mask, vertices, InjMap};
pub use model::{integration_matrix, whitney_matrix, whitney_weight, FormModel, NcModel, SimplexModel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimplexError {
    #[error("vertex list {0:?} is not strictly increasing")]
    NotInjective(Vec<usize>),
    #[error("{0:?} is not a face")]
    BadFace(Vec<usize>),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("cannot parse form `{0}`")]
    Parse(String),
}
