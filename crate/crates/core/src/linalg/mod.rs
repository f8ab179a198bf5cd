//! Sparse matrices and exact elimination.

mod elim;
mod matrix;

pub use elim::{in_column_span, kernel, rank, Kernel};
pub use matrix::{offsets, SparseMatrix};
