//! Exact homological algebra over ℚ and a truncated Novikov ring.

pub mod complexes;
pub mod descent;
pub mod exec;
pub mod involutive;
pub mod linalg;
pub mod operad_alg;
pub mod scalars;
pub mod simplex_models;
