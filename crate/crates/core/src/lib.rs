//! Tate duality and transfer maps for symmetric algebras over Z_(p).

pub mod algebra;
pub mod arith;
pub mod bimodules;
pub mod cli;
pub mod duality;
pub mod lattices;
pub mod oracle_matrix;

use arith::ArithError;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid symmetrising form: {0}")]
    InvalidForm(String),
    #[error("K ⊗ A is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("not projective: {0}")]
    NotProjective(String),
    #[error("bimodule is not perfect: {0}")]
    NotPerfect(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("tower depth {requested} exceeds cap {cap} (set TATE_MAX_DEPTH)")]
    DepthExceeded { requested: i32, cap: i32 },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid instance: {0}")]
    Instance(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
