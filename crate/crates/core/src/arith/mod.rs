//! Exact arithmetic over O = Z_(p), K = Q and K/O, and linear algebra over O.

pub mod matrix;
pub mod scalar;
pub mod smith;

pub use matrix::{dot, unit_vec, vec_add, vec_axpy, vec_scale, Mat, MatrixK, MatrixO};
pub use scalar::{matlis_reduce, mod_inverse, residue, valuation, FieldScalar, LocalScalar, MatlisValue, Q};
pub use smith::{
    kernel_lattice, kernel_with_left_inverse, saturate, smith, smith_normal_form, solve_over_o, Smith,
    SmithDecomposition, SubLattice, Track,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a unit of Z_({1})")]
    NotAUnit(String, u64),
    #[error("{0} is not in Z_({1})")]
    NotIntegral(String, u64),
    #[error("matrix has entries outside Z_({0})")]
    NotIntegralMatrix(u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}
