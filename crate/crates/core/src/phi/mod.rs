//! Scalar, dense and matrix-free Krylov phi-functions.

pub mod dense;
pub mod krylov;
pub mod scalar;

pub use dense::{expm, phi_dense};
pub use krylov::{
    krylov_build, phi_combination, phi_combination_dense, KrylovFactorization, KrylovSettings, KrylovStats, LinearOperator, PhiCombinationProblem,
};
pub use scalar::phi_scalar;
