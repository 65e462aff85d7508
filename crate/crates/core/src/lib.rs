//! Matrix-free exponential integrators for nodal discontinuous Galerkin
//! discretizations of viscous Burgers (1D, LDG) and the compressible Euler
//! equations (2D, Roe flux).
//!
//! The pieces compose bottom-up: [`basis`] and [`mesh`] build a [`mesh::DgSpace`];
//! [`burgers::Burgers`] and [`euler::Euler`] implement
//! [`operator::SemiDiscreteSystem`], splitting the right-hand side into a
//! linearized part and a remainder; [`integrators`] advance any such system,
//! with the exponential methods evaluating phi-function combinations through
//! the Krylov engine in [`phi`]; [`harness`] runs configured convergence and
//! stability sweeps.
// NaN must fail validation, so negated comparisons are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod basis;
pub mod burgers;
pub mod error;
pub mod euler;
pub mod harness;
pub mod integrators;
pub mod mesh;
pub mod operator;
pub mod phi;

pub use error::{Error, Result};
