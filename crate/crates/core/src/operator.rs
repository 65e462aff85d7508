//! The interface between spatial discretizations and time integrators.
//!
//! A semi-discrete system `du/dt = R(u)` is split at a reference state `u_ref`
//! into a linear part `L` (the linearized flux, frozen at `u_ref`) and the
//! remainder `N(u) = R(u) - L u`. Exponential integrators treat `L` through
//! phi-functions and `N` explicitly.

use crate::error::Result;
use crate::phi::LinearOperator;

/// `L` (via [`LinearOperator::apply`]) and `N` frozen at one reference state.
pub trait SplitOperator: LinearOperator {
    /// `out = N(u)`.
    fn apply_nonlinear(&self, u: &[f64], out: &mut [f64]);

    /// `out = L u + N(u)`.
    fn apply_full(&self, u: &[f64], out: &mut [f64]) {
        let mut tmp = vec![0.0; out.len()];
        self.apply(u, out);
        self.apply_nonlinear(u, &mut tmp);
        out.iter_mut().zip(&tmp).for_each(|(a, b)| *a += b);
    }
}

/// A right-hand side that can be split at any reference state.
pub trait SemiDiscreteSystem {
    type Split<'a>: SplitOperator
    where
        Self: 'a;

    fn dim(&self) -> usize;

    fn split_at<'a>(&'a self, reference: &[f64]) -> Result<Self::Split<'a>>;

    /// The full right-hand side `R(u)`; independent of any reference state.
    fn rhs(&self, u: &[f64], out: &mut [f64]);
}
