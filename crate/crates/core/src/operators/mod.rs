//! Unconstrained and constrained selection-gradient operators.
//!
//! The constrained operator removes the component of the selection gradient
//! normal to the MCA boundary `w = 0`, gated by a Heaviside on `w`:
//!
//! ```text
//! A y = (I − H(w·y) P) L y
//! ```
//!
//! [`DiscreteOperators`] realises this with explicit matrices for the discrete
//! game, [`SampledOperators`] on a sampled function grid. Both implement
//! [`SwitchedField`], which is all the integrators need.

pub mod discrete;
pub mod kernel;
pub mod sampled;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::strategy::ValidityReport;

pub use discrete::{apply_a_discrete, build_operators, DiscreteOperators};
pub use kernel::{kernel_eval, KernelSpec};
pub use sampled::{
    apply_a_function, apply_a_function_in, apply_adjoint_function, apply_adjoint_function_in,
    gradient_function, w_functional, SampledOperators,
};

/// Default switching tolerance: the constraint counts as active for `w >= -1e-12`.
pub const HEAVISIDE_TOL: f64 = 1e-12;

/// Heaviside step with `H(0) = 1`: returns 1 iff `x >= -tol`.
pub fn heaviside(x: f64, tol: f64) -> f64 {
    if x >= -tol {
        1.0
    } else {
        0.0
    }
}

/// Which branch of the switched field is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `mca < 1/2`: the raw selection gradient drives the flow.
    Unconstrained,
    /// `mca >= 1/2`: the gradient is projected onto the tangent of `w = 0`.
    Constrained,
}

impl Regime {
    pub fn from_constraint(w: f64) -> Self {
        if heaviside(w, HEAVISIDE_TOL) == 1.0 {
            Regime::Constrained
        } else {
            Regime::Unconstrained
        }
    }

    pub fn flag(self) -> u8 {
        match self {
            Regime::Unconstrained => 0,
            Regime::Constrained => 1,
        }
    }

    pub fn is_constrained(self) -> bool {
        self == Regime::Constrained
    }
}

/// A linear vector field on `R^dim` that switches between two regimes
/// according to the sign of the constraint functional `w`.
pub trait SwitchedField {
    fn dim(&self) -> usize;

    /// `w(y)`: nonpositive exactly when `mca(y) <= 1/2`.
    fn constraint(&self, y: &[f64]) -> f64;

    /// Total population (raw sum or quadrature integral).
    fn mass(&self, y: &[f64]) -> f64;

    /// Norm conserved by the constrained flow on `w = 0`.
    fn norm(&self, y: &[f64]) -> f64;

    /// Payoff `E[a, b]` in the matching game.
    fn payoff(&self, a: &[f64], b: &[f64]) -> f64;

    /// Writes the field of the given regime at `y` into `out`.
    fn apply_in(&self, y: &[f64], regime: Regime, out: &mut [f64]);

    fn validate(&self, y: &[f64]) -> ValidityReport;

    fn mca(&self, y: &[f64]) -> Result<f64> {
        let mass = self.mass(y);
        if mass == 0.0 {
            return Err(crate::Error::ZeroMass);
        }
        Ok(0.5 + self.constraint(y) / mass)
    }

    fn regime(&self, y: &[f64]) -> Regime {
        Regime::from_constraint(self.constraint(y))
    }

    /// `A y` with the regime picked by `H(w(y))`.
    fn apply(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; y.len()];
        self.apply_in(y, self.regime(y), &mut out);
        out
    }

    /// Dense matrix of the field in a fixed regime.
    fn matrix(&self, regime: Regime) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.apply_in(&e, regime, &mut col);
            m.set_column(j, &nalgebra::DVector::from_column_slice(&col));
            e[j] = 0.0;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heaviside_examples() {
        assert_eq!(heaviside(0.0, HEAVISIDE_TOL), 1.0);
        assert_eq!(heaviside(-1.0, HEAVISIDE_TOL), 0.0);
        assert_eq!(heaviside(-1e-13, 1e-12), 1.0);
        assert_eq!(heaviside(-1e-11, 1e-12), 0.0);
        assert_eq!(heaviside(3.0, 0.0), 1.0);
    }

    #[test]
    fn regime_follows_heaviside() {
        assert_eq!(Regime::from_constraint(0.0), Regime::Constrained);
        assert_eq!(Regime::from_constraint(-0.5), Regime::Unconstrained);
        assert_eq!(Regime::Constrained.flag(), 1);
    }
}
