use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operators::{DiscreteOperators, Regime, SwitchedField};

/// `t ↦ exp(t A)` for a fixed regime matrix `A`.
#[derive(Debug, Clone)]
pub struct Propagator {
    regime: Regime,
    generator: DMatrix<f64>,
}

impl Propagator {
    pub fn new(generator: DMatrix<f64>, regime: Regime) -> Result<Self> {
        if !generator.is_square() {
            return Err(Error::DimensionMismatch {
                expected: generator.nrows(),
                found: generator.ncols(),
            });
        }
        Ok(Self { regime, generator })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    /// Scaling-and-squaring Padé exponential of `t A`.
    pub fn at(&self, t: f64) -> DMatrix<f64> {
        if t == 0.0 {
            return DMatrix::identity(self.dim(), self.dim());
        }
        (&self.generator * t).exp()
    }

    pub fn apply(&self, t: f64, y0: &[f64]) -> Result<Vec<f64>> {
        if y0.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: y0.len(),
            });
        }
        let y = self.at(t) * DVector::from_column_slice(y0);
        Ok(y.as_slice().to_vec())
    }
}

/// Propagator of any switched field frozen in one regime.
pub fn propagator_for<F: SwitchedField + ?Sized>(field: &F, regime: Regime) -> Propagator {
    Propagator {
        regime,
        generator: field.matrix(regime),
    }
}

pub fn build_propagator(ops: &DiscreteOperators, regime: Regime) -> Propagator {
    Propagator {
        regime,
        generator: ops.regime_matrix(regime),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_operators;

    fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).amax()
    }

    #[test]
    fn identity_at_zero() {
        let p = build_propagator(&build_operators(5).unwrap(), Regime::Constrained);
        assert_eq!(p.at(0.0), DMatrix::identity(6, 6));
    }

    #[test]
    fn semigroup() {
        let p = build_propagator(&build_operators(6).unwrap(), Regime::Constrained);
        let lhs = p.at(0.3) * p.at(0.45);
        assert!(max_diff(&lhs, &p.at(0.75)) < 1e-12);
    }

    #[test]
    fn rotation_for_order_one() {
        // L = [[0,−1],[1,0]] generates rotations
        let p = build_propagator(&build_operators(1).unwrap(), Regime::Unconstrained);
        let t: f64 = 0.7;
        let expected = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert!(max_diff(&p.at(t), &expected) < 1e-14);
    }

    #[test]
    fn unconstrained_flow_is_orthogonal() {
        let p = build_propagator(&build_operators(9).unwrap(), Regime::Unconstrained);
        let q = p.at(1.3);
        let gram = q.transpose() * &q;
        assert!(max_diff(&gram, &DMatrix::identity(10, 10)) < 1e-12);
    }

    #[test]
    fn jordan_chain_grows_linearly() {
        // exp(tA) v₂ = v₂ + t v₁ on the zero Jordan block
        let ops = build_operators(3).unwrap();
        let p = build_propagator(&ops, Regime::Constrained);
        let out = p.apply(2.5, &[2.0, 0.0, 2.0, 0.0]).unwrap();
        let expected = [4.5, 2.5, 4.5, 2.5];
        for (a, b) in out.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_wrong_length() {
        let p = build_propagator(&build_operators(3).unwrap(), Regime::Constrained);
        assert!(p.apply(1.0, &[1.0; 3]).is_err());
        assert!(Propagator::new(DMatrix::zeros(2, 3), Regime::Constrained).is_err());
    }
}
