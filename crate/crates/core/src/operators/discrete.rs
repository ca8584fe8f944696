use nalgebra::{DMatrix, DVector};

use super::{Regime, SwitchedField};
use crate::error::{Error, Result};
use crate::strategy::{self, Strategy, ValidityReport};

/// `L`, `w` and `P = w wᵀ / ‖w‖²` for the discrete game of order `M`.
///
/// `L` is the skew-symmetric Toeplitz matrix with `-1` above the diagonal
/// and `+1` below, so `(L y)_k = Σ_{j<k} y_j − Σ_{l>k} y_l`.
/// `w_j = j/M − 1/2`.
#[derive(Debug, Clone)]
pub struct DiscreteOperators {
    order: usize,
    l: DMatrix<f64>,
    w: DVector<f64>,
    p: DMatrix<f64>,
    w_norm2: f64,
}

impl DiscreteOperators {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(order));
        }
        let n = order + 1;
        let l = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => 1.0,
            std::cmp::Ordering::Less => -1.0,
            std::cmp::Ordering::Equal => 0.0,
        });
        let w = DVector::from_fn(n, |j, _| j as f64 / order as f64 - 0.5);
        let w_norm2 = w.dot(&w);
        let p = &w * w.transpose() / w_norm2;
        Ok(Self {
            order,
            l,
            w,
            p,
            w_norm2,
        })
    }

    /// Grid order `M`; matrices are `(M+1) × (M+1)`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.order + 1
    }

    pub fn l(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn w(&self) -> &DVector<f64> {
        &self.w
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// `(I − P) L`.
    pub fn constrained_matrix(&self) -> DMatrix<f64> {
        let n = self.size();
        (DMatrix::identity(n, n) - &self.p) * &self.l
    }

    pub fn regime_matrix(&self, regime: Regime) -> DMatrix<f64> {
        match regime {
            Regime::Unconstrained => self.l.clone(),
            Regime::Constrained => self.constrained_matrix(),
        }
    }

    /// `L y` in O(M) by prefix sums.
    pub fn apply_l(&self, y: &[f64], out: &mut [f64]) {
        let total: f64 = y.iter().sum();
        let mut below = 0.0;
        for (o, yk) in out.iter_mut().zip(y) {
            let above = total - below - yk;
            *o = below - above;
            below += yk;
        }
    }

    fn w_dot(&self, y: &[f64]) -> f64 {
        self.w.iter().zip(y).map(|(w, y)| w * y).sum()
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: len,
            });
        }
        Ok(())
    }
}

impl SwitchedField for DiscreteOperators {
    fn dim(&self) -> usize {
        self.size()
    }

    fn constraint(&self, y: &[f64]) -> f64 {
        self.w_dot(y)
    }

    fn mass(&self, y: &[f64]) -> f64 {
        y.iter().sum()
    }

    fn norm(&self, y: &[f64]) -> f64 {
        y.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn payoff(&self, a: &[f64], b: &[f64]) -> f64 {
        strategy::payoff_raw(a, b)
    }

    fn apply_in(&self, y: &[f64], regime: Regime, out: &mut [f64]) {
        self.apply_l(y, out);
        if regime.is_constrained() {
            let c = self.w_dot(out) / self.w_norm2;
            for (o, w) in out.iter_mut().zip(self.w.iter()) {
                *o -= c * w;
            }
        }
    }

    fn validate(&self, y: &[f64]) -> ValidityReport {
        let mass = self.mass(y);
        let mca = if mass == 0.0 {
            None
        } else {
            Some(0.5 + self.w_dot(y) / mass)
        };
        ValidityReport::from_parts(y, mass, mca)
    }

    fn matrix(&self, regime: Regime) -> DMatrix<f64> {
        self.regime_matrix(regime)
    }
}

pub fn build_operators(order: usize) -> Result<DiscreteOperators> {
    DiscreteOperators::new(order)
}

/// `(I − H(w·y) P) L y`.
pub fn apply_a_discrete(ops: &DiscreteOperators, y: &Strategy) -> Result<Vec<f64>> {
    ops.check(y.values().len())?;
    Ok(ops.apply(y.values()))
}
