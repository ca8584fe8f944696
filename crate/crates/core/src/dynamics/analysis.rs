use crate::error::{Error, Result};
use crate::operators::{heaviside, w_functional, SwitchedField, HEAVISIDE_TOL};
use crate::strategy::{mca_function, SampledStrategy};

use super::Trajectory;

pub const STATIONARY_TOL: f64 = 1e-10;

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `‖A y‖∞ ≤ tol · ‖y‖∞`.
pub fn is_stationary<F: SwitchedField + ?Sized>(field: &F, y: &[f64], tol: f64) -> bool {
    sup(&field.apply(y)) <= tol * sup(y)
}

/// Instantaneous `d/dt mca` of the function dynamics at `f`:
/// `2(½ − mca)² + (1 − H(w)) ∫x(1−x)f / ∫f`.
pub fn mca_rate(f: &SampledStrategy) -> Result<f64> {
    let mca = mca_function(f)?;
    let mut rate = 2.0 * (0.5 - mca).powi(2);
    if heaviside(w_functional(f), HEAVISIDE_TOL) == 0.0 {
        let weighted: Vec<f64> = f
            .grid()
            .iter()
            .zip(f.samples())
            .map(|(x, v)| x * (1.0 - x) * v)
            .collect();
        rate += f.quadrature().integrate(&weighted) / f.mass();
    }
    Ok(rate)
}

/// Lower envelope `½ − 1/(c0 + 2t)` for the MCA of a subcritical start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCABound {
    pub c0: f64,
}

impl MCABound {
    /// `c0` with `mca0 = ½ − 1/c0`; requires `mca0 < ½`.
    pub fn from_initial_mca(mca0: f64) -> Result<Self> {
        if !(mca0 < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "MCA bound needs an initial MCA below 1/2, got {mca0}"
            )));
        }
        Ok(Self {
            c0: 1.0 / (0.5 - mca0),
        })
    }

    pub fn at(&self, t: f64) -> f64 {
        0.5 - 1.0 / (self.c0 + 2.0 * t)
    }
}

pub fn mca_lower_bound(bound: &MCABound, t: f64) -> f64 {
    bound.at(t)
}

/// `E[y(t), y(0)]` at every recorded time.
pub fn defeat_check<F: SwitchedField + ?Sized>(field: &F, traj: &Trajectory) -> Vec<f64> {
    let initial = traj.initial_state();
    traj.states
        .iter()
        .map(|s| field.payoff(s, initial))
        .collect()
}

/// Time the constrained regime was entered, if ever.
pub fn switch_time(traj: &Trajectory) -> Option<f64> {
    traj.switch_time.or_else(|| {
        traj.regime_flags
            .iter()
            .position(|f| *f == 1)
            .map(|i| traj.times[i])
    })
}

/// `‖y − mean(y)‖∞`.
pub fn distance_from_constant(y: &[f64]) -> f64 {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    y.iter().fold(0.0, |m, v| m.max((v - mean).abs()))
}

pub fn total_variation(y: &[f64]) -> f64 {
    y.windows(2).map(|p| (p[1] - p[0]).abs()).sum()
}
