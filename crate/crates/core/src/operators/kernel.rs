use super::{heaviside, Regime, HEAVISIDE_TOL};
use crate::error::{Error, Result};
use crate::operators::sampled::w_functional;
use crate::strategy::SampledStrategy;

/// Integral kernel of the (constrained) selection gradient on `[0,1]²`:
///
/// ```text
/// k(x, y) = s(x, y) + 12 H (x − ½)(y² − y),   s = +1 for x > y, −1 for x < y
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    pub regime: Regime,
}

impl KernelSpec {
    pub fn unconstrained() -> Self {
        Self {
            regime: Regime::Unconstrained,
        }
    }

    pub fn constrained() -> Self {
        Self {
            regime: Regime::Constrained,
        }
    }

    /// The kernel acting on `f`, with the regime picked by `H(w(f))`.
    pub fn for_strategy(f: &SampledStrategy) -> Self {
        let h = heaviside(w_functional(f), HEAVISIDE_TOL);
        if h == 1.0 {
            Self::constrained()
        } else {
            Self::unconstrained()
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        kernel_eval(self, x, y)
    }
}

/// Weakly singular: undefined on the diagonal.
pub fn kernel_eval(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    if x == y {
        return Err(Error::OnDiagonal(x));
    }
    let s = if x > y { 1.0 } else { -1.0 };
    let h = if spec.regime.is_constrained() {
        1.0
    } else {
        0.0
    };
    Ok(s + 12.0 * h * (x - 0.5) * (y * y - y))
}
