//! Spectra, exact characteristic polynomials, kernels and propagators.

mod charpoly;
mod propagator;
mod spectrum;

pub use charpoly::{
    berkowitz, charpoly_binomial, charpoly_direct, charpoly_recurrence, CharPoly, EXACT_SIZE_LIMIT,
};
pub use propagator::{build_propagator, propagator_for, Propagator};
pub use spectrum::{
    compute_spectrum, schur_eigenvalues, Eigenvalue, JordanChain, Spectrum, EIGEN_TOL, RANK_TOL,
};

use crate::error::{Error, Result};

/// Stationary strategies of the constrained dynamics for order `M`.
///
/// Odd `M`: the constants. Even `M`: the alternating two-level profiles
/// `(a, b, a, …, a)`, spanned by the even and odd index indicators.
pub fn stationary_basis(order: usize) -> Result<Vec<Vec<f64>>> {
    if order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let n = order + 1;
    if order % 2 == 1 {
        return Ok(vec![vec![1.0; n]]);
    }
    let even = (0..n).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }).collect();
    let odd = (0..n).map(|k| if k % 2 == 1 { 1.0 } else { 0.0 }).collect();
    Ok(vec![even, odd])
}
