//! Selection-gradient operators on a sampled function grid.
//!
//! The gradient `∇E f(x) = ∫_0^x f − ∫_x^1 f` is computed with one forward
//! trapezoid prefix pass `G`, taking `∫_x^1 = total − G(x)` so that
//! `∇E f = 2G − total` holds to machine precision. The two endpoint samples
//! additionally receive the closure term `(h/2)(f_0 − f_N)`; with it the
//! discrete gradient is skew-adjoint in the trapezoid inner product. That
//! is what makes the sampled payoff exactly zero-sum and makes the
//! constrained flow conserve mass and norm on `w = 0`, exactly as in the
//! continuum. The closure vanishes when `f_0 = f_N` (e.g. for constants).
//!
//! The projection normalisation is `1 / ⟨x − ½, x − ½⟩` in the same
//! inner product, which tends to 12 as `N → ∞`.

use super::{Regime, SwitchedField};
use crate::error::{Error, Result};
use crate::quadrature::{self, Quadrature};
use crate::strategy::{self, SampledStrategy, ValidityReport};

/// Discrete selection gradient of trapezoid samples.
pub fn selection_gradient(samples: &[f64]) -> Vec<f64> {
    let mut g = Vec::with_capacity(samples.len());
    selection_gradient_into(samples, &mut g);
    g
}

fn selection_gradient_into(samples: &[f64], out: &mut Vec<f64>) {
    let n = samples.len() - 1;
    let cumulative = quadrature::cumulative_trapezoid(samples);
    let total = cumulative[n];
    out.clear();
    out.extend(cumulative.iter().map(|below| 2.0 * below - total));
    let closure = 0.5 / n as f64 * (samples[0] - samples[n]);
    out[0] += closure;
    out[n] += closure;
}

/// Precomputed weights and projection data for a grid of resolution `N`.
#[derive(Debug, Clone)]
pub struct SampledOperators {
    resolution: usize,
    quadrature: Quadrature,
    weights: Vec<f64>,
    centered: Vec<f64>,
    centered_gradient: Vec<f64>,
    projection_scale: f64,
}

impl SampledOperators {
    pub fn new(resolution: usize) -> Result<Self> {
        Self::with_quadrature(resolution, Quadrature::Trapezoid)
    }

    pub fn with_quadrature(resolution: usize, quadrature: Quadrature) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let weights = quadrature.weights(resolution);
        let centered: Vec<f64> = quadrature::grid(resolution)
            .into_iter()
            .map(|x| x - 0.5)
            .collect();
        let centered_gradient = selection_gradient(&centered);
        let projection_scale = 1.0 / quadrature::inner(&weights, &centered, &centered);
        Ok(Self {
            resolution,
            quadrature,
            weights,
            centered,
            centered_gradient,
            projection_scale,
        })
    }

    pub fn for_strategy(f: &SampledStrategy) -> Self {
        Self::with_quadrature(f.resolution(), f.quadrature()).expect("strategy resolution >= 1")
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `1 / ∫(x − ½)²` under the grid quadrature.
    pub fn projection_scale(&self) -> f64 {
        self.projection_scale
    }

    /// Quadrature inner product.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        quadrature::inner(&self.weights, a, b)
    }

    /// Adjoint of the field in the quadrature inner product:
    /// `−∇E v + H · c · ∇E(x − ½) ⟨x − ½, v⟩`, where `∇E(x − ½) ≈ x² − x`.
    pub fn adjoint_in(&self, v: &[f64], regime: Regime, out: &mut [f64]) {
        let g = selection_gradient(v);
        for (o, gv) in out.iter_mut().zip(&g) {
            *o = -gv;
        }
        if regime.is_constrained() {
            let c = self.projection_scale * self.inner(&self.centered, v);
            for (o, gx) in out.iter_mut().zip(&self.centered_gradient) {
                *o += c * gx;
            }
        }
    }

    fn check(&self, f: &SampledStrategy) -> Result<()> {
        if f.resolution() != self.resolution {
            return Err(Error::DimensionMismatch {
                expected: self.resolution + 1,
                found: f.samples().len(),
            });
        }
        Ok(())
    }
}

impl SwitchedField for SampledOperators {
    fn dim(&self) -> usize {
        self.resolution + 1
    }

    fn constraint(&self, y: &[f64]) -> f64 {
        self.inner(&self.centered, y)
    }

    fn mass(&self, y: &[f64]) -> f64 {
        self.quadrature.integrate(y)
    }

    fn norm(&self, y: &[f64]) -> f64 {
        self.inner(y, y).sqrt()
    }

    fn payoff(&self, a: &[f64], b: &[f64]) -> f64 {
        strategy::payoff_sampled_raw(self.quadrature, a, b)
    }

    fn apply_in(&self, y: &[f64], regime: Regime, out: &mut [f64]) {
        let g = selection_gradient(y);
        out.copy_from_slice(&g);
        if regime.is_constrained() {
            let c = self.projection_scale * self.inner(&self.centered, &g);
            for (o, x) in out.iter_mut().zip(&self.centered) {
                *o -= c * x;
            }
        }
    }

    fn validate(&self, y: &[f64]) -> ValidityReport {
        let mass = self.mass(y);
        let mca = if mass == 0.0 {
            None
        } else {
            Some(0.5 + self.constraint(y) / mass)
        };
        ValidityReport::from_parts(y, mass, mca)
    }
}

/// Samples of `∇E f(x_j) = ∫_0^{x_j} f − ∫_{x_j}^1 f`.
pub fn gradient_function(f: &SampledStrategy) -> SampledStrategy {
    rewrap(f, selection_gradient(f.samples()))
}

/// `w(f) = ∫ (x − ½) f(x) dx`.
pub fn w_functional(f: &SampledStrategy) -> f64 {
    SampledOperators::for_strategy(f).constraint(f.samples())
}

/// Constrained selection gradient `(1 − H(w(f)) P) ∇E f`.
pub fn apply_a_function(f: &SampledStrategy) -> SampledStrategy {
    let ops = SampledOperators::for_strategy(f);
    rewrap(f, ops.apply(f.samples()))
}

/// The field of a fixed regime, ignoring the sign of `w(f)`.
pub fn apply_a_function_in(f: &SampledStrategy, regime: Regime) -> SampledStrategy {
    let ops = SampledOperators::for_strategy(f);
    let mut out = vec![0.0; f.samples().len()];
    ops.apply_in(f.samples(), regime, &mut out);
    rewrap(f, out)
}

/// Adjoint of the constrained operator on MCA-½ strategies:
/// `A* v = −(∫_0^x v − ∫_x^1 v) + 12 (x² − x) ∫ (y − ½) v(y) dy`.
pub fn apply_adjoint_function(v: &SampledStrategy) -> SampledStrategy {
    apply_adjoint_function_in(v, Regime::Constrained)
}

pub fn apply_adjoint_function_in(v: &SampledStrategy, regime: Regime) -> SampledStrategy {
    let ops = SampledOperators::for_strategy(v);
    let mut out = vec![0.0; v.samples().len()];
    ops.adjoint_in(v.samples(), regime, &mut out);
    rewrap(v, out)
}

/// Same shape check used by callers that hold an operator set already.
pub fn check_resolution(ops: &SampledOperators, f: &SampledStrategy) -> Result<()> {
    ops.check(f)
}

fn rewrap(like: &SampledStrategy, samples: Vec<f64>) -> SampledStrategy {
    SampledStrategy::with_quadrature(samples, like.quadrature()).expect("same length as input")
}
