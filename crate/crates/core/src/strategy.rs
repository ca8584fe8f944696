//! Team strategies, payoffs and mean competitive ability (MCA).
//!
//! Two representations are supported:
//!
//! * [`Strategy`]: the discrete game, one count per competitive ability
//!   `k/M`. Sums are raw (unweighted).
//! * [`SampledStrategy`]: a function-valued strategy sampled at `x_j = j/N`.
//!   All integrals use the attached [`Quadrature`], so sampled quantities
//!   converge to their continuum counterparts as `N` grows.
//!
//! Neither type enforces the game constraints at construction. The dynamics
//! can leave the strategy space, so validity is a queryable report.

use std::ops::Add;

use crate::error::{Error, Result};
use crate::operators::sampled::selection_gradient;
use crate::quadrature::{self, Quadrature};

/// Components at or above `-NEGATIVE_TOL` count as nonnegative.
pub const NEGATIVE_TOL: f64 = 1e-12;
/// `mca_ok` holds while `mca <= 1/2 + MCA_TOL`.
pub const MCA_TOL: f64 = 1e-12;

/// Discrete team composition: `values[k]` individuals with competitive ability `k/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    values: Vec<f64>,
}

impl Strategy {
    /// Wraps `M + 1` component values. At least two components are required.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidOrder(values.len().saturating_sub(1)));
        }
        Ok(Self { values })
    }

    /// The equilibrium direction `(1, ..., 1)`.
    pub fn ones(order: usize) -> Result<Self> {
        Self::new(vec![1.0; order + 1])
    }

    /// Samples `f(k/M)` for `k = 0..=M`.
    pub fn from_fn(order: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(0));
        }
        Self::new(quadrature::grid(order).into_iter().map(f).collect())
    }

    /// Grid order `M`.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn validate(&self) -> ValidityReport {
        ValidityReport::from_parts(&self.values, self.mass(), mca_discrete(self).ok())
    }
}

impl Add for &Strategy {
    type Output = Result<Strategy>;

    /// Merging two teams sums their compositions.
    fn add(self, rhs: &Strategy) -> Result<Strategy> {
        check_len(self.values.len(), rhs.values.len())?;
        Strategy::new(
            self.values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// Function-valued strategy sampled on the uniform grid `x_j = j/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledStrategy {
    samples: Vec<f64>,
    quadrature: Quadrature,
}

impl SampledStrategy {
    /// Wraps `N + 1` samples with the default trapezoid rule.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        Self::with_quadrature(samples, Quadrature::Trapezoid)
    }

    pub fn with_quadrature(samples: Vec<f64>, quadrature: Quadrature) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidOrder(samples.len().saturating_sub(1)));
        }
        Ok(Self {
            samples,
            quadrature,
        })
    }

    pub fn from_fn(resolution: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::InvalidOrder(0));
        }
        Self::new(quadrature::grid(resolution).into_iter().map(f).collect())
    }

    /// Grid resolution `N`.
    pub fn resolution(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature
    }

    pub fn grid(&self) -> Vec<f64> {
        quadrature::grid(self.resolution())
    }

    /// `∫ f` under the attached quadrature.
    pub fn mass(&self) -> f64 {
        self.quadrature.integrate(&self.samples)
    }

    /// `∫ x f(x) dx`.
    pub fn first_moment(&self) -> f64 {
        let n = self.resolution() as f64;
        let xf: Vec<f64> = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, v)| j as f64 / n * v)
            .collect();
        self.quadrature.integrate(&xf)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|v| c * v).collect(),
            quadrature: self.quadrature,
        }
    }

    pub fn validate(&self) -> ValidityReport {
        ValidityReport::from_parts(&self.samples, self.mass(), mca_function(self).ok())
    }
}

impl Add for &SampledStrategy {
    type Output = Result<SampledStrategy>;

    fn add(self, rhs: &SampledStrategy) -> Result<SampledStrategy> {
        check_same_grid(self, rhs)?;
        SampledStrategy::with_quadrature(
            self.samples
                .iter()
                .zip(&rhs.samples)
                .map(|(a, b)| a + b)
                .collect(),
            self.quadrature,
        )
    }
}

/// Outcome of checking the game constraints on a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub nonnegative: bool,
    pub positive_mass: bool,
    pub mca_ok: bool,
    /// NaN when the mass vanishes.
    pub mca_value: f64,
    pub first_negative_index: Option<usize>,
}

impl ValidityReport {
    pub(crate) fn from_parts(values: &[f64], mass: f64, mca: Option<f64>) -> Self {
        let first_negative_index = values.iter().position(|&v| v < -NEGATIVE_TOL);
        let mca_value = mca.unwrap_or(f64::NAN);
        Self {
            nonnegative: first_negative_index.is_none(),
            positive_mass: mass > 0.0,
            mca_ok: mca_value <= 0.5 + MCA_TOL,
            mca_value,
            first_negative_index,
        }
    }

    /// All three game constraints hold.
    pub fn is_valid(&self) -> bool {
        self.nonnegative && self.positive_mass && self.mca_ok
    }
}

/// `E[a, b] = Σ_k a_k (Σ_{j<k} b_j − Σ_{l>k} b_l)`, evaluated in O(M).
pub fn payoff_discrete(a: &Strategy, b: &Strategy) -> Result<f64> {
    check_len(a.values.len(), b.values.len())?;
    Ok(payoff_raw(&a.values, &b.values))
}

pub(crate) fn payoff_raw(a: &[f64], b: &[f64]) -> f64 {
    let total: f64 = b.iter().sum();
    let mut below = 0.0;
    let mut acc = 0.0;
    for (ak, bk) in a.iter().zip(b) {
        let above = total - below - bk;
        acc += ak * (below - above);
        below += bk;
    }
    acc
}

/// `E[f, g] = ∫ f(x) (∫_0^x g − ∫_x^1 g) dx` on the sampled grid.
///
/// Evaluated in the antisymmetrised form `(⟨f, ∇E g⟩ − ⟨g, ∇E f⟩) / 2`, so
/// `E[f, g] = −E[g, f]` and `E[f, f] = 0` hold to the last bit.
pub fn payoff_function(a: &SampledStrategy, b: &SampledStrategy) -> Result<f64> {
    check_same_grid(a, b)?;
    Ok(payoff_sampled_raw(a.quadrature, &a.samples, &b.samples))
}

pub(crate) fn payoff_sampled_raw(q: Quadrature, a: &[f64], b: &[f64]) -> f64 {
    let weights = q.weights(a.len() - 1);
    let ga = selection_gradient(a);
    let gb = selection_gradient(b);
    0.5 * (quadrature::inner(&weights, a, &gb) - quadrature::inner(&weights, b, &ga))
}

/// `Σ (k/M) a_k / Σ a_k`.
pub fn mca_discrete(a: &Strategy) -> Result<f64> {
    let mass = a.mass();
    if mass == 0.0 {
        return Err(Error::ZeroMass);
    }
    let m = a.order() as f64;
    let moment: f64 = a
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| k as f64 / m * v)
        .sum();
    Ok(moment / mass)
}

/// `∫ x f / ∫ f` under the strategy's quadrature.
pub fn mca_function(f: &SampledStrategy) -> Result<f64> {
    let mass = f.mass();
    if mass == 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(f.first_moment() / mass)
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_same_grid(a: &SampledStrategy, b: &SampledStrategy) -> Result<()> {
    check_len(a.samples.len(), b.samples.len())?;
    if a.quadrature != b.quadrature {
        return Err(Error::InvalidConfig("quadrature rules differ".into()));
    }
    Ok(())
}
