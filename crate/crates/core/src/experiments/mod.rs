//! The named numerical experiments, as library calls returning reports.
//! The CLI only adds argument handling and file output.

mod presets;

pub use presets::{discrete_preset, sampled_preset, Preset, PresetParams, PRESETS};

use crate::dynamics::{
    distance_from_constant, reverse_trajectory, simulate, IntegratorConfig, Trajectory,
};
use crate::error::{Error, Result};
use crate::operators::{DiscreteOperators, Regime, SampledOperators, SwitchedField};
use crate::spectral::{
    charpoly_binomial, charpoly_direct, compute_spectrum, CharPoly, Spectrum, EXACT_SIZE_LIMIT,
};
use crate::strategy::SampledStrategy;

fn sup_norm(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone)]
pub struct BranchReport {
    pub plus: Trajectory,
    pub minus: Trajectory,
    /// `‖(y₊ + y₋)/2 − 1‖∞` at each recorded time.
    pub mirror_residual: Vec<f64>,
    /// Smallest distance from a constant vector over both branches and all recorded times.
    pub min_distance_from_constant: f64,
}

impl BranchReport {
    pub fn max_mirror_residual(&self) -> f64 {
        sup_norm(self.mirror_residual.iter().copied())
    }
}

/// Perturbs `(1, …, 1)` by `±δ` at index `k` and runs both branches.
pub fn branch(order: usize, delta: f64, k: usize, cfg: &IntegratorConfig) -> Result<BranchReport> {
    let ops = DiscreteOperators::new(order)?;
    if k > order {
        return Err(Error::InvalidConfig(format!("k = {k} outside 0..={order}")));
    }
    let start = |sign: f64| {
        let mut y = vec![1.0; order + 1];
        y[k] += sign * delta;
        y
    };
    let (up, down) = (start(1.0), start(-1.0));
    // the branches are independent
    let (plus, minus) = std::thread::scope(|s| {
        let h = s.spawn(|| simulate(&ops, &up, cfg));
        let minus = simulate(&ops, &down, cfg);
        (h.join().expect("branch thread panicked"), minus)
    });
    let (plus, minus) = (plus?, minus?);
    let mirror_residual = plus
        .states
        .iter()
        .zip(&minus.states)
        .map(|(a, b)| sup_norm(a.iter().zip(b).map(|(x, y)| 0.5 * (x + y) - 1.0)))
        .collect();
    let min_distance_from_constant = plus
        .states
        .iter()
        .chain(&minus.states)
        .map(|s| distance_from_constant(s))
        .fold(f64::INFINITY, f64::min);
    Ok(BranchReport {
        plus,
        minus,
        mirror_residual,
        min_distance_from_constant,
    })
}

#[derive(Debug, Clone)]
pub struct ReverseReport {
    /// Reverse-time path from the target; its final state is the initial condition found.
    pub reverse: Trajectory,
    /// Forward switched run from that initial condition.
    pub forward: Trajectory,
    pub round_trip_error: f64,
    /// Smallest component seen along both paths.
    pub min_component: f64,
}

impl ReverseReport {
    pub fn initial(&self) -> &[f64] {
        self.reverse.final_state()
    }

    pub fn stays_positive(&self) -> bool {
        self.min_component > 0.0
    }
}

/// Finds `y₀` that the forward dynamics carries to `(1, …, 1)` at time `T`, then verifies it.
pub fn reverse(order: usize, cfg: &IntegratorConfig) -> Result<ReverseReport> {
    let ops = DiscreteOperators::new(order)?;
    let target = vec![1.0; order + 1];
    let reverse = reverse_trajectory(&ops, &target, cfg)?;
    let forward = simulate(&ops, reverse.final_state(), cfg)?;
    let round_trip_error = sup_norm(forward.final_state().iter().map(|v| v - 1.0));
    let min_component = reverse
        .states
        .iter()
        .chain(&forward.states)
        .flatten()
        .fold(f64::INFINITY, |m, v| m.min(*v));
    Ok(ReverseReport {
        reverse,
        forward,
        round_trip_error,
        min_component,
    })
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub order: usize,
    pub binomial: CharPoly,
    /// Present for sizes up to [`EXACT_SIZE_LIMIT`].
    pub direct: Option<CharPoly>,
    pub unconstrained: Spectrum,
    pub constrained: Spectrum,
    /// `‖(I − P)L v‖∞` for each analytic kernel vector.
    pub kernel_residuals: Vec<f64>,
    /// `‖(I − P)L v₂ − v₁‖∞` when the zero block is a Jordan chain.
    pub chain_residual: Option<f64>,
}

impl SpectrumReport {
    /// `None` when the exact expansion is out of budget.
    pub fn identity_holds(&self) -> Option<bool> {
        self.direct.as_ref().map(|d| *d == self.binomial)
    }
}

pub fn spectrum_report(order: usize) -> Result<SpectrumReport> {
    let ops = DiscreteOperators::new(order)?;
    let binomial = charpoly_binomial(order)?;
    let direct = if order < EXACT_SIZE_LIMIT {
        Some(charpoly_direct(order)?)
    } else {
        None
    };
    let unconstrained = compute_spectrum(&ops, Regime::Unconstrained)?;
    let constrained = compute_spectrum(&ops, Regime::Constrained)?;
    let mut out = vec![0.0; order + 1];
    let kernel_residuals = constrained
        .kernel_basis
        .iter()
        .map(|v| {
            ops.apply_in(v, Regime::Constrained, &mut out);
            sup_norm(out.iter().copied())
        })
        .collect();
    let chain_residual = constrained.jordan_chain.as_ref().map(|c| {
        ops.apply_in(&c.lead, Regime::Constrained, &mut out);
        sup_norm(out.iter().zip(&c.eigvec).map(|(a, b)| a - b))
    });
    Ok(SpectrumReport {
        order,
        binomial,
        direct,
        unconstrained,
        constrained,
        kernel_residuals,
        chain_residual,
    })
}

#[derive(Debug, Clone)]
pub struct GradientDemo {
    pub x: Vec<f64>,
    pub f0: Vec<f64>,
    /// `A f₀` in the regime picked by `f₀`.
    pub gradient: Vec<f64>,
    /// `f₀ + ε A f₀`.
    pub updated: Vec<f64>,
    pub epsilon: f64,
    /// Grid indices where the update is negative.
    pub negative_points: Vec<usize>,
}

impl GradientDemo {
    /// Linear interpolation of the gradient at `x ∈ [0, 1]`.
    pub fn gradient_at(&self, x: f64) -> f64 {
        interpolate(&self.gradient, x)
    }
}

fn interpolate(v: &[f64], x: f64) -> f64 {
    let n = v.len() - 1;
    let s = (x.clamp(0.0, 1.0) * n as f64).min(n as f64);
    let j = (s.floor() as usize).min(n - 1);
    let frac = s - j as f64;
    v[j] * (1.0 - frac) + v[j + 1] * frac
}

/// One explicit Euler step of size `ε` on a sampled strategy.
pub fn gradient_demo(f0: &SampledStrategy, epsilon: f64) -> Result<GradientDemo> {
    if !epsilon.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "epsilon must be finite, got {epsilon}"
        )));
    }
    let ops = SampledOperators::for_strategy(f0);
    let gradient = ops.apply(f0.samples());
    let updated: Vec<f64> = f0
        .samples()
        .iter()
        .zip(&gradient)
        .map(|(f, g)| f + epsilon * g)
        .collect();
    let negative_points = updated
        .iter()
        .enumerate()
        .filter(|(_, v)| **v < 0.0)
        .map(|(i, _)| i)
        .collect();
    Ok(GradientDemo {
        x: f0.grid(),
        f0: f0.samples().to_vec(),
        gradient,
        updated,
        epsilon,
        negative_points,
    })
}
