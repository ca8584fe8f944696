//! Time integration of the switched adaptive dynamics `ẏ = A y`.
//!
//! The regime is frozen within a step. When an unconstrained step ends with
//! `w ≥ −tol`, the step is bisected on its length until the crossing is
//! located to [`SWITCH_TOL`], and the remainder is integrated in the
//! constrained regime. The constrained flow keeps `w` fixed, so the
//! constrained regime is absorbing and is latched once entered.

mod analysis;

pub use analysis::{
    defeat_check, distance_from_constant, is_stationary, mca_lower_bound, mca_rate, switch_time,
    total_variation, MCABound, STATIONARY_TOL,
};

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operators::{DiscreteOperators, Regime, SampledOperators, SwitchedField, HEAVISIDE_TOL};
use crate::strategy::{SampledStrategy, Strategy, ValidityReport};

/// Width of the bracket on the switch time.
pub const SWITCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Euler,
    #[default]
    Rk4,
    /// Exact matrix exponential per step.
    ClosedForm,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Method::Euler),
            "rk4" => Ok(Method::Rk4),
            "closed" | "closed_form" | "closed-form" => Ok(Method::ClosedForm),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Euler => "euler",
            Method::Rk4 => "rk4",
            Method::ClosedForm => "closed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt: f64,
    /// Horizon `T`.
    pub horizon: f64,
    /// Keep every `record_every`-th step; the final state is always kept.
    pub record_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk4,
            dt: 1e-3,
            horizon: 1.0,
            record_every: 10,
        }
    }
}

impl IntegratorConfig {
    pub fn new(method: Method, dt: f64, horizon: f64) -> Result<Self> {
        let cfg = Self {
            method,
            dt,
            horizon,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_record_every(mut self, stride: usize) -> Self {
        self.record_every = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "T must be nonnegative, got {}",
                self.horizon
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig(
                "record_every must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Number of steps; the last one is shortened to land on `T`.
    pub fn steps(&self) -> usize {
        if self.horizon == 0.0 {
            0
        } else {
            (self.horizon / self.dt - 1e-9).ceil().max(1.0) as usize
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub mca: f64,
    pub mass: f64,
    pub l2: f64,
    pub payoff_vs_initial: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub regime_flags: Vec<u8>,
    pub diagnostics: Vec<Diagnostics>,
    pub validity: Vec<ValidityReport>,
    /// Located to within [`SWITCH_TOL`]; `Some(0.0)` when the run starts constrained.
    pub switch_time: Option<f64>,
}

impl Trajectory {
    fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            regime_flags: Vec::with_capacity(n),
            diagnostics: Vec::with_capacity(n),
            validity: Vec::with_capacity(n),
            switch_time: None,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial_state(&self) -> &[f64] {
        &self.states[0]
    }

    pub fn final_state(&self) -> &[f64] {
        self.states
            .last()
            .expect("trajectory holds the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self
            .times
            .last()
            .expect("trajectory holds the initial state")
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn mca_series(&self) -> Vec<f64> {
        self.diagnostics.iter().map(|d| d.mca).collect()
    }

    pub fn mass_series(&self) -> Vec<f64> {
        self.diagnostics.iter().map(|d| d.mass).collect()
    }

    /// First recorded index whose state has a negative component.
    pub fn first_invalid(&self) -> Option<usize> {
        self.validity.iter().position(|v| !v.nonnegative)
    }

    fn record<F: SwitchedField + ?Sized>(
        &mut self,
        field: &F,
        t: f64,
        y: &[f64],
        regime: Regime,
    ) -> Result<()> {
        let mass = field.mass(y);
        if mass == 0.0 {
            return Err(Error::ZeroMass);
        }
        let initial = self.states.first().map(Vec::as_slice).unwrap_or(y);
        let diagnostics = Diagnostics {
            mca: 0.5 + field.constraint(y) / mass,
            mass,
            l2: field.norm(y),
            payoff_vs_initial: field.payoff(y, initial),
        };
        self.times.push(t);
        self.states.push(y.to_vec());
        self.regime_flags.push(regime.flag());
        self.diagnostics.push(diagnostics);
        self.validity.push(field.validate(y));
        Ok(())
    }
}

/// One-step maps `y ↦ y(h)` for a frozen regime, for `ẏ = sign · A y`.
struct Stepper<'a, F: SwitchedField + ?Sized> {
    field: &'a F,
    method: Method,
    sign: f64,
    dt: f64,
    stages: [Vec<f64>; 4],
    tmp: Vec<f64>,
    generators: [Option<DMatrix<f64>>; 2],
    full_step: [Option<DMatrix<f64>>; 2],
}

impl<'a, F: SwitchedField + ?Sized> Stepper<'a, F> {
    fn new(field: &'a F, method: Method, sign: f64, dt: f64) -> Self {
        let n = field.dim();
        Self {
            field,
            method,
            sign,
            dt,
            stages: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
            generators: [None, None],
            full_step: [None, None],
        }
    }

    fn eval(&self, y: &[f64], regime: Regime, out: &mut [f64]) {
        self.field.apply_in(y, regime, out);
        if self.sign != 1.0 {
            out.iter_mut().for_each(|v| *v *= self.sign);
        }
    }

    fn propagator(&mut self, h: f64, regime: Regime) -> DMatrix<f64> {
        let slot = regime.flag() as usize;
        if h == self.dt {
            if let Some(m) = &self.full_step[slot] {
                return m.clone();
            }
        }
        let sign = self.sign;
        let field = self.field;
        let generator = self.generators[slot].get_or_insert_with(|| field.matrix(regime) * sign);
        let exp = (&*generator * h).exp();
        if h == self.dt {
            self.full_step[slot] = Some(exp.clone());
        }
        exp
    }

    fn step(&mut self, y: &[f64], h: f64, regime: Regime, out: &mut [f64]) {
        match self.method {
            Method::Euler => {
                let mut k = std::mem::take(&mut self.stages[0]);
                self.eval(y, regime, &mut k);
                for ((o, yi), ki) in out.iter_mut().zip(y).zip(&k) {
                    *o = yi + h * ki;
                }
                self.stages[0] = k;
            }
            Method::Rk4 => {
                let [mut k1, mut k2, mut k3, mut k4] = std::mem::take(&mut self.stages);
                let mut tmp = std::mem::take(&mut self.tmp);
                self.eval(y, regime, &mut k1);
                axpy(&mut tmp, y, 0.5 * h, &k1);
                self.eval(&tmp, regime, &mut k2);
                axpy(&mut tmp, y, 0.5 * h, &k2);
                self.eval(&tmp, regime, &mut k3);
                axpy(&mut tmp, y, h, &k3);
                self.eval(&tmp, regime, &mut k4);
                for i in 0..y.len() {
                    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                self.stages = [k1, k2, k3, k4];
                self.tmp = tmp;
            }
            Method::ClosedForm => {
                let exp = self.propagator(h, regime);
                let next = exp * DVector::from_column_slice(y);
                out.copy_from_slice(next.as_slice());
            }
        }
    }
}

fn axpy(out: &mut [f64], y: &[f64], a: f64, k: &[f64]) {
    for ((o, yi), ki) in out.iter_mut().zip(y).zip(k) {
        *o = yi + a * ki;
    }
}

fn check_state<F: SwitchedField + ?Sized>(field: &F, y: &[f64]) -> Result<()> {
    if y.len() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            found: y.len(),
        });
    }
    check_finite(y)
}

fn check_finite(y: &[f64]) -> Result<()> {
    match y.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::NonFinite(*v)),
        None => Ok(()),
    }
}

fn step_time(cfg: &IntegratorConfig, k: usize, steps: usize) -> f64 {
    if k == steps {
        cfg.horizon
    } else {
        k as f64 * cfg.dt
    }
}

/// Exactly `dt` except for a shortened final step, so cached propagators are reused.
fn step_length(cfg: &IntegratorConfig, k: usize, steps: usize) -> f64 {
    if k + 1 == steps {
        cfg.horizon - step_time(cfg, k, steps)
    } else {
        cfg.dt
    }
}

/// Integrates the switched dynamics of `field` from `initial` over `[0, T]`.
pub fn simulate<F: SwitchedField + ?Sized>(
    field: &F,
    initial: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_state(field, initial)?;
    let steps = cfg.steps();
    let mut traj = Trajectory::with_capacity(steps / cfg.record_every + 2);
    let mut regime = field.regime(initial);
    if regime.is_constrained() {
        traj.switch_time = Some(0.0);
    }
    traj.record(field, 0.0, initial, regime)?;

    let mut stepper = Stepper::new(field, cfg.method, 1.0, cfg.dt);
    let n = field.dim();
    let mut y = initial.to_vec();
    let mut next = vec![0.0; n];
    let mut trial = vec![0.0; n];
    for k in 0..steps {
        let t = step_time(cfg, k, steps);
        let h = step_length(cfg, k, steps);
        stepper.step(&y, h, regime, &mut next);
        if !regime.is_constrained() && field.constraint(&next) >= -HEAVISIDE_TOL {
            let (mut lo, mut hi) = (0.0, h);
            while hi - lo > SWITCH_TOL {
                let mid = 0.5 * (lo + hi);
                stepper.step(&y, mid, Regime::Unconstrained, &mut trial);
                if field.constraint(&trial) >= -HEAVISIDE_TOL {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            stepper.step(&y, hi, Regime::Unconstrained, &mut trial);
            regime = Regime::Constrained;
            traj.switch_time = Some(t + hi);
            if h - hi > 0.0 {
                stepper.step(&trial, h - hi, regime, &mut next);
            } else {
                next.copy_from_slice(&trial);
            }
        }
        check_finite(&next)?;
        std::mem::swap(&mut y, &mut next);
        if (k + 1) % cfg.record_every == 0 || k + 1 == steps {
            traj.record(field, step_time(cfg, k + 1, steps), &y, regime)?;
        }
    }
    Ok(traj)
}

pub fn simulate_discrete(initial: &Strategy, cfg: &IntegratorConfig) -> Result<Trajectory> {
    let ops = DiscreteOperators::new(initial.order())?;
    simulate(&ops, initial.values(), cfg)
}

pub fn simulate_function(initial: &SampledStrategy, cfg: &IntegratorConfig) -> Result<Trajectory> {
    let ops = SampledOperators::for_strategy(initial);
    simulate(&ops, initial.samples(), cfg)
}

/// Path of the time-reversed unconstrained flow `ẏ = −L y` from `target`.
///
/// Reversal uses the unconstrained field: `target` is typically an
/// equilibrium with `w = 0`, where the constrained field vanishes. The
/// forward switched flow started at the end state runs unconstrained and
/// reaches `target` at time `T`.
pub fn reverse_trajectory<F: SwitchedField + ?Sized>(
    field: &F,
    target: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_state(field, target)?;
    let steps = cfg.steps();
    let mut traj = Trajectory::with_capacity(steps / cfg.record_every + 2);
    let regime = Regime::Unconstrained;
    traj.record(field, 0.0, target, regime)?;
    let mut stepper = Stepper::new(field, cfg.method, -1.0, cfg.dt);
    let mut y = target.to_vec();
    let mut next = vec![0.0; y.len()];
    for k in 0..steps {
        let h = step_length(cfg, k, steps);
        stepper.step(&y, h, regime, &mut next);
        check_finite(&next)?;
        std::mem::swap(&mut y, &mut next);
        if (k + 1) % cfg.record_every == 0 || k + 1 == steps {
            traj.record(field, step_time(cfg, k + 1, steps), &y, regime)?;
        }
    }
    Ok(traj)
}

/// Initial state that the forward dynamics carries to `target` at time `T`.
pub fn reverse_simulate<F: SwitchedField + ?Sized>(
    field: &F,
    target: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<f64>> {
    let traj = reverse_trajectory(field, target, &cfg.with_record_every(usize::MAX))?;
    Ok(traj.final_state().to_vec())
}

pub fn reverse_simulate_discrete(target: &Strategy, cfg: &IntegratorConfig) -> Result<Strategy> {
    let ops = DiscreteOperators::new(target.order())?;
    Strategy::new(reverse_simulate(&ops, target.values(), cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_operators;

    fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn constant_is_constant_for_every_method() {
        let ops = build_operators(7).unwrap();
        for method in [Method::Euler, Method::Rk4, Method::ClosedForm] {
            let cfg = IntegratorConfig::new(method, 0.01, 1.0).unwrap();
            let traj = simulate(&ops, &[1.0; 8], &cfg).unwrap();
            assert_eq!(traj.switch_time, Some(0.0));
            for s in &traj.states {
                assert!(sup_diff(s, &[1.0; 8]) < 1e-12);
            }
            assert!(traj.diagnostics.iter().all(|d| (d.mca - 0.5).abs() < 1e-14));
        }
    }

    #[test]
    fn records_stride_and_final() {
        let ops = build_operators(3).unwrap();
        let cfg = IntegratorConfig::new(Method::Rk4, 0.1, 1.05).unwrap();
        // mass falls as 6 − 4t here and stays positive on [0, 1.05]
        let traj = simulate(&ops, &[1.0, 1.0, 2.0, 2.0], &cfg).unwrap();
        assert_eq!(cfg.steps(), 11);
        assert_eq!(traj.times, vec![0.0, 1.0, 1.05]);
        let zero = simulate(
            &ops,
            &[1.0; 4],
            &IntegratorConfig::new(Method::Rk4, 0.1, 0.0).unwrap(),
        )
        .unwrap();
        assert_eq!(zero.len(), 1);
    }

    #[test]
    fn switch_is_located_and_latched() {
        let ops = build_operators(10).unwrap();
        let y0: Vec<f64> = (0..11).map(|j| 2.0 - j as f64 / 10.0).collect();
        let cfg = IntegratorConfig::new(Method::Rk4, 0.01, 3.0)
            .unwrap()
            .with_record_every(1);
        let traj = simulate(&ops, &y0, &cfg).unwrap();
        let ts = traj.switch_time.expect("mca reaches one half");
        assert!(ts > 0.0 && ts < 3.0);
        let first = traj.regime_flags.iter().position(|f| *f == 1).unwrap();
        assert!(traj.regime_flags[first..].iter().all(|f| *f == 1));
        assert!(traj.times[first - 1] < ts && ts <= traj.times[first]);
        for (t, d) in traj.times.iter().zip(&traj.diagnostics) {
            if *t >= ts {
                assert!((d.mca - 0.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn closed_form_switch_matches_rk4() {
        let ops = build_operators(9).unwrap();
        let y0: Vec<f64> = (0..10).map(|j| 1.5 - j as f64 / 9.0).collect();
        let rk = simulate(
            &ops,
            &y0,
            &IntegratorConfig::new(Method::Rk4, 1e-3, 2.0).unwrap(),
        )
        .unwrap();
        let cf = simulate(
            &ops,
            &y0,
            &IntegratorConfig::new(Method::ClosedForm, 0.05, 2.0).unwrap(),
        )
        .unwrap();
        assert!((rk.switch_time.unwrap() - cf.switch_time.unwrap()).abs() < 1e-8);
        assert!(sup_diff(rk.final_state(), cf.final_state()) < 1e-8);
    }

    #[test]
    fn reverse_round_trip() {
        let ops = build_operators(9).unwrap();
        let cfg = IntegratorConfig::new(Method::Rk4, 1e-3, 0.5).unwrap();
        let y0 = reverse_simulate(&ops, &[1.0; 10], &cfg).unwrap();
        let fwd = simulate(&ops, &y0, &cfg).unwrap();
        assert!(sup_diff(fwd.final_state(), &[1.0; 10]) < 1e-8);
        let same = reverse_simulate(
            &ops,
            &[1.0; 10],
            &IntegratorConfig::new(Method::Rk4, 1e-3, 0.0).unwrap(),
        )
        .unwrap();
        assert_eq!(same, vec![1.0; 10]);
    }

    #[test]
    fn short_reversal_stays_positive_and_subcritical() {
        let ops = build_operators(9).unwrap();
        let cfg = IntegratorConfig::new(Method::Rk4, 1e-3, 0.05)
            .unwrap()
            .with_record_every(1);
        let path = reverse_trajectory(&ops, &[1.0; 10], &cfg).unwrap();
        assert!(path.states.iter().flatten().all(|v| *v > 0.0));
        assert!(ops.mca(path.final_state()).unwrap() < 0.5);
    }

    #[test]
    fn errors() {
        let ops = build_operators(2).unwrap();
        let cfg = IntegratorConfig::default();
        assert!(matches!(
            simulate(&ops, &[0.0; 3], &cfg),
            Err(Error::ZeroMass)
        ));
        assert!(matches!(
            simulate(&ops, &[1.0, f64::NAN, 1.0], &cfg),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            simulate(&ops, &[1.0; 4], &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(IntegratorConfig::new(Method::Rk4, 0.0, 1.0).is_err());
        assert!(IntegratorConfig::new(Method::Rk4, 0.1, -1.0).is_err());
        assert!("closed".parse::<Method>().is_ok());
        assert!("leapfrog".parse::<Method>().is_err());
    }
}
