//! Named initial conditions.
//!
//! Each preset is a profile on `[0, 1]` sampled at `j/M` (discrete) or on
//! the quadrature grid (sampled). Presets whose MCA is pinned are adjusted
//! on the actual grid, so the pinned value holds to roundoff rather than to
//! quadrature error.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quadrature::{self, Quadrature};
use crate::strategy::{SampledStrategy, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `1`
    Constant,
    /// `(x − ½)²`
    Parabola,
    /// `1 − x/r` on `[0, r]`, `a(x − r)` on `[r, 1]`, with `a` chosen so `mca = ½`.
    Tent,
    /// `1` except `1 + δ` at index `k`.
    PerturbedConstant,
    /// `1 − x`
    Decreasing,
    /// `cos(2πx) + ½`: symmetric, `mca = ½`, negative on a middle band.
    NegativeDemo,
    /// Smooth positive cosine series adjusted to `mca = ½`.
    Random,
    /// [`Preset::Random`] pushed to a random `mca` in `[0.3, 0.45)`.
    RandomSubcritical,
}

pub const PRESETS: [Preset; 8] = [
    Preset::Constant,
    Preset::Parabola,
    Preset::Tent,
    Preset::PerturbedConstant,
    Preset::Decreasing,
    Preset::NegativeDemo,
    Preset::Random,
    Preset::RandomSubcritical,
];

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Constant => "constant",
            Preset::Parabola => "parabola",
            Preset::Tent => "tent",
            Preset::PerturbedConstant => "perturbed-constant",
            Preset::Decreasing => "decreasing",
            Preset::NegativeDemo => "negative-demo",
            Preset::Random => "random",
            Preset::RandomSubcritical => "random-subcritical",
        }
    }

    pub fn is_seeded(self) -> bool {
        matches!(self, Preset::Random | Preset::RandomSubcritical)
    }

    /// Values at the points `xs`, with `weights` defining mass and moments.
    fn values(self, xs: &[f64], weights: &[f64], p: &PresetParams) -> Result<Vec<f64>> {
        let grid = Grid { xs, weights };
        let vals = match self {
            Preset::Constant => vec![1.0; xs.len()],
            Preset::Parabola => xs.iter().map(|x| (x - 0.5).powi(2)).collect(),
            Preset::Decreasing => xs.iter().map(|x| 1.0 - x).collect(),
            Preset::NegativeDemo => xs
                .iter()
                .map(|x| (2.0 * std::f64::consts::PI * x).cos() + 0.5)
                .collect(),
            Preset::PerturbedConstant => {
                let k = p.k.unwrap_or((xs.len() - 1) / 2);
                if k >= xs.len() {
                    return Err(Error::InvalidConfig(format!(
                        "perturbation index {k} outside 0..={}",
                        xs.len() - 1
                    )));
                }
                let mut v = vec![1.0; xs.len()];
                v[k] += p.delta;
                v
            }
            Preset::Tent => grid.tent(p.r)?,
            Preset::Random => grid.random_critical(&mut ChaCha8Rng::seed_from_u64(p.seed)),
            Preset::RandomSubcritical => {
                let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
                let base = grid.random_critical(&mut rng);
                let target = rng.gen_range(0.3..0.45);
                grid.push_mca_down(base, target)
            }
        };
        Ok(vals)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PRESETS
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetParams {
    /// Tent kink, in `(½, 1)`.
    pub r: f64,
    pub delta: f64,
    /// Perturbation index; defaults to the midpoint.
    pub k: Option<usize>,
    pub seed: u64,
}

impl Default for PresetParams {
    fn default() -> Self {
        Self {
            r: 0.75,
            delta: 0.01,
            k: None,
            seed: 0,
        }
    }
}

struct Grid<'a> {
    xs: &'a [f64],
    weights: &'a [f64],
}

impl Grid<'_> {
    fn moment(&self, v: &[f64], g: impl Fn(f64) -> f64) -> f64 {
        self.xs
            .iter()
            .zip(self.weights)
            .zip(v)
            .map(|((x, c), y)| c * g(*x) * y)
            .sum()
    }

    fn w(&self, v: &[f64]) -> f64 {
        self.moment(v, |x| x - 0.5)
    }

    fn profile(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.xs.iter().map(|x| f(*x)).collect()
    }

    fn tent(&self, r: f64) -> Result<Vec<f64>> {
        if !(r > 0.5 && r < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tent needs 1/2 < r < 1, got {r}"
            )));
        }
        let left = self.profile(|x| if x <= r { 1.0 - x / r } else { 0.0 });
        let right = self.profile(|x| if x > r { x - r } else { 0.0 });
        let wr = self.w(&right);
        if wr <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "grid too coarse to resolve the tent at r = {r}"
            )));
        }
        let a = -self.w(&left) / wr;
        Ok(left.iter().zip(&right).map(|(l, q)| l + a * q).collect())
    }

    fn random_critical(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let amps: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.3..0.3));
        let base = self.profile(|x| {
            1.0 + amps
                .iter()
                .enumerate()
                .map(|(j, a)| a * ((j + 1) as f64 * std::f64::consts::PI * x).cos())
                .sum::<f64>()
        });
        // add a positive ramp leaning against the imbalance
        let w = self.w(&base);
        let ramp = if w < 0.0 {
            self.profile(|x| x)
        } else {
            self.profile(|x| 1.0 - x)
        };
        let c = -w / self.w(&ramp);
        base.iter().zip(&ramp).map(|(b, q)| b + c * q).collect()
    }

    /// Adds `c(1 − x)³` with `c > 0` so the MCA becomes `target`.
    fn push_mca_down(&self, base: Vec<f64>, target: f64) -> Vec<f64> {
        let q = self.profile(|x| (1.0 - x).powi(3));
        let (m_b, x_b) = (self.moment(&base, |_| 1.0), self.moment(&base, |x| x));
        let (m_q, x_q) = (self.moment(&q, |_| 1.0), self.moment(&q, |x| x));
        let c = (x_b - target * m_b) / (target * m_q - x_q);
        base.iter().zip(&q).map(|(b, v)| b + c * v).collect()
    }
}

pub fn discrete_preset(preset: Preset, order: usize, params: &PresetParams) -> Result<Strategy> {
    if order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let xs = quadrature::grid(order);
    let weights = vec![1.0; order + 1];
    Strategy::new(preset.values(&xs, &weights, params)?)
}

pub fn sampled_preset(
    preset: Preset,
    resolution: usize,
    params: &PresetParams,
) -> Result<SampledStrategy> {
    if resolution == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let xs = quadrature::grid(resolution);
    let weights = Quadrature::Trapezoid.weights(resolution);
    SampledStrategy::new(preset.values(&xs, &weights, params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{mca_discrete, mca_function};

    #[test]
    fn names_round_trip() {
        for p in PRESETS {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!(matches!(
            "zigzag".parse::<Preset>(),
            Err(Error::UnknownPreset(_))
        ));
    }

    #[test]
    fn validity_of_every_preset() {
        let params = PresetParams {
            seed: 9,
            ..PresetParams::default()
        };
        for p in PRESETS {
            let d = discrete_preset(p, 40, &params).unwrap();
            let s = sampled_preset(p, 256, &params).unwrap();
            let expect_valid = !matches!(p, Preset::Tent | Preset::NegativeDemo);
            if expect_valid {
                assert!(d.validate().is_valid(), "{p} discrete");
                assert!(s.validate().is_valid(), "{p} sampled");
            }
        }
        let neg = sampled_preset(Preset::NegativeDemo, 256, &params).unwrap();
        assert!(!neg.validate().nonnegative);
    }

    #[test]
    fn pinned_mca_values() {
        let params = PresetParams {
            seed: 3,
            ..PresetParams::default()
        };
        for p in [
            Preset::Parabola,
            Preset::Tent,
            Preset::Random,
            Preset::NegativeDemo,
            Preset::Constant,
        ] {
            let d = discrete_preset(p, 30, &params).unwrap();
            assert!((mca_discrete(&d).unwrap() - 0.5).abs() < 1e-13, "{p}");
            let s = sampled_preset(p, 300, &params).unwrap();
            assert!((mca_function(&s).unwrap() - 0.5).abs() < 1e-13, "{p}");
        }
        let sub = sampled_preset(Preset::RandomSubcritical, 300, &params).unwrap();
        let m = mca_function(&sub).unwrap();
        assert!((0.3..0.45).contains(&m));
        assert!(sub.samples().iter().all(|v| *v > 0.0));
    }

    #[test]
    fn seeded_presets_are_deterministic() {
        let a = PresetParams {
            seed: 17,
            ..PresetParams::default()
        };
        let b = PresetParams {
            seed: 18,
            ..PresetParams::default()
        };
        let x = discrete_preset(Preset::Random, 20, &a).unwrap();
        assert_eq!(x, discrete_preset(Preset::Random, 20, &a).unwrap());
        assert_ne!(x, discrete_preset(Preset::Random, 20, &b).unwrap());
    }

    #[test]
    fn tent_shape_and_errors() {
        let f = sampled_preset(Preset::Tent, 400, &PresetParams::default()).unwrap();
        assert_eq!(f.samples()[300], 0.0);
        assert_eq!(f.samples()[0], 1.0);
        assert!(f.samples()[400] > 0.0);
        let bad = PresetParams {
            r: 0.4,
            ..PresetParams::default()
        };
        assert!(sampled_preset(Preset::Tent, 64, &bad).is_err());
        let far = PresetParams {
            k: Some(11),
            ..PresetParams::default()
        };
        assert!(discrete_preset(Preset::PerturbedConstant, 10, &far).is_err());
        let mid = discrete_preset(Preset::PerturbedConstant, 50, &PresetParams::default()).unwrap();
        assert_eq!(mid.values()[25], 1.01);
    }
}
