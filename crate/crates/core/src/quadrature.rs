//! Quadrature on the uniform grid `x_j = j/N`, `j = 0..=N`.

/// Quadrature rule attached to a sampled strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Composite trapezoid rule: weights `h/2, h, ..., h, h/2` with `h = 1/N`.
    #[default]
    Trapezoid,
}

impl Quadrature {
    /// Quadrature weights for `n + 1` samples on `[0, 1]`.
    pub fn weights(self, n: usize) -> Vec<f64> {
        match self {
            Quadrature::Trapezoid => {
                let h = 1.0 / n as f64;
                let mut w = vec![h; n + 1];
                w[0] = 0.5 * h;
                w[n] = 0.5 * h;
                w
            }
        }
    }

    pub fn integrate(self, samples: &[f64]) -> f64 {
        match self {
            Quadrature::Trapezoid => trapezoid(samples),
        }
    }

    /// Running integral `∫_0^{x_j}` evaluated at every grid point.
    pub fn cumulative(self, samples: &[f64]) -> Vec<f64> {
        match self {
            Quadrature::Trapezoid => cumulative_trapezoid(samples),
        }
    }
}

/// Grid points `j/n` for `j = 0..=n`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..=n).map(|j| j as f64 / n as f64).collect()
}

pub fn trapezoid(samples: &[f64]) -> f64 {
    let n = samples.len() - 1;
    let h = 1.0 / n as f64;
    let inner: f64 = samples[1..n].iter().sum();
    h * (inner + 0.5 * (samples[0] + samples[n]))
}

/// Single forward prefix pass; the last entry equals [`trapezoid`] of the samples.
pub fn cumulative_trapezoid(samples: &[f64]) -> Vec<f64> {
    let n = samples.len() - 1;
    let half_h = 0.5 / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(acc);
    for pair in samples.windows(2) {
        acc += half_h * (pair[0] + pair[1]);
        out.push(acc);
    }
    out
}

/// Weighted inner product `Σ q_j a_j b_j`.
pub fn inner(weights: &[f64], a: &[f64], b: &[f64]) -> f64 {
    weights
        .iter()
        .zip(a)
        .zip(b)
        .map(|((q, x), y)| q * x * y)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let x = grid(7);
        let f: Vec<f64> = x.iter().map(|x| 3.0 * x - 1.0).collect();
        assert!((trapezoid(&f) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cumulative_ends_at_total() {
        let f: Vec<f64> = grid(33).iter().map(|x| (5.0 * x).sin() + 2.0).collect();
        let c = cumulative_trapezoid(&f);
        assert_eq!(c[0], 0.0);
        assert!((c[33] - trapezoid(&f)).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 2, 10, 1024] {
            let s: f64 = Quadrature::Trapezoid.weights(n).iter().sum();
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn second_order_convergence_on_quadratic() {
        // trapezoid error for x^2 is exactly h^2 / 6
        for n in [4usize, 16, 64] {
            let f: Vec<f64> = grid(n).iter().map(|x| x * x).collect();
            let h = 1.0 / n as f64;
            assert!((trapezoid(&f) - (1.0 / 3.0 + h * h / 6.0)).abs() < 1e-14);
        }
    }
}
