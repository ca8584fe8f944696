//! Eigenvalues, kernels and the zero Jordan chain of `L` and `(I − P) L`.
//!
//! `(I − P) L` is a projection times a skew matrix. In an orthonormal basis
//! whose last vector is `w/‖w‖` it becomes
//!
//! ```text
//! [ S'  S'' ]
//! [ 0   0   ]
//! ```
//!
//! with `S'` the skew compression of `L` onto `w⊥`. Its eigenvalues are
//! those of `S'` plus one zero. Skew matrices are normal, so their spectra
//! (including zeros) are well conditioned. They are obtained from the
//! Hermitian eigenproblem of `i S'`. A direct Schur factorisation of the
//! full matrix splits the defective zero eigenvalue into `±O(√ε)` pairs;
//! [`schur_eigenvalues`] is kept as a cross-check only.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Result;
use crate::operators::{DiscreteOperators, Regime, SwitchedField};

/// Relative tolerance for grouping eigenvalues and for pairing `±ib`.
pub const EIGEN_TOL: f64 = 1e-9;

/// Relative singular-value cutoff used to measure kernel dimensions.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

/// Generalized eigenvectors `A lead = eigvec`, `A eigvec = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanChain {
    pub lead: Vec<f64>,
    pub eigvec: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub regime: Regime,
    /// Sorted by imaginary part.
    pub eigenvalues: Vec<Eigenvalue>,
    pub spectral_radius: f64,
    /// Measured algebraic multiplicity of 0.
    pub zero_multiplicity: usize,
    /// Measured from the singular values of the operator.
    pub kernel_dim: usize,
    /// Analytic kernel basis.
    pub kernel_basis: Vec<Vec<f64>>,
    pub jordan_chain: Option<JordanChain>,
}

impl Spectrum {
    /// All eigenvalues with multiplicity, flattened.
    pub fn values(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat_n(Complex64::new(e.re, e.im), e.multiplicity))
            .collect()
    }

    pub fn max_abs_real(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, e| m.max(e.re.abs()))
    }

    /// Nonzero eigenvalues come in conjugate pairs `±ib` with equal multiplicity.
    pub fn is_conjugate_paired(&self) -> bool {
        let tol = EIGEN_TOL * self.spectral_radius.max(1.0);
        let nonzero: Vec<&Eigenvalue> = self
            .eigenvalues
            .iter()
            .filter(|e| e.im.abs() > tol)
            .collect();
        nonzero.iter().all(|e| {
            nonzero.iter().any(|o| {
                // λ₂ ≈ conj(λ₁)
                (e.re - o.re).abs() <= tol
                    && (e.im + o.im).abs() <= tol
                    && e.multiplicity == o.multiplicity
            })
        })
    }

    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }
}

/// Eigenvalues of a real skew-symmetric matrix via the Hermitian matrix `i S`.
fn skew_eigenvalues(s: &DMatrix<f64>) -> Vec<f64> {
    let n = s.nrows();
    if n == 0 {
        return Vec::new();
    }
    let herm = DMatrix::from_fn(n, n, |i, j| {
        let skew = 0.5 * (s[(i, j)] - s[(j, i)]);
        Complex64::new(0.0, skew)
    });
    // i S v = μ v  ⇒  S v = −iμ v
    herm.symmetric_eigenvalues().iter().map(|mu| -mu).collect()
}

/// Orthonormal basis of `w⊥` as the first `n − 1` columns of a Householder reflector.
fn complement_basis(w: &DVector<f64>) -> DMatrix<f64> {
    let n = w.len();
    let mut v = w / w.norm();
    v[n - 1] -= 1.0;
    let vv = v.dot(&v);
    let reflector = DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv);
    reflector.columns(0, n - 1).into_owned()
}

fn group(mut imag: Vec<f64>, tol: f64) -> Vec<Eigenvalue> {
    imag.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let mut out: Vec<Eigenvalue> = Vec::new();
    let mut anchor = f64::NAN;
    for b in imag {
        match out.last_mut() {
            Some(last) if (b - anchor).abs() <= tol => last.multiplicity += 1,
            _ => {
                anchor = b;
                out.push(Eigenvalue {
                    re: 0.0,
                    im: b,
                    multiplicity: 1,
                });
            }
        }
    }
    out
}

fn measured_kernel_dim(a: &DMatrix<f64>) -> usize {
    let sv = a.clone().singular_values();
    let smax = sv.iter().fold(0.0f64, |m, s| m.max(*s));
    let cutoff = RANK_TOL * smax.max(1.0);
    sv.iter().filter(|s| **s <= cutoff).count()
}

fn alternating(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
        .collect()
}

fn indicator(n: usize, parity: usize, value: f64) -> Vec<f64> {
    (0..n)
        .map(|k| if k % 2 == parity { value } else { 0.0 })
        .collect()
}

/// Spectrum of `L` ([`Regime::Unconstrained`]) or `(I − P) L` ([`Regime::Constrained`]).
pub fn compute_spectrum(ops: &DiscreteOperators, regime: Regime) -> Result<Spectrum> {
    let n = ops.size();
    let imag = match regime {
        Regime::Unconstrained => skew_eigenvalues(ops.l()),
        Regime::Constrained => {
            let u = complement_basis(ops.w());
            let compressed = u.transpose() * ops.l() * &u;
            let mut vals = skew_eigenvalues(&compressed);
            vals.push(0.0);
            vals
        }
    };
    let spectral_radius = imag.iter().fold(0.0f64, |m, b| m.max(b.abs()));
    let tol = EIGEN_TOL * spectral_radius.max(1.0);
    let snapped: Vec<f64> = imag
        .into_iter()
        .map(|b| if b.abs() <= tol { 0.0 } else { b })
        .collect();
    let zero_multiplicity = snapped.iter().filter(|b| **b == 0.0).count();
    let eigenvalues = group(snapped, tol);

    let kernel_dim = measured_kernel_dim(&ops.matrix(regime));
    let odd = n % 2 == 1;
    let (kernel_basis, jordan_chain) = match (regime, odd) {
        (Regime::Unconstrained, true) => (vec![alternating(n)], None),
        (Regime::Unconstrained, false) => (Vec::new(), None),
        (Regime::Constrained, true) => (vec![indicator(n, 1, 1.0), indicator(n, 0, 1.0)], None),
        (Regime::Constrained, false) => {
            let ones = vec![1.0; n];
            let chain = JordanChain {
                lead: indicator(n, 0, 2.0),
                eigvec: ones.clone(),
            };
            (vec![ones], Some(chain))
        }
    };

    Ok(Spectrum {
        regime,
        eigenvalues,
        spectral_radius,
        zero_multiplicity,
        kernel_dim,
        kernel_basis,
        jordan_chain,
    })
}

/// Unstructured eigenvalues from a real Schur factorisation.
pub fn schur_eigenvalues(a: &DMatrix<f64>) -> Vec<Complex64> {
    a.clone().complex_eigenvalues().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_operators;

    fn residual(ops: &DiscreteOperators, regime: Regime, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        ops.apply_in(v, regime, &mut out);
        out
    }

    fn sup(v: &[f64]) -> f64 {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn l_of_size_three() {
        let s = compute_spectrum(&build_operators(2).unwrap(), Regime::Unconstrained).unwrap();
        let ims: Vec<f64> = s.eigenvalues.iter().map(|e| e.im).collect();
        assert_eq!(ims.len(), 3);
        assert!((ims[0] + 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(ims[1], 0.0);
        assert!((ims[2] - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(s.kernel_dim, 1);
    }

    #[test]
    fn constrained_kernel_size_three() {
        let ops = build_operators(2).unwrap();
        let s = compute_spectrum(&ops, Regime::Constrained).unwrap();
        assert_eq!(s.kernel_dim, 2);
        assert_eq!(
            s.kernel_basis,
            vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]]
        );
        for v in &s.kernel_basis {
            assert!(sup(&residual(&ops, Regime::Constrained, v)) <= 1e-12);
        }
    }

    #[test]
    fn jordan_chain_size_four() {
        let ops = build_operators(3).unwrap();
        let s = compute_spectrum(&ops, Regime::Constrained).unwrap();
        assert_eq!(s.kernel_dim, 1);
        let chain = s.jordan_chain.unwrap();
        assert_eq!(chain.lead, vec![2.0, 0.0, 2.0, 0.0]);
        let r = residual(&ops, Regime::Constrained, &chain.lead);
        let diff: Vec<f64> = r.iter().zip(&chain.eigvec).map(|(a, b)| a - b).collect();
        assert!(sup(&diff) <= 1e-12);
    }

    #[test]
    fn eigenvalues_are_roots_of_charpoly() {
        for m in 1..12 {
            let ops = build_operators(m).unwrap();
            let s = compute_spectrum(&ops, Regime::Unconstrained).unwrap();
            let p = crate::spectral::charpoly_binomial(m).unwrap();
            for lam in s.values() {
                // relative to the size of the leading term
                let scale = 1.0 + lam.norm().powi(m as i32 + 1);
                assert!(p.eval_complex(lam).norm() / scale < 1e-9, "m={m} λ={lam}");
            }
        }
    }

    #[test]
    fn multiplicities_add_up_and_pair() {
        for m in 1..30 {
            let ops = build_operators(m).unwrap();
            for regime in [Regime::Unconstrained, Regime::Constrained] {
                let s = compute_spectrum(&ops, regime).unwrap();
                assert_eq!(s.total_multiplicity(), m + 1);
                assert!(s.is_conjugate_paired());
                assert_eq!(s.max_abs_real(), 0.0);
            }
        }
    }

    #[test]
    fn schur_moduli_agree_with_structured_route() {
        for m in [4usize, 9, 20] {
            let ops = build_operators(m).unwrap();
            let s = compute_spectrum(&ops, Regime::Constrained).unwrap();
            let mut a: Vec<f64> = s.values().iter().map(|z| z.im).collect();
            let mut b: Vec<f64> = schur_eigenvalues(&ops.constrained_matrix())
                .iter()
                .map(|z| z.im)
                .collect();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            b.sort_by(|x, y| x.partial_cmp(y).unwrap());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-6 * s.spectral_radius.max(1.0));
            }
        }
    }
}
