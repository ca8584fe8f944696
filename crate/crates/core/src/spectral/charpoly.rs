//! Exact characteristic polynomials `det(L − λI)` of the selection-gradient
//! matrix, by three independent routes: a division-free determinant
//! expansion of the integer matrix, the closed binomial form, and the
//! first-column recurrence.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest matrix size `M + 1` for which the direct expansion is offered.
pub const EXACT_SIZE_LIMIT: usize = 24;

/// Integer coefficients of `det(L − λI)`, ascending powers of `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    coefficients: Vec<BigInt>,
    size: usize,
}

impl CharPoly {
    fn new(mut coefficients: Vec<BigInt>, size: usize) -> Self {
        coefficients.resize(size + 1, BigInt::zero());
        Self { coefficients, size }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Matrix size `n + 1 = M + 1`; also the polynomial degree.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * lambda + to_f64(c))
    }

    pub fn eval_complex(&self, lambda: num_complex::Complex64) -> num_complex::Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| {
                acc * lambda + to_f64(c)
            })
    }
}

fn to_f64(c: &BigInt) -> f64 {
    // exact for every coefficient at desk sizes; fall back through the string form otherwise
    i64::try_from(c)
        .map(|v| v as f64)
        .unwrap_or_else(|_| c.to_string().parse().unwrap_or(f64::NAN))
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (power, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = magnitude.is_one();
            match power {
                0 => write!(f, "{magnitude}")?,
                1 if unit => write!(f, "λ")?,
                1 => write!(f, "{magnitude}λ")?,
                _ if unit => write!(f, "λ^{power}")?,
                _ => write!(f, "{magnitude}λ^{power}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn check_order(order: usize) -> Result<usize> {
    if order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    Ok(order + 1)
}

/// Integer entries of `L` for size `n`.
fn l_entry(i: usize, j: usize) -> i64 {
    match i.cmp(&j) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
    }
}

/// Division-free (Berkowitz) expansion of `det(L − λI)` over the integers.
pub fn charpoly_direct(order: usize) -> Result<CharPoly> {
    let n = check_order(order)?;
    if n > EXACT_SIZE_LIMIT {
        return Err(Error::ExactArithmeticBudget {
            size: n,
            max: EXACT_SIZE_LIMIT,
        });
    }
    let a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(l_entry(i, j))).collect())
        .collect();
    let monic = berkowitz(&a);
    // det(A − λI) = (−1)^n det(λI − A); `monic` holds descending powers
    let sign = if n % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let ascending = monic.into_iter().rev().map(|c| &sign * c).collect();
    Ok(CharPoly::new(ascending, n))
}

/// Coefficients of `det(λI − A)` in descending powers, using only ring operations.
pub fn berkowitz(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut poly = vec![BigInt::one()];
    for k in 0..n {
        // leading block A_k (k×k), column c = A[0..k][k], row r = A[k][0..k]
        let col: Vec<BigInt> = (0..k).map(|i| a[i][k].clone()).collect();
        let row: Vec<BigInt> = (0..k).map(|j| a[k][j].clone()).collect();
        let mut toeplitz = Vec::with_capacity(k + 2);
        toeplitz.push(BigInt::one());
        toeplitz.push(-a[k][k].clone());
        // −r A_k^j c for j = 0..k−1
        let mut power_c = col;
        for _ in 0..k {
            let rc: BigInt = row.iter().zip(&power_c).map(|(r, c)| r * c).sum();
            toeplitz.push(-rc);
            power_c = (0..k)
                .map(|i| (0..k).map(|j| &a[i][j] * &power_c[j]).sum())
                .collect();
        }
        let next: Vec<BigInt> = (0..=k + 1)
            .map(|i| (0..=i.min(k)).map(|j| &toeplitz[i - j] * &poly[j]).sum())
            .collect();
        poly = next;
    }
    poly
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Closed form: `Σ_k C(n+1, 2k) λ^{2k}` for even size, `−λ Σ_k C(n+1, 2k+1) λ^{2k}` for odd size.
pub fn charpoly_binomial(order: usize) -> Result<CharPoly> {
    let n = check_order(order)?;
    let mut coefficients = vec![BigInt::zero(); n + 1];
    if n % 2 == 0 {
        for k in 0..=n / 2 {
            coefficients[2 * k] = binomial(n, 2 * k);
        }
    } else {
        for k in 0..=(n - 1) / 2 {
            coefficients[2 * k + 1] = -binomial(n, 2 * k + 1);
        }
    }
    Ok(CharPoly::new(coefficients, n))
}

/// `p_{n+1}(λ) = (−1 − λ) p_n(λ) + (−1)^{n+2} (λ − 1)^n`, starting from `p_1 = −λ`.
pub fn charpoly_recurrence(order: usize) -> Result<CharPoly> {
    let size = check_order(order)?;
    let mut p = vec![BigInt::zero(), -BigInt::one()];
    // (λ − 1)^n, ascending
    let mut lam_minus_one_pow = vec![-BigInt::one(), BigInt::one()];
    for n in 1..size {
        let mut next = vec![BigInt::zero(); n + 2];
        for (i, c) in p.iter().enumerate() {
            next[i] -= c;
            next[i + 1] -= c;
        }
        let sign = if n % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        for (i, c) in lam_minus_one_pow.iter().enumerate() {
            next[i] += &sign * c;
        }
        p = next;
        let mut shifted = vec![BigInt::zero(); lam_minus_one_pow.len() + 1];
        for (i, c) in lam_minus_one_pow.iter().enumerate() {
            shifted[i + 1] += c;
            shifted[i] -= c;
        }
        lam_minus_one_pow = shifted;
    }
    Ok(CharPoly::new(p, size))
}
