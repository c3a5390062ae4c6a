//! Real-coefficient polynomials stored in ascending powers.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Drop trailing (highest-power) zero coefficients. Keeps at least one entry.
pub fn trim(coeffs: &mut Vec<f64>) {
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(0.0);
    }
}

pub fn degree(coeffs: &[f64]) -> usize {
    coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
}

/// Horner evaluation at a complex point.
pub fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// `(c0 + c1 x)^n` expanded.
pub fn binomial_power(c0: f64, c1: f64, n: usize) -> Vec<f64> {
    (0..n).fold(vec![1.0], |acc, _| mul(&acc, &[c0, c1]))
}

/// Roots via eigenvalues of the companion matrix.
///
/// Each root is accepted only if `|P(z)| < 1e-8 * sum_k |c_k| |z|^k`,
/// a backward-error bound that stays meaningful for roots far from the
/// unit circle.
pub fn roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = degree(coeffs);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    // Row 0 holds -c_{n-1}/c_n .. -c_0/c_n; ones on the subdiagonal.
    let companion = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i == 0 {
            -coeffs[n - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let found: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
    if found.len() != n || found.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::RootFinding {
            degree: n,
            residual: f64::NAN,
        });
    }
    for z in &found {
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * libm::pow(z.norm(), k as f64))
            .sum();
        let residual = eval(coeffs, *z).norm() / scale;
        if !(residual < 1e-8) {
            return Err(Error::RootFinding {
                degree: n,
                residual,
            });
        }
    }
    Ok(found)
}
