//! Dense real polynomials in ascending-coefficient form and their roots.

use nalgebra::{Complex, DMatrix};

/// `c[0] + c[1] x + ... + c[n] x^n`, evaluated by Horner's rule.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Value and first derivative at `x`.
pub fn eval_with_derivative(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
        .collect()
}

/// Drops trailing coefficients that are exactly zero.
pub fn trim(mut coeffs: Vec<f64>) -> Vec<f64> {
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    coeffs
}

/// All complex roots, from the eigenvalues of the companion matrix.
pub fn roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let coeffs = trim(coeffs.to_vec());
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let mut companion = DMatrix::<f64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / lead;
    }
    companion.complex_eigenvalues().iter().copied().collect()
}

/// Roots split into real (imaginary part within `imag_tol` relative to the
/// root modulus) and genuinely complex ones. Real roots are Newton-polished
/// on the polynomial itself and returned ascending.
pub fn split_roots(coeffs: &[f64], imag_tol: f64) -> (Vec<f64>, Vec<Complex<f64>>) {
    let mut real = Vec::new();
    let mut complex = Vec::new();
    for z in roots(coeffs) {
        if z.im.abs() <= imag_tol * z.norm().max(1.0) {
            real.push(newton_polish(|x| eval_with_derivative(coeffs, x), z.re, 8));
        } else {
            complex.push(z);
        }
    }
    real.sort_by(f64::total_cmp);
    (real, complex)
}

/// Newton iterations that stop as soon as a step fails to reduce |f|.
pub fn newton_polish<F>(f: F, mut x: f64, max_iter: usize) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let (mut fx, mut dfx) = f(x);
    for _ in 0..max_iter {
        if fx == 0.0 || dfx == 0.0 || !dfx.is_finite() {
            break;
        }
        let candidate = x - fx / dfx;
        let (fc, dfc) = f(candidate);
        if fc.abs() >= fx.abs() {
            break;
        }
        x = candidate;
        fx = fc;
        dfx = dfc;
    }
    x
}
