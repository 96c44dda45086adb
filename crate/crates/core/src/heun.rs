//! Confluent Heun function by power series.
//!
//! The equation is taken in the form
//!
//! ```text
//! f'' + (α + (β+1)/ξ + (γ+1)/(ξ-1)) f' + (μ/ξ + ν/(ξ-1)) f = 0
//! ```
//!
//! with the regular solution at the origin normalized to `f(0) = 1`. Its
//! Taylor coefficients obey the three-term recurrence
//! `A_n v_n = B_n v_{n-1} + C_n v_{n-2}`, `v_{-1} = 0`, `v_0 = 1`.
//!
//! The series converges for `|ξ| < 1`. When `C_{N+2}` vanishes and
//! `v_{N+1}` does too, every later coefficient is zero and the function is a
//! polynomial of degree `N`, valid for every real `ξ`.

use crate::error::{Error, Result};

/// Default relative tail tolerance for [`evaluate`].
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;
/// Default relative threshold for deciding that a series has terminated.
pub const TERMINATION_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_TERMS: usize = 100_000;

/// The five parameters `(α, β, γ, δ, η)` of the confluent Heun equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunParameters {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
}

impl HeunParameters {
    /// `β > -1` keeps every `A_n = 1 + β/n` away from zero.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, eta: f64) -> Result<Self> {
        if ![alpha, beta, gamma, delta, eta].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter(
                "Heun parameters must be finite".into(),
            ));
        }
        if beta <= -1.0 {
            return Err(Error::InvalidParameter(format!(
                "beta = {beta} must exceed -1"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
            eta,
        })
    }

    /// `μ = (α − β − γ + αβ − βγ)/2 − η`
    pub fn mu(&self) -> f64 {
        let Self {
            alpha: a,
            beta: b,
            gamma: g,
            eta,
            ..
        } = *self;
        0.5 * (a - b - g + a * b - b * g) - eta
    }

    /// `ν = (α + β + γ + αγ + βγ)/2 + δ + η`
    pub fn nu(&self) -> f64 {
        let Self {
            alpha: a,
            beta: b,
            gamma: g,
            delta,
            eta,
        } = *self;
        0.5 * (a + b + g + a * g + b * g) + delta + eta
    }

    /// Numerator of `C_n` scaled by `n²`: `δ + α((β+γ)/2 + n − 1)`.
    fn c_numerator(&self, n: f64) -> f64 {
        self.delta + self.alpha * (0.5 * (self.beta + self.gamma) + n - 1.0)
    }

    /// The degree `N` singled out by `δ/α + (β+γ)/2 + N + 1 = 0`, when it is
    /// a nonnegative integer to within `tol`.
    pub fn candidate_degree(&self, tol: f64) -> Option<usize> {
        if self.alpha == 0.0 {
            return None;
        }
        let n = -self.delta / self.alpha - 0.5 * (self.beta + self.gamma) - 1.0;
        let rounded = n.round();
        if rounded < 0.0 || (n - rounded).abs() > tol * rounded.max(1.0) {
            return None;
        }
        Some(rounded as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `(A_n, B_n, C_n)` of the three-term recurrence, for `n ≥ 1`.
pub fn recurrence_coefficients(params: &HeunParameters, n: usize) -> RecurrenceCoefficients {
    assert!(n >= 1, "recurrence index starts at 1");
    let HeunParameters {
        alpha,
        beta,
        gamma,
        eta,
        ..
    } = *params;
    let nf = n as f64;
    let n2 = nf * nf;
    let a = 1.0 + beta / nf;
    let b = 1.0 + (beta + gamma - alpha - 1.0) / nf + eta / n2
        - (beta + gamma - alpha + alpha * beta - beta * gamma) / (2.0 * n2);
    let c = params.c_numerator(nf) / n2;
    RecurrenceCoefficients { a, b, c }
}

/// Taylor coefficients `v_0 … v_n` of the regular solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients {
    values: Vec<f64>,
    params: HeunParameters,
}

impl SeriesCoefficients {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn params(&self) -> &HeunParameters {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Forward recurrence up to and including `v_{n_max}`.
pub fn series_coefficients(params: &HeunParameters, n_max: usize) -> Result<SeriesCoefficients> {
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(1.0);
    let (mut prev2, mut prev1) = (0.0, 1.0);
    for n in 1..=n_max {
        let rc = recurrence_coefficients(params, n);
        if rc.a == 0.0 {
            return Err(Error::RecurrenceBreakdown { n });
        }
        let v = (rc.b * prev1 + rc.c * prev2) / rc.a;
        values.push(v);
        prev2 = prev1;
        prev1 = v;
    }
    Ok(SeriesCoefficients {
        values,
        params: *params,
    })
}

/// Degree `N` of the polynomial the series reduces to, if it terminates.
///
/// Both conditions are checked: `C_{N+2} = 0` (so nothing feeds `v_{N+2}`
/// and beyond except `v_{N+1}`) and `|v_{N+1}| ≤ tol · max |v_0..v_N|`.
/// The coefficient list must reach at least `v_{N+2}`.
pub fn termination_degree(coeffs: &SeriesCoefficients, tol: f64) -> Option<usize> {
    let params = &coeffs.params;
    let degree = params.candidate_degree(tol)?;
    let values = &coeffs.values;
    if values.len() < degree + 3 {
        return None;
    }
    let scale = values[..=degree]
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if values[degree + 1].abs() > tol * scale {
        return None;
    }
    Some(degree)
}

/// Result of a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunValue {
    pub value: f64,
    pub converged: bool,
    /// Number of series terms summed.
    pub terms: usize,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Polynomial coefficients `v_0..v_N` when the series terminates.
pub fn terminated_polynomial(params: &HeunParameters, tol: f64) -> Result<Option<Vec<f64>>> {
    let Some(degree) = params.candidate_degree(tol) else {
        return Ok(None);
    };
    let coeffs = series_coefficients(params, degree + 2)?;
    Ok(termination_degree(&coeffs, tol).map(|n| coeffs.values[..=n].to_vec()))
}

/// Sums the power series at `xi`.
///
/// Terminated series are evaluated as the exact polynomial for any real
/// `xi`. Otherwise `|xi| < 1` is required, and summation stops once two
/// consecutive terms, scaled by the geometric tail factor `1/(1 − |xi|)`,
/// fall below `tol` relative to the running sum.
pub fn evaluate(params: &HeunParameters, xi: f64, tol: f64, max_terms: usize) -> Result<HeunValue> {
    if !xi.is_finite() {
        return Err(Error::Domain(format!("xi = {xi} is not finite")));
    }
    if let Some(poly) = terminated_polynomial(params, TERMINATION_TOL)? {
        let mut acc = CompensatedSum::default();
        let mut power = 1.0;
        for v in &poly {
            acc.add(v * power);
            power *= xi;
        }
        return Ok(HeunValue {
            value: acc.value(),
            converged: true,
            terms: poly.len(),
        });
    }
    if xi.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "|xi| = {} is outside the disc of convergence and the series does not terminate",
            xi.abs()
        )));
    }

    let tail_factor = 1.0 / (1.0 - xi.abs());
    let mut acc = CompensatedSum::default();
    acc.add(1.0);
    let (mut prev2, mut prev1) = (0.0, 1.0);
    let mut power = 1.0;
    let mut small_streak = 0;
    for n in 1..max_terms.max(1) {
        let rc = recurrence_coefficients(params, n);
        if rc.a == 0.0 {
            return Err(Error::RecurrenceBreakdown { n });
        }
        let v = (rc.b * prev1 + rc.c * prev2) / rc.a;
        prev2 = prev1;
        prev1 = v;
        power *= xi;
        let term = v * power;
        acc.add(term);
        if term.abs() * tail_factor <= tol * acc.value().abs() {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(HeunValue {
                    value: acc.value(),
                    converged: true,
                    terms: n + 1,
                });
            }
        } else {
            small_streak = 0;
        }
    }
    Ok(HeunValue {
        value: acc.value(),
        converged: false,
        terms: max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // b = d = 1, l_r = 0, E_r = 11/2: α = 1, β = 1/2, γ = 1, δ = −11/4,
    // η = 1/2 + (11 − g)/4.
    fn reference(g: f64) -> HeunParameters {
        HeunParameters::new(1.0, 0.5, 1.0, -11.0 / 4.0, 0.5 + (11.0 - g) / 4.0).unwrap()
    }

    #[test]
    fn first_recurrence_coefficients() {
        let rc = recurrence_coefficients(&reference(26.0), 1);
        assert_eq!(rc.a, 1.5);
        assert!((rc.b + 3.0).abs() < 1e-15);
        assert_eq!(rc.b / rc.a, -2.0);
    }

    #[test]
    fn v1_for_both_couplings() {
        let c26 = series_coefficients(&reference(26.0), 1).unwrap();
        assert!((c26.values()[1] + 2.0).abs() < 1e-12);
        let c12 = series_coefficients(&reference(12.0), 1).unwrap();
        assert!((c12.values()[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zeroth_order_only() {
        let c = series_coefficients(&reference(20.0), 0).unwrap();
        assert_eq!(c.values(), &[1.0]);
    }

    #[test]
    fn terminated_coefficients_vanish() {
        let c = series_coefficients(&reference(26.0), 3).unwrap();
        let v = c.values();
        assert_eq!(v[0], 1.0);
        assert!((v[1] + 2.0).abs() < 1e-14);
        assert!(v[2].abs() < 1e-14 && v[3].abs() < 1e-14, "{v:?}");
    }

    #[test]
    fn termination_detected_at_roots_only() {
        for g in [26.0, 12.0] {
            let c = series_coefficients(&reference(g), 3).unwrap();
            assert_eq!(termination_degree(&c, TERMINATION_TOL), Some(1));
        }
        let c = series_coefficients(&reference(20.0), 3).unwrap();
        assert_eq!(termination_degree(&c, TERMINATION_TOL), None);
    }

    #[test]
    fn termination_needs_enough_coefficients() {
        let c = series_coefficients(&reference(26.0), 2).unwrap();
        assert_eq!(termination_degree(&c, TERMINATION_TOL), None);
    }

    #[test]
    fn mu_nu_conversion() {
        let p = reference(26.0);
        assert!((p.mu() - 3.0).abs() < 1e-14);
        assert!((p.nu() + 4.0).abs() < 1e-14);
    }

    #[test]
    fn evaluate_at_origin() {
        let v = evaluate(&reference(20.0), 0.0, DEFAULT_SERIES_TOL, 100).unwrap();
        assert_eq!(v.value, 1.0);
        assert!(v.converged);
    }

    #[test]
    fn polynomial_evaluates_outside_unit_disc() {
        let v = evaluate(&reference(26.0), -1.0, DEFAULT_SERIES_TOL, 100).unwrap();
        assert!((v.value - 3.0).abs() < 1e-14);
        let far = evaluate(&reference(26.0), -7.5, DEFAULT_SERIES_TOL, 100).unwrap();
        assert!((far.value - 16.0).abs() < 1e-13);
    }

    #[test]
    fn nonterminating_outside_disc_is_an_error() {
        let err = evaluate(&reference(20.0), 1.0, DEFAULT_SERIES_TOL, 100).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn max_terms_reported() {
        let v = evaluate(&reference(20.0), 0.95, DEFAULT_SERIES_TOL, 5).unwrap();
        assert!(!v.converged);
    }

    #[test]
    fn beta_below_minus_one_rejected() {
        assert!(HeunParameters::new(1.0, -1.0, 1.0, 0.0, 0.0).is_err());
        assert!(HeunParameters::new(f64::NAN, 0.5, 1.0, 0.0, 0.0).is_err());
    }
}
