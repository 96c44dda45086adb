//! The correlated two-electron singlet ground state for an infinitely heavy
//! nucleus, built from the node-less `N = 1`, `l_r = 0` solution:
//!
//! ```text
//! Ψ(r₁, r₂) = 𝒩/(2π^{5/4}(bd)^{3/2}) (1 + r₁₂²/2d²)(1 − v₁ r₁₂²/2d²) e^{−(r₁² + r₂²)/2b²}
//! ```
//!
//! Only even powers of `r₁₂` appear, so there is no coalescence cusp. The
//! one-body density `ρ(r₁) = 2∫|Ψ|² d³r₂` has a closed form, a polynomial in
//! `y² = (r₁/d)²` times `e^{−r₁²/b²}`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::atom::{
    self, assemble_total_energy, norm, quantized_energy, AtomParameters, AtomShape, NucleusMass,
    PolynomialSolution, Vec3,
};
use crate::error::{Error, Result};
use crate::oracle;
use crate::poly;

/// Allowed disagreement between the moment and quadrature routes to `𝒩`.
pub const NORMALIZATION_CROSSCHECK_TOL: f64 = 1e-10;
pub const DEFAULT_PROFILE_POINTS: usize = 400;
/// Profile extent in units of `b`.
pub const DEFAULT_PROFILE_EXTENT: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundState {
    pub atom: AtomParameters,
    pub v1: f64,
    pub g_root: f64,
    pub normalization: f64,
    pub energy_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub normalization: f64,
}

impl DensityProfile {
    /// Index of the largest sample.
    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

/// `radii` evenly spaced on `[0, extent]`, endpoints included.
pub fn uniform_radii(extent: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| extent * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Coefficients, ascending in `t = y²`, of the bracket multiplying
/// `𝒩² e^{−r₁²/b²} (b/d)^{11} / (512π b³)` in the density.
fn density_bracket(q: f64, v1: f64) -> Vec<f64> {
    let q2 = q * q;
    let q4 = q2 * q2;
    let q6 = q4 * q2;
    let q8 = q4 * q4;
    let f1 = [
        12.0 * (1.0 - v1),
        10.0 * (1.0 + v1 * (v1 - 4.0)),
        21.0 * v1 * (v1 - 1.0),
        9.0 * v1 * v1,
    ];
    let f2 = [
        10.0 + v1 * 10.0 * (v1 - 4.0),
        v1 * 70.0 * (v1 - 1.0),
        v1 * 63.0 * v1,
    ];
    let pair = poly::mul(&[2.0, 1.0], &[-2.0, v1]);
    let squared = poly::mul(&pair, &pair);

    let mut out = vec![0.0; 5];
    out[0] += 945.0 * v1 * v1;
    for (k, c) in f1.iter().enumerate() {
        out[k] += 32.0 * q6 * c;
    }
    for (k, c) in f2.iter().enumerate() {
        out[k] += 24.0 * q4 * c;
    }
    for (k, c) in squared.iter().enumerate() {
        out[k] += 16.0 * q8 * c;
    }
    out[0] += 840.0 * v1 * q2 * (v1 - 1.0);
    out[1] += 840.0 * v1 * q2 * 3.0 * v1;
    out
}

/// `∫₀^∞ y^{2k+2} e^{−q² y²} dy = Γ(k + 3/2) / (2 q^{2k+3})`
fn gaussian_moment(k: usize, q: f64) -> f64 {
    // Γ(k + 3/2) = √π/2 · 3/2 · 5/2 ⋯ (k + 1/2)
    let gamma = (1..=k).fold(PI.sqrt() / 2.0, |acc, j| acc * (j as f64 + 0.5));
    gamma / (2.0 * q.powi(2 * k as i32 + 3))
}

fn density_from_parts(shape: &AtomShape, v1: f64, normalization: f64, r1: f64) -> f64 {
    let (b, d) = (shape.b, shape.d);
    let q = d / b;
    let y = r1 / d;
    let bracket = poly::eval(&density_bracket(q, v1), y * y);
    normalization * normalization / b.powi(3) * (-r1 * r1 / (b * b)).exp() / (512.0 * PI)
        * q.powi(-11)
        * bracket
}

/// `𝒩 > 0` with `∫ρ d³r = 2`, from Gaussian moments of the closed-form
/// density and checked against adaptive quadrature of the same density.
pub fn normalization_constant(shape: &AtomShape, v1: f64) -> Result<f64> {
    let q = shape.d_over_b();
    let moments: f64 = density_bracket(q, v1)
        .iter()
        .enumerate()
        .map(|(k, c)| c * gaussian_moment(k, q))
        .sum();
    // ∫ρ d³r = 𝒩² q³ Σ c_k M_k / (128 q^{11})
    let n2 = 256.0 * q.powi(8) / moments;
    if !(n2 > 0.0 && n2.is_finite()) {
        return Err(Error::Internal(format!(
            "density moment sum {moments} gives no positive normalization"
        )));
    }
    let closed = n2.sqrt();

    let total = oracle::integrate(
        |r| 4.0 * PI * r * r * density_from_parts(shape, v1, closed, r),
        0.0,
        f64::INFINITY,
        0.0,
        1e-13,
    )?;
    if (total - 2.0).abs() > NORMALIZATION_CROSSCHECK_TOL * 2.0 {
        return Err(Error::Internal(format!(
            "closed-form normalization integrates to {total}, not 2"
        )));
    }
    Ok(closed)
}

impl GroundState {
    /// Solves the `N = 1`, `l_r = 0` class and keeps the node-less root.
    pub fn new(shape: &AtomShape) -> Result<Self> {
        let solutions = atom::solve_class(1, 0, shape)?;
        let sol = solutions
            .iter()
            .find(|s| s.n_r() == 0)
            .ok_or_else(|| Error::Internal("no node-less N = 1 solution".into()))?;
        Self::from_solution(sol)
    }

    pub fn from_solution(sol: &PolynomialSolution) -> Result<Self> {
        if sol.class() != 1 || sol.l_r() != 0 || sol.n_r() != 0 {
            return Err(Error::InvalidParameter(format!(
                "ground state needs the node-less N = 1, l_r = 0 solution, got N = {}, l_r = {}, n_r = {}",
                sol.class(),
                sol.l_r(),
                sol.n_r()
            )));
        }
        let shape = sol.atom().shape();
        let v1 = sol.v()[0];
        let normalization = normalization_constant(&shape, v1)?;
        let energy_total = assemble_total_energy(
            [0.0; 3],
            NucleusMass::Infinite,
            shape.b,
            0,
            0,
            quantized_energy(1, 0, shape.b),
        );
        Ok(Self {
            atom: *sol.atom(),
            v1,
            g_root: sol.g_root(),
            normalization,
            energy_total,
        })
    }

    pub fn shape(&self) -> AtomShape {
        self.atom.shape()
    }

    /// Same state with `𝒩` multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            normalization: self.normalization * factor,
            ..*self
        }
    }

    fn prefactor(&self) -> f64 {
        let (b, d) = (self.atom.b, self.atom.d);
        self.normalization / (2.0 * PI.powf(1.25) * (b * d).powf(1.5))
    }

    /// `(1 + x²/2d²)(1 − v₁x²/2d²)` and its derivative in `x = r₁₂`.
    fn pair_factor(&self, r12: f64) -> (f64, f64) {
        let d2 = self.atom.d * self.atom.d;
        let a = 1.0 + r12 * r12 / (2.0 * d2);
        let c = 1.0 - self.v1 * r12 * r12 / (2.0 * d2);
        let da = r12 / d2;
        let dc = -self.v1 * r12 / d2;
        (a * c, da * c + a * dc)
    }

    pub fn wavefunction(&self, r1: Vec3, r2: Vec3) -> f64 {
        let b2 = self.atom.b * self.atom.b;
        let diff = [r1[0] - r2[0], r1[1] - r2[1], r1[2] - r2[2]];
        let (pair, _) = self.pair_factor(norm(diff));
        let radial = norm(r1).powi(2) + norm(r2).powi(2);
        self.prefactor() * pair * (-radial / (2.0 * b2)).exp()
    }

    /// `Ψ` with the electron midpoint at `center`, separated by `r12` along
    /// the unit vector `direction`.
    pub fn wavefunction_at_separation(&self, center: Vec3, direction: Vec3, r12: f64) -> f64 {
        let half = 0.5 * r12;
        let r1 = [0, 1, 2].map(|i| center[i] + half * direction[i]);
        let r2 = [0, 1, 2].map(|i| center[i] - half * direction[i]);
        self.wavefunction(r1, r2)
    }

    /// `∂Ψ/∂r₁₂` at coalescence with the electron midpoint held at the
    /// origin, from the analytic derivative of the pair factor.
    pub fn cusp_derivative(&self) -> f64 {
        let (_, slope) = self.pair_factor(0.0);
        // at r₁₂ = 0 the Gaussian factor is 1 and has zero slope
        self.prefactor() * slope
    }

    /// Closed-form one-body density at distance `r1` from the nucleus.
    pub fn density(&self, r1: f64) -> f64 {
        density_from_parts(&self.shape(), self.v1, self.normalization, r1)
    }

    /// `2∫|Ψ|² d³r₂` by nested quadrature over `r₂` and the angle between
    /// the electrons.
    pub fn density_numeric(&self, r1: f64, rel_tol: f64) -> Result<f64> {
        pair_integral(r1, rel_tol, |a, b| self.wavefunction(a, b).powi(2))
    }

    pub fn density_profile(&self, radii: &[f64]) -> DensityProfile {
        DensityProfile {
            radii: radii.to_vec(),
            values: radii.iter().map(|&r| self.density(r)).collect(),
            normalization: self.normalization,
        }
    }

    pub fn default_profile(&self) -> DensityProfile {
        self.density_profile(&uniform_radii(
            DEFAULT_PROFILE_EXTENT * self.atom.b,
            DEFAULT_PROFILE_POINTS,
        ))
    }

    /// Location and value of the density maximum on `[0, 6b]`.
    pub fn density_maximum(&self) -> (f64, f64) {
        let extent = DEFAULT_PROFILE_EXTENT * self.atom.b;
        let radii = uniform_radii(extent, 601);
        let profile = self.density_profile(&radii);
        let i = profile.argmax();
        let step = radii[1] - radii[0];
        let mut lo = (radii[i] - step).max(0.0);
        let mut hi = (radii[i] + step).min(extent);
        let golden = 0.5 * (5.0_f64.sqrt() - 1.0);
        for _ in 0..100 {
            let m1 = hi - golden * (hi - lo);
            let m2 = lo + golden * (hi - lo);
            if self.density(m1) < self.density(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let r = 0.5 * (lo + hi);
        (r, self.density(r))
    }
}

/// One-sided second-order difference `(−3f(0) + 4f(h) − f(2h))/(2h)`, the
/// slope at a coalescence point where only `r₁₂ ≥ 0` is meaningful.
pub fn coalescence_slope<F: Fn(f64) -> f64>(f: F, h: f64) -> f64 {
    (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h)
}

/// `2∫ w(r₁, r₂) d³r₂` with `r₁` on the x axis and `w` a pair weight that
/// depends on `r₂` only through `|r₂|` and the angle to `r₁`.
fn pair_integral<W>(r1: f64, rel_tol: f64, weight: W) -> Result<f64>
where
    W: Fn(Vec3, Vec3) -> f64,
{
    let a = [r1, 0.0, 0.0];
    let radial = |r2: f64| -> f64 {
        let angular = oracle::integrate(
            |c: f64| {
                let s = (1.0 - c * c).max(0.0).sqrt();
                weight(a, [r2 * c, r2 * s, 0.0])
            },
            -1.0,
            1.0,
            0.0,
            0.1 * rel_tol,
        )
        .unwrap_or(f64::NAN);
        2.0 * PI * r2 * r2 * angular
    };
    let value = oracle::integrate(radial, 0.0, f64::INFINITY, 0.0, rel_tol)?;
    if !value.is_finite() {
        return Err(Error::Quadrature(format!(
            "angular integral failed at r1 = {r1}"
        )));
    }
    Ok(2.0 * value)
}

/// One-body density of an arbitrary exact relative state, with the
/// pseudorelative motion in its ground state and the relative state averaged
/// over `m_r`; computed only numerically.
pub fn numeric_density(sol: &PolynomialSolution, r1: f64, rel_tol: f64) -> Result<f64> {
    let b = sol.atom().b;
    let s2 = std::f64::consts::SQRT_2;
    let oscillator = (PI * b * b).powf(-1.5);
    pair_integral(r1, rel_tol, |x1, x2| {
        let s = norm([0, 1, 2].map(|i| (x1[i] + x2[i]) / s2));
        let r = norm([0, 1, 2].map(|i| (x1[i] - x2[i]) / s2));
        let radial = sol.radial(r);
        oscillator * (-s * s / (b * b)).exp() * radial * radial / (4.0 * PI)
    })
}
