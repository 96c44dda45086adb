//! The three-body model and its exactly solvable relative motion.
//!
//! Two electrons (mass 1) are bound harmonically to a nucleus of mass `M`
//! with strength `1/b⁴` and repel each other through `g/(r₁₂² + 2d²)`. In
//! Jacobi coordinates the Hamiltonian separates into a free center of mass,
//! an isotropic oscillator in the pseudorelative coordinate `S` and the
//! relative problem
//!
//! ```text
//! H_r = -∇²/2 + r²/(2b⁴) + g/(2(r² + d²))
//! ```
//!
//! whose radial equation reduces to a confluent Heun equation in `ξ = −r²/d²`.
//! At the energies `E_r = (7 + 2l + 4N)/(2b²)` the Heun series can terminate
//! at degree `N`; it does so for exactly `N + 1` couplings `g`, the roots of a
//! tridiagonal determinant.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heun::{self, HeunParameters, SeriesCoefficients};
use crate::oracle;
use crate::poly;

pub type Vec3 = [f64; 3];

/// Relative tolerance for the (μ, ν) cross-check in [`heun_parameters`].
pub const CONVENTION_TOL: f64 = 1e-12;
/// Imaginary parts below this (relative) count as real roots.
pub const COMPLEX_ROOT_TOL: f64 = 1e-9;
const NORMALIZATION_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NucleusMass {
    Finite(f64),
    Infinite,
}

impl NucleusMass {
    /// `1 + 2/M`, exactly 1 for an infinitely heavy nucleus.
    pub fn reduced_factor(&self) -> f64 {
        match *self {
            NucleusMass::Finite(m) => 1.0 + 2.0 / m,
            NucleusMass::Infinite => 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            NucleusMass::Finite(m) if !(m > 0.0 && m.is_finite()) => Err(Error::InvalidParameter(
                format!("nucleus mass must be positive, got {m}"),
            )),
            _ => Ok(()),
        }
    }
}

impl FromStr for NucleusMass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(NucleusMass::Infinite);
        }
        let m: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse mass {s:?}")))?;
        if m.is_infinite() && m > 0.0 {
            return Ok(NucleusMass::Infinite);
        }
        let mass = NucleusMass::Finite(m);
        mass.validate()?;
        Ok(mass)
    }
}

impl fmt::Display for NucleusMass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NucleusMass::Finite(m) => write!(f, "{m}"),
            NucleusMass::Infinite => f.write_str("inf"),
        }
    }
}

/// Confinement and screening lengths, the two lengths that fix where exact
/// solutions exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomShape {
    pub b: f64,
    pub d: f64,
}

impl AtomShape {
    pub fn new(b: f64, d: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite() && d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lengths must be positive and finite, got b = {b}, d = {d}"
            )));
        }
        Ok(Self { b, d })
    }

    pub fn from_ratio(b: f64, d_over_b: f64) -> Result<Self> {
        Self::new(b, d_over_b * b)
    }

    pub fn d_over_b(&self) -> f64 {
        self.d / self.b
    }

    /// `α = d²/b²`
    pub fn alpha(&self) -> f64 {
        let r = self.d_over_b();
        r * r
    }

    /// The atom with coupling `g` and an infinitely heavy nucleus.
    pub fn with_coupling(&self, g: f64) -> AtomParameters {
        AtomParameters {
            b: self.b,
            d: self.d,
            g,
            mass: NucleusMass::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomParameters {
    pub b: f64,
    pub d: f64,
    pub g: f64,
    pub mass: NucleusMass,
}

impl AtomParameters {
    pub fn new(b: f64, d: f64, g: f64, mass: NucleusMass) -> Result<Self> {
        AtomShape::new(b, d)?;
        if !g.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling g = {g}")));
        }
        mass.validate()?;
        Ok(Self { b, d, g, mass })
    }

    pub fn shape(&self) -> AtomShape {
        AtomShape {
            b: self.b,
            d: self.d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    Singlet,
    Triplet,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Singlet => "singlet",
            Symmetry::Triplet => "triplet",
        })
    }
}

/// Even relative angular momentum pairs with the antisymmetric spin singlet.
pub fn classify_symmetry(l_r: usize) -> Symmetry {
    if l_r.is_multiple_of(2) {
        Symmetry::Singlet
    } else {
        Symmetry::Triplet
    }
}

/// The six discrete quantum numbers plus the center-of-mass wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumNumbers {
    pub n_s: usize,
    pub l_s: usize,
    pub m_s: i64,
    pub n_r: usize,
    pub l_r: usize,
    pub m_r: i64,
    pub k: Vec3,
}

impl QuantumNumbers {
    pub fn new(n_s: usize, l_s: usize, m_s: i64, n_r: usize, l_r: usize, m_r: i64, k: Vec3) -> Result<Self> {
        if m_s.unsigned_abs() as usize > l_s || m_r.unsigned_abs() as usize > l_r {
            return Err(Error::InvalidParameter(format!(
                "magnetic quantum numbers out of range: m_s = {m_s} (l_s = {l_s}), m_r = {m_r} (l_r = {l_r})"
            )));
        }
        Ok(Self {
            n_s,
            l_s,
            m_s,
            n_r,
            l_r,
            m_r,
            k,
        })
    }

    pub fn symmetry(&self) -> Symmetry {
        classify_symmetry(self.l_r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiCoordinates {
    pub center_of_mass: Vec3,
    pub pseudo_relative: Vec3,
    pub relative: Vec3,
}

/// `R = (r₁ + r₂ + M r₃)/(2 + M)`, `S = (r₁ + r₂ − 2r₃)/√2`,
/// `r = (r₁ − r₂)/√2`.
pub fn jacobi_transform(r1: Vec3, r2: Vec3, r3: Vec3, mass: NucleusMass) -> JacobiCoordinates {
    let s2 = std::f64::consts::SQRT_2;
    let mut com = [0.0; 3];
    let mut pseudo = [0.0; 3];
    let mut rel = [0.0; 3];
    for i in 0..3 {
        com[i] = match mass {
            NucleusMass::Finite(m) => (r1[i] + r2[i] + m * r3[i]) / (2.0 + m),
            NucleusMass::Infinite => r3[i],
        };
        pseudo[i] = (r1[i] + r2[i] - 2.0 * r3[i]) / s2;
        rel[i] = (r1[i] - r2[i]) / s2;
    }
    JacobiCoordinates {
        center_of_mass: com,
        pseudo_relative: pseudo,
        relative: rel,
    }
}

pub(crate) fn norm(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Electron–electron interaction `g/(r₁₂² + 2d²)`.
pub fn interaction_potential(r12: f64, atom: &AtomParameters) -> f64 {
    atom.g / (r12 * r12 + 2.0 * atom.d * atom.d)
}

/// `r²/(2b⁴) + g/(2(r² + d²))`, the potential of the relative motion.
pub fn relative_potential(r: f64, atom: &AtomParameters) -> f64 {
    let b2 = atom.b * atom.b;
    0.5 * r * r / (b2 * b2) + 0.5 * atom.g / (r * r + atom.d * atom.d)
}

/// `E_r = (7 + 2l + 4N)/(2b²)`, the only energies at which the Heun series
/// can terminate at degree `N`.
pub fn quantized_energy(n: usize, l_r: usize, b: f64) -> f64 {
    (7.0 + 2.0 * l_r as f64 + 4.0 * n as f64) / (2.0 * b * b)
}

/// Heun parameters of the radial equation at energy `e_r`.
///
/// `(μ, ν)` are computed both directly from the atom and through the
/// `(δ, η)` conversion; disagreement is reported as an error.
pub fn heun_parameters(atom: &AtomParameters, l_r: usize, e_r: f64) -> Result<HeunParameters> {
    let (b, d, g) = (atom.b, atom.d, atom.g);
    let l = l_r as f64;
    let k2d2 = 2.0 * e_r * d * d;
    let alpha = d * d / (b * b);
    let params = HeunParameters::new(alpha, 0.5 + l, 1.0, -0.25 * k2d2, 0.5 + 0.25 * (k2d2 - g))?;

    let mu_direct = 0.25 * (g - k2d2) + (l + 1.5) * (0.5 * alpha - 1.0);
    let nu_direct = 1.5 + l + alpha - 0.25 * g;
    let scale = 1.0 + g.abs() + k2d2.abs() + (l + 1.5) * (1.0 + alpha);
    for (which, direct, converted) in [("mu", mu_direct, params.mu()), ("nu", nu_direct, params.nu())] {
        if (direct - converted).abs() > CONVENTION_TOL * scale {
            return Err(Error::ConventionMismatch {
                which,
                direct,
                converted,
            });
        }
    }
    Ok(params)
}

/// `μ` as a function of `g` at the class-`N` energy; affine in `g`.
pub fn mu_for_coupling(n: usize, l_r: usize, shape: &AtomShape, g: f64) -> f64 {
    let k2d2 = 2.0 * quantized_energy(n, l_r, shape.b) * shape.d * shape.d;
    0.25 * (g - k2d2) + (l_r as f64 + 1.5) * (0.5 * shape.alpha() - 1.0)
}

/// Inverse of [`mu_for_coupling`].
pub fn coupling_for_mu(n: usize, l_r: usize, shape: &AtomShape, mu: f64) -> f64 {
    let k2d2 = 2.0 * quantized_energy(n, l_r, shape.b) * shape.d * shape.d;
    4.0 * (mu - (l_r as f64 + 1.5) * (0.5 * shape.alpha() - 1.0)) + k2d2
}

/// Row `k` of the termination matrix with `μ` removed from the diagonal:
/// `(sub, diag, super)`.
fn termination_entries(n: usize, l_r: usize, alpha: f64, k: usize) -> (f64, f64, f64) {
    let kf = k as f64;
    let l = l_r as f64;
    let diag = kf * alpha - kf * (kf + l + 2.5);
    let sup = (kf + 1.0) * (kf + 1.5 + l);
    let sub = (n + 1 - k) as f64 * alpha;
    (sub, diag, sup)
}

/// The `(N+1)×(N+1)` tridiagonal matrix whose determinant must vanish for
/// the series to terminate at degree `N`.
///
/// Row `k`: diagonal `kα + μ − k(k + l + 5/2)`, superdiagonal
/// `(k+1)(k + 3/2 + l)`, subdiagonal `(N + 1 − k)α`, with `α = (d/b)²`.
pub fn termination_matrix(n: usize, l_r: usize, d_over_b: f64, mu: f64) -> DMatrix<f64> {
    let alpha = d_over_b * d_over_b;
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        let (sub, diag, sup) = termination_entries(n, l_r, alpha, k);
        m[(k, k)] = diag + mu;
        if k < n {
            m[(k, k + 1)] = sup;
        }
        if k > 0 {
            m[(k, k - 1)] = sub;
        }
    }
    m
}

/// Determinant of [`termination_matrix`] and its `μ`-derivative by the
/// continuant recurrence `D_k = a_k D_{k−1} − c_k b_{k−1} D_{k−2}`.
pub fn termination_determinant(n: usize, l_r: usize, d_over_b: f64, mu: f64) -> (f64, f64) {
    let alpha = d_over_b * d_over_b;
    let (mut d_prev2, mut d_prev1) = (0.0, 1.0);
    let (mut dd_prev2, mut dd_prev1) = (0.0, 0.0);
    let mut sup_prev = 0.0;
    for k in 0..=n {
        let (sub, diag, sup) = termination_entries(n, l_r, alpha, k);
        let a = diag + mu;
        let coupling = if k > 0 { sub * sup_prev } else { 0.0 };
        let dk = a * d_prev1 - coupling * d_prev2;
        let ddk = d_prev1 + a * dd_prev1 - coupling * dd_prev2;
        d_prev2 = d_prev1;
        d_prev1 = dk;
        dd_prev2 = dd_prev1;
        dd_prev1 = ddk;
        sup_prev = sup;
    }
    (d_prev1, dd_prev1)
}

/// Coefficients (ascending in `μ`) of `det Δ_{N+1}(μ)`, a monic polynomial
/// of degree `N + 1`.
pub fn termination_polynomial(n: usize, l_r: usize, d_over_b: f64) -> Vec<f64> {
    let alpha = d_over_b * d_over_b;
    let mut p_prev2: Vec<f64> = vec![0.0];
    let mut p_prev1: Vec<f64> = vec![1.0];
    let mut sup_prev = 0.0;
    for k in 0..=n {
        let (sub, diag, sup) = termination_entries(n, l_r, alpha, k);
        let linear = [diag, 1.0];
        let coupling = if k > 0 { sub * sup_prev } else { 0.0 };
        let scaled: Vec<f64> = p_prev2.iter().map(|c| c * coupling).collect();
        let pk = poly::sub(&poly::mul(&linear, &p_prev1), &scaled);
        p_prev2 = p_prev1;
        p_prev1 = pk;
        sup_prev = sup;
    }
    poly::trim(p_prev1)
}

/// Couplings `g` (ascending) at which the class-`N` series terminates.
///
/// Roots of the termination polynomial in `μ` come from its companion matrix
/// and are polished by Newton on the continuant. Any root pair that is
/// complex beyond [`COMPLEX_ROOT_TOL`] is reported as an error.
pub fn solve_g(n: usize, l_r: usize, shape: &AtomShape) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "termination class N must be at least 1".into(),
        ));
    }
    let ratio = shape.d_over_b();
    let coeffs = termination_polynomial(n, l_r, ratio);
    let (mus, complex) = poly::split_roots(&coeffs, COMPLEX_ROOT_TOL);
    if !complex.is_empty() {
        return Err(Error::ComplexRoots(
            complex.iter().map(|z| (coupling_for_mu(n, l_r, shape, z.re), 4.0 * z.im)).collect(),
        ));
    }
    let mut gs: Vec<f64> = mus
        .into_iter()
        .map(|mu| {
            let mu = poly::newton_polish(|x| termination_determinant(n, l_r, ratio, x), mu, 20);
            coupling_for_mu(n, l_r, shape, mu)
        })
        .collect();
    gs.sort_by(f64::total_cmp);
    Ok(gs)
}

/// One exact radial solution
/// `R(r) = 𝒩 d^{-3/2} (r/d)^l (1 + z) P_N(z) e^{−r²/2b²}`, `z = r²/d²`,
/// with `P_N(z) = Σ v_n (−z)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSolution {
    n: usize,
    l_r: usize,
    energy_r: f64,
    g_root: f64,
    coefficients: SeriesCoefficients,
    polynomial: Vec<f64>,
    n_r: usize,
    normalization: f64,
    atom: AtomParameters,
}

impl PolynomialSolution {
    /// Termination class `N`.
    pub fn class(&self) -> usize {
        self.n
    }

    pub fn l_r(&self) -> usize {
        self.l_r
    }

    pub fn energy_r(&self) -> f64 {
        self.energy_r
    }

    pub fn g_root(&self) -> f64 {
        self.g_root
    }

    /// Heun coefficients `v_0 … v_{N+2}`; only the first `N + 1` enter the
    /// solution.
    pub fn coefficients(&self) -> &SeriesCoefficients {
        &self.coefficients
    }

    /// `v_1 … v_N`
    pub fn v(&self) -> &[f64] {
        &self.coefficients.values()[1..=self.n]
    }

    /// `P_N(z)` coefficients, ascending in `z = r²/d²`.
    pub fn polynomial(&self) -> &[f64] {
        &self.polynomial
    }

    /// Number of radial nodes.
    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn atom(&self) -> &AtomParameters {
        &self.atom
    }

    pub fn symmetry(&self) -> Symmetry {
        classify_symmetry(self.l_r)
    }

    /// `|v_{N+1}| / max |v_0..v_N|`
    pub fn termination_residual(&self) -> f64 {
        let v = self.coefficients.values();
        let scale = v[..=self.n].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        v[self.n + 1].abs() / scale
    }

    /// The same function scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            normalization: self.normalization * factor,
            ..self.clone()
        }
    }

    /// Radii of the nodes, ascending.
    pub fn node_radii(&self) -> Vec<f64> {
        positive_real_roots(&self.polynomial)
            .into_iter()
            .map(|z| self.atom.d * z.sqrt())
            .collect()
    }

    /// Coefficients `q_m` of `(1 + z) P_N(z)`.
    fn full_polynomial(&self) -> Vec<f64> {
        poly::mul(&[1.0, 1.0], &self.polynomial)
    }

    fn prefactor(&self) -> f64 {
        self.normalization / self.atom.d.powf(1.5)
    }

    pub fn radial(&self, r: f64) -> f64 {
        let (b, d) = (self.atom.b, self.atom.d);
        let z = (r / d) * (r / d);
        self.prefactor()
            * (r / d).powi(self.l_r as i32)
            * (1.0 + z)
            * poly::eval(&self.polynomial, z)
            * (-r * r / (2.0 * b * b)).exp()
    }

    /// `(R, R', R'')` at `r > 0`.
    pub fn radial_with_derivatives(&self, r: f64) -> (f64, f64, f64) {
        let (b, d) = (self.atom.b, self.atom.d);
        let b2 = b * b;
        let x = r / d;
        let (mut w, mut w1, mut w2) = (0.0, 0.0, 0.0);
        for (m, q) in self.full_polynomial().iter().enumerate() {
            let p = (self.l_r + 2 * m) as i32;
            let pf = p as f64;
            w += q * x.powi(p);
            if p >= 1 {
                w1 += q * pf / d * x.powi(p - 1);
            }
            if p >= 2 {
                w2 += q * pf * (pf - 1.0) / (d * d) * x.powi(p - 2);
            }
        }
        let e = (-r * r / (2.0 * b2)).exp();
        let e1 = -r / b2 * e;
        let e2 = (r * r / (b2 * b2) - 1.0 / b2) * e;
        let c = self.prefactor();
        (c * w * e, c * (w1 * e + w * e1), c * (w2 * e + 2.0 * w1 * e1 + w * e2))
    }

    /// `|R'' + 2R'/r + (k² − r²/b⁴ − g/(r²+d²) − l(l+1)/r²) R|` divided by
    /// the largest of those six terms.
    pub fn ode_residual(&self, r: f64) -> f64 {
        let AtomParameters { b, d, g, .. } = self.atom;
        let (rv, r1, r2) = self.radial_with_derivatives(r);
        let k2 = 2.0 * self.energy_r;
        let l = self.l_r as f64;
        let terms = [
            r2,
            2.0 * r1 / r,
            k2 * rv,
            -r * r / b.powi(4) * rv,
            -g / (r * r + d * d) * rv,
            -l * (l + 1.0) / (r * r) * rv,
        ];
        let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        terms.iter().sum::<f64>().abs() / scale
    }
}

fn positive_real_roots(coeffs: &[f64]) -> Vec<f64> {
    let (real, _) = poly::split_roots(coeffs, COMPLEX_ROOT_TOL);
    real.into_iter().filter(|&z| z > 0.0).collect()
}

/// Builds and normalizes the class-`N` solution at a termination root.
pub fn radial_solution(n: usize, l_r: usize, shape: &AtomShape, g_root: f64) -> Result<PolynomialSolution> {
    let atom = AtomParameters::new(shape.b, shape.d, g_root, NucleusMass::Infinite)?;
    let energy_r = quantized_energy(n, l_r, shape.b);
    let params = heun_parameters(&atom, l_r, energy_r)?;
    let coefficients = heun::series_coefficients(&params, n + 2)?;
    if heun::termination_degree(&coefficients, heun::TERMINATION_TOL) != Some(n) {
        return Err(Error::NotTerminated {
            expected: n,
            g: g_root,
        });
    }
    let polynomial: Vec<f64> = coefficients.values()[..=n]
        .iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 0 { *v } else { -v })
        .collect();
    let n_r = positive_real_roots(&polynomial).len();
    let sol = PolynomialSolution {
        n,
        l_r,
        energy_r,
        g_root,
        coefficients,
        polynomial,
        n_r,
        normalization: 1.0,
        atom,
    };
    normalize_radial(&sol)
}

/// Sets `𝒩` so that `∫₀^∞ R² r² dr = 1`, by adaptive quadrature.
pub fn normalize_radial(sol: &PolynomialSolution) -> Result<PolynomialSolution> {
    let unit = sol.scaled(1.0 / sol.normalization);
    let integral = oracle::integrate(
        |r| {
            let v = unit.radial(r);
            v * v * r * r
        },
        0.0,
        f64::INFINITY,
        0.0,
        NORMALIZATION_REL_TOL,
    )?;
    if integral.is_nan() || integral <= 0.0 {
        return Err(Error::Quadrature(format!(
            "norm integral {integral} is not positive"
        )));
    }
    Ok(unit.scaled(1.0 / integral.sqrt()))
}

/// All `N + 1` solutions of a class, ordered by ascending `g`.
pub fn solve_class(n: usize, l_r: usize, shape: &AtomShape) -> Result<Vec<PolynomialSolution>> {
    solve_g(n, l_r, shape)?
        .into_iter()
        .map(|g| radial_solution(n, l_r, shape, g))
        .collect()
}

/// `|K|²/(2M(1 + 2/M))`, zero for an infinitely heavy nucleus.
pub fn center_of_mass_energy(k: Vec3, mass: NucleusMass) -> f64 {
    match mass {
        NucleusMass::Finite(m) => {
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            k2 / (2.0 * m * mass.reduced_factor())
        }
        NucleusMass::Infinite => 0.0,
    }
}

/// `(1 + 2/M)^{1/2} (3 + 4n_s + 2l_s)/(2b²)`
pub fn pseudo_relative_energy(mass: NucleusMass, b: f64, n_s: usize, l_s: usize) -> f64 {
    mass.reduced_factor().sqrt() * (3.0 + 4.0 * n_s as f64 + 2.0 * l_s as f64) / (2.0 * b * b)
}

pub fn assemble_total_energy(k: Vec3, mass: NucleusMass, b: f64, n_s: usize, l_s: usize, e_r: f64) -> f64 {
    center_of_mass_energy(k, mass) + pseudo_relative_energy(mass, b, n_s, l_s) + e_r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_shape() -> AtomShape {
        AtomShape::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn jacobi_symmetric_configuration() {
        let j = jacobi_transform([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0; 3], NucleusMass::Finite(3.0));
        assert_eq!(j.center_of_mass, [0.0; 3]);
        assert_eq!(j.pseudo_relative, [0.0; 3]);
        assert!((j.relative[0] - std::f64::consts::SQRT_2).abs() < 1e-15);
        let z = jacobi_transform([0.0; 3], [0.0; 3], [0.0; 3], NucleusMass::Infinite);
        assert_eq!(z.relative, [0.0; 3]);
    }

    #[test]
    fn potential_values() {
        let atom = unit_shape().with_coupling(26.0);
        assert_eq!(relative_potential(0.0, &atom), 13.0);
        assert_eq!(relative_potential(1.0, &atom), 7.0);
        let free = unit_shape().with_coupling(0.0);
        assert_eq!(relative_potential(3.0, &free), 4.5);
        // V₃(√2 r) equals the interaction part of the relative potential
        let r = 0.7;
        let lhs = interaction_potential(std::f64::consts::SQRT_2 * r, &atom);
        assert!((lhs - 0.5 * 26.0 / (r * r + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn quantized_energies() {
        assert_eq!(quantized_energy(1, 0, 1.0), 5.5);
        assert_eq!(quantized_energy(2, 0, 1.0), 7.5);
        assert_eq!(quantized_energy(1, 1, 2.0), 13.0 / 8.0);
    }

    #[test]
    fn heun_parameters_reference() {
        let p = heun_parameters(&unit_shape().with_coupling(26.0), 0, 5.5).unwrap();
        assert_eq!((p.alpha, p.beta, p.gamma), (1.0, 0.5, 1.0));
        assert_eq!(p.delta, -2.75);
        assert_eq!(p.eta, -3.25);
        assert!((p.mu() - 3.0).abs() < 1e-14);
        assert!((p.nu() + 4.0).abs() < 1e-14);
        let q = heun_parameters(&unit_shape().with_coupling(12.0), 0, 5.5).unwrap();
        assert!((q.mu() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn heun_parameters_cancellation_case() {
        // g = k²d² with d² = 2b²: η = 1/2, μ = 0
        let shape = AtomShape::new(1.0, std::f64::consts::SQRT_2).unwrap();
        let e_r = 3.0;
        let g = 2.0 * e_r * 2.0;
        let p = heun_parameters(&shape.with_coupling(g), 0, e_r).unwrap();
        assert!((p.eta - 0.5).abs() < 1e-15);
        assert!(p.mu().abs() < 1e-14);
    }

    #[test]
    fn matrix_entries_small_classes() {
        let mu = 0.37;
        let m1 = termination_matrix(1, 0, 1.0, mu);
        let expect1 = [[mu, 1.5], [1.0, 1.0 + mu - 3.5]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m1[(i, j)] - expect1[i][j]).abs() < 1e-15);
            }
        }
        let m2 = termination_matrix(2, 0, 1.0, mu);
        let expect2 = [[mu, 1.5, 0.0], [2.0, 1.0 + mu - 3.5, 5.0], [0.0, 1.0, 2.0 + mu - 9.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m2[(i, j)] - expect2[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn continuant_matches_dense_determinant() {
        for (n, l, ratio, mu) in [(3, 0, 1.0, 2.3), (3, 1, 0.6, -1.7), (4, 2, 1.9, 5.5)] {
            let dense = termination_matrix(n, l, ratio, mu).determinant();
            let (cont, _) = termination_determinant(n, l, ratio, mu);
            assert!((dense - cont).abs() <= 1e-12 * dense.abs().max(1.0), "{dense} vs {cont}");
            let p = termination_polynomial(n, l, ratio);
            assert!((poly::eval(&p, mu) - cont).abs() <= 1e-10 * cont.abs().max(1.0));
        }
    }

    #[test]
    fn reference_roots() {
        let gs = solve_g(1, 0, &unit_shape()).unwrap();
        assert_eq!(gs.len(), 2);
        assert!((gs[0] - 12.0).abs() < 1e-10);
        assert!((gs[1] - 26.0).abs() < 1e-10);
    }

    #[test]
    fn class_zero_rejected() {
        assert!(solve_g(0, 0, &unit_shape()).is_err());
    }

    #[test]
    fn reference_solutions() {
        let shape = unit_shape();
        let s26 = radial_solution(1, 0, &shape, 26.0).unwrap();
        assert_eq!(s26.n_r(), 0);
        assert!((s26.v()[0] + 2.0).abs() < 1e-12);
        assert!((s26.polynomial()[1] - 2.0).abs() < 1e-12);

        let s12 = radial_solution(1, 0, &shape, 12.0).unwrap();
        assert_eq!(s12.n_r(), 1);
        let nodes = s12.node_radii();
        assert!((nodes[0] - 3.0_f64.sqrt()).abs() < 1e-12);
        assert!(s12.radial(nodes[0]).abs() < 1e-12);
    }

    #[test]
    fn off_root_coupling_is_rejected() {
        let err = radial_solution(1, 0, &unit_shape(), 26.1).unwrap_err();
        assert!(matches!(err, Error::NotTerminated { expected: 1, .. }));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let s = radial_solution(2, 1, &AtomShape::new(1.2, 0.8).unwrap(), solve_g(2, 1, &AtomShape::new(1.2, 0.8).unwrap()).unwrap()[1]).unwrap();
        let h = 1e-4;
        for r in [0.3, 1.1, 2.4] {
            let (v, d1, d2) = s.radial_with_derivatives(r);
            assert!((v - s.radial(r)).abs() < 1e-14);
            let fd1 = (s.radial(r + h) - s.radial(r - h)) / (2.0 * h);
            let fd2 = (s.radial(r + h) - 2.0 * v + s.radial(r - h)) / (h * h);
            assert!((d1 - fd1).abs() < 1e-6, "{d1} {fd1}");
            assert!((d2 - fd2).abs() < 1e-5, "{d2} {fd2}");
        }
    }

    #[test]
    fn normalization_idempotent_and_scale_free() {
        let s = radial_solution(1, 0, &unit_shape(), 26.0).unwrap();
        let again = normalize_radial(&s).unwrap();
        assert!((again.normalization() - s.normalization()).abs() < 1e-13 * s.normalization());
        let scaled = normalize_radial(&s.scaled(7.5)).unwrap();
        assert!((scaled.normalization() - s.normalization()).abs() < 1e-13 * s.normalization());
    }

    #[test]
    fn symmetry_by_parity() {
        assert_eq!(classify_symmetry(0), Symmetry::Singlet);
        assert_eq!(classify_symmetry(1), Symmetry::Triplet);
        assert_eq!(classify_symmetry(4), Symmetry::Singlet);
    }

    #[test]
    fn total_energies() {
        let e = assemble_total_energy([0.0; 3], NucleusMass::Infinite, 1.0, 0, 0, 5.5);
        assert_eq!(e, 7.0);
        let e = assemble_total_energy([0.0; 3], NucleusMass::Infinite, 1.0, 1, 0, 0.0);
        assert_eq!(e, 3.5);
        // |K|² / (2M(1 + 2/M)) with M = 2, |K| = 2
        assert_eq!(center_of_mass_energy([2.0, 0.0, 0.0], NucleusMass::Finite(2.0)), 0.5);
    }

    #[test]
    fn mass_parsing() {
        assert_eq!("inf".parse::<NucleusMass>().unwrap(), NucleusMass::Infinite);
        assert_eq!("4".parse::<NucleusMass>().unwrap(), NucleusMass::Finite(4.0));
        assert!("-1".parse::<NucleusMass>().is_err());
        assert!("abc".parse::<NucleusMass>().is_err());
    }

    #[test]
    fn quantum_number_ranges() {
        assert!(QuantumNumbers::new(0, 1, 1, 0, 2, -2, [0.0; 3]).is_ok());
        assert!(QuantumNumbers::new(0, 1, 2, 0, 2, 0, [0.0; 3]).is_err());
        let q = QuantumNumbers::new(0, 0, 0, 0, 3, 1, [0.0; 3]).unwrap();
        assert_eq!(q.symmetry(), Symmetry::Triplet);
    }
}
