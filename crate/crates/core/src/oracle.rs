//! Independent numerical machinery used to check the analytic results.
//!
//! Nothing here uses the series, the termination conditions or the closed
//! forms; the only shared ingredient is the potential itself.
//!
//! - [`radial_eigensolve`]: three-point finite differences for the reduced
//!   radial function `u = rR`, `-u''/2 + (V(r) + l(l+1)/2r²) u = E u`, with
//!   Sturm bisection for the eigenvalues, inverse iteration for the vectors
//!   and Richardson extrapolation over a half-step grid.
//! - [`integrate_heun_ode`]: fixed-step RK4 for the confluent Heun equation in
//!   the logarithmic variable `t = ln|ξ|`, which tames the regular singular
//!   point at the origin.
//! - [`quadrature`]: adaptive 15-point Gauss–Kronrod, with `[a, ∞)` mapped to
//!   `[0, 1)` by `x = a + t/(1 − t)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::atom::{relative_potential, AtomParameters};
use crate::error::{Error, Result};
use crate::heun::HeunParameters;

/// Relative disagreement between the two Richardson grids above which a
/// result is flagged as under-resolved.
pub const GRID_WARNING_REL: f64 = 1e-4;
/// Step-halving tolerance of the Heun ODE integrator.
pub const ODE_HALVING_TOL: f64 = 1e-9;
pub const DEFAULT_ODE_STEPS: usize = 4000;
const ODE_START: f64 = 1e-6;
const MAX_SUBDIVISIONS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    /// Interior unknowns; `u` is pinned to zero at `r_min` and `r_max`.
    pub n_points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n_points < 100 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 100 points, got {n_points}"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            n_points,
        })
    }

    /// `r_min = 1e-6 b`, `r_max = 10 b`, 4000 points.
    pub fn default_for(b: f64) -> Self {
        Self {
            r_min: 1e-6 * b,
            r_max: 10.0 * b,
            n_points: 4000,
        }
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points + 1) as f64
    }

    /// Radius of interior point `i` (0-based).
    pub fn radius(&self, i: usize) -> f64 {
        self.r_min + (i + 1) as f64 * self.spacing()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.radius(i)).collect()
    }

    /// The grid with exactly half the spacing; every old point is kept.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points + 1,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEigenpair {
    /// `E_r` on the given grid.
    pub eigenvalue: f64,
    /// Richardson combination `(4 E_{h/2} − E_h)/3`.
    pub extrapolated: f64,
    /// `u = rR` at the grid radii, `Σ u² h = 1`, positive near the origin.
    pub u_values: Vec<f64>,
    pub node_count: usize,
    pub grid: RadialGrid,
    /// Set when the two grids disagree by more than [`GRID_WARNING_REL`].
    pub grid_warning: bool,
}

impl OracleEigenpair {
    /// `R = u/r` at grid point `i`.
    pub fn radial_value(&self, i: usize) -> f64 {
        self.u_values[i] / self.grid.radius(i)
    }
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

fn discretize(atom: &AtomParameters, l_r: usize, grid: &RadialGrid) -> Tridiagonal {
    let h = grid.spacing();
    let kinetic = 1.0 / (h * h);
    let centrifugal = (l_r * (l_r + 1)) as f64 / 2.0;
    let mut diag: Vec<f64> = (0..grid.n_points)
        .map(|i| {
            let r = grid.radius(i);
            kinetic + relative_potential(r, atom) + centrifugal / (r * r)
        })
        .collect();
    // Ghost value u(r_min) = u(r_0)·(r_min/r_0)^{l+1} from the small-r power law.
    let ratio = (grid.r_min / grid.radius(0)).powi(l_r as i32 + 1);
    diag[0] -= 0.5 * kinetic * ratio;
    let off = vec![-0.5 * kinetic; grid.n_points - 1];
    Tridiagonal { diag, off }
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `lambda` (Sturm sequence).
    fn count_below(&self, lambda: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            if q.abs() < pivmin {
                q = -pivmin;
            }
            q = self.diag[i] - lambda - self.off[i - 1] * self.off[i - 1] / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue by bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(T − σ I) x = rhs` by Gaussian elimination with partial
    /// pivoting; exactly singular pivots are nudged.
    fn shifted_solve(&self, sigma: f64, rhs: &mut [f64]) {
        let n = self.diag.len();
        let tiny = f64::EPSILON * self.gershgorin().1.abs().max(1.0);
        let mut d: Vec<f64> = self.diag.iter().map(|a| a - sigma).collect();
        let mut du = self.off.clone();
        let mut dl = self.off.clone();
        // second superdiagonal fill-in, stored in `dl`
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                d[i + 1] -= fact * du[i];
                rhs[i + 1] -= fact * rhs[i];
                dl[i] = 0.0;
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 2 < n {
                    dl[i] = du[i + 1];
                    du[i + 1] = -fact * dl[i];
                } else {
                    dl[i] = 0.0;
                }
                du[i] = temp;
                rhs.swap(i, i + 1);
                rhs[i + 1] -= fact * rhs[i];
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        rhs[n - 1] /= d[n - 1];
        if n > 1 {
            rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - dl[i] * rhs[i + 2]) / d[i];
        }
    }

    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        // deterministic, non-symmetric start vector
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_749_895).fract())
            .collect();
        for _ in 0..4 {
            self.shifted_solve(lambda, &mut x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }
}

fn count_sign_changes(values: &[f64]) -> usize {
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let threshold = 1e-9 * scale;
    let mut last_sign = 0.0;
    let mut changes = 0;
    for &v in values {
        if v.abs() <= threshold {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            changes += 1;
        }
        last_sign = s;
    }
    changes
}

/// The `n_states` lowest eigenpairs of the discretized radial problem,
/// ascending in energy.
pub fn radial_eigensolve(
    atom: &AtomParameters,
    l_r: usize,
    grid: &RadialGrid,
    n_states: usize,
) -> Result<Vec<OracleEigenpair>> {
    if n_states == 0 || n_states > grid.n_points {
        return Err(Error::InvalidParameter(format!(
            "cannot extract {n_states} states from {} grid points",
            grid.n_points
        )));
    }
    let coarse = discretize(atom, l_r, grid);
    let fine = discretize(atom, l_r, &grid.refined());
    let h = grid.spacing();

    let mut pairs = Vec::with_capacity(n_states);
    for k in 0..n_states {
        let e_coarse = coarse.eigenvalue(k);
        let e_fine = fine.eigenvalue(k);
        let extrapolated = (4.0 * e_fine - e_coarse) / 3.0;
        let grid_warning =
            (e_fine - e_coarse).abs() > GRID_WARNING_REL * extrapolated.abs().max(1e-300);

        let mut u = coarse.eigenvector(e_coarse);
        let norm = (u.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        let lead = u
            .iter()
            .copied()
            .find(|v| v.abs() > 1e-9 * norm)
            .unwrap_or(1.0);
        let sign = lead.signum() / norm;
        u.iter_mut().for_each(|v| *v *= sign);
        let node_count = count_sign_changes(&u);
        pairs.push(OracleEigenpair {
            eigenvalue: e_coarse,
            extrapolated,
            u_values: u,
            node_count,
            grid: *grid,
            grid_warning,
        });
    }
    Ok(pairs)
}

/// `f(ξ_end)` for the regular solution with `f(0) = 1`,
/// `f'(0) = −μ/(β+1)`, from RK4 in `t = ln|ξ|`.
///
/// The step count is doubled until two runs agree within
/// [`ODE_HALVING_TOL`]; the last pair is Richardson-combined. Failing to
/// settle after eight doublings is an error.
pub fn integrate_heun_ode(params: &HeunParameters, xi_end: f64, steps: usize) -> Result<f64> {
    if !(xi_end > -1.0 && xi_end < 1.0) {
        return Err(Error::Domain(format!(
            "xi_end = {xi_end} must lie in (-1, 1)"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    if xi_end.abs() <= ODE_START {
        let slope = -params.mu() / (params.beta + 1.0);
        return Ok(1.0 + slope * xi_end);
    }
    let mut n = steps;
    let mut coarse = heun_rk4(params, xi_end, n);
    for _ in 0..8 {
        n *= 2;
        let fine = heun_rk4(params, xi_end, n);
        if (fine - coarse).abs() <= ODE_HALVING_TOL * fine.abs().max(1.0) {
            return Ok(fine + (fine - coarse) / 15.0);
        }
        coarse = fine;
    }
    Err(Error::NonConvergence(format!(
        "RK4 for f({xi_end}) did not settle with {n} steps"
    )))
}

fn heun_rk4(p: &HeunParameters, xi_end: f64, steps: usize) -> f64 {
    let s = xi_end.signum();
    let (alpha, beta, gamma) = (p.alpha, p.beta, p.gamma);
    let (mu, nu) = (p.mu(), p.nu());

    // y = (f, df/dt), t = ln x, ξ = s x
    let rhs = |t: f64, y: [f64; 2]| -> [f64; 2] {
        let x = t.exp();
        let sx = s * x;
        let damping = beta + sx * alpha + sx * (gamma + 1.0) / (sx - 1.0);
        let restoring = s * mu * x + nu * x * x / (sx - 1.0);
        [y[1], -damping * y[1] - restoring * y[0]]
    };

    // start just off the singular point using the Taylor data implied by
    // the equation itself: f'(0) and f''(0)
    let x0 = ODE_START;
    let xi0 = s * x0;
    let f1 = -mu / (beta + 1.0);
    let f2 = (nu - (alpha - gamma - 1.0 + mu) * f1) / (beta + 2.0);
    let mut y = [
        1.0 + f1 * xi0 + 0.5 * f2 * xi0 * xi0,
        x0 * s * (f1 + f2 * xi0),
    ];

    let t0 = x0.ln();
    let t1 = xi_end.abs().ln();
    let h = (t1 - t0) / steps as f64;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = rhs(t, y);
        let k2 = rhs(t + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(t + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y[0]
}

// Gauss–Kronrod 7/15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let (value, error) = gauss_kronrod(f, a, b);
    if !value.is_finite() {
        return Err(Error::Quadrature(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_error = error;
    for _ in 0..MAX_SUBDIVISIONS {
        if total_error <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further; accept what we have
            heap.push(worst);
            break;
        }
        let (v1, e1) = gauss_kronrod(f, worst.a, mid);
        let (v2, e2) = gauss_kronrod(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed accumulated update roundoff before the final test
    let total: f64 = heap.iter().map(|s| s.value).sum();
    let total_error: f64 = heap.iter().map(|s| s.error).sum();
    if total_error <= abs_tol.max(rel_tol * total.abs()) {
        Ok(total)
    } else {
        Err(Error::Quadrature(format!(
            "error estimate {total_error:e} above tolerance after {MAX_SUBDIVISIONS} subdivisions"
        )))
    }
}

/// `∫_a^b f` with separate absolute and relative tolerances; the looser of
/// the two governs. `b` may be `f64::INFINITY`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a.is_nan() || b.is_nan() || a == f64::NEG_INFINITY {
        return Err(Error::InvalidParameter(format!(
            "unsupported interval [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    if b.is_infinite() {
        let mapped = |t: f64| {
            if t >= 1.0 {
                return 0.0;
            }
            let one_minus = 1.0 - t;
            let x = a + t / one_minus;
            let v = f(x) / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        adaptive(&mapped, 0.0, 1.0, abs_tol, rel_tol)
    } else if b < a {
        adaptive(&f, b, a, abs_tol, rel_tol).map(|v| -v)
    } else {
        adaptive(&f, a, b, abs_tol, rel_tol)
    }
}

/// `∫_a^b f` to within `tol`, absolute or relative, whichever is larger.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate(f, a, b, tol, tol)
}
