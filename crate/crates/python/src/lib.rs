//! Python bindings: `import screened_atom`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use screened_atom::atom::{self, AtomParameters, AtomShape, NucleusMass};
use screened_atom::groundstate;
use screened_atom::heun::{self, HeunParameters};
use screened_atom::limits;
use screened_atom::oracle::{self, RadialGrid};

fn to_py<T>(r: screened_atom::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

fn shape(d_over_b: f64, b: f64) -> PyResult<AtomShape> {
    to_py(AtomShape::from_ratio(b, d_over_b))
}

fn parse_mass(mass: &str) -> PyResult<NucleusMass> {
    to_py(mass.parse())
}

/// One exact radial solution `R(r)`, normalized so that `∫R² r² dr = 1`.
#[pyclass(name = "PolynomialSolution", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySolution(atom::PolynomialSolution);

#[pymethods]
impl PySolution {
    #[getter]
    fn n(&self) -> usize {
        self.0.class()
    }

    #[getter]
    fn l_r(&self) -> usize {
        self.0.l_r()
    }

    #[getter]
    fn energy_r(&self) -> f64 {
        self.0.energy_r()
    }

    #[getter]
    fn g(&self) -> f64 {
        self.0.g_root()
    }

    /// `v_1 … v_N`.
    #[getter]
    fn v(&self) -> Vec<f64> {
        self.0.v().to_vec()
    }

    #[getter]
    fn n_r(&self) -> usize {
        self.0.n_r()
    }

    #[getter]
    fn normalization(&self) -> f64 {
        self.0.normalization()
    }

    #[getter]
    fn symmetry(&self) -> String {
        self.0.symmetry().to_string()
    }

    fn radial(&self, r: f64) -> f64 {
        self.0.radial(r)
    }

    fn node_radii(&self) -> Vec<f64> {
        self.0.node_radii()
    }

    fn ode_residual(&self, r: f64) -> f64 {
        self.0.ode_residual(r)
    }

    fn __repr__(&self) -> String {
        format!(
            "PolynomialSolution(N={}, l_r={}, g={}, n_r={}, E_r={})",
            self.0.class(),
            self.0.l_r(),
            self.0.g_root(),
            self.0.n_r(),
            self.0.energy_r()
        )
    }
}

/// The node-less class-1, `l_r = 0` state with its closed-form density.
#[pyclass(name = "GroundState", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGroundState(groundstate::GroundState);

#[pymethods]
impl PyGroundState {
    #[new]
    #[pyo3(signature = (d_over_b = 1.0, b = 1.0))]
    fn new(d_over_b: f64, b: f64) -> PyResult<Self> {
        Ok(Self(to_py(groundstate::GroundState::new(&shape(d_over_b, b)?))?))
    }

    #[getter]
    fn g(&self) -> f64 {
        self.0.g_root
    }

    #[getter]
    fn v1(&self) -> f64 {
        self.0.v1
    }

    #[getter]
    fn normalization(&self) -> f64 {
        self.0.normalization
    }

    #[getter]
    fn energy_total(&self) -> f64 {
        self.0.energy_total
    }

    fn wavefunction(&self, r1: [f64; 3], r2: [f64; 3]) -> f64 {
        self.0.wavefunction(r1, r2)
    }

    fn density(&self, r1: f64) -> f64 {
        self.0.density(r1)
    }

    #[pyo3(signature = (r1, rel_tol = 1e-10))]
    fn density_numeric(&self, r1: f64, rel_tol: f64) -> PyResult<f64> {
        to_py(self.0.density_numeric(r1, rel_tol))
    }

    /// `(r1, rho)` at the density maximum.
    fn density_maximum(&self) -> (f64, f64) {
        self.0.density_maximum()
    }

    fn cusp_derivative(&self) -> f64 {
        self.0.cusp_derivative()
    }
}

#[pyfunction]
#[pyo3(signature = (n, l_r, d_over_b = 1.0, b = 1.0))]
fn solve_g(n: usize, l_r: usize, d_over_b: f64, b: f64) -> PyResult<Vec<f64>> {
    to_py(atom::solve_g(n, l_r, &shape(d_over_b, b)?))
}

#[pyfunction]
#[pyo3(signature = (n, l_r, d_over_b = 1.0, b = 1.0))]
fn solve_class(n: usize, l_r: usize, d_over_b: f64, b: f64) -> PyResult<Vec<PySolution>> {
    let sols = to_py(atom::solve_class(n, l_r, &shape(d_over_b, b)?))?;
    Ok(sols.into_iter().map(PySolution).collect())
}

#[pyfunction]
#[pyo3(signature = (n, l_r, g, d_over_b = 1.0, b = 1.0))]
fn radial_solution(n: usize, l_r: usize, g: f64, d_over_b: f64, b: f64) -> PyResult<PySolution> {
    Ok(PySolution(to_py(atom::radial_solution(n, l_r, &shape(d_over_b, b)?, g))?))
}

#[pyfunction]
#[pyo3(signature = (n, l_r, b = 1.0))]
fn quantized_energy(n: usize, l_r: usize, b: f64) -> f64 {
    atom::quantized_energy(n, l_r, b)
}

/// Total energy with the centre of mass at momentum `k` and the
/// pseudorelative oscillator in state `(n_s, l_s)`; `mass` is a number or "inf".
#[pyfunction]
#[pyo3(signature = (e_r, b = 1.0, mass = "inf", n_s = 0, l_s = 0, k = [0.0; 3]))]
fn total_energy(e_r: f64, b: f64, mass: &str, n_s: usize, l_s: usize, k: [f64; 3]) -> PyResult<f64> {
    Ok(atom::assemble_total_energy(k, parse_mass(mass)?, b, n_s, l_s, e_r))
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, gamma, delta, eta, n_max))]
fn heun_series(alpha: f64, beta: f64, gamma: f64, delta: f64, eta: f64, n_max: usize) -> PyResult<Vec<f64>> {
    let params = to_py(HeunParameters::new(alpha, beta, gamma, delta, eta))?;
    Ok(to_py(heun::series_coefficients(&params, n_max))?.values().to_vec())
}

/// `(value, converged, terms)`.
#[pyfunction]
#[pyo3(signature = (alpha, beta, gamma, delta, eta, xi, tol = heun::DEFAULT_SERIES_TOL))]
fn heun_evaluate(
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    eta: f64,
    xi: f64,
    tol: f64,
) -> PyResult<(f64, bool, usize)> {
    let params = to_py(HeunParameters::new(alpha, beta, gamma, delta, eta))?;
    let v = to_py(heun::evaluate(&params, xi, tol, heun::DEFAULT_MAX_TERMS))?;
    Ok((v.value, v.converged, v.terms))
}

#[pyfunction]
#[pyo3(signature = (n_r, l_r, g, b = 1.0))]
fn small_d_energy(n_r: usize, l_r: usize, g: f64, b: f64) -> PyResult<f64> {
    to_py(limits::small_d_energy(n_r, l_r, g, b))
}

#[pyfunction]
fn small_d_degeneracy_g(n_r: usize, l_r: usize, n_r2: usize, l_r2: usize) -> Option<f64> {
    limits::small_d_degeneracy_g(n_r, l_r, n_r2, l_r2)
}

#[pyfunction]
#[pyo3(signature = (n_r, l_r, g, d_over_b, b = 1.0))]
fn large_d_energy(n_r: usize, l_r: usize, g: f64, d_over_b: f64, b: f64) -> PyResult<f64> {
    let atom = to_py(AtomParameters::new(b, d_over_b * b, g, NucleusMass::Infinite))?;
    to_py(limits::large_d_energy(n_r, l_r, &atom))
}

#[pyfunction]
fn large_d_degenerate(n_r: usize, l_r: usize, n_r2: usize, l_r2: usize) -> bool {
    limits::large_d_degenerate(n_r, l_r, n_r2, l_r2)
}

/// Finite-difference eigenpairs as `(eigenvalue, extrapolated, node_count,
/// grid_warning)` tuples, lowest first.
#[pyfunction]
#[pyo3(signature = (g, l_r, n_states, d_over_b = 1.0, b = 1.0, n_points = 4000, r_max = 10.0))]
fn radial_eigensolve(
    g: f64,
    l_r: usize,
    n_states: usize,
    d_over_b: f64,
    b: f64,
    n_points: usize,
    r_max: f64,
) -> PyResult<Vec<(f64, f64, usize, bool)>> {
    let atom = shape(d_over_b, b)?.with_coupling(g);
    let grid = to_py(RadialGrid::new(1e-6 * b, r_max * b, n_points))?;
    let pairs = to_py(oracle::radial_eigensolve(&atom, l_r, &grid, n_states))?;
    Ok(pairs
        .into_iter()
        .map(|p| (p.eigenvalue, p.extrapolated, p.node_count, p.grid_warning))
        .collect())
}

#[pymodule]
#[pyo3(name = "screened_atom")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySolution>()?;
    m.add_class::<PyGroundState>()?;
    m.add_function(wrap_pyfunction!(solve_g, m)?)?;
    m.add_function(wrap_pyfunction!(solve_class, m)?)?;
    m.add_function(wrap_pyfunction!(radial_solution, m)?)?;
    m.add_function(wrap_pyfunction!(quantized_energy, m)?)?;
    m.add_function(wrap_pyfunction!(total_energy, m)?)?;
    m.add_function(wrap_pyfunction!(heun_series, m)?)?;
    m.add_function(wrap_pyfunction!(heun_evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(small_d_energy, m)?)?;
    m.add_function(wrap_pyfunction!(small_d_degeneracy_g, m)?)?;
    m.add_function(wrap_pyfunction!(large_d_energy, m)?)?;
    m.add_function(wrap_pyfunction!(large_d_degenerate, m)?)?;
    m.add_function(wrap_pyfunction!(radial_eigensolve, m)?)?;
    Ok(())
}
