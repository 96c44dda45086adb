//! Command-line front end: `solve`, `verify`, `density`, `limits` and
//! `figure`, each writing one table as CSV or JSON.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 verification
//! failure, 4 I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::atom::{self, AtomShape, NucleusMass};
use crate::error::Error;
use crate::groundstate::{self, GroundState};
use crate::heun;
use crate::limits::{self, LimitSpectrumEntry};
use crate::oracle::{self, RadialGrid};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Verification thresholds.
pub const VERIFY_EIGEN_REL_TOL: f64 = 1e-4;
pub const VERIFY_L2_TOL: f64 = 1e-3;
pub const VERIFY_ODE_TOL: f64 = 1e-9;
pub const VERIFY_TERMINATION_TOL: f64 = 1e-10;
const ODE_SAMPLES: usize = 50;

#[derive(Debug, Parser)]
#[command(
    name = "screened-atom",
    version,
    about = "Exact states of a harmonically confined two-electron atom with a screened interaction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Couplings g with exact class-N solutions, their energies and nodes.
    Solve(SolveArgs),
    /// Check every exact solution against the finite-difference eigensolver.
    Verify(VerifyArgs),
    /// One-body electron density of the ground state (or any exact state).
    Density(DensityArgs),
    /// Spectra and degeneracies in the small-d and large-d limits.
    Limits(LimitsArgs),
    /// Plot data for the radial functions or the ground-state density.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Termination class N (not the principal quantum number).
    #[arg(long = "N", default_value_t = 1)]
    pub n: usize,
    /// Relative angular momentum l_r.
    #[arg(long = "lr", default_value_t = 0)]
    pub l_r: usize,
    #[arg(long = "d-over-b", default_value_t = 1.0, allow_negative_numbers = true)]
    pub d_over_b: f64,
    /// Confinement length; lengths scale with b and energies with 1/b².
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Nucleus mass in electron masses, or "inf".
    #[arg(long = "M", default_value = "inf")]
    pub mass: String,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Verify this coupling instead of the computed roots.
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long = "grid-points", default_value_t = 4000)]
    pub grid_points: usize,
    /// Outer grid radius in units of b.
    #[arg(long, default_value_t = 10.0)]
    pub rmax: f64,
    /// Relative eigenvalue tolerance.
    #[arg(long, default_value_t = VERIFY_EIGEN_REL_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Node count of the relative state; the node-less one by default.
    #[arg(long = "nr", default_value_t = 0)]
    pub n_r: usize,
    #[arg(long = "grid-points", default_value_t = groundstate::DEFAULT_PROFILE_POINTS)]
    pub grid_points: usize,
    /// Outer radius in units of b.
    #[arg(long, default_value_t = groundstate::DEFAULT_PROFILE_EXTENT)]
    pub rmax: f64,
    /// Relative quadrature tolerance of the numeric density.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Skip the numeric cross-check column for the ground state.
    #[arg(long)]
    pub closed_form_only: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    SmallD,
    LargeD,
}

#[derive(Debug, Clone, Args)]
pub struct LimitsArgs {
    #[arg(value_enum)]
    pub regime: RegimeArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Only used in the large-d regime.
    #[arg(long = "d-over-b", default_value_t = 10.0, allow_negative_numbers = true)]
    pub d_over_b: f64,
    #[arg(long, default_value_t = 10)]
    pub levels: usize,
    /// Small-d level pair "n,l,n',l'" whose degeneracy coupling to solve for.
    #[arg(long = "pair")]
    pub pairs: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub which: Figure,
    #[arg(long = "grid-points")]
    pub grid_points: Option<usize>,
    /// Outer radius in units of b.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Real(x) => format_significant(*x, 12),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(x) => json_real(*x),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// One command's output: parameters, a table and named checks.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub params: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Default::default()
        }
    }

    fn param(&mut self, key: &str, value: impl Into<Cell>) {
        self.params.push((key.to_string(), value.into()));
    }

    fn check(&mut self, name: impl Into<String>, value: f64, tolerance: f64, pass: bool) {
        self.checks.push(Check {
            name: name.into(),
            value,
            tolerance,
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# screened-atom {}", self.command);
        for (k, v) in &self.params {
            let _ = writeln!(out, "# {k} = {}", v.csv());
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "# check {}: value = {} tolerance = {} {}",
                c.name,
                format_significant(c.value, 12),
                format_significant(c.tolerance, 12),
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut params = Map::new();
        params.insert("command".into(), json!(self.command));
        for (k, v) in &self.params {
            params.insert(k.clone(), v.json());
        }
        let results: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "value": json_real(c.value),
                    "tolerance": json_real(c.tolerance),
                    "pass": c.pass,
                })
            })
            .collect();
        let doc = json!({"params": params, "results": results, "checks": checks});
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// JSON number with 17 significant digits; non-finite values become null.
fn json_real(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format_significant(x, 17);
    Value::Number(text.parse().expect("formatted float is a JSON number"))
}

/// Decimal rendering with `sig` significant digits; plain notation for
/// moderate exponents, scientific otherwise, trailing zeros removed.
pub fn format_significant(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", sig.saturating_sub(1), x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..15).contains(&exponent) {
        let decimals = (sig as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exponent}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

fn shape_from(model: &ModelArgs) -> CliResult<AtomShape> {
    if !positive(model.b) {
        return Err(CliError::Usage(format!("--b must be positive, got {}", model.b)));
    }
    if !positive(model.d_over_b) {
        return Err(CliError::Usage(format!(
            "--d-over-b must be positive, got {}",
            model.d_over_b
        )));
    }
    if model.n == 0 {
        return Err(CliError::Usage("--N must be at least 1".into()));
    }
    Ok(AtomShape::from_ratio(model.b, model.d_over_b)?)
}

fn mass_from(model: &ModelArgs) -> CliResult<NucleusMass> {
    model
        .mass
        .parse()
        .map_err(|e: Error| CliError::Usage(e.to_string()))
}

fn model_params(report: &mut Report, model: &ModelArgs, mass: NucleusMass) {
    report.param("N", model.n);
    report.param("lr", model.l_r);
    report.param("d_over_b", model.d_over_b);
    report.param("b", model.b);
    report.param("M", mass.to_string());
}

pub fn cmd_solve(args: &SolveArgs) -> CliResult<Report> {
    let model = &args.model;
    let shape = shape_from(model)?;
    let mass = mass_from(model)?;
    let solutions = atom::solve_class(model.n, model.l_r, &shape)?;

    let mut report = Report::new("solve");
    model_params(&mut report, model, mass);
    let e_r = atom::quantized_energy(model.n, model.l_r, shape.b);
    report.param("E_r", e_r);
    report.param(
        "E_total",
        atom::assemble_total_energy([0.0; 3], mass, shape.b, 0, 0, e_r),
    );
    report.columns = ["g", "E_r", "n_r"].map(String::from).to_vec();
    report
        .columns
        .extend((1..=model.n).map(|k| format!("v_{k}")));
    report.columns.push("symmetry".into());
    for sol in &solutions {
        let mut row: Vec<Cell> = vec![sol.g_root().into(), sol.energy_r().into(), sol.n_r().into()];
        row.extend(sol.v().iter().map(|&v| Cell::Real(v)));
        row.push(sol.symmetry().to_string().into());
        report.rows.push(row);
    }
    Ok(report)
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Largest ODE residual over 50 log-spaced radii in `(0, 6b]`.
pub fn max_ode_residual(sol: &atom::PolynomialSolution) -> f64 {
    let b = sol.atom().b;
    log_spaced(1e-2 * b, 6.0 * b, ODE_SAMPLES)
        .into_iter()
        .map(|r| sol.ode_residual(r))
        .fold(0.0, f64::max)
}

/// `(Σ (u_oracle − r R)² h)^{1/2}` on the oracle grid.
pub fn eigenfunction_mismatch(pair: &oracle::OracleEigenpair, sol: &atom::PolynomialSolution) -> f64 {
    let h = pair.grid.spacing();
    let sum: f64 = pair
        .u_values
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let r = pair.grid.radius(i);
            let diff = u - r * sol.radial(r);
            diff * diff
        })
        .sum();
    (sum * h).sqrt()
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<Report> {
    let model = &args.model;
    let shape = shape_from(model)?;
    let mass = mass_from(model)?;
    if !positive(args.rmax) || args.grid_points < 100 {
        return Err(CliError::Usage(
            "--rmax must be positive and --grid-points at least 100".into(),
        ));
    }
    let grid = RadialGrid::new(1e-6 * shape.b, args.rmax * shape.b, args.grid_points)?;
    let (n, l_r) = (model.n, model.l_r);
    let e_exact = atom::quantized_energy(n, l_r, shape.b);

    let mut report = Report::new("verify");
    model_params(&mut report, model, mass);
    report.param("grid_points", args.grid_points);
    report.param("rmax", args.rmax);
    report.param("tol", args.tol);
    report.columns = [
        "g",
        "n_r",
        "E_exact",
        "E_oracle",
        "eigen_rel_error",
        "oracle_nodes",
        "l2_error",
        "ode_residual",
        "termination_residual",
        "status",
    ]
    .map(String::from)
    .to_vec();

    let couplings = match args.g {
        Some(g) => vec![g],
        None => atom::solve_g(n, l_r, &shape)?,
    };
    for g in couplings {
        let atom_g = shape.with_coupling(g);
        let heun_params = atom::heun_parameters(&atom_g, l_r, e_exact)?;
        let coeffs = heun::series_coefficients(&heun_params, n + 2)?;
        let v = coeffs.values();
        let scale = v[..=n].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let termination = v[n + 1].abs() / scale;
        let term_ok = termination < VERIFY_TERMINATION_TOL;
        report.check(format!("g={} termination", format_significant(g, 12)), termination, VERIFY_TERMINATION_TOL, term_ok);

        match atom::radial_solution(n, l_r, &shape, g) {
            Ok(sol) => {
                let pairs = oracle::radial_eigensolve(&atom_g, l_r, &grid, sol.n_r() + 1)?;
                let pair = &pairs[sol.n_r()];
                let rel = (pair.extrapolated - e_exact).abs() / e_exact.abs();
                let l2 = eigenfunction_mismatch(pair, &sol);
                let ode = max_ode_residual(&sol);
                let label = format!("g={}", format_significant(g, 12));
                let eig_ok = rel < args.tol && !pair.grid_warning;
                let node_ok = pair.node_count == sol.n_r();
                report.check(format!("{label} eigenvalue"), rel, args.tol, eig_ok);
                report.check(format!("{label} nodes"), pair.node_count as f64, sol.n_r() as f64, node_ok);
                report.check(format!("{label} l2"), l2, VERIFY_L2_TOL, l2 < VERIFY_L2_TOL);
                report.check(format!("{label} ode"), ode, VERIFY_ODE_TOL, ode < VERIFY_ODE_TOL);
                let pass = term_ok && eig_ok && node_ok && l2 < VERIFY_L2_TOL && ode < VERIFY_ODE_TOL;
                report.rows.push(vec![
                    g.into(),
                    sol.n_r().into(),
                    e_exact.into(),
                    pair.extrapolated.into(),
                    rel.into(),
                    pair.node_count.into(),
                    l2.into(),
                    ode.into(),
                    termination.into(),
                    if pass { "PASS" } else { "FAIL" }.into(),
                ]);
            }
            Err(Error::NotTerminated { .. }) => {
                // Not an exact solution: report the nearest oracle level.
                let pairs = oracle::radial_eigensolve(&atom_g, l_r, &grid, n + 2)?;
                let nearest = pairs
                    .iter()
                    .min_by(|a, b| {
                        (a.extrapolated - e_exact)
                            .abs()
                            .total_cmp(&(b.extrapolated - e_exact).abs())
                    })
                    .expect("at least one oracle state");
                let rel = (nearest.extrapolated - e_exact).abs() / e_exact.abs();
                report.rows.push(vec![
                    g.into(),
                    "".into(),
                    e_exact.into(),
                    nearest.extrapolated.into(),
                    rel.into(),
                    nearest.node_count.into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                    termination.into(),
                    "FAIL".into(),
                ]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(report)
}

pub fn cmd_density(args: &DensityArgs) -> CliResult<Report> {
    let model = &args.model;
    let shape = shape_from(model)?;
    let mass = mass_from(model)?;
    if args.grid_points < 2 || !positive(args.rmax) {
        return Err(CliError::Usage(
            "--grid-points must be at least 2 and --rmax positive".into(),
        ));
    }
    let radii = groundstate::uniform_radii(args.rmax * shape.b, args.grid_points);
    let mut report = Report::new("density");
    model_params(&mut report, model, mass);
    report.param("nr", args.n_r);

    let solutions = atom::solve_class(model.n, model.l_r, &shape)?;
    let sol = solutions
        .iter()
        .find(|s| s.n_r() == args.n_r)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "no class-{} solution with {} nodes",
                model.n, args.n_r
            ))
        })?;
    report.param("g", sol.g_root());

    if model.n == 1 && model.l_r == 0 && args.n_r == 0 {
        let gs = GroundState::from_solution(sol)?;
        report.param("method", "closed-form");
        report.param("v1", gs.v1);
        report.param("normalization", gs.normalization);
        report.param("E_total", gs.energy_total);
        report.columns = vec!["r1".into(), "rho".into()];
        if !args.closed_form_only {
            report.columns.push("rho_numeric".into());
        }
        let mut worst: f64 = 0.0;
        for &r in &radii {
            let rho = gs.density(r);
            let mut row: Vec<Cell> = vec![r.into(), rho.into()];
            if !args.closed_form_only {
                let numeric = gs.density_numeric(r, args.tol)?;
                if rho > 0.0 {
                    worst = worst.max((numeric - rho).abs() / rho);
                }
                row.push(numeric.into());
            }
            report.rows.push(row);
        }
        if !args.closed_form_only {
            report.check("closed form vs quadrature", worst, 1e-8, worst < 1e-8);
        }
    } else {
        report.param("method", "numeric");
        report.columns = vec!["r1".into(), "rho".into()];
        for &r in &radii {
            let rho = groundstate::numeric_density(sol, r, args.tol)?;
            report.rows.push(vec![r.into(), rho.into()]);
        }
    }
    Ok(report)
}

fn parse_pair(s: &str) -> CliResult<[usize; 4]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!("--pair expects n,l,n',l' but got {s:?}")));
    }
    let mut out = [0; 4];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p
            .parse()
            .map_err(|_| CliError::Usage(format!("--pair entry {p:?} is not a nonnegative integer")))?;
    }
    Ok(out)
}

pub fn cmd_limits(args: &LimitsArgs) -> CliResult<Report> {
    if !positive(args.b) || !positive(args.d_over_b) || args.levels == 0 {
        return Err(CliError::Usage(
            "--b and --d-over-b must be positive and --levels at least 1".into(),
        ));
    }
    let pairs = args
        .pairs
        .iter()
        .map(|p| parse_pair(p))
        .collect::<CliResult<Vec<_>>>()?;

    let mut report = Report::new("limits");
    report.param("g", args.g);
    report.param("b", args.b);
    report.param("levels", args.levels);
    let entries: Vec<LimitSpectrumEntry> = match args.regime {
        RegimeArg::SmallD => {
            report.param("regime", "small-d");
            limits::small_d_spectrum(args.g, args.b, args.levels)?
        }
        RegimeArg::LargeD => {
            report.param("regime", "large-d");
            report.param("d_over_b", args.d_over_b);
            let atom = atom::AtomParameters::new(args.b, args.d_over_b * args.b, args.g, NucleusMass::Infinite)?;
            report.param("gamma_renorm", limits::gamma_renorm(&atom));
            limits::large_d_spectrum(&atom, args.levels)?
        }
    };

    let groups = limits::degenerate_groups(&entries, 1e-12);
    let mut group_of = vec![String::new(); entries.len()];
    for (gi, members) in groups.iter().enumerate() {
        for &i in members {
            group_of[i] = format!("G{}", gi + 1);
        }
    }
    report.columns = ["n_r", "l_r", "energy", "degenerate_group"].map(String::from).to_vec();
    for (e, group) in entries.iter().zip(group_of) {
        report
            .rows
            .push(vec![e.n_r.into(), e.l_r.into(), e.energy.into(), group.into()]);
    }

    for [n1, l1, n2, l2] in pairs {
        let name = format!("degeneracy_g({n1},{l1};{n2},{l2})");
        match limits::small_d_degeneracy_g(n1, l1, n2, l2) {
            Some(g) => report.check(name, g, limits::DEGENERACY_TOL, true),
            None => report.check(name, f64::NAN, limits::DEGENERACY_TOL, false),
        }
    }
    Ok(report)
}

pub fn cmd_figure(args: &FigureArgs) -> CliResult<Report> {
    if let Some(p) = args.grid_points {
        if p < 2 {
            return Err(CliError::Usage("--grid-points must be at least 2".into()));
        }
    }
    if let Some(r) = args.rmax {
        if !positive(r) {
            return Err(CliError::Usage("--rmax must be positive".into()));
        }
    }
    let shape = AtomShape::new(1.0, 1.0)?;
    match args.which {
        Figure::Fig2 => {
            let radii = groundstate::uniform_radii(args.rmax.unwrap_or(4.0), args.grid_points.unwrap_or(401));
            let solutions = atom::solve_class(1, 0, &shape)?;
            let by_nodes = |k: usize| {
                solutions
                    .iter()
                    .find(|s| s.n_r() == k)
                    .ok_or_else(|| CliError::Domain(Error::Internal(format!("no solution with {k} nodes"))))
            };
            let ground = by_nodes(0)?;
            let excited = by_nodes(1)?;
            let mut report = Report::new("figure fig2");
            report.param("d_over_b", 1.0);
            report.param("E_r", ground.energy_r());
            report.param("g_ground", ground.g_root());
            report.param("v1_ground", ground.v()[0]);
            report.param("g_excited", excited.g_root());
            report.param("v1_excited", excited.v()[0]);
            report.columns = ["r", "R_g26", "R_g12"].map(String::from).to_vec();
            for r in radii {
                report
                    .rows
                    .push(vec![r.into(), ground.radial(r).into(), excited.radial(r).into()]);
            }
            Ok(report)
        }
        Figure::Fig3 => {
            let gs = GroundState::new(&shape)?;
            let radii = groundstate::uniform_radii(
                args.rmax.unwrap_or(groundstate::DEFAULT_PROFILE_EXTENT),
                args.grid_points.unwrap_or(groundstate::DEFAULT_PROFILE_POINTS),
            );
            let profile = gs.density_profile(&radii);
            let mut report = Report::new("figure fig3");
            report.param("d_over_b", 1.0);
            report.param("g", gs.g_root);
            report.param("v1", gs.v1);
            report.param("normalization", gs.normalization);
            report.param("E_total", gs.energy_total);
            report.columns = vec!["r1".into(), "rho".into()];
            for (r, v) in profile.radii.iter().zip(&profile.values) {
                report.rows.push(vec![(*r).into(), (*v).into()]);
            }
            Ok(report)
        }
    }
}

fn emit(report: &Report, output: &OutputArgs) -> CliResult<()> {
    let text = report.render(output.format);
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Runs a parsed command; returns the exit code on success paths.
pub fn run(cli: &Cli) -> CliResult<u8> {
    let (report, output, is_verify) = match &cli.command {
        Command::Solve(a) => (cmd_solve(a)?, &a.output, false),
        Command::Verify(a) => (cmd_verify(a)?, &a.output, true),
        Command::Density(a) => (cmd_density(a)?, &a.output, false),
        Command::Limits(a) => (cmd_limits(a)?, &a.output, false),
        Command::Figure(a) => (cmd_figure(a)?, &a.output, false),
    };
    emit(&report, output)?;
    if is_verify && !report.all_pass() {
        eprintln!("verification failed");
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}

/// Parses `args`, runs, and maps every outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return EXIT_USAGE;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_formatting() {
        assert_eq!(format_significant(26.0, 12), "26");
        assert_eq!(format_significant(5.5, 12), "5.5");
        assert_eq!(format_significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_significant(-2.0, 12), "-2");
        assert_eq!(format_significant(1.5e-17, 12), "1.5e-17");
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(f64::NAN, 12), "nan");
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("1,0,0,3").unwrap(), [1, 0, 0, 3]);
        assert!(parse_pair("1,0,0").is_err());
        assert!(parse_pair("1,a,0,3").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(main_with_args(["screened-atom", "solve", "--bogus"]), EXIT_USAGE);
        assert_eq!(main_with_args(["screened-atom", "solve", "--b", "-1"]), EXIT_USAGE);
        assert_eq!(main_with_args(["screened-atom", "solve", "--N", "0"]), EXIT_USAGE);
    }

    #[test]
    fn domain_errors_exit_two() {
        let code = main_with_args([
            "screened-atom",
            "limits",
            "small-d",
            "--g",
            "-1",
            "--out",
            "/dev/null",
        ]);
        assert_eq!(code, EXIT_DOMAIN);
    }

    #[test]
    fn io_errors_exit_four() {
        let code = main_with_args([
            "screened-atom",
            "figure",
            "fig3",
            "--out",
            "/nonexistent-dir/x.csv",
        ]);
        assert_eq!(code, EXIT_IO);
    }

    #[test]
    fn json_shape() {
        let cli = Cli::try_parse_from(["screened-atom", "solve", "--format", "json"]).unwrap();
        let Command::Solve(args) = &cli.command else { unreachable!() };
        let report = cmd_solve(args).unwrap();
        let v: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert!(v["params"].is_object());
        assert_eq!(v["results"].as_array().unwrap().len(), 2);
        assert!(v["checks"].is_array());
        assert_eq!(v["results"][0]["v_1"].to_string(), "0.33333333333333331");
        assert_eq!(v["results"][1]["g"].to_string(), "26");
    }
}
