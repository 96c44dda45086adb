//! Exact quasi-exactly-solvable states of a two-electron atom with harmonic
//! electron–nucleus confinement and a screened, regularized electron–electron
//! interaction `g/(r₁₂² + 2d²)`.
//!
//! - [`heun`]: confluent Heun series, recurrence and termination.
//! - [`atom`]: the model, the termination couplings `g` and the exact radial
//!   solutions.
//! - [`limits`]: closed-form spectra for `d → 0` and `d → ∞`.
//! - [`groundstate`]: the correlated ground state and its electron density.
//! - [`oracle`]: independent eigensolver, ODE integrator and quadrature.
//! - [`cli`]: the command-line front end.

pub mod atom;
pub mod cli;
pub mod error;
pub mod groundstate;
pub mod heun;
pub mod limits;
pub mod oracle;
pub mod poly;

pub use atom::{
    AtomParameters, AtomShape, NucleusMass, PolynomialSolution, QuantumNumbers, Symmetry,
};
pub use error::{Error, Result};
pub use groundstate::{DensityProfile, GroundState};
pub use heun::{HeunParameters, SeriesCoefficients};
pub use limits::{LimitSpectrumEntry, Regime};
pub use oracle::{OracleEigenpair, RadialGrid};
