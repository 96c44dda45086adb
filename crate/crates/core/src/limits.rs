//! Closed-form spectra of the relative motion in the two limits of the
//! screening length.
//!
//! For `d → 0` the interaction is `g/(2r²)` and only shifts the effective
//! angular momentum of an isotropic oscillator. For `d → ∞` it is a constant
//! minus a quadratic, which renormalizes the oscillator strength by
//! `γ = 1 − g b⁴/d⁴`.

use serde::Serialize;

use crate::atom::AtomParameters;
use crate::error::{Error, Result};

/// Energies closer than this are treated as one level.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    SmallD,
    LargeD,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSpectrumEntry {
    pub n_r: usize,
    pub l_r: usize,
    pub energy: f64,
    pub regime: Regime,
    /// `1 − g b⁴/d⁴`, only in the large-d regime.
    pub gamma_renorm: Option<f64>,
}

/// `(1/b²)(1 + 2n + √(g + (l + 1/2)²))`
pub fn small_d_energy(n_r: usize, l_r: usize, g: f64, b: f64) -> Result<f64> {
    let l_half = l_r as f64 + 0.5;
    let arg = g + l_half * l_half;
    if arg < 0.0 {
        return Err(Error::Domain(format!(
            "g = {g} is below -(l + 1/2)² = {}: the inverse-square well collapses",
            -l_half * l_half
        )));
    }
    Ok((1.0 + 2.0 * n_r as f64 + arg.sqrt()) / (b * b))
}

/// The coupling at which the small-d levels `(n, l)` and `(n', l')` meet,
///
/// ```text
/// g = (Δl² − 4Δn²)/(16Δn²) · ((l + l' + 1)² − 4Δn²)
/// ```
///
/// The formula comes from squaring the level equality, so its value is
/// accepted only if the two energies really agree there.
pub fn small_d_degeneracy_g(n_r: usize, l_r: usize, n_r2: usize, l_r2: usize) -> Option<f64> {
    let dn = n_r as f64 - n_r2 as f64;
    if dn == 0.0 {
        return None;
    }
    let dl = l_r as f64 - l_r2 as f64;
    let lsum = (l_r + l_r2 + 1) as f64;
    let g = (dl * dl - 4.0 * dn * dn) / (16.0 * dn * dn) * (lsum * lsum - 4.0 * dn * dn);
    let e1 = small_d_energy(n_r, l_r, g, 1.0).ok()?;
    let e2 = small_d_energy(n_r2, l_r2, g, 1.0).ok()?;
    ((e1 - e2).abs() <= DEGENERACY_TOL * e1.abs().max(1.0)).then_some(g)
}

/// `γ = 1 − g b⁴/d⁴`
pub fn gamma_renorm(atom: &AtomParameters) -> f64 {
    let ratio = atom.b / atom.d;
    1.0 - atom.g * ratio.powi(4)
}

/// `g/(2d²) + (√γ/(2b²))(3 + 4n + 2l)`
pub fn large_d_energy(n_r: usize, l_r: usize, atom: &AtomParameters) -> Result<f64> {
    let gamma = gamma_renorm(atom);
    if gamma <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma = 1 - g b^4/d^4 = {gamma} is not positive: no bound states"
        )));
    }
    let ladder = 3.0 + 4.0 * n_r as f64 + 2.0 * l_r as f64;
    Ok(atom.g / (2.0 * atom.d * atom.d) + gamma.sqrt() / (2.0 * atom.b * atom.b) * ladder)
}

/// `2(n − n') + (l − l') = 0`
pub fn large_d_degenerate(n_r: usize, l_r: usize, n_r2: usize, l_r2: usize) -> bool {
    2 * n_r + l_r == 2 * n_r2 + l_r2
}

fn lowest<F>(levels: usize, regime: Regime, gamma_renorm: Option<f64>, energy: F) -> Result<Vec<LimitSpectrumEntry>>
where
    F: Fn(usize, usize) -> Result<f64>,
{
    // Energies rise with both n and l in either regime, so the lowest
    // `levels` states lie inside this box.
    let mut entries = Vec::new();
    for n_r in 0..levels.max(1) {
        for l_r in 0..levels.max(1) {
            entries.push(LimitSpectrumEntry {
                n_r,
                l_r,
                energy: energy(n_r, l_r)?,
                regime,
                gamma_renorm,
            });
        }
    }
    entries.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(b.n_r.cmp(&a.n_r))
    });
    entries.truncate(levels);
    Ok(entries)
}

/// The `levels` lowest small-d states, ascending in energy.
pub fn small_d_spectrum(g: f64, b: f64, levels: usize) -> Result<Vec<LimitSpectrumEntry>> {
    lowest(levels, Regime::SmallD, None, |n, l| small_d_energy(n, l, g, b))
}

/// The `levels` lowest large-d states, ascending in energy.
pub fn large_d_spectrum(atom: &AtomParameters, levels: usize) -> Result<Vec<LimitSpectrumEntry>> {
    let gamma = gamma_renorm(atom);
    lowest(levels, Regime::LargeD, Some(gamma), |n, l| large_d_energy(n, l, atom))
}

/// Groups of indices into `entries` (assumed sorted by energy) whose
/// energies coincide within `tol` relative. Singletons are omitted.
pub fn degenerate_groups(entries: &[LimitSpectrumEntry], tol: f64) -> Vec<Vec<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=entries.len() {
        let split = i == entries.len() || {
            let e0 = entries[start].energy;
            (entries[i].energy - e0).abs() > tol * e0.abs().max(1.0)
        };
        if split {
            if i - start > 1 {
                groups.push((start..i).collect());
            }
            start = i;
        }
    }
    groups
}
