use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use screened_atom::atom::{self, AtomShape};
use screened_atom::heun::{self, HeunParameters, DEFAULT_MAX_TERMS, DEFAULT_SERIES_TOL};
use screened_atom::oracle;

fn random_params(rng: &mut ChaCha8Rng) -> HeunParameters {
    HeunParameters::new(
        rng.gen_range(0.1..2.0),
        rng.gen_range(-0.5..2.5),
        rng.gen_range(0.2..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
    )
    .unwrap()
}

#[test]
fn series_matches_ode_on_random_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    while checked < 20 {
        let params = random_params(&mut rng);
        if params.candidate_degree(1e-6).is_some() {
            continue;
        }
        let xi = rng.gen_range(-0.9..0.9);
        let series = heun::evaluate(&params, xi, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS).unwrap();
        assert!(series.converged);
        let ode = oracle::integrate_heun_ode(&params, xi, oracle::DEFAULT_ODE_STEPS).unwrap();
        let rel = (series.value - ode).abs() / ode.abs().max(1e-300);
        assert!(rel < 1e-8, "{params:?} xi={xi}: series {} vs ode {ode}", series.value);
        checked += 1;
    }
}

#[test]
fn endpoint_of_unit_disk_is_rejected_for_infinite_series() {
    let params = HeunParameters::new(1.0, 0.5, 1.0, -1.375, -0.875).unwrap();
    assert!(heun::evaluate(&params, 1.0, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS).is_err());
    assert!(heun::evaluate(&params, -1.5, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS).is_err());
}

/// μ roots from the eigenvalues of the symmetrized termination matrix.
fn symmetric_mu_roots(n: usize, l_r: usize, d_over_b: f64) -> Vec<f64> {
    let t0 = atom::termination_matrix(n, l_r, d_over_b, 0.0);
    let sym = DMatrix::from_fn(n + 1, n + 1, |i, j| {
        if i == j {
            t0[(i, i)]
        } else if i + 1 == j || j + 1 == i {
            let (a, b) = (i.min(j), i.max(j));
            (t0[(a, b)] * t0[(b, a)]).sqrt()
        } else {
            0.0
        }
    });
    let mut mu: Vec<f64> = sym.symmetric_eigenvalues().iter().map(|e| -e).collect();
    mu.sort_by(f64::total_cmp);
    mu
}

#[test]
fn termination_closure_for_low_classes() {
    for d_over_b in [0.5, 1.0, 2.0] {
        let shape = AtomShape::from_ratio(1.0, d_over_b).unwrap();
        for n in 1..=3 {
            for l_r in 0..=1 {
                let roots = atom::solve_g(n, l_r, &shape).unwrap();
                let mut expected: Vec<f64> = symmetric_mu_roots(n, l_r, d_over_b)
                    .into_iter()
                    .map(|mu| atom::coupling_for_mu(n, l_r, &shape, mu))
                    .collect();
                expected.sort_by(f64::total_cmp);
                assert_eq!(roots.len(), n + 1);
                for (g, e) in roots.iter().zip(&expected) {
                    assert!((g - e).abs() < 1e-9 * e.abs().max(1.0), "N={n} l={l_r}: {g} vs {e}");
                }

                let mut nodes = Vec::new();
                for &g in &roots {
                    let atom_g = shape.with_coupling(g);
                    let e_r = atom::quantized_energy(n, l_r, shape.b);
                    let params = atom::heun_parameters(&atom_g, l_r, e_r).unwrap();
                    let coeffs = heun::series_coefficients(&params, n + 6).unwrap();
                    let v = coeffs.values();
                    let scale = v[..=n].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                    assert!(v[n + 1].abs() < 1e-10 * scale, "v_(N+1) = {}", v[n + 1]);
                    assert_eq!(heun::termination_degree(&coeffs, heun::TERMINATION_TOL), Some(n));
                    for later in &v[n + 2..] {
                        assert!(later.abs() < 1e-9 * scale);
                    }
                    nodes.push(atom::radial_solution(n, l_r, &shape, g).unwrap().n_r());
                }
                nodes.sort_unstable();
                assert_eq!(nodes, (0..=n).collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn determinant_two_ways() {
    for (n, l_r, ratio, mu) in [(3, 0, 1.0, 0.7), (3, 2, 0.8, -4.2), (4, 1, 1.7, 11.0)] {
        let direct = atom::termination_matrix(n, l_r, ratio, mu).determinant();
        let (recurrence, _) = atom::termination_determinant(n, l_r, ratio, mu);
        assert!((direct - recurrence).abs() < 1e-12 * direct.abs().max(1.0), "{direct} vs {recurrence}");
    }
}

proptest! {
    #[test]
    fn mu_nu_match_the_atom_mapping(
        l_r in 0usize..5,
        d_over_b in 0.2f64..3.0,
        g in 0.0f64..80.0,
        e_r in 0.5f64..20.0,
    ) {
        let shape = AtomShape::from_ratio(1.0, d_over_b).unwrap();
        let params = atom::heun_parameters(&shape.with_coupling(g), l_r, e_r).unwrap();
        let alpha = shape.alpha();
        let k2d2 = 2.0 * e_r * shape.d * shape.d;
        let l = l_r as f64;
        let mu = (g - k2d2) / 4.0 + (l + 1.5) * (alpha / 2.0 - 1.0);
        let nu = 1.5 + l + alpha - g / 4.0;
        prop_assert!((params.mu() - mu).abs() <= 1e-12 * mu.abs().max(1.0));
        prop_assert!((params.nu() - nu).abs() <= 1e-12 * nu.abs().max(1.0));
    }

    #[test]
    fn mu_coupling_roundtrip(n in 1usize..5, l_r in 0usize..4, d_over_b in 0.2f64..3.0, g in -10.0f64..100.0) {
        let shape = AtomShape::from_ratio(1.0, d_over_b).unwrap();
        let mu = atom::mu_for_coupling(n, l_r, &shape, g);
        let back = atom::coupling_for_mu(n, l_r, &shape, mu);
        prop_assert!((back - g).abs() < 1e-10 * g.abs().max(1.0));
    }

    #[test]
    fn recurrence_reproduces_first_coefficient(
        alpha in 0.1f64..3.0, beta in -0.9f64..3.0, gamma in 0.1f64..3.0,
        delta in -3.0f64..3.0, eta in -3.0f64..3.0,
    ) {
        let params = HeunParameters::new(alpha, beta, gamma, delta, eta).unwrap();
        let v = heun::series_coefficients(&params, 2).unwrap();
        prop_assert_eq!(v.values()[0], 1.0);
        let v1 = -params.mu() / (beta + 1.0);
        prop_assert!((v.values()[1] - v1).abs() <= 1e-12 * v1.abs().max(1.0));
    }
}
