use proptest::prelude::*;

use screened_atom::atom::{self, AtomParameters, AtomShape, NucleusMass, Vec3};
use screened_atom::groundstate::GroundState;
use screened_atom::limits;
use screened_atom::oracle::{self, RadialGrid};

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn vec3() -> impl Strategy<Value = Vec3> {
    [-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0]
}

/// Rotation by `angle` about the normalized `axis` (Rodrigues).
fn rotate(v: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let n = dot(axis, axis).sqrt();
    let k = axis.map(|x| x / n);
    let (s, c) = angle.sin_cos();
    let cross = [
        k[1] * v[2] - k[2] * v[1],
        k[2] * v[0] - k[0] * v[2],
        k[0] * v[1] - k[1] * v[0],
    ];
    let kv = dot(k, v);
    [0, 1, 2].map(|i| v[i] * c + cross[i] * s + k[i] * kv * (1.0 - c))
}

proptest! {
    #[test]
    fn jacobi_coordinates_preserve_the_quadratic_form(r1 in vec3(), r2 in vec3(), r3 in vec3(), m in 0.5f64..5000.0) {
        let j = atom::jacobi_transform(r1, r2, r3, NucleusMass::Finite(m));
        let rel = [0, 1, 2].map(|i| r1[i] - r2[i]);
        prop_assert!((2.0 * dot(j.relative, j.relative) - dot(rel, rel)).abs() < 1e-10);

        // the confinement acts on positions relative to the nucleus
        let x1 = [0, 1, 2].map(|i| r1[i] - r3[i]);
        let x2 = [0, 1, 2].map(|i| r2[i] - r3[i]);
        let lhs = dot(x1, x1) + dot(x2, x2);
        let rhs = dot(j.pseudo_relative, j.pseudo_relative) + dot(j.relative, j.relative);
        prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.max(1.0));

        let total = 2.0 + m;
        for i in 0..3 {
            let com = (r1[i] + r2[i] + m * r3[i]) / total;
            prop_assert!((j.center_of_mass[i] - com).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_state_is_rotation_invariant(
        r1 in vec3(), r2 in vec3(), axis in vec3(), angle in 0.0f64..6.3, d_over_b in 0.5f64..2.0,
    ) {
        prop_assume!(dot(axis, axis) > 1e-3);
        let gs = GroundState::new(&AtomShape::from_ratio(1.0, d_over_b).unwrap()).unwrap();
        let before = gs.wavefunction(r1, r2);
        let after = gs.wavefunction(rotate(r1, axis, angle), rotate(r2, axis, angle));
        prop_assert!((before - after).abs() <= 1e-12 * before.abs().max(1e-300));
        let swapped = gs.wavefunction(r2, r1);
        prop_assert!((before - swapped).abs() <= 1e-15 * before.abs());
    }

    #[test]
    fn density_is_nonnegative(r in 0.0f64..12.0, d_over_b in 0.2f64..4.0) {
        let gs = GroundState::new(&AtomShape::from_ratio(1.0, d_over_b).unwrap()).unwrap();
        prop_assert!(gs.density(r) >= 0.0);
    }

    #[test]
    fn large_d_predicate_tracks_energy_equality(
        n1 in 0usize..8, l1 in 0usize..10, n2 in 0usize..8, l2 in 0usize..10, g in 0.0f64..50.0,
    ) {
        let atom = AtomParameters::new(1.0, 10.0, g, NucleusMass::Infinite).unwrap();
        let e1 = limits::large_d_energy(n1, l1, &atom).unwrap();
        let e2 = limits::large_d_energy(n2, l2, &atom).unwrap();
        let equal = (e1 - e2).abs() <= 1e-12 * e1.abs();
        prop_assert_eq!(limits::large_d_degenerate(n1, l1, n2, l2), equal);
    }

    #[test]
    fn energies_scale_as_inverse_square_of_b(n in 1usize..6, l in 0usize..5, b in 0.1f64..10.0) {
        let e = atom::quantized_energy(n, l, b);
        prop_assert!((e * b * b - atom::quantized_energy(n, l, 1.0)).abs() < 1e-12 * e * b * b);
    }
}

fn l2_mismatch(pair: &oracle::OracleEigenpair, sol: &atom::PolynomialSolution) -> f64 {
    screened_atom::cli::eigenfunction_mismatch(pair, sol)
}

#[test]
fn oracle_agrees_with_every_low_class_root() {
    let shape = AtomShape::new(1.0, 1.0).unwrap();
    let grid = RadialGrid::default_for(1.0);
    for n in 1..=2 {
        for l_r in 0..=1 {
            for sol in atom::solve_class(n, l_r, &shape).unwrap() {
                let pairs = oracle::radial_eigensolve(sol.atom(), l_r, &grid, sol.n_r() + 1).unwrap();
                let pair = &pairs[sol.n_r()];
                let rel = (pair.extrapolated - sol.energy_r()).abs() / sol.energy_r();
                assert!(rel < 1e-4, "N={n} l={l_r} g={}: {rel}", sol.g_root());
                assert_eq!(pair.node_count, sol.n_r());
                assert!(l2_mismatch(pair, &sol) < 1e-3);
            }
        }
    }
}

#[test]
fn eigenfunction_mismatch_shrinks_under_refinement() {
    let shape = AtomShape::new(1.0, 1.0).unwrap();
    let sol = atom::radial_solution(1, 0, &shape, 12.0).unwrap();
    let mut previous = f64::INFINITY;
    for points in [500, 1000, 2000, 4000] {
        let grid = RadialGrid::new(1e-6, 10.0, points).unwrap();
        let pairs = oracle::radial_eigensolve(sol.atom(), 0, &grid, 2).unwrap();
        let err = l2_mismatch(&pairs[1], &sol);
        assert!(err < previous, "{points}: {err} vs {previous}");
        previous = err;
    }
    assert!(previous < 1e-5);
}

#[test]
fn small_d_limit_matches_oracle() {
    let b = 1.0;
    let d = 1e-3;
    for (g, l_r, states) in [(3.75, 0, 2), (10.0, 1, 2)] {
        let atom = AtomParameters::new(b, d, g, NucleusMass::Infinite).unwrap();
        let grid = RadialGrid::new(1e-6, 10.0, 8000).unwrap();
        let pairs = oracle::radial_eigensolve(&atom, l_r, &grid, states).unwrap();
        for (n_r, pair) in pairs.iter().enumerate() {
            let exact = limits::small_d_energy(n_r, l_r, g, b).unwrap();
            let rel = (pair.extrapolated - exact).abs() / exact;
            assert!(rel < 1e-3, "g={g} ({n_r},{l_r}): {} vs {exact}", pair.extrapolated);
        }
    }
}

#[test]
fn large_d_limit_matches_oracle() {
    let atom = AtomParameters::new(1.0, 1e3, 1e6, NucleusMass::Infinite).unwrap();
    let gamma = limits::gamma_renorm(&atom);
    assert!((gamma - (1.0 - 1e-6)).abs() < 1e-15);
    let grid = RadialGrid::default_for(1.0);
    for l_r in 0..=2 {
        let pairs = oracle::radial_eigensolve(&atom, l_r, &grid, 3).unwrap();
        for (n_r, pair) in pairs.iter().enumerate() {
            let exact = limits::large_d_energy(n_r, l_r, &atom).unwrap();
            let rel = (pair.extrapolated - exact).abs() / exact;
            assert!(rel < 1e-7, "({n_r},{l_r}): {} vs {exact}", pair.extrapolated);
        }
    }
}

#[test]
fn finite_mass_total_energy() {
    let e = atom::assemble_total_energy([0.0; 3], NucleusMass::Finite(2.0), 1.0, 0, 0, 5.5);
    let expected = 2f64.sqrt() * 1.5 + 5.5;
    assert!((e - expected).abs() < 1e-14, "{e}");
    let infinite = atom::assemble_total_energy([0.0; 3], NucleusMass::Infinite, 1.0, 0, 0, 5.5);
    assert_eq!(infinite, 7.0);
}
