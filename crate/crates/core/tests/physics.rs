mod common;

use eqlearn::lattice::{act_on_sites, build_group, SiteSet};
use eqlearn::models::{
    act_on_params, correlation_observable, heisenberg_ring, long_range_ising_ring, sample_params,
};
use eqlearn::quantum::{
    apply_permutation, expectation_observable, reduced_density_matrix, solve_model,
    LanczosOptions, Pauli,
};

#[test]
fn lanczos_matches_dense_on_small_rings() {
    for n in [4usize, 6, 8] {
        for spec in [heisenberg_ring(n).unwrap(), long_range_ising_ring(n, 3.0).unwrap()] {
            let x = sample_params(&spec, 31 + n as u64);
            let gs = solve_model(&spec, &x, &LanczosOptions::default()).unwrap();
            let (e0, _, gap) = common::dense_ground_state(&spec, &x);
            assert!((gs.energy - e0).abs() < 1e-9, "{:?} n={n}", spec.family);
            if gap > 1e-6 {
                assert!((gs.gap_estimate - gap).abs() < 1e-6 * gap.max(1.0));
            }
        }
    }
}

#[test]
fn ground_state_covariance() {
    // U_g ρ(x) U_g† = ρ(g⁻¹·x), compared through |⟨U_g ψ(x), ψ(g⁻¹·x)⟩| = 1
    let n = 8;
    let spec = long_range_ising_ring(n, 3.0).unwrap();
    let group = build_group(n, true).unwrap();
    let x = sample_params(&spec, 4);
    let psi = solve_model(&spec, &x, &LanczosOptions::default()).unwrap().state;
    for g in group.elements() {
        let ginv = g.inverse(n);
        let y = act_on_params(&ginv, &x, &spec).unwrap();
        let phi = solve_model(&spec, &y, &LanczosOptions::default().with_seed(9)).unwrap().state;
        let moved = apply_permutation(g, &psi).unwrap();
        let overlap: num_complex::Complex64 =
            moved.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-9, "{g:?}: {}", overlap.norm());
    }
}

#[test]
fn reduced_density_matrices_transport() {
    let n = 6;
    let spec = heisenberg_ring(n).unwrap();
    let group = build_group(n, true).unwrap();
    let x = sample_params(&spec, 12);
    let psi = solve_model(&spec, &x, &LanczosOptions::default()).unwrap().state;
    let set = SiteSet::from([0, 2]);
    for g in group.elements() {
        let gx = act_on_params(g, &x, &spec).unwrap();
        let phi = solve_model(&spec, &gx, &LanczosOptions::default()).unwrap().state;
        let image = act_on_sites(g, &set, n).unwrap();
        // site order follows the map, so reflections swap the two factors
        let ordered: Vec<usize> = set.sites().iter().map(|&s| g.apply(s, n)).collect();
        let a = reduced_density_matrix(&psi, &ordered).unwrap();
        let b = reduced_density_matrix(&phi, set.sites()).unwrap();
        assert!((a - b).norm() < 1e-8, "{g:?} -> {image}");
    }
}

#[test]
fn singlet_like_isotropy_in_heisenberg_ground_states() {
    // SU(2) symmetric ground state: XX, YY, ZZ correlations coincide
    let n = 8;
    let spec = heisenberg_ring(n).unwrap();
    let x = sample_params(&spec, 3);
    let psi = solve_model(&spec, &x, &LanczosOptions::default()).unwrap().state;
    for j in 1..n {
        let vals: Vec<f64> = [Pauli::X, Pauli::Y, Pauli::Z]
            .iter()
            .map(|&p| common::brute_pauli(&psi, &[0, j], &[p, p]))
            .collect();
        assert!((vals[0] - vals[1]).abs() < 1e-8 && (vals[1] - vals[2]).abs() < 1e-8);
        let c = expectation_observable(&psi, &correlation_observable(0, j).unwrap(), &x, None).unwrap();
        assert!((c - vals[2]).abs() < 1e-8);
        assert!(c.abs() <= 1.0 + 1e-12);
    }
}
