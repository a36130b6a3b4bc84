//! Property tests over random parameter sets.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use eitsim::checks::superoperator_properties;
use eitsim::dynamics::{build_liouvillian, steady_state};
use eitsim::hilbert::{annihilator, atomic_sigma, build_space, creator, photon_number, Operator};
use eitsim::model::{
    decay_operator, effective_hamiltonian, excitation_number, hermitian_hamiltonian, ModelParams,
};
use eitsim::spectra::{
    diagonalize_manifold, kerr_shift_numeric, manifold_block, perturbative_shift, trapping_state,
    ShiftModel,
};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

prop_compose! {
    fn params(max_atoms: usize, max_photons: usize)(
        n_atoms in 1..=max_atoms,
        n_max in 1..=max_photons,
        g13 in 0.1..10.0f64,
        g24 in 0.0..10.0f64,
        omega in 0.1..10.0f64,
        gamma31 in 0.0..1.0f64,
        gamma32 in 0.0..1.0f64,
        gamma4 in 0.0..1.0f64,
        delta in -10.0..10.0f64,
        big_delta in -10.0..10.0f64,
        eps_p in 0.0..0.5f64,
    ) -> ModelParams {
        ModelParams {
            n_atoms, n_max, g13, g24, omega, kappa: 1.0, gamma31, gamma32, gamma4, delta, big_delta, eps_p,
        }
    }
}

fn identity_error(op: &Operator) -> f64 {
    op.max_abs_diff(&Operator::identity(op.space()))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn space_indexing_is_a_bijection(n_atoms in 1usize..=3, n_max in 0usize..=4) {
        let s = build_space(n_atoms, n_max).unwrap();
        prop_assert_eq!(s.dim(), (n_max + 1) * 4usize.pow(n_atoms as u32));
        for i in 0..s.dim() {
            prop_assert_eq!(s.index(&s.label(i)), Some(i));
        }
    }

    #[test]
    fn level_projectors_resolve_identity(n_atoms in 1usize..=3, n_max in 0usize..=3) {
        let s = build_space(n_atoms, n_max).unwrap();
        for k in 1..=n_atoms {
            let mut sum = Operator::zero(&s);
            for l in 1..=4 {
                let p = atomic_sigma(&s, l, l, k).unwrap();
                prop_assert_eq!(p.nnz(), s.dim() / 4);
                sum = &sum + &p;
            }
            prop_assert_eq!(identity_error(&sum), 0.0);
        }
    }

    #[test]
    fn canonical_commutator_below_cutoff(n_atoms in 1usize..=2, n_max in 1usize..=5) {
        let s = build_space(n_atoms, n_max).unwrap();
        let a = annihilator(&s);
        prop_assert!(a.nnz() <= s.dim());
        prop_assert_eq!(a.adjoint().adjoint().max_abs_diff(&a), 0.0);
        let c = a.commutator(&creator(&s));
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let expected = if i == j && s.photons_of(i) < n_max { 1.0 } else if i == j { -(n_max as f64) } else { 0.0 };
                prop_assert!((c.get(i, j) - C64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
        let n = photon_number(&s);
        prop_assert!(n.max_abs_diff(&(&creator(&s) * &a)) < 1e-12);
    }

    #[test]
    fn effective_hamiltonian_conserves_excitations(p in params(3, 2)) {
        let s = p.space().unwrap();
        let h = effective_hamiltonian(&p, &s).unwrap();
        let n = excitation_number(&s);
        prop_assert!(h.commutator(&n).max_abs() <= 1e-12);
        let split = &hermitian_hamiltonian(&p, &s, false).unwrap() - &(&decay_operator(&p, &s).unwrap() * C64::new(0.0, 0.5));
        prop_assert!(h.max_abs_diff(&split) <= 1e-12);
        let driven = hermitian_hamiltonian(&p, &s, true).unwrap();
        prop_assert!(driven.hermiticity_error() <= 1e-12);
        if p.eps_p > 0.0 {
            prop_assert!(driven.commutator(&n).max_abs() > 0.0);
        }
    }

    #[test]
    fn manifolds_are_dissipative_and_biorthonormal(p in params(2, 2)) {
        let q = ModelParams { n_max: 2, ..p };
        let s = q.space().unwrap();
        let h = effective_hamiltonian(&q, &s).unwrap();
        for n in 1..=2 {
            let spec = diagonalize_manifold(&manifold_block(&h, n).unwrap()).unwrap();
            for e in &spec.eigenvalues {
                prop_assert!(e.im <= 1e-10, "eigenvalue {} in manifold {}", e, n);
            }
            prop_assert!(spec.biorthogonality_error() <= 1e-8);
        }
    }

    #[test]
    fn lossless_trapping_states_are_null(n_atoms in 1usize..=3, g13 in 0.1..10.0f64, omega in 0.1..10.0f64, g24 in 0.0..10.0f64) {
        let p = ModelParams { n_atoms, n_max: 2, g13, omega, g24, delta: 0.0, big_delta: 0.0, eps_p: 0.0, ..ModelParams::fig2() }.lossless();
        let s = p.space().unwrap();
        let h = effective_hamiltonian(&p, &s).unwrap();
        let v1 = trapping_state(&p, &s, 1).unwrap();
        prop_assert!(norm(&h.apply(&v1)) <= 1e-10 * g13.max(omega));
        let h0 = effective_hamiltonian(&ModelParams { g24: 0.0, ..p }, &s).unwrap();
        let v2 = trapping_state(&p, &s, 2).unwrap();
        prop_assert!(norm(&h0.apply(&v2)) <= 1e-10 * g13.max(omega));
    }

    #[test]
    fn degenerate_pair_keeps_an_unshifted_state(g13 in 0.5..10.0f64, omega in 0.5..10.0f64, ratio in 0.0..2.0f64) {
        let p = ModelParams { n_atoms: 2, n_max: 2, g13, omega, g24: ratio * g13, delta: 0.0, big_delta: 0.0, ..ModelParams::fig2() }.lossless();
        let s = p.space().unwrap();
        let spec = diagonalize_manifold(&manifold_block(&effective_hamiltonian(&p, &s).unwrap(), 2).unwrap()).unwrap();
        let two = creator(&s).apply(&creator(&s).apply(&s.ground_vector()));
        let found = (0..spec.dim()).any(|i| {
            spec.eigenvalues[i].norm() <= 1e-8 && spec.left_component(i, &two).norm() > 1e-6
        });
        prop_assert!(found);
    }

    #[test]
    fn single_atom_kerr_shift_matches_closed_form(g13 in 2.0..10.0f64, omega in 0.5..5.0f64, g24 in 0.1..2.0f64, ratio in 50.0..200.0f64) {
        let p = ModelParams { g13, omega, g24, big_delta: ratio * g24, ..ModelParams::fig2() };
        let numeric = kerr_shift_numeric(&p, ShiftModel::Kerr).unwrap();
        let formula = perturbative_shift(&p).unwrap().value;
        prop_assert!((numeric - formula).abs() <= 0.05 * formula.abs(), "numeric {} formula {}", numeric, formula);
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn liouvillian_preserves_trace_and_hermiticity(p in params(1, 2), seed in any::<u64>()) {
        let l = build_liouvillian(&p, &p.space().unwrap()).unwrap();
        let (trace, herm) = superoperator_properties(&l, 10, seed).unwrap();
        prop_assert!(trace <= 1e-10);
        prop_assert!(herm <= 1e-10);
    }

    #[test]
    fn steady_state_is_a_physical_fixed_point(p in params(1, 3)) {
        let q = ModelParams { eps_p: p.eps_p.max(0.01), ..p };
        let l = build_liouvillian(&q, &q.space().unwrap()).unwrap();
        let rho = steady_state(&l).unwrap();
        prop_assert!(l.residual(&rho) <= 1e-9);
        prop_assert!((rho.trace() - 1.0).norm() <= 1e-10);
        prop_assert!(rho.hermiticity_error() <= 1e-10);
        prop_assert!(rho.min_eigenvalue().unwrap() >= -1e-8);
    }
}

/// At the strongly coupled single-atom set the shift error stays inside
/// `3 (g24/Δ)²`; away from it loss adds a Δ-independent error.
#[test]
fn kerr_shift_error_scales_with_detuning_at_strong_coupling() {
    for g24 in [1.0, 7.5] {
        for ratio in [50.0, 100.0] {
            let p = ModelParams { g24, big_delta: ratio * g24, ..ModelParams::fig2() };
            let numeric = kerr_shift_numeric(&p, ShiftModel::Kerr).unwrap();
            let formula = perturbative_shift(&p).unwrap().value;
            let bound = 3.0 / (ratio * ratio);
            assert!((numeric - formula).abs() <= bound * formula.abs(), "g24={g24} ratio={ratio}");
        }
    }
}
