use pointspec_core::basis_matrix::{me_delta, me_epsilon_sep};
use pointspec_core::exact_spectrum::{
    duality_check, epsilon_limit_condition, solve_limit_spectrum, transfer_matrix, ContactModel, Element, Sector,
    SpectrumOptions,
};
use pointspec_core::perturbation::second_order_delta;
use pointspec_core::ring_model::{DeltaCoupling, EpsilonCoupling, Parity, Regularization, RingConfig};
use pointspec_core::series_kernels::{pair_kernel, reciprocal_sum, sine_square_closed, sine_square_sum};
use proptest::prelude::*;

fn eps(c: f64) -> EpsilonCoupling<f64> {
    EpsilonCoupling::new(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn epsilon_roots_solve_the_condition_and_stay_in_their_branch(c in 0.001f64..2.0, l in 1.0f64..20.0) {
        let ring = RingConfig::new(l).unwrap();
        let spec = solve_limit_spectrum(ContactModel::Epsilon(eps(c)), &ring, 4, &SpectrumOptions::default()).unwrap();
        let odd: Vec<_> = spec.sector(Sector::Odd).collect();
        prop_assert_eq!(odd.len(), 4);
        for r in odd {
            prop_assert!(epsilon_limit_condition(r.k, eps(c), &ring).abs() < 1e-9);
            // tan(kL/2) = -kc/2 puts the root in (κ_n - π/L, κ_n)
            let kn = ring.kappa(r.index);
            prop_assert!(r.k < kn && r.k > kn - std::f64::consts::PI / l);
        }
        let e = spec.energies();
        prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn transfer_matrices_are_unimodular(w in 0.0f64..3.0, h in -20.0f64..20.0, g in -50.0f64..50.0, k in 0.05f64..8.0) {
        for el in [Element::Free { width: w }, Element::Constant { width: w, height: h }, Element::Spike { strength: g }] {
            let m = transfer_matrix(&el, k);
            prop_assert!((m.det() - 1.0).abs() < 1e-8 * m.trace().abs().max(1.0).powi(2));
        }
    }

    #[test]
    fn matrix_elements_are_symmetric(m in 1usize..60, n in 1usize..60, a in 1e-3f64..1.0, odd in any::<bool>()) {
        let ring = RingConfig::two_pi();
        let sector = if odd { Parity::Odd } else { Parity::Even };
        let a = Regularization::new(a).unwrap();
        prop_assert_eq!(me_delta(m, n, sector, a, &ring).unwrap(), me_delta(n, m, sector, a, &ring).unwrap());
        let e1 = me_epsilon_sep(m, n, sector, a, &ring).unwrap();
        let e2 = me_epsilon_sep(n, m, sector, a, &ring).unwrap();
        prop_assert!((e1 - e2).abs() <= 1e-15 * e1.abs().max(1.0));
    }

    #[test]
    fn pair_kernel_is_symmetric_and_bounded(n in 1usize..500, m in 1usize..500, beta in 1e-4f64..1.5) {
        let k = pair_kernel(n, m, beta);
        prop_assert_eq!(k, pair_kernel(m, n, beta));
        prop_assert!(k.abs() <= 2.0 + 1e-15);
    }

    #[test]
    fn duality_holds_for_random_couplings(c in prop_oneof![-0.8f64..-0.01, 0.01f64..0.8]) {
        let ring = RingConfig::two_pi();
        let opts = SpectrumOptions { include_bound: false, ..Default::default() };
        let spec = solve_limit_spectrum(ContactModel::Epsilon(eps(c)), &ring, 3, &opts).unwrap();
        for r in spec.sector(Sector::Odd) {
            let rep = duality_check(eps(c), &ring, r.k).unwrap();
            prop_assert!(rep.passed(1e-10, 1e-6), "{:?}", rep);
        }
    }

    #[test]
    fn delta_second_order_coefficient(n in 1usize..40, l in 0.5f64..50.0) {
        let ring = RingConfig::new(l).unwrap();
        let want = -1.0 / (l * l * ring.kappa(n).powi(2));
        prop_assert!((second_order_delta(n, &ring).unwrap() - want).abs() <= 1e-10 * want.abs().max(1e-3));
    }

    #[test]
    fn reciprocal_sum_is_rational(n in 1usize..200) {
        let want = -3.0 / (4.0 * (n * n) as f64);
        prop_assert!((reciprocal_sum::<f64>(n, false).unwrap() - want).abs() < 1e-12 * want.abs().max(1e-6));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sine_square_sum_is_closed_form(beta in 0.02f64..3.1) {
        let s = sine_square_sum(beta, 1e-11).unwrap();
        prop_assert!((s - sine_square_closed(beta)).abs() < 1e-10);
    }

    #[test]
    fn delta_levels_rise_with_repulsion(v1 in 0.0f64..3.0, dv in 0.01f64..3.0) {
        let ring = RingConfig::two_pi();
        let opts = SpectrumOptions::default();
        let a = solve_limit_spectrum(ContactModel::Delta(DeltaCoupling::new(v1).unwrap()), &ring, 3, &opts).unwrap();
        let b = solve_limit_spectrum(ContactModel::Delta(DeltaCoupling::new(v1 + dv).unwrap()), &ring, 3, &opts).unwrap();
        for i in 0..3 {
            prop_assert!(b.state(Sector::Even, i).unwrap().energy > a.state(Sector::Even, i).unwrap().energy);
        }
    }
}
