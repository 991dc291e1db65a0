use std::f64::consts::{LN_2, PI};

use holoshannon::geometry::WedgeGeometry;
use holoshannon::hydro::{self, FluidState, KineticConvention, RegimePolicy};
use holoshannon::maxent::{self, ConstraintSet, MuSpaceGrid, SolverOptions};
use holoshannon::mera::{self, CountLedger};
use holoshannon::thermo;
use nalgebra::DMatrix;
use num_bigint::BigUint;
use proptest::prelude::*;

fn stochastic(n: usize, k: usize, raw: &[f64]) -> DMatrix<f64> {
    let mut p = DMatrix::from_fn(n, k, |i, j| raw[(i * k + j) % raw.len()] + 1e-3);
    for i in 0..n {
        let s: f64 = p.row(i).sum();
        p.row_mut(i).scale_mut(1.0 / s);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ledger_total_is_layer_sum(l0 in 1u64..100_000) {
        let net = mera::build_network(l0, 2, None).unwrap();
        let ledger = CountLedger::from_network(&net);
        let sum: u64 = net.layers()[1..].iter().sum();
        prop_assert_eq!(ledger.total, BigUint::from(sum));
        prop_assert_eq!(*net.layers().last().unwrap(), 1);
    }

    #[test]
    fn replicas_are_additive_in_bits(l0 in 1u64..5000, k in 0u64..6) {
        let net = mera::build_network(l0, 2, None).unwrap();
        let ground = mera::shannon_from_counting(&net);
        prop_assert_eq!(mera::boundary_microstates(&net, k), ground * BigUint::from(k + 1));
    }

    #[test]
    fn pasted_network_is_symmetric(l0 in 2u64..4096, m_h in 1usize..6) {
        let net = mera::build_network(l0, 2, Some(m_h)).unwrap();
        let towers = net.towers();
        prop_assert_eq!(towers.len(), 2);
        prop_assert_eq!(&towers[0], &towers[1]);
    }

    #[test]
    fn wedge_area_grows_with_interval(l in 2.5f64..5000.0, extra in 0.1f64..100.0) {
        let g = |l| WedgeGeometry::new(l, 1.0, 1.0, 1.0).unwrap().wedge_area();
        prop_assert!(g(l + extra) > g(l));
        prop_assert!(g(l) < l);
    }

    #[test]
    fn action_is_quadratic_in_velocity(u in 1e-4f64..0.1, sites in 8.0f64..2000.0) {
        let geom = WedgeGeometry::new(sites, 1.0, 1.0, 1.0 / (8.0 * PI)).unwrap();
        let at = |u| {
            let f = FluidState::from_horizon(u, 1.0, KineticConvention::HalfRhoU2).unwrap();
            hydro::abbreviated_action(&geom, &f, RegimePolicy::default()).unwrap().value
        };
        prop_assert!(at(u) >= 0.0);
        let ratio = at(u) / (u * u);
        let small = at(1e-5) / 1e-10;
        prop_assert!((ratio - small).abs() / small < 1e-12);
    }

    #[test]
    fn dual_solver_matches_closed_form(
        n_x in 1usize..4,
        n_p in 2usize..9,
        p_max in 0.2f64..4.0,
        n_total in 1.0f64..1000.0,
        raw in prop::collection::vec(-3.0f64..3.0, 4),
    ) {
        let grid = MuSpaceGrid::new(n_x, n_p, p_max).unwrap();
        let beta = LN_2 / PI;
        let v: Vec<f64> = raw[..n_x].iter().map(|r| r / (beta * p_max)).collect();
        let (closed, _) = maxent::closed_form_occupancy(&grid, beta, &v, n_total).unwrap();
        let momentum = (0..n_x).map(|x| closed.site_momentum(x, &grid)).collect();
        let c = ConstraintSet { n_total, momentum };
        let s = maxent::maxent_solve(&grid, &c, SolverOptions::default()).unwrap();
        prop_assert!(closed.max_relative_difference(&s.field) < 1e-8);
        prop_assert!(s.field.values.iter().all(|&n| n >= 0.0));
    }

    #[test]
    fn entropy_is_concave_in_momentum(p in -0.8f64..0.8) {
        let grid = MuSpaceGrid::new(1, 5, 1.0).unwrap();
        let s = |p: f64| {
            let c = ConstraintSet { n_total: 1.0, momentum: vec![p] };
            maxent::maxent_solve(&grid, &c, SolverOptions::default()).unwrap().log_microstates()
        };
        let h = 0.05;
        prop_assert!(s(p + h) - 2.0 * s(p) + s(p - h) <= 1e-12);
    }

    #[test]
    fn probability_and_entropy_are_inverse(area in 0.0f64..200.0, action in 0.0f64..500.0) {
        let p = maxent::equal_apriori_probability(area, action, 1.0 / (8.0 * PI), 1.0).unwrap();
        let s = maxent::entropy_from_probability(p.probability());
        prop_assert!((s - p.entropy()).abs() <= 1e-9 * p.entropy().max(1.0));
    }

    #[test]
    fn entropy_identity_and_bounds(
        n in 2usize..10,
        k in 1usize..10,
        raw in prop::collection::vec(0.0f64..1.0, 100),
        energies in prop::collection::vec(-5.0f64..5.0, 10),
        log_beta in -2.0f64..1.0,
    ) {
        let beta = 10f64.powf(log_beta);
        let h = thermo::coarse_grain_hamiltonian(&energies[..n], &stochastic(n, k, &raw)).unwrap();
        let r = thermo::entropy_identity_check(beta, &h).unwrap();
        prop_assert!(r.residual < 1e-9);
        prop_assert!(r.free_energy.unwrap() <= r.mean_energy + 1e-12);
        let (lo, hi) = energies[..n].iter().fold((f64::MAX, f64::MIN), |(a, b), &e| (a.min(e), b.max(e)));
        for e in h.normalized_energies().into_iter().flatten() {
            prop_assert!(e >= lo - 1e-12 && e <= hi + 1e-12);
        }
        let hotter = thermo::entropy_identity_check(beta * 0.5, &h).unwrap();
        prop_assert!(hotter.entropy >= r.entropy - 1e-12);
    }

    #[test]
    fn membrane_tension_scaling(g in 0.01f64..10.0, r in 0.1f64..10.0) {
        let t = thermo::membrane_tension(g, r).unwrap();
        let t2 = thermo::membrane_tension(g, 2.0 * r).unwrap();
        prop_assert!((t / t2 - 4.0).abs() < 1e-12);
    }
}
