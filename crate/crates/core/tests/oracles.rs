use std::f64::consts::{LN_2, PI};

use holoshannon::geometry::WedgeGeometry;
use holoshannon::lattice::{self, GridSpec, PlanckLattice};
use holoshannon::maxent::{self, ConstraintSet, MuSpaceGrid, SolverOptions};
use holoshannon::oracle;
use holoshannon::thermo;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn raw_gram_matches_analytic_overlap() {
    let lat = PlanckLattice::new(1.0, 1, 0).unwrap();
    let basis = lattice::build_packet_basis(&lat, GridSpec::default()).unwrap();
    assert_eq!(basis.len(), 3);
    for (i, a) in basis.cells().iter().enumerate() {
        for (j, b) in basis.cells().iter().enumerate() {
            let expected = oracle::gaussian_overlap(lat.eps_q, lat.center(*a), lat.center(*b));
            let got = basis.raw_gram()[(i, j)];
            assert!((got - expected).norm() < 1e-10, "({i},{j}): {got} vs {expected}");
        }
    }
}

#[test]
fn raw_gram_with_momentum_offsets() {
    let lat = PlanckLattice::new(1.7, 1, 1).unwrap();
    let basis = lattice::build_packet_basis(&lat, GridSpec::default()).unwrap();
    let mut worst = 0.0f64;
    for (i, a) in basis.cells().iter().enumerate() {
        for (j, b) in basis.cells().iter().enumerate() {
            let expected = oracle::gaussian_overlap(lat.eps_q, lat.center(*a), lat.center(*b));
            worst = worst.max((basis.raw_gram()[(i, j)] - expected).norm());
        }
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn coarse_entropy_is_stable_under_refinement() {
    let lat = PlanckLattice::new(1.0, 1, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let coeffs: Vec<Complex64> = (0..lat.cell_count())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let entropy = |spec: GridSpec| {
        let basis = lattice::build_packet_basis(&lat, spec).unwrap();
        let state = basis.superposition(&coeffs).unwrap();
        let c = lattice::expand(&state, &basis, 1e-3).unwrap();
        lattice::shannon_entropy_bits(&lattice::classicalize(&c))
    };
    let coarse = entropy(GridSpec::default());
    let fine = entropy(GridSpec::default().refined());
    assert!((coarse - fine).abs() < 1e-6, "{coarse} vs {fine}");
}

#[test]
fn in_span_state_is_fully_captured() {
    let lat = PlanckLattice::new(1.0, 2, 1).unwrap();
    let basis = lattice::build_packet_basis(&lat, GridSpec::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let coeffs: Vec<Complex64> = (0..basis.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let state = basis.superposition(&coeffs).unwrap();
        let c = lattice::expand(&state, &basis, 1e-3).unwrap();
        let captured: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        assert!((captured - 1.0).abs() < 1e-8);
    }
}

#[test]
fn geometry_against_quadrature() {
    for sites in [8.0, 64.0, 300.0] {
        let g = WedgeGeometry::new(sites, 1.0, 1.0, 1.0 / (8.0 * PI)).unwrap();
        let quad = oracle::wedge_area_quadrature(sites, 1.0);
        assert!((g.wedge_area() - quad).abs() / quad < 1e-6, "{sites}");
        let arc = oracle::geodesic_arclength(sites, 1.0, 1.0);
        assert!((g.geodesic_length().unwrap() - arc).abs() / arc < 1e-8);
    }
    let g = WedgeGeometry::new(64.0, 1.0, 1.0, 1.0).unwrap();
    assert!((g.wedge_area() - 60.89).abs() < 0.01);
}

#[test]
fn single_site_dual_matches_bisection() {
    let momenta = vec![-1.0, 0.0, 1.0];
    let grid = MuSpaceGrid::from_momenta(1, momenta.clone()).unwrap();
    let c = ConstraintSet {
        n_total: 1.0,
        momentum: vec![0.3],
    };
    let s = maxent::maxent_solve(&grid, &c, SolverOptions::default()).unwrap();
    let (lambda, weights) = oracle::single_site_dual(&momenta, 0.3).unwrap();
    assert!((s.lambda[0] - lambda).abs() < 1e-9);
    for (a, b) in s.field.values.iter().zip(&weights) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn two_by_two_integer_grid_matches_enumeration() {
    let momenta = [-1i64, 1];
    let grid = MuSpaceGrid::from_momenta(2, vec![-1.0, 1.0]).unwrap();
    for site_momentum in [[0i64, 0], [2, 0], [0, -2], [1, -1], [1, 1]] {
        let total = 4;
        let load: i64 = site_momentum.iter().map(|p| p.abs()).sum();
        if load >= total {
            continue;
        }
        let e = oracle::enumerate_occupancies(2, &momenta, total as u32, &site_momentum);
        assert!(!e.feasible.is_empty());
        let c = ConstraintSet {
            n_total: total as f64,
            momentum: site_momentum.iter().map(|&p| p as f64).collect(),
        };
        let s = maxent::maxent_solve(&grid, &c, SolverOptions::default()).unwrap();
        let nearest = oracle::nearest_feasible(&e, &s.field.values).unwrap();
        assert!(e.argmax.contains(&nearest), "{site_momentum:?}");
    }
}

#[test]
fn stirling_gap_on_small_counts() {
    let exact = maxent::log_microstates(&[3.0, 1.0], maxent::CountMode::Exact);
    assert!((exact - oracle::exact_log_multinomial(&[3, 1])).abs() < 1e-12);
    let stirling = maxent::log_microstates(&[3.0, 1.0], maxent::CountMode::Stirling);
    assert!((stirling - 2.249).abs() < 1e-3);
}

#[test]
fn two_level_gibbs_entropy() {
    for (beta, e) in [(0.1, 1.0), (1.0, 2.5), (7.0, 0.3)] {
        let r = thermo::entropy_identity_levels(beta, &[0.0, e]).unwrap();
        assert!((r.entropy - oracle::two_level_entropy(beta, e)).abs() < 1e-12);
    }
    let h = thermo::coarse_grain_hamiltonian(&[0.0, 2.0], &DMatrix::identity(2, 2)).unwrap();
    let r = thermo::entropy_identity_check(1.0, &h).unwrap();
    assert!((r.entropy - oracle::two_level_entropy(1.0, 2.0)).abs() < 1e-12);
}

#[test]
fn thermo_relation_converges_quadratically() {
    let grid = MuSpaceGrid::new(1, 3, 1.0).unwrap();
    let beta = LN_2 / PI;
    let v = [1.3];
    let coarse = maxent::thermo_relation_check(&grid, 1.0, &v, beta, 2e-2).unwrap();
    let fine = maxent::thermo_relation_check(&grid, 1.0, &v, beta, 1e-2).unwrap();
    assert!(fine.max_residual < 1e-6 || fine.max_residual < coarse.max_residual / 3.0);
    let default = maxent::thermo_relation_check(&grid, 1.0, &v, beta, 1e-3).unwrap();
    assert!(default.max_residual < 1e-6, "{}", default.max_residual);
}
