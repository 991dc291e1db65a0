//! The acceptance suite: ten criteria, each reduced to numbers compared
//! against pinned tolerances. Results are deterministic for a given seed;
//! wall-clock timings are kept apart from them.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::WedgeGeometry;
use crate::hydro::{self, FluidState, KineticConvention, OrthogonalizationTime, RegimePolicy};
use crate::lattice::{self, GridSpec, Observable, PlanckLattice};
use crate::maxent::{self, ConstraintSet, MuSpaceGrid, SolverOptions};
use crate::mera::{self, CountLedger, ReplicaMode};
use crate::oracle;
use crate::runner::{self, stream, tol};
use crate::thermo;

pub const DEFAULT_SEED: u64 = 2024;

/// Runtime budgets in seconds.
pub mod budget {
    pub const COARSE_GRAINING: f64 = 10.0;
    pub const MERA_GROUND: f64 = 1.0;
    pub const SUITE: f64 = 120.0;
}

pub const CONJECTURE_TOLERANCE: f64 = 0.05;
pub const MAXENT_INSTANCES: usize = 50;
pub const ENUMERATION_INSTANCES: usize = 30;
pub const THERMO_INSTANCES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub values: BTreeMap<String, f64>,
    pub detail: String,
}

impl Criterion {
    fn new(id: u32, name: &str) -> Self {
        Self {
            id,
            name: name.to_string(),
            passed: true,
            values: BTreeMap::new(),
            detail: String::new(),
        }
    }

    fn value(&mut self, key: &str, v: f64) {
        self.values.insert(key.to_string(), v);
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!("[{status}] {:>2}. {}", self.id, self.name);
        if !self.detail.is_empty() {
            line.push_str(&format!(" ({})", self.detail));
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceReport {
    pub seed: u64,
    pub criteria: Vec<Criterion>,
}

impl AcceptanceReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Timings {
    pub per_criterion: BTreeMap<u32, f64>,
    pub total: f64,
}

/// Criteria 1 to 9.
pub fn run_criteria(seed: u64) -> (Vec<Criterion>, Timings) {
    let start = Instant::now();
    let mut timings = Timings::default();
    let steps: [(u32, fn(u64) -> Criterion); 9] = [
        (1, coarse_graining_entropy),
        (2, superselection),
        (3, geometry),
        (4, mera_ground),
        (5, mera_momentum),
        (6, conjecture),
        (7, maxent_criterion),
        (8, multipliers),
        (9, thermo_identity),
    ];
    let mut out = Vec::new();
    for (id, f) in steps {
        let t = Instant::now();
        out.push(f(seed));
        timings.per_criterion.insert(id, t.elapsed().as_secs_f64());
    }
    timings.total = start.elapsed().as_secs_f64();
    (out, timings)
}

/// The full suite. Criterion 10 reruns criteria 1 to 9 and compares the
/// serialized results byte for byte.
pub fn run_acceptance(seed: u64) -> (AcceptanceReport, Timings) {
    let start = Instant::now();
    let (mut criteria, mut timings) = run_criteria(seed);
    let first = serde_json::to_string(&criteria).expect("criteria serialize");
    let t = Instant::now();
    let (again, _) = run_criteria(seed);
    let second = serde_json::to_string(&again).expect("criteria serialize");
    let mut c = Criterion::new(10, "determinism");
    c.value("report_bytes", first.len() as f64);
    c.require(first == second, "reruns differ");
    criteria.push(c);
    timings.per_criterion.insert(10, t.elapsed().as_secs_f64());
    timings.total = start.elapsed().as_secs_f64();
    (AcceptanceReport { seed, criteria }, timings)
}

/// Whether the wall-clock budgets were met; kept out of the report.
pub fn timing_failures(t: &Timings) -> Vec<String> {
    let mut out = Vec::new();
    let check = |id: u32, limit: f64, out: &mut Vec<String>| {
        if let Some(&s) = t.per_criterion.get(&id) {
            if s > limit {
                out.push(format!("criterion {id} took {s:.2}s (budget {limit}s)"));
            }
        }
    };
    check(1, budget::COARSE_GRAINING, &mut out);
    check(4, budget::MERA_GROUND, &mut out);
    if t.total > budget::SUITE {
        out.push(format!("suite took {:.1}s (budget {}s)", t.total, budget::SUITE));
    }
    out
}

fn equal_superposition_basis() -> Result<lattice::PacketBasis, lattice::LatticeError> {
    let l = PlanckLattice::new(1.0, 1, 1)?;
    lattice::build_packet_basis(&l, GridSpec::default())
}

fn coarse_graining_entropy(_seed: u64) -> Criterion {
    let mut c = Criterion::new(1, "coarse-graining entropy of equal superpositions");
    let basis = match equal_superposition_basis() {
        Ok(b) => b,
        Err(e) => {
            c.require(false, e.to_string());
            return c;
        }
    };
    let mut worst = 0.0f64;
    let mut exact_nats = true;
    for k in [1usize, 2, 4, 8] {
        let amp = Complex64::new(1.0 / (k as f64).sqrt(), 0.0);
        let coeffs: Vec<Complex64> = (0..basis.len())
            .map(|i| if i < k { amp } else { Complex64::new(0.0, 0.0) })
            .collect();
        match basis
            .superposition(&coeffs)
            .and_then(|s| lattice::expand(&s, &basis, lattice::DEFAULT_DELTA_TRUNC))
        {
            Ok(coefficients) => {
                let mix = lattice::classicalize(&coefficients);
                let h = lattice::shannon_entropy_bits(&mix);
                worst = worst.max((h - (k as f64).log2()).abs());
                exact_nats &= lattice::von_neumann_entropy_nats(&mix) == LN_2 * h;
                c.value(&format!("h_bits_k{k}"), h);
            }
            Err(e) => c.require(false, format!("K = {k}: {e}")),
        }
    }
    c.value("max_error", worst);
    c.require(worst < tol::ENTROPY_BITS, format!("|H - log2 K| = {worst:.3e}"));
    c.require(exact_nats, "S differs from ln2 H");
    c
}

fn superselection(seed: u64) -> Criterion {
    let mut c = Criterion::new(2, "superselection of cell-diagonal observables");
    let basis = match equal_superposition_basis() {
        Ok(b) => b,
        Err(e) => {
            c.require(false, e.to_string());
            return c;
        }
    };
    let mut rng = stream(seed, 2);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let f: Vec<f64> = (0..basis.len()).map(|_| rng.random_range(-3.0..3.0)).collect();
        match lattice::check_superselection(&basis, &Observable::CellFunction(f)) {
            Ok(v) => worst = worst.max(v),
            Err(e) => c.require(false, e.to_string()),
        }
    }
    c.value("diagonal_max_offdiag", worst);
    c.require(worst < tol::SUPERSELECTION, format!("diagonal leak {worst:.3e}"));
    match lattice::check_superselection(&basis, &Observable::Position) {
        Ok(v) => {
            c.value("position_max_offdiag", v);
            c.require(v > tol::POSITION_LEAK, format!("position leak only {v:.3e}"));
        }
        Err(e) => c.require(false, e.to_string()),
    }
    c
}

fn geometry(_seed: u64) -> Criterion {
    let mut c = Criterion::new(3, "wedge area, geodesic length and RT entropy");
    let g = 1.0 / (8.0 * PI);
    let geom = WedgeGeometry::new(64.0, 1.0, 1.0, g).expect("valid geometry");
    let area = geom.wedge_area();
    let quad = oracle::wedge_area_quadrature(64.0, 1.0);
    let area_err = (area - quad).abs() / quad;
    c.value("wedge_area", area);
    c.value("wedge_area_quadrature", quad);
    c.require(area_err <= tol::WEDGE_AREA_REL, format!("area error {area_err:.3e}"));

    let len = geom.geodesic_length().expect("non-degenerate");
    let arc = oracle::geodesic_arclength(64.0, 1.0, 1.0);
    let len_err = (len - arc).abs() / arc;
    c.value("geodesic_length", len);
    c.value("geodesic_arclength", arc);
    c.require(len_err <= tol::GEODESIC_REL, format!("length error {len_err:.3e}"));

    let hundred = WedgeGeometry::new(100.0, 1.0, 1.0, g).expect("valid geometry");
    let rt = hundred.rt_entropy().expect("non-degenerate");
    let cardy = hundred.cardy_entropy();
    let rt_err = (rt - cardy).abs() / cardy;
    c.value("rt_entropy_100", rt);
    c.value("cardy_entropy_100", cardy);
    c.require(rt_err <= tol::RT_CARDY_REL, format!("RT vs Cardy {rt_err:.3e}"));
    c
}

/// Layer sizes of the binary recursion, computed without the MERA module.
fn halving_sum(l0: u64) -> u64 {
    let mut l = l0;
    let mut sum = 0;
    while l > 1 {
        l = l.div_ceil(2);
        sum += l;
    }
    sum
}

fn mera_ground(_seed: u64) -> Criterion {
    let mut c = Criterion::new(4, "MERA ground-state counting identity");
    let ensemble = 3;
    let mut mismatches = 0u32;
    for l0 in 1..=1024u64 {
        let net = mera::build_network(l0, 2, None).expect("l0 >= 1");
        let w = CountLedger::from_network(&net).microstates(ensemble);
        let bits = mera::bits_per_member(&w, ensemble);
        if bits != Some(BigUint::from(halving_sum(l0))) {
            mismatches += 1;
        }
    }
    c.value("mismatches", mismatches as f64);
    c.require(mismatches == 0, format!("{mismatches} sizes disagree"));
    for k in 1..=10u32 {
        let net = mera::build_network(1 << k, 2, None).expect("l0 >= 1");
        let h = mera::shannon_from_counting(&net);
        c.require(
            h == BigUint::from((1u64 << k) - 1),
            format!("2^{k} sites give {h}"),
        );
    }
    c
}

fn mera_momentum(_seed: u64) -> Criterion {
    let mut c = Criterion::new(5, "MERA momentum-replica counting");
    let cases = [(1.0, 0.5, 8u64), (1.0, 2.0, 8), (3.0, 0.7, 100), (2.0, 0.25, 33)];
    for (r, t, l0) in cases {
        let net = mera::build_network(l0, 2, None).expect("l0 >= 1");
        let reps = mera::momentum_replicas(r, OrthogonalizationTime::Finite(t), ReplicaMode::Floor)
            .expect("positive t");
        let expected = (1 + (r / t).floor() as u64) * halving_sum(l0);
        let ensemble = 2;
        let w = mera::boundary_microstate_count(&net, reps.k, ensemble);
        let bits = mera::bits_per_member(&w, ensemble);
        c.require(
            bits == Some(BigUint::from(expected))
                && mera::boundary_microstates(&net, reps.k) == BigUint::from(expected),
            format!("R = {r}, t = {t}, l0 = {l0}"),
        );
    }
    let net = mera::build_network(8, 2, None).expect("l0 >= 1");
    let reps = mera::momentum_replicas(1.0, OrthogonalizationTime::Finite(0.5), ReplicaMode::Floor)
        .expect("positive t");
    let h = mera::boundary_microstates(&net, reps.k);
    c.value("h_total_r1_t0.5_l8", h.to_string().parse().unwrap_or(f64::NAN));
    c.require(h == BigUint::from(21u32), format!("l0 = 8 gives {h}"));
    c
}

/// `(H_MERA, C_A + I_A / (pi hbar), residual)` at `l / eps` with `u = 0.05`.
pub fn conjecture_point(sites: u64) -> (f64, f64, f64) {
    let g = 1.0 / (8.0 * PI);
    let geom = WedgeGeometry::new(sites as f64, 1.0, 1.0, g).expect("valid geometry");
    let fluid = FluidState::from_horizon(0.05, 1.0, KineticConvention::HalfRhoU2).expect("subluminal");
    let action = hydro::abbreviated_action(&geom, &fluid, RegimePolicy::default()).expect("slow fluid");
    let net = mera::build_network(sites, 2, None).expect("l0 >= 1");
    let reps = mera::momentum_replicas(1.0, OrthogonalizationTime::of_fluid(&fluid), ReplicaMode::Floor)
        .expect("finite t");
    let h: f64 = mera::boundary_microstates(&net, reps.k)
        .to_string()
        .parse()
        .expect("decimal");
    let report = hydro::conjecture_check(h, geom.holographic_complexity(), action.value);
    (
        h,
        report.complexity + report.action_over_pi_hbar,
        report.relative_residual(),
    )
}

fn conjecture(_seed: u64) -> Criterion {
    let mut c = Criterion::new(6, "entropy equals complexity plus action");
    let mut previous = f64::INFINITY;
    for sites in [64u64, 256, 1024] {
        let (h, rhs, residual) = conjecture_point(sites);
        c.value(&format!("h_bits_{sites}"), h);
        c.value(&format!("complexity_plus_action_{sites}"), rhs);
        c.value(&format!("residual_{sites}"), residual);
        if sites == 64 {
            c.require(
                residual <= CONJECTURE_TOLERANCE,
                format!("residual {residual:.4} at l/eps = 64"),
            );
        }
        c.require(residual < previous, format!("residual not decreasing at {sites}"));
        previous = residual;
    }
    c
}

fn maxent_criterion(seed: u64) -> Criterion {
    let mut c = Criterion::new(7, "max-ent dual solver, enumeration and thermo relation");
    let beta = LN_2 / PI;
    let mut rng = stream(seed, 7);

    let mut worst = 0.0f64;
    for i in 0..MAXENT_INSTANCES {
        let n_x = rng.random_range(1..=4);
        let n_p = rng.random_range(3..=8);
        let p_max = rng.random_range(0.5..3.0);
        let n_total = rng.random_range(5.0..500.0);
        let grid = MuSpaceGrid::new(n_x, n_p, p_max).expect("valid grid");
        let v = runner::random_velocities(&mut rng, n_x, beta, p_max);
        match runner::solve_against_closed_form(&grid, n_total, beta, &v) {
            Ok(d) => worst = worst.max(d),
            Err(e) => c.require(false, format!("instance {i}: {e}")),
        }
    }
    c.value("closed_form_max_rel", worst);
    c.require(worst <= tol::MAXENT_REL, format!("closed form differs by {worst:.3e}"));

    let (checked, mismatched) = enumeration_instances(&mut rng);
    c.value("enumeration_instances", checked as f64);
    c.value("enumeration_mismatches", mismatched as f64);
    c.require(mismatched == 0, format!("{mismatched}/{checked} enumeration argmax mismatches"));

    let mut residual = 0.0f64;
    for _ in 0..3 {
        let grid = MuSpaceGrid::new(3, 5, 1.0).expect("valid grid");
        let v = runner::random_velocities(&mut rng, 3, beta, 1.0);
        match maxent::thermo_relation_check(&grid, 50.0, &v, beta, 1e-3) {
            Ok(r) => residual = residual.max(r.max_residual),
            Err(e) => c.require(false, e.to_string()),
        }
    }
    c.value("thermo_relation_residual", residual);
    c.require(
        residual < tol::THERMO_RELATION,
        format!("thermo relation residual {residual:.3e}"),
    );
    c
}

/// Random small integer instances: the continuum optimum, rounded to the
/// nearest feasible integer occupancy, must be an exact-multinomial argmax.
pub fn enumeration_instances(rng: &mut rand_chacha::ChaCha8Rng) -> (usize, usize) {
    let mut checked = 0;
    let mut mismatched = 0;
    let mut attempts = 0;
    while checked < ENUMERATION_INSTANCES && attempts < 50 * ENUMERATION_INSTANCES {
        attempts += 1;
        let (n_x, momenta): (usize, Vec<i64>) = match rng.random_range(0..3) {
            0 => (2, vec![-1, 1]),
            1 => (1, vec![-1, 0, 1]),
            _ => (2, vec![-1, 0, 1]),
        };
        let n_total: u32 = rng.random_range(2..=6);
        // Momenta drawn from a random integer placement are attainable.
        let mut site_momentum = vec![0i64; n_x];
        for _ in 0..n_total {
            let x = rng.random_range(0..n_x);
            site_momentum[x] += momenta[rng.random_range(0..momenta.len())];
        }
        let p_max = 1i64;
        let load: i64 = site_momentum.iter().map(|p| p.abs()).sum();
        if load >= n_total as i64 * p_max {
            continue;
        }
        let grid = MuSpaceGrid::from_momenta(n_x, momenta.iter().map(|&p| p as f64).collect())
            .expect("symmetric grid");
        let constraints = ConstraintSet {
            n_total: n_total as f64,
            momentum: site_momentum.iter().map(|&p| p as f64).collect(),
        };
        let Ok(solution) = maxent::maxent_solve(&grid, &constraints, SolverOptions::default()) else {
            mismatched += 1;
            checked += 1;
            continue;
        };
        let e = oracle::enumerate_occupancies(n_x, &momenta, n_total, &site_momentum);
        let nearest = oracle::nearest_feasible(&e, &solution.field.values);
        checked += 1;
        if !nearest.is_some_and(|i| e.argmax.contains(&i)) {
            mismatched += 1;
        }
    }
    (checked, mismatched)
}

fn multipliers(_seed: u64) -> Criterion {
    let mut c = Criterion::new(8, "Lagrange multipliers and equal a priori probability");
    let g = 1.0 / (8.0 * PI);
    let m = maxent::determine_multipliers(g, 1.0).expect("positive inputs");
    c.value("alpha", m.alpha);
    c.value("beta", m.beta);
    c.require((m.alpha - LN_2).abs() <= f64::EPSILON, format!("alpha = {}", m.alpha));
    c.require((m.beta - LN_2 / PI).abs() <= f64::EPSILON, format!("beta = {}", m.beta));

    let mut worst = 0.0f64;
    for (sites, u) in [(64.0, 0.0), (64.0, 0.05), (256.0, 0.02), (1024.0, 0.08)] {
        let geom = WedgeGeometry::new(sites, 1.0, 1.0, g).expect("valid geometry");
        let fluid = FluidState::from_horizon(u, 1.0, KineticConvention::HalfRhoU2).expect("subluminal");
        let action = hydro::abbreviated_action(&geom, &fluid, RegimePolicy::default()).expect("slow");
        let p = maxent::equal_apriori_probability(geom.wedge_area(), action.value, g, 1.0)
            .expect("positive inputs");
        let via_hydro = geom.holographic_complexity() + action.over_pi_hbar;
        worst = worst.max((p.entropy_bits() - via_hydro).abs() / via_hydro);
    }
    c.value("equal_apriori_max_rel", worst);
    c.require(
        worst <= tol::CROSS_PATH_REL,
        format!("two paths differ by {worst:.3e}"),
    );
    c
}

fn thermo_identity(seed: u64) -> Criterion {
    let mut c = Criterion::new(9, "entropy identity of the redefined Hamiltonian");
    let mut rng = stream(seed, 9);
    let mut worst = 0.0f64;
    for _ in 0..THERMO_INSTANCES {
        let n = rng.random_range(2..=12);
        let k = rng.random_range(1..=10);
        let h = runner::random_hamiltonian(&mut rng, n, k);
        let beta = runner::random_beta(&mut rng);
        match thermo::entropy_identity_check(beta, &h) {
            Ok(r) => worst = worst.max(r.residual),
            Err(e) => c.require(false, e.to_string()),
        }
    }
    c.value("max_residual", worst);
    c.require(worst < tol::ENTROPY_IDENTITY, format!("residual {worst:.3e}"));
    for k in [1usize, 3, 10] {
        let h = runner::random_hamiltonian(&mut rng, 5, k);
        let r = thermo::entropy_identity_check(0.0, &h).expect("beta = 0 is allowed");
        c.require(
            (r.entropy - (k as f64).ln()).abs() < 1e-12 && r.free_energy.is_none(),
            format!("beta = 0 with K = {k} gives S = {}", r.entropy),
        );
    }
    c
}
