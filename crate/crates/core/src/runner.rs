//! Runs every pipeline of a scenario and collects the checks into a report.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::WedgeGeometry;
use crate::hydro::{self, FluidState, OrthogonalizationTime};
use crate::lattice::{self, Observable, PlanckLattice, TAU_NORM, TAU_ORTH};
use crate::maxent::{self, ConstraintSet, MuSpaceGrid, SolverOptions};
use crate::mera::{self, CountLedger};
use crate::oracle;
use crate::report::{Check, RunReport};
use crate::scenario::{Scenario, ScenarioError};
use crate::thermo;

/// Tolerances shared by the runner and the acceptance suite.
pub mod tol {
    pub const ENTROPY_BITS: f64 = 1e-9;
    pub const SUPERSELECTION: f64 = 1e-8;
    pub const POSITION_LEAK: f64 = 1e-3;
    pub const WEDGE_AREA_REL: f64 = 5e-3;
    pub const GEODESIC_REL: f64 = 1e-3;
    pub const RT_CARDY_REL: f64 = 5e-3;
    pub const MAXENT_REL: f64 = 1e-8;
    pub const THERMO_RELATION: f64 = 1e-4;
    pub const CROSS_PATH_REL: f64 = 1e-12;
    pub const ENTROPY_IDENTITY: f64 = 1e-9;
    pub const MOMENTUM_DENSITY: f64 = 1e-10;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub timings: bool,
}

/// Independent random stream per pipeline, so that adding draws to one
/// pipeline never shifts another.
pub fn stream(seed: u64, pipeline: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(pipeline);
    rng
}

pub fn run_scenario(scenario: &Scenario) -> RunReport {
    run_scenario_with(scenario, RunOptions::default())
}

pub fn run_scenario_with(scenario: &Scenario, options: RunOptions) -> RunReport {
    let mut report = RunReport::new(scenario);
    let mut timings = BTreeMap::new();
    type Pipeline = fn(&Scenario, &mut RunReport);
    let pipelines: [(&str, Pipeline); 6] = [
        ("coarse_graining", coarse_graining),
        ("geometry", geometry),
        ("action", action_and_counting),
        ("maxent", maxent_pipeline),
        ("thermo", thermo_pipeline),
        ("multipliers", multipliers_pipeline),
    ];
    for (name, run) in pipelines {
        let start = Instant::now();
        run(scenario, &mut report);
        timings.insert(name.to_string(), start.elapsed().as_secs_f64());
    }
    if options.timings {
        report.timings = Some(timings);
    }
    report
}

fn metric(report: &mut RunReport, name: &str, value: f64) {
    if value.is_finite() {
        // + 0.0 folds -0.0 into 0.0.
        report.metrics.insert(name.to_string(), value + 0.0);
    }
}

fn geometry_of(s: &Scenario) -> Result<WedgeGeometry, String> {
    let g = &s.geometry;
    WedgeGeometry::new(g.l, g.eps, g.r_ads, g.g_newton).map_err(|e| e.to_string())
}

fn fluid_of(s: &Scenario) -> Result<FluidState, String> {
    let f = &s.fluid;
    match f.eps_energy {
        Some(e) => FluidState::new(f.u, e, f.kinetic_convention),
        None => FluidState::from_horizon(f.u, s.r_plus(), f.kinetic_convention),
    }
    .map_err(|e| e.to_string())
}

fn coarse_graining(s: &Scenario, report: &mut RunReport) {
    const G: &str = "coarse_graining";
    let cfg = &s.lattice;
    let basis = match PlanckLattice::new(cfg.eps_q, cfg.m_max_q, cfg.m_max_p)
        .and_then(|l| lattice::build_packet_basis(&l, cfg.grid_spec()))
    {
        Ok(b) => b,
        Err(e) => {
            report.checks.push(Check::error(G, "packet_basis", e.to_string()));
            return;
        }
    };
    report
        .checks
        .push(Check::at_most(G, "orthonormality", basis.orthonormality_error(), TAU_ORTH));
    metric(report, "gram_condition", basis.gram_condition());

    let k = cfg.superposition;
    let amp = Complex64::new(1.0 / (k as f64).sqrt(), 0.0);
    let coefficients: Vec<Complex64> = (0..basis.len())
        .map(|i| if i < k { amp } else { Complex64::new(0.0, 0.0) })
        .collect();
    let outcome = basis
        .superposition(&coefficients)
        .and_then(|state| lattice::expand(&state, &basis, cfg.delta_trunc));
    match outcome {
        Ok(c) => {
            let mixture = lattice::classicalize(&c);
            let h = lattice::shannon_entropy_bits(&mixture);
            metric(report, "coherence_entropy_bits", h);
            report.checks.push(Check::absolute(
                G,
                "equal_superposition_entropy",
                h,
                (k as f64).log2(),
                tol::ENTROPY_BITS,
            ));
            let s_nats = lattice::von_neumann_entropy_nats(&mixture);
            report
                .checks
                .push(Check::absolute(G, "entropy_nats_equals_ln2_bits", s_nats, LN_2 * h, 1e-12));
        }
        Err(e) => report.checks.push(Check::error(G, "equal_superposition_entropy", e.to_string())),
    }

    let mut rng = stream(s.seed, 1);
    let random: Vec<Complex64> = (0..basis.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    match basis
        .superposition(&random)
        .and_then(|state| lattice::expand(&state, &basis, cfg.delta_trunc))
    {
        Ok(c) => {
            let captured: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            report
                .checks
                .push(Check::absolute(G, "in_span_norm", captured, 1.0, TAU_NORM));
        }
        Err(e) => report.checks.push(Check::error(G, "in_span_norm", e.to_string())),
    }

    let f: Vec<f64> = (0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    match lattice::check_superselection(&basis, &Observable::CellFunction(f)) {
        Ok(v) => report
            .checks
            .push(Check::at_most(G, "superselection_diagonal", v, tol::SUPERSELECTION)),
        Err(e) => report.checks.push(Check::error(G, "superselection_diagonal", e.to_string())),
    }
    if basis.len() > 1 {
        match lattice::check_superselection(&basis, &Observable::Position) {
            Ok(v) => {
                let mut c = Check::flag(G, "superselection_position_mixes", v > tol::POSITION_LEAK);
                c.value = Some(v);
                c.tolerance = Some(tol::POSITION_LEAK);
                report.checks.push(c);
            }
            Err(e) => report
                .checks
                .push(Check::error(G, "superselection_position_mixes", e.to_string())),
        }
    }
}

fn geometry(s: &Scenario, report: &mut RunReport) {
    const G: &str = "geometry";
    let geom = match geometry_of(s) {
        Ok(g) => g,
        Err(e) => {
            report.checks.push(Check::error(G, "wedge", e));
            return;
        }
    };
    let area = geom.wedge_area();
    metric(report, "wedge_area", area);
    metric(report, "complexity", geom.holographic_complexity());
    metric(report, "central_charge", geom.central_charge());
    if geom.is_degenerate() {
        report
            .checks
            .push(Check::flag(G, "wedge_area_quadrature", true).with_note("degenerate interval"));
        return;
    }
    let quadrature = oracle::wedge_area_quadrature(geom.l, geom.eps);
    report.checks.push(Check::relative(
        G,
        "wedge_area_quadrature",
        area,
        quadrature,
        tol::WEDGE_AREA_REL,
    ));
    match geom.geodesic_length() {
        Ok(len) => {
            metric(report, "geodesic_length", len);
            let arclength = oracle::geodesic_arclength(geom.l, geom.eps, geom.r_ads);
            report.checks.push(Check::relative(
                G,
                "geodesic_arclength",
                len,
                arclength,
                tol::GEODESIC_REL,
            ));
            let rt = crate::geometry::rt_entropy(len, geom.g_newton);
            metric(report, "rt_entropy", rt);
            report.checks.push(Check::relative(
                G,
                "rt_vs_cardy",
                rt,
                geom.cardy_entropy(),
                tol::RT_CARDY_REL,
            ));
        }
        Err(e) => report.checks.push(Check::error(G, "geodesic_arclength", e.to_string())),
    }
}

fn action_and_counting(s: &Scenario, report: &mut RunReport) {
    const G: &str = "action";
    let (geom, fluid) = match (geometry_of(s), fluid_of(s)) {
        (Ok(g), Ok(f)) => (g, f),
        (Err(e), _) | (_, Err(e)) => {
            report.checks.push(Check::error(G, "fluid", e));
            return;
        }
    };
    let r_plus = fluid.horizon_radius();
    match hydro::momentum_density(&fluid, r_plus, geom.g_newton) {
        Ok(p) => {
            metric(report, "momentum_density", p.p_x);
            report.checks.push(Check::at_most(
                G,
                "momentum_density_routes",
                p.spread(),
                tol::MOMENTUM_DENSITY * p.via_energy.abs().max(1.0),
            ));
        }
        Err(e) => report.checks.push(Check::error(G, "momentum_density_routes", e.to_string())),
    }

    let t_perp = OrthogonalizationTime::of_fluid(&fluid);
    if let Some(t) = t_perp.value() {
        metric(report, "t_perp", t);
    }
    metric(report, "eps_kin", fluid.eps_kin);

    let action = match hydro::abbreviated_action(&geom, &fluid, s.regime) {
        Ok(a) => a,
        Err(e) => {
            report.checks.push(Check::error(G, "regime", e.to_string()));
            return;
        }
    };
    metric(report, "action", action.value);
    metric(report, "action_over_pi_hbar", action.over_pi_hbar);
    metric(
        report,
        "program_length",
        hydro::program_length_total(geom.program_length_spatial(), t_perp),
    );
    if action.regime == hydro::Regime::Marginal {
        report
            .checks
            .push(Check::flag(G, "regime", true).with_note("marginal: |u| between 0.1 and 0.5"));
    }

    const M: &str = "mera";
    let l0 = s.boundary_sites();
    let net = match mera::build_network(l0, s.mera.arity, s.mera.m_h) {
        Ok(n) => n,
        Err(e) => {
            report.checks.push(Check::error(M, "network", e.to_string()));
            return;
        }
    };
    let ledger = CountLedger::from_network(&net);
    let layer_sum: u64 = net.towers().iter().map(|t| t[1..].iter().sum::<u64>()).sum();
    report.checks.push(Check::flag(
        M,
        "ledger_identity",
        ledger.total == num_bigint::BigUint::from(layer_sum),
    ));
    let ground = layer_sum as f64;
    metric(report, "h_ground_bits", ground);

    let replicas = match mera::momentum_replicas(s.geometry.r_ads, t_perp, s.mera.replica_mode) {
        Ok(r) => r,
        Err(e) => {
            report.checks.push(Check::error(M, "replicas", e.to_string()));
            return;
        }
    };
    metric(report, "replicas", replicas.k as f64);
    metric(report, "replica_ratio", replicas.ratio);
    let total = mera::boundary_microstates(&net, replicas.k);
    let h_total: f64 = total.to_string().parse().unwrap_or(f64::NAN);
    metric(report, "h_total_bits", h_total);
    report.checks.push(Check::absolute(
        M,
        "replica_sum",
        h_total,
        (1 + replicas.k) as f64 * ground,
        0.0,
    ));
    if let Some(m) = net.truncation() {
        match mera::bulk_temperature(m as u32, s.mera.kappa, s.mera.r_inf, s.geometry.r_ads) {
            Ok(t) => metric(report, "inverse_bulk_temperature", t),
            Err(e) => report.checks.push(Check::error(M, "bulk_temperature", e.to_string())),
        }
    }

    let comparison = if net.is_thermal() {
        None
    } else {
        match mera::continuum_comparison(&net, &geom) {
            Ok(c) => {
                metric(report, "continuum_deviation", c.deviation);
                Some(c)
            }
            Err(e) => {
                report.checks.push(Check::error(M, "continuum", e.to_string()));
                None
            }
        }
    };

    const C: &str = "conjecture";
    let conjecture = hydro::conjecture_check(h_total, geom.holographic_complexity(), action.value);
    let residual = conjecture.relative_residual();
    metric(report, "conjecture_residual", residual);
    let mut check = Check::at_most(C, "entropy_vs_complexity", residual, s.tolerances.conjecture);
    check.reference = Some(conjecture.complexity + conjecture.action_over_pi_hbar);
    check.value = Some(h_total);
    check.residual = Some(residual);
    if let Some(c) = comparison.filter(|c| !c.asymptotic) {
        check = check.with_note(format!(
            "below the asymptotic regime ({} sites)",
            c.discrete_area + 1
        ));
    }
    report.checks.push(check);

    // With 8 pi G R = 1 and no momentum both comparisons share one gap.
    let unit = 8.0 * PI * geom.g_newton * geom.r_ads;
    if let Some(c) = comparison {
        if fluid.u == 0.0 && (unit - 1.0).abs() < 1e-12 && replicas.k == 0 {
            let gap_conjecture = conjecture.residual.abs();
            let gap_continuum = c.deviation * c.wedge_area;
            report.checks.push(Check::absolute(
                C,
                "matches_continuum_gap",
                gap_conjecture,
                gap_continuum,
                1e-9 * gap_continuum.max(1.0),
            ));
        }
    }

    // Tensor-network action: -I/ln2 reproduces C_A + I_A/(pi hbar).
    let tn = thermo::bulk_tn_action(action.value, geom.holographic_complexity());
    report.checks.push(Check::relative(
        C,
        "tensor_network_action",
        -tn / LN_2,
        conjecture.complexity + conjecture.action_over_pi_hbar,
        tol::CROSS_PATH_REL,
    ));
}

/// Random grid instance with shift velocities bounded so `beta p v` stays
/// within a few units.
pub fn random_velocities(rng: &mut ChaCha8Rng, n_x: usize, beta: f64, p_max: f64) -> Vec<f64> {
    let v_max = 3.0 / (beta * p_max);
    (0..n_x).map(|_| rng.random_range(-v_max..v_max)).collect()
}

fn maxent_pipeline(s: &Scenario, report: &mut RunReport) {
    const G: &str = "maxent";
    let cfg = &s.maxent;
    let grid = match MuSpaceGrid::new(cfg.n_x, cfg.n_p, cfg.p_max) {
        Ok(g) => g,
        Err(e) => {
            report.checks.push(Check::error(G, "grid", e.to_string()));
            return;
        }
    };
    let beta = LN_2 / (PI * crate::units::HBAR);
    let mut rng = stream(s.seed, 4);
    let mut worst = 0.0f64;
    let mut failure = None;
    let mut first_velocity = None;
    for _ in 0..cfg.instances {
        let v = random_velocities(&mut rng, cfg.n_x, beta, cfg.p_max);
        match solve_against_closed_form(&grid, cfg.n_total, beta, &v) {
            Ok(d) => worst = worst.max(d),
            Err(e) => failure = Some(e),
        }
        first_velocity.get_or_insert(v);
    }
    match failure {
        Some(e) => report.checks.push(Check::error(G, "dual_vs_closed_form", e)),
        None => report
            .checks
            .push(Check::at_most(G, "dual_vs_closed_form", worst, tol::MAXENT_REL)),
    }
    let v = first_velocity.unwrap_or_else(|| vec![0.0; cfg.n_x]);
    match maxent::thermo_relation_check(&grid, cfg.n_total, &v, beta, 1e-3) {
        Ok(r) => report.checks.push(Check::at_most(
            G,
            "thermo_relation",
            r.max_residual,
            tol::THERMO_RELATION,
        )),
        Err(e) => report.checks.push(Check::error(G, "thermo_relation", e.to_string())),
    }
}

/// Solves for the momenta of the closed-form state with velocities `v` and
/// returns the relative field difference and velocity error.
pub fn solve_against_closed_form(
    grid: &MuSpaceGrid,
    n_total: f64,
    beta: f64,
    v: &[f64],
) -> Result<f64, String> {
    let (closed, _) = maxent::closed_form_occupancy(grid, beta, v, n_total).map_err(|e| e.to_string())?;
    let momentum = (0..grid.n_x).map(|x| closed.site_momentum(x, grid)).collect();
    let constraints = ConstraintSet { n_total, momentum };
    let solution =
        maxent::maxent_solve(grid, &constraints, SolverOptions::default()).map_err(|e| e.to_string())?;
    let velocity_error = solution
        .shift_velocity(beta)
        .iter()
        .zip(v)
        .map(|(a, b)| (a - b).abs() * beta * grid.p_max)
        .fold(0.0, f64::max);
    Ok(closed.max_relative_difference(&solution.field).max(velocity_error))
}

/// Random row-stochastic coarse-graining of `n` levels onto `k` states.
pub fn random_hamiltonian(rng: &mut ChaCha8Rng, n: usize, k: usize) -> thermo::RedefinedHamiltonian {
    let energies: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
    let mut p = DMatrix::<f64>::zeros(n, k);
    for i in 0..n {
        let row: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
        let sum: f64 = row.iter().sum();
        for (j, v) in row.iter().enumerate() {
            p[(i, j)] = v / sum;
        }
    }
    thermo::coarse_grain_hamiltonian(&energies, &p).expect("rows are normalized")
}

/// Log-uniform inverse temperature in `[0.01, 10]`.
pub fn random_beta(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-2.0..1.0))
}

fn thermo_pipeline(s: &Scenario, report: &mut RunReport) {
    const G: &str = "thermo";
    let mut rng = stream(s.seed, 5);
    let mut worst = 0.0f64;
    let mut worst_boosted = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(2..=10);
        let k = rng.random_range(1..=10);
        let h = random_hamiltonian(&mut rng, n, k);
        let beta = random_beta(&mut rng);
        match thermo::entropy_identity_check(beta, &h) {
            Ok(r) => worst = worst.max(r.residual),
            Err(e) => {
                report.checks.push(Check::error(G, "entropy_identity", e.to_string()));
                return;
            }
        }
        let momenta: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let boosted = thermo::boosted_levels(&h, &momenta, s.fluid.u, rng.random_range(-1.0..1.0))
            .and_then(|levels| thermo::entropy_identity_levels(beta, &levels));
        match boosted {
            Ok(r) => worst_boosted = worst_boosted.max(r.residual),
            Err(e) => {
                report.checks.push(Check::error(G, "entropy_identity_boosted", e.to_string()));
                return;
            }
        }
    }
    report
        .checks
        .push(Check::at_most(G, "entropy_identity", worst, tol::ENTROPY_IDENTITY));
    report.checks.push(Check::at_most(
        G,
        "entropy_identity_boosted",
        worst_boosted,
        tol::ENTROPY_IDENTITY,
    ));
    let h = random_hamiltonian(&mut rng, 6, 4);
    match thermo::entropy_identity_check(0.0, &h) {
        Ok(r) => report.checks.push(Check::absolute(
            G,
            "infinite_temperature_entropy",
            r.entropy,
            4f64.ln(),
            1e-12,
        )),
        Err(e) => report
            .checks
            .push(Check::error(G, "infinite_temperature_entropy", e.to_string())),
    }
    match thermo::membrane_tension(s.geometry.g_newton, s.geometry.r_ads) {
        Ok(t) => metric(report, "membrane_tension", t),
        Err(e) => report.checks.push(Check::error(G, "membrane_tension", e.to_string())),
    }
}

fn multipliers_pipeline(s: &Scenario, report: &mut RunReport) {
    const G: &str = "multipliers";
    let g = &s.geometry;
    let m = match maxent::determine_multipliers(g.g_newton, g.r_ads) {
        Ok(m) => m,
        Err(e) => {
            report.checks.push(Check::error(G, "multipliers", e.to_string()));
            return;
        }
    };
    metric(report, "alpha", m.alpha);
    metric(report, "beta", m.beta);
    let (geom, fluid) = match (geometry_of(s), fluid_of(s)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            report.checks.push(Check::error(G, "equal_apriori", e));
            return;
        }
    };
    let action = match hydro::abbreviated_action(&geom, &fluid, s.regime) {
        Ok(a) => a,
        Err(e) => {
            report.checks.push(Check::error(G, "equal_apriori", e.to_string()));
            return;
        }
    };
    match maxent::equal_apriori_probability(geom.wedge_area(), action.value, g.g_newton, g.r_ads) {
        Ok(p) => {
            let hydro_bits = geom.holographic_complexity() + action.over_pi_hbar;
            metric(report, "bulk_entropy_bits", p.entropy_bits());
            let check = if hydro_bits == 0.0 {
                Check::absolute(G, "equal_apriori_vs_hydro", p.entropy_bits(), 0.0, 0.0)
            } else {
                Check::relative(
                    G,
                    "equal_apriori_vs_hydro",
                    p.entropy_bits(),
                    hydro_bits,
                    tol::CROSS_PATH_REL,
                )
            };
            report.checks.push(check);
        }
        Err(e) => report.checks.push(Check::error(G, "equal_apriori_vs_hydro", e.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub parameter: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| v.map(|x| format!("{x}")).unwrap_or_default())
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

/// Runs the scenario once per value of `parameter` (a dotted scenario path)
/// and tabulates the metrics. Rows run in parallel; output order follows
/// `values`.
pub fn sweep(
    scenario: &Scenario,
    parameter: &str,
    values: &[f64],
) -> Result<(SweepTable, Vec<RunReport>), ScenarioError> {
    let scenarios = values
        .iter()
        .map(|&v| {
            let mut s = scenario.clone();
            s.set_param(parameter, v)?;
            Ok(s)
        })
        .collect::<Result<Vec<_>, ScenarioError>>()?;
    let reports: Vec<RunReport> = scenarios.par_iter().map(run_scenario).collect();
    let names: BTreeSet<&String> = reports.iter().flat_map(|r| r.metrics.keys()).collect();
    let mut columns = vec![parameter.to_string()];
    columns.extend(names.iter().map(|s| s.to_string()));
    columns.push("checks_failed".to_string());
    let rows = values
        .iter()
        .zip(&reports)
        .map(|(v, r)| {
            let mut row = vec![Some(*v)];
            row.extend(names.iter().map(|n| r.metrics.get(*n).copied()));
            row.push(Some(r.failures().count() as f64));
            row
        })
        .collect();
    Ok((
        SweepTable {
            parameter: parameter.to_string(),
            columns,
            rows,
        },
        reports,
    ))
}
