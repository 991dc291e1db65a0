//! Constrained maximum-entropy occupancy of the (x, p^x) mu-space.
//!
//! The occupancy `n(x, p)` maximizing the Stirling form of
//! `W = n! / prod n(x, p)!` subject to a fixed total and fixed per-site
//! momenta has the form `n = exp(-alpha - beta p v_x)`. The solver finds the
//! multipliers by damped Newton iteration on the convex dual
//!
//! ```txt
//! g(alpha, lambda) = sum_{x,p} exp(-alpha - lambda_x p) + alpha N + sum_x lambda_x P_x
//! ```
//!
//! where `lambda_x = beta v_x`. The Hessian is an arrow matrix (the sites
//! only couple through `alpha`), so each step is a Schur-complement solve in
//! `O(n_x n_p)`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::units::HBAR;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaxEntError {
    #[error("grid needs at least one site and two momenta (got {n_x} x {n_p})")]
    GridSize { n_x: usize, n_p: usize },
    #[error("p_max must be positive, got {0}")]
    MomentumRange(f64),
    #[error("momentum grid is not symmetric about zero")]
    Asymmetric,
    #[error("total occupancy must be positive, got {0}")]
    Total(f64),
    #[error("expected {expected} per-site momenta, got {found}")]
    SiteCount { expected: usize, found: usize },
    #[error("constraints are infeasible: sum |P(x)| = {momentum} must be below N p_max = {bound}")]
    Infeasible { momentum: f64, bound: f64 },
    #[error("dual Newton did not converge in {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("multiplier evaluation overflowed")]
    Overflow,
}

/// Sites `x = 0..n_x` and a symmetric momentum grid on `[-p_max, p_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuSpaceGrid {
    pub n_x: usize,
    pub momenta: Vec<f64>,
    pub p_max: f64,
    /// Phase-space measure of one cell; occupancies are counts per cell.
    pub cell_measure: f64,
}

impl MuSpaceGrid {
    pub fn new(n_x: usize, n_p: usize, p_max: f64) -> Result<Self, MaxEntError> {
        if n_x < 1 || n_p < 2 {
            return Err(MaxEntError::GridSize { n_x, n_p });
        }
        if !(p_max > 0.0 && p_max.is_finite()) {
            return Err(MaxEntError::MomentumRange(p_max));
        }
        let step = 2.0 * p_max / (n_p - 1) as f64;
        // Mirror the lower half so the grid is exactly symmetric.
        let mut momenta = vec![0.0; n_p];
        for j in 0..n_p / 2 {
            let p = -p_max + j as f64 * step;
            momenta[j] = p;
            momenta[n_p - 1 - j] = -p;
        }
        Ok(Self {
            n_x,
            momenta,
            p_max,
            cell_measure: 1.0,
        })
    }

    pub fn from_momenta(n_x: usize, momenta: Vec<f64>) -> Result<Self, MaxEntError> {
        if n_x < 1 || momenta.len() < 2 {
            return Err(MaxEntError::GridSize {
                n_x,
                n_p: momenta.len(),
            });
        }
        let n = momenta.len();
        let symmetric = (0..n).all(|j| (momenta[j] + momenta[n - 1 - j]).abs() <= 1e-12 * momenta[j].abs().max(1.0));
        if !symmetric {
            return Err(MaxEntError::Asymmetric);
        }
        let p_max = momenta.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        if p_max <= 0.0 {
            return Err(MaxEntError::MomentumRange(p_max));
        }
        Ok(Self {
            n_x,
            momenta,
            p_max,
            cell_measure: 1.0,
        })
    }

    pub fn n_p(&self) -> usize {
        self.momenta.len()
    }

    pub fn cells(&self) -> usize {
        self.n_x * self.n_p()
    }
}

/// Occupancy numbers, site-major: `values[x * n_p + j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyField {
    pub n_x: usize,
    pub n_p: usize,
    pub values: Vec<f64>,
}

impl OccupancyField {
    pub fn get(&self, x: usize, j: usize) -> f64 {
        self.values[x * self.n_p + j]
    }

    pub fn site(&self, x: usize) -> &[f64] {
        &self.values[x * self.n_p..(x + 1) * self.n_p]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn site_momentum(&self, x: usize, grid: &MuSpaceGrid) -> f64 {
        self.site(x).iter().zip(&grid.momenta).map(|(n, p)| n * p).sum()
    }

    /// Largest relative difference `|a - b| / max(|a|, |b|)` over cells.
    pub fn max_relative_difference(&self, other: &OccupancyField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let scale = a.abs().max(b.abs());
                if scale > 0.0 { (a - b).abs() / scale } else { 0.0 }
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// `n ln n - sum n_i ln n_i`
    Stirling,
    /// `ln(n! / prod n_i!)` through the log-gamma function.
    Exact,
}

/// `ln W` of an occupancy, with `0 ln 0 = 0`.
pub fn log_microstates(occupancy: &[f64], mode: CountMode) -> f64 {
    let total: f64 = occupancy.iter().sum();
    match mode {
        CountMode::Stirling => {
            let xlnx = |v: f64| if v > 0.0 { v * v.ln() } else { 0.0 };
            xlnx(total) - occupancy.iter().map(|&v| xlnx(v)).sum::<f64>()
        }
        CountMode::Exact => {
            ln_gamma(total + 1.0) - occupancy.iter().map(|&v| ln_gamma(v + 1.0)).sum::<f64>()
        }
    }
}

/// Fixed total and per-site momenta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub n_total: f64,
    pub momentum: Vec<f64>,
}

impl ConstraintSet {
    pub fn validate(&self, grid: &MuSpaceGrid) -> Result<(), MaxEntError> {
        if !(self.n_total > 0.0 && self.n_total.is_finite()) {
            return Err(MaxEntError::Total(self.n_total));
        }
        if self.momentum.len() != grid.n_x {
            return Err(MaxEntError::SiteCount {
                expected: grid.n_x,
                found: self.momentum.len(),
            });
        }
        let momentum: f64 = self.momentum.iter().map(|p| p.abs()).sum();
        let bound = self.n_total * grid.p_max;
        if !(momentum < bound) {
            return Err(MaxEntError::Infeasible { momentum, bound });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multipliers {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxEntSolution {
    pub field: OccupancyField,
    pub alpha: f64,
    /// Per-site momentum multipliers `beta v_x`.
    pub lambda: Vec<f64>,
    pub iterations: usize,
    /// Scaled constraint residual at exit.
    pub residual: f64,
}

impl MaxEntSolution {
    /// Shift velocities `v_x = lambda_x / beta`.
    pub fn shift_velocity(&self, beta: f64) -> Vec<f64> {
        self.lambda.iter().map(|l| l / beta).collect()
    }

    pub fn log_microstates(&self) -> f64 {
        log_microstates(&self.field.values, CountMode::Stirling)
    }
}

struct Dual<'a> {
    grid: &'a MuSpaceGrid,
    constraints: &'a ConstraintSet,
}

impl Dual<'_> {
    fn occupancy(&self, alpha: f64, lambda: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.grid.cells());
        for l in lambda {
            for p in &self.grid.momenta {
                out.push((-alpha - l * p).exp());
            }
        }
        out
    }

    fn value(&self, alpha: f64, lambda: &[f64]) -> f64 {
        let mass: f64 = self.occupancy(alpha, lambda).iter().sum();
        let linear: f64 = lambda
            .iter()
            .zip(&self.constraints.momentum)
            .map(|(l, p)| l * p)
            .sum();
        mass + alpha * self.constraints.n_total + linear
    }
}

pub fn maxent_solve(
    grid: &MuSpaceGrid,
    constraints: &ConstraintSet,
    options: SolverOptions,
) -> Result<MaxEntSolution, MaxEntError> {
    constraints.validate(grid)?;
    let dual = Dual { grid, constraints };
    let n_p = grid.n_p();
    let total = constraints.n_total;
    let momentum_scale = total * grid.p_max;

    let mut alpha = -(total / grid.cells() as f64).ln();
    let mut lambda = vec![0.0; grid.n_x];
    let mut residual = f64::INFINITY;

    for iteration in 0..=options.max_iterations {
        let n = dual.occupancy(alpha, &lambda);
        let mass: f64 = n.iter().sum();
        let grad_alpha = total - mass;
        let mut grad = vec![0.0; grid.n_x];
        let mut first = vec![0.0; grid.n_x];
        let mut second = vec![0.0; grid.n_x];
        for x in 0..grid.n_x {
            for (j, p) in grid.momenta.iter().enumerate() {
                let v = n[x * n_p + j];
                first[x] += p * v;
                second[x] += p * p * v;
            }
            grad[x] = constraints.momentum[x] - first[x];
        }
        residual = (grad_alpha.abs() / total)
            .max(grad.iter().fold(0.0f64, |m, g| m.max(g.abs())) / momentum_scale);
        if !residual.is_finite() {
            return Err(MaxEntError::Overflow);
        }
        if residual < options.tolerance {
            return Ok(MaxEntSolution {
                field: OccupancyField {
                    n_x: grid.n_x,
                    n_p,
                    values: n,
                },
                alpha,
                lambda,
                iterations: iteration,
                residual,
            });
        }
        if iteration == options.max_iterations {
            break;
        }

        // Newton direction through the Schur complement of the arrow Hessian.
        let schur = mass
            - first
                .iter()
                .zip(&second)
                .map(|(m, q)| m * m / q)
                .sum::<f64>();
        let rhs = -grad_alpha
            + first
                .iter()
                .zip(&second)
                .zip(&grad)
                .map(|((m, q), g)| m * g / q)
                .sum::<f64>();
        let d_alpha = rhs / schur;
        let d_lambda: Vec<f64> = (0..grid.n_x)
            .map(|x| (-grad[x] - first[x] * d_alpha) / second[x])
            .collect();
        let slope = grad_alpha * d_alpha
            + grad
                .iter()
                .zip(&d_lambda)
                .map(|(g, d)| g * d)
                .sum::<f64>();

        let start = dual.value(alpha, &lambda);
        let mut step = 1.0;
        loop {
            let trial_lambda: Vec<f64> = lambda
                .iter()
                .zip(&d_lambda)
                .map(|(l, d)| l + step * d)
                .collect();
            let trial = dual.value(alpha + step * d_alpha, &trial_lambda);
            let slack = 1e-14 * start.abs().max(1.0);
            if trial.is_finite() && trial <= start + 1e-4 * step * slope + slack {
                alpha += step * d_alpha;
                lambda = trial_lambda;
                break;
            }
            step *= 0.5;
            if step < 1e-12 {
                return Err(MaxEntError::NoConvergence {
                    iterations: iteration,
                    residual,
                });
            }
        }
    }
    Err(MaxEntError::NoConvergence {
        iterations: options.max_iterations,
        residual,
    })
}

/// `n(x, p) = A exp(-beta p v_x)` with `A = exp(-alpha)` fixed by the total.
/// Returns the field and `alpha`.
pub fn closed_form_occupancy(
    grid: &MuSpaceGrid,
    beta: f64,
    v_x: &[f64],
    n_total: f64,
) -> Result<(OccupancyField, f64), MaxEntError> {
    if v_x.len() != grid.n_x {
        return Err(MaxEntError::SiteCount {
            expected: grid.n_x,
            found: v_x.len(),
        });
    }
    if !(n_total > 0.0) {
        return Err(MaxEntError::Total(n_total));
    }
    let exponents: Vec<f64> = v_x
        .iter()
        .flat_map(|v| grid.momenta.iter().map(move |p| -beta * p * v))
        .collect();
    let top = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(MaxEntError::Overflow);
    }
    let weights: Vec<f64> = exponents.iter().map(|e| (e - top).exp()).collect();
    let scale = n_total / weights.iter().sum::<f64>();
    let values = weights.iter().map(|w| w * scale).collect();
    Ok((
        OccupancyField {
            n_x: grid.n_x,
            n_p: grid.n_p(),
            values,
        },
        top - scale.ln(),
    ))
}

/// `alpha = ln 2 / (8 pi G_N R_AdS)`, `beta = ln 2 / (pi hbar)`.
pub fn determine_multipliers(g_newton: f64, r_ads: f64) -> Result<Multipliers, MaxEntError> {
    if !(g_newton > 0.0) {
        return Err(MaxEntError::NonPositive {
            name: "g_newton",
            value: g_newton,
        });
    }
    if !(r_ads > 0.0) {
        return Err(MaxEntError::NonPositive {
            name: "r_ads",
            value: r_ads,
        });
    }
    Ok(Multipliers {
        alpha: LN_2 / (8.0 * PI * g_newton * r_ads),
        beta: LN_2 / (PI * HBAR),
    })
}

/// Equal a priori probability of a bulk microstate, stored as its logarithm
/// so that large wedges do not underflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BulkProbability {
    pub ln_p: f64,
}

impl BulkProbability {
    pub fn probability(&self) -> f64 {
        self.ln_p.exp()
    }

    /// `S = -ln p`, in nats.
    pub fn entropy(&self) -> f64 {
        -self.ln_p
    }

    /// `S / ln 2`.
    pub fn entropy_bits(&self) -> f64 {
        self.entropy() / LN_2
    }
}

/// `p = exp(-alpha Area - beta I)`.
pub fn equal_apriori_probability(
    area: f64,
    action: f64,
    g_newton: f64,
    r_ads: f64,
) -> Result<BulkProbability, MaxEntError> {
    let m = determine_multipliers(g_newton, r_ads)?;
    Ok(BulkProbability {
        ln_p: -m.alpha * area - m.beta * action,
    })
}

/// `S = -ln p`.
pub fn entropy_from_probability(p: f64) -> f64 {
    -p.ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoRelation {
    /// Per-site momenta of the max-ent state the derivatives are taken at.
    pub momentum: Vec<f64>,
    /// Central differences `dS/dP_x`.
    pub derivatives: Vec<f64>,
    /// `-v_x Delta(1/T)` with `Delta(1/T) = -beta`.
    pub predicted: Vec<f64>,
    pub step: f64,
    pub max_residual: f64,
}

/// Checks `dS/dP_x = -v_x Delta(1/T_bulk)` on the max-ent family.
///
/// The state is the closed-form occupancy with shift velocities `v_x`; its
/// entropy is differentiated in each `P_x` by re-solving at `P_x +- h`, with
/// `h = step_fraction * p_max`.
pub fn thermo_relation_check(
    grid: &MuSpaceGrid,
    n_total: f64,
    v_x: &[f64],
    beta: f64,
    step_fraction: f64,
) -> Result<ThermoRelation, MaxEntError> {
    let (field, _) = closed_form_occupancy(grid, beta, v_x, n_total)?;
    let momentum: Vec<f64> = (0..grid.n_x).map(|x| field.site_momentum(x, grid)).collect();
    let step = step_fraction * grid.p_max;
    let options = SolverOptions {
        tolerance: 1e-13,
        ..SolverOptions::default()
    };
    let entropy_at = |x: usize, shift: f64| -> Result<f64, MaxEntError> {
        let mut p = momentum.clone();
        p[x] += shift;
        let c = ConstraintSet {
            n_total,
            momentum: p,
        };
        Ok(maxent_solve(grid, &c, options)?.log_microstates())
    };
    let mut derivatives = Vec::with_capacity(grid.n_x);
    for x in 0..grid.n_x {
        derivatives.push((entropy_at(x, step)? - entropy_at(x, -step)?) / (2.0 * step));
    }
    let predicted: Vec<f64> = v_x.iter().map(|v| beta * v).collect();
    let max_residual = derivatives
        .iter()
        .zip(&predicted)
        .map(|(d, p)| (d - p).abs())
        .fold(0.0, f64::max);
    Ok(ThermoRelation {
        momentum,
        derivatives,
        predicted,
        step,
        max_residual,
    })
}
