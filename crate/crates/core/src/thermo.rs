//! Coarse-grained Hamiltonians, Helmholtz free energy and the bulk actions
//! they map to.

use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::HBAR;

pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("overlap matrix has {rows} rows but there are {levels} energy levels")]
    Shape { rows: usize, levels: usize },
    #[error("overlap matrix has no columns")]
    Empty,
    #[error("p[{row}][{col}] = {value} is negative")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}, not 1")]
    RowSum { row: usize, sum: f64 },
    #[error("beta must be finite and non-negative, got {0}")]
    Beta(f64),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("expected {expected} momenta, got {found}")]
    Momenta { expected: usize, found: usize },
}

/// Energies `E_n` coarse-grained onto `K` states by a row-stochastic overlap
/// matrix `p[n][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RedefinedHamiltonian {
    energies: Vec<f64>,
    overlap: DMatrix<f64>,
    coarse: Vec<f64>,
}

pub fn coarse_grain_hamiltonian(
    energies: &[f64],
    overlap: &DMatrix<f64>,
) -> Result<RedefinedHamiltonian, ThermoError> {
    if overlap.nrows() != energies.len() {
        return Err(ThermoError::Shape {
            rows: overlap.nrows(),
            levels: energies.len(),
        });
    }
    if overlap.ncols() == 0 || overlap.nrows() == 0 {
        return Err(ThermoError::Empty);
    }
    for n in 0..overlap.nrows() {
        let mut sum = 0.0;
        for k in 0..overlap.ncols() {
            let value = overlap[(n, k)];
            if value < 0.0 || !value.is_finite() {
                return Err(ThermoError::Negative {
                    row: n,
                    col: k,
                    value,
                });
            }
            sum += value;
        }
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(ThermoError::RowSum { row: n, sum });
        }
    }
    let coarse = (0..overlap.ncols())
        .map(|k| (0..overlap.nrows()).map(|n| energies[n] * overlap[(n, k)]).sum())
        .collect();
    Ok(RedefinedHamiltonian {
        energies: energies.to_vec(),
        overlap: overlap.clone(),
        coarse,
    })
}

impl RedefinedHamiltonian {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn overlap(&self) -> &DMatrix<f64> {
        &self.overlap
    }

    /// `<E>_k = sum_n E_n p[n][k]`.
    pub fn coarse_energies(&self) -> &[f64] {
        &self.coarse
    }

    pub fn levels(&self) -> usize {
        self.coarse.len()
    }

    /// `<E>_k / sum_n p[n][k]`, the column-weighted mean energy. Always
    /// inside `[min E, max E]`; `None` for a column with no weight.
    pub fn normalized_energies(&self) -> Vec<Option<f64>> {
        (0..self.overlap.ncols())
            .map(|k| {
                let mass: f64 = self.overlap.column(k).sum();
                (mass > 0.0).then(|| self.coarse[k] / mass)
            })
            .collect()
    }
}

/// Gibbs weights over the coarse levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalState {
    pub beta: f64,
    pub weights: Vec<f64>,
    pub ln_z: f64,
}

impl CanonicalState {
    pub fn new(beta: f64, levels: &[f64]) -> Result<Self, ThermoError> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(ThermoError::Beta(beta));
        }
        if levels.is_empty() {
            return Err(ThermoError::Empty);
        }
        let exps: Vec<f64> = levels.iter().map(|e| -beta * e).collect();
        let top = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = exps.iter().map(|x| (x - top).exp()).collect();
        let sum: f64 = raw.iter().sum();
        Ok(Self {
            beta,
            weights: raw.iter().map(|w| w / sum).collect(),
            ln_z: top + sum.ln(),
        })
    }

    pub fn partition(&self) -> f64 {
        self.ln_z.exp()
    }

    /// `-sum w ln w`
    pub fn entropy(&self) -> f64 {
        -self
            .weights
            .iter()
            .map(|&w| if w > 0.0 { w * w.ln() } else { 0.0 })
            .sum::<f64>()
    }

    pub fn mean(&self, levels: &[f64]) -> f64 {
        self.weights.iter().zip(levels).map(|(w, e)| w * e).sum()
    }

    /// `-(1/beta) ln Z`; undefined at `beta = 0`.
    pub fn free_energy(&self) -> Option<f64> {
        (self.beta > 0.0).then(|| -self.ln_z / self.beta)
    }
}

pub fn helmholtz(beta: f64, h: &RedefinedHamiltonian) -> Result<Option<f64>, ThermoError> {
    Ok(CanonicalState::new(beta, h.coarse_energies())?.free_energy())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyIdentity {
    pub beta: f64,
    pub entropy: f64,
    pub mean_energy: f64,
    pub free_energy: Option<f64>,
    /// `|S - beta (E - F)|`; zero by construction when `F` is undefined.
    pub residual: f64,
}

/// Compares the Shannon entropy of the Gibbs weights with `beta (E - F)`.
/// At `beta = 0` the weights are uniform, `S = ln K` and `F` is flagged as
/// undefined.
pub fn entropy_identity_levels(beta: f64, levels: &[f64]) -> Result<EntropyIdentity, ThermoError> {
    let state = CanonicalState::new(beta, levels)?;
    let entropy = state.entropy();
    let mean_energy = state.mean(levels);
    let free_energy = state.free_energy();
    let residual = match free_energy {
        Some(f) => (entropy - beta * (mean_energy - f)).abs(),
        None => (entropy - (levels.len() as f64).ln()).abs(),
    };
    Ok(EntropyIdentity {
        beta,
        entropy,
        mean_energy,
        free_energy,
        residual,
    })
}

pub fn entropy_identity_check(
    beta: f64,
    h: &RedefinedHamiltonian,
) -> Result<EntropyIdentity, ThermoError> {
    entropy_identity_levels(beta, h.coarse_energies())
}

/// Levels seen from a reservoir moving with `v_x`:
/// `<E>_k - v_x <P>_k + offset`. The offset drops out of every entropy.
pub fn boosted_levels(
    h: &RedefinedHamiltonian,
    momenta: &[f64],
    v_x: f64,
    offset: f64,
) -> Result<Vec<f64>, ThermoError> {
    if momenta.len() != h.levels() {
        return Err(ThermoError::Momenta {
            expected: h.levels(),
            found: momenta.len(),
        });
    }
    Ok(h.coarse
        .iter()
        .zip(momenta)
        .map(|(e, p)| e - v_x * p + offset)
        .collect())
}

/// `I_AdS = hbar beta F`.
pub fn gkpw_action(beta: f64, free_energy: f64) -> f64 {
    HBAR * beta * free_energy
}

/// `I = -(b/pi) W - hbar b A` with `b = ln 2`.
pub fn bulk_tn_action(w_tn: f64, a_tn: f64) -> f64 {
    -(LN_2 / PI) * w_tn - HBAR * LN_2 * a_tn
}

/// `hbar ln 2 / (8 pi G R^2)`.
pub fn membrane_tension(g_newton: f64, r_ads: f64) -> Result<f64, ThermoError> {
    if !(g_newton > 0.0) {
        return Err(ThermoError::NonPositive {
            name: "g_newton",
            value: g_newton,
        });
    }
    if !(r_ads > 0.0) {
        return Err(ThermoError::NonPositive {
            name: "r_ads",
            value: r_ads,
        });
    }
    Ok(HBAR * LN_2 / (8.0 * PI * g_newton * r_ads * r_ads))
}
