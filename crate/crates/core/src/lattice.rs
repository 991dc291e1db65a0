//! Von Neumann's second measurement method on a phase-space lattice.
//!
//! Position and momentum are replaced by commuting coarse-grained versions
//! whose spectra are the lattices `{0, +-eps_q, +-2 eps_q, ...}` and
//! `{0, +-eps_p, ...}` with `eps_q * eps_p = h`. Each Planck cell carries one
//! Gaussian wave packet; after symmetric (Loewdin) orthonormalization these
//! packets form the basis a pure state is expanded in. Dropping the phases of
//! the expansion coefficients leaves a classical mixture whose Shannon
//! entropy is the information lost to the measurement errors.
//!
//! All wave functions live on a uniform one-dimensional position grid and
//! inner products use trapezoidal quadrature on that grid.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::{BIT, HBAR, PLANCK};

/// Tolerance on `|<b_i|b_j> - delta_ij|` for the orthonormalized packets.
pub const TAU_ORTH: f64 = 1e-8;
/// Tolerance on state and packet norms.
pub const TAU_NORM: f64 = 1e-8;
/// Largest admissible norm leak out of the truncated cell window.
pub const DEFAULT_DELTA_TRUNC: f64 = 1e-3;
/// Gram matrices with a larger condition number are rejected.
pub const MAX_GRAM_CONDITION: f64 = 1e10;

/// Error product bound below which the redefined position and momentum
/// commute: `60^2 hbar / 2`.
pub const ERROR_PRODUCT_BOUND: f64 = 60.0 * 60.0 * HBAR / 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("measurement errors must be positive (sigma_q = {sigma_q}, sigma_p = {sigma_p})")]
    NonPositiveError { sigma_q: f64, sigma_p: f64 },
    #[error("cell width must be positive and finite, got {0}")]
    NonPositiveWidth(f64),
    #[error("fine grid needs at least {min} points per cell, got {got}")]
    GridTooCoarse { min: usize, got: usize },
    #[error("fine grid padding must be at least {min} cells, got {got}")]
    PaddingTooSmall { min: f64, got: f64 },
    #[error(
        "gram matrix condition number {condition:.3e} exceeds {limit:.1e}; \
         try a smaller truncation window or wider cells"
    )]
    IllConditioned { condition: f64, limit: f64 },
    #[error("captured norm {captured:.6} is below 1 - delta_trunc = {threshold:.6}; enlarge the truncation window")]
    Truncation { captured: f64, threshold: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state has zero norm on the grid")]
    ZeroNorm,
}

/// Returns whether the measurement errors satisfy von Neumann's
/// commutativity condition `sigma_q * sigma_p < 60^2 hbar / 2`.
pub fn validate_errors(sigma_q: f64, sigma_p: f64) -> Result<bool, LatticeError> {
    if !(sigma_q > 0.0 && sigma_p > 0.0) {
        return Err(LatticeError::NonPositiveError { sigma_q, sigma_p });
    }
    Ok(sigma_q * sigma_p < ERROR_PRODUCT_BOUND)
}

/// A phase-space cell, centered at `(m eps_q, n eps_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub m: i32,
    pub n: i32,
}

/// The grid of Planck cells, truncated to `|m| <= m_max_q`, `|n| <= m_max_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanckLattice {
    pub eps_q: f64,
    pub eps_p: f64,
    pub m_max_q: u32,
    pub m_max_p: u32,
}

impl PlanckLattice {
    pub fn new(eps_q: f64, m_max_q: u32, m_max_p: u32) -> Result<Self, LatticeError> {
        if !(eps_q > 0.0 && eps_q.is_finite()) {
            return Err(LatticeError::NonPositiveWidth(eps_q));
        }
        Ok(Self {
            eps_q,
            eps_p: PLANCK / eps_q,
            m_max_q,
            m_max_p,
        })
    }

    /// Cells in row-major order: position index outer, momentum inner.
    pub fn cells(&self) -> Vec<Cell> {
        let (mq, mp) = (self.m_max_q as i32, self.m_max_p as i32);
        (-mq..=mq)
            .flat_map(|m| (-mp..=mp).map(move |n| Cell { m, n }))
            .collect()
    }

    pub fn cell_count(&self) -> usize {
        (2 * self.m_max_q as usize + 1) * (2 * self.m_max_p as usize + 1)
    }

    pub fn position_spectrum(&self) -> Vec<f64> {
        let mq = self.m_max_q as i32;
        (-mq..=mq).map(|m| m as f64 * self.eps_q).collect()
    }

    pub fn momentum_spectrum(&self) -> Vec<f64> {
        let mp = self.m_max_p as i32;
        (-mp..=mp).map(|n| n as f64 * self.eps_p).collect()
    }

    pub fn center(&self, cell: Cell) -> (f64, f64) {
        (cell.m as f64 * self.eps_q, cell.n as f64 * self.eps_p)
    }

    /// Raw (non-orthogonal) packet of `cell` evaluated at position `x`.
    ///
    /// `(2^(1/4) / sqrt(eps_q)) exp(-pi (x - q)^2 / eps_q^2) exp(i p x)`. Its
    /// Fourier transform is a Gaussian of the same shape with width `eps_p`.
    pub fn raw_packet(&self, cell: Cell, x: f64) -> Complex64 {
        let (q, p) = self.center(cell);
        let norm = 2f64.powf(0.25) / self.eps_q.sqrt();
        let d = (x - q) / self.eps_q;
        Complex64::from_polar(norm * (-PI * d * d).exp(), p * x / HBAR)
    }
}

/// Resolution of the fine position grid, relative to the cell width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points_per_cell: usize,
    pub padding_cells: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points_per_cell: 32,
            padding_cells: 6.0,
        }
    }
}

impl GridSpec {
    pub const MIN_POINTS_PER_CELL: usize = 16;
    pub const MIN_PADDING_CELLS: f64 = 4.0;

    pub fn refined(self) -> Self {
        Self {
            points_per_cell: self.points_per_cell * 2,
            ..self
        }
    }
}

/// Uniform grid `x_i = x0 + i dx`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FineGrid {
    pub x0: f64,
    pub dx: f64,
    pub len: usize,
}

impl FineGrid {
    pub fn for_lattice(lattice: &PlanckLattice, spec: GridSpec) -> Result<Self, LatticeError> {
        // Highest plane-wave momentum plus a few Gaussian widths must stay
        // well under the grid's Nyquist momentum pi / dx.
        let min_points = GridSpec::MIN_POINTS_PER_CELL.max(2 * (lattice.m_max_p as usize + 4));
        if spec.points_per_cell < min_points {
            return Err(LatticeError::GridTooCoarse {
                min: min_points,
                got: spec.points_per_cell,
            });
        }
        if !(spec.padding_cells >= GridSpec::MIN_PADDING_CELLS) {
            return Err(LatticeError::PaddingTooSmall {
                min: GridSpec::MIN_PADDING_CELLS,
                got: spec.padding_cells,
            });
        }
        let half_extent = (lattice.m_max_q as f64 + spec.padding_cells) * lattice.eps_q;
        let dx = lattice.eps_q / spec.points_per_cell as f64;
        let steps = (2.0 * half_extent / dx).ceil() as usize;
        Ok(Self {
            x0: -half_extent,
            dx,
            len: steps + 1,
        })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.x(i)).collect()
    }

    /// Trapezoidal weights.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![self.dx; self.len];
        if let Some(first) = w.first_mut() {
            *first *= 0.5;
        }
        if let Some(last) = w.last_mut() {
            *last *= 0.5;
        }
        w
    }

    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        self.weights()
            .iter()
            .zip(a.iter().zip(b))
            .map(|(w, (x, y))| x.conj() * y * *w)
            .sum()
    }
}

/// Orthonormalized packet basis on a fine grid.
#[derive(Debug, Clone)]
pub struct PacketBasis {
    lattice: PlanckLattice,
    grid: FineGrid,
    weights: Vec<f64>,
    cells: Vec<Cell>,
    /// Raw packets as columns (grid points x cells).
    raw: DMatrix<Complex64>,
    /// Loewdin-orthonormalized packets as columns.
    vectors: DMatrix<Complex64>,
    raw_gram: DMatrix<Complex64>,
    condition: f64,
}

/// Compact, serializable description of a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSummary {
    pub lattice: PlanckLattice,
    pub grid: FineGrid,
    pub cells: Vec<Cell>,
    pub gram_condition: f64,
    pub max_raw_overlap: f64,
    pub orthonormality_error: f64,
}

pub fn build_packet_basis(
    lattice: &PlanckLattice,
    spec: GridSpec,
) -> Result<PacketBasis, LatticeError> {
    let grid = FineGrid::for_lattice(lattice, spec)?;
    let weights = grid.weights();
    let cells = lattice.cells();
    let xs = grid.points();

    let raw = DMatrix::from_fn(grid.len, cells.len(), |i, k| {
        lattice.raw_packet(cells[k], xs[i])
    });
    let raw_gram = weighted_gram(&raw, &weights, &raw);
    let raw_gram = (&raw_gram + raw_gram.adjoint()) * Complex64::new(0.5, 0.0);

    let eig = SymmetricEigen::new(raw_gram.clone());
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition <= MAX_GRAM_CONDITION) {
        return Err(LatticeError::IllConditioned {
            condition,
            limit: MAX_GRAM_CONDITION,
        });
    }

    let inv_sqrt_diag = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|v| Complex64::new(1.0 / v.sqrt(), 0.0)),
    );
    let inv_sqrt = &eig.eigenvectors * inv_sqrt_diag * eig.eigenvectors.adjoint();
    let vectors = &raw * inv_sqrt;

    Ok(PacketBasis {
        lattice: *lattice,
        grid,
        weights,
        cells,
        raw,
        vectors,
        raw_gram,
        condition,
    })
}

fn weighted_gram(
    a: &DMatrix<Complex64>,
    weights: &[f64],
    b: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let mut wb = b.clone();
    for (i, w) in weights.iter().enumerate() {
        wb.row_mut(i).scale_mut(*w);
    }
    a.adjoint() * wb
}

fn max_abs_deviation_from_identity(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}

impl PacketBasis {
    pub fn lattice(&self) -> &PlanckLattice {
        &self.lattice
    }

    pub fn grid(&self) -> &FineGrid {
        &self.grid
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_of(&self, cell: Cell) -> Option<usize> {
        self.cells.iter().position(|c| *c == cell)
    }

    pub fn raw_gram(&self) -> &DMatrix<Complex64> {
        &self.raw_gram
    }

    pub fn gram_condition(&self) -> f64 {
        self.condition
    }

    /// Samples of orthonormalized packet `k`.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k).iter().copied().collect()
    }

    /// Samples of raw packet `k`.
    pub fn raw_vector(&self, k: usize) -> Vec<Complex64> {
        self.raw.column(k).iter().copied().collect()
    }

    /// Gram matrix of the orthonormalized packets.
    pub fn gram(&self) -> DMatrix<Complex64> {
        weighted_gram(&self.vectors, &self.weights, &self.vectors)
    }

    /// `max |<b_i|b_j> - delta_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        max_abs_deviation_from_identity(&self.gram())
    }

    pub fn raw_norm_error(&self) -> f64 {
        (0..self.len())
            .map(|k| (self.raw_gram[(k, k)].re - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn summary(&self) -> BasisSummary {
        let mut max_raw_overlap = 0.0f64;
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j {
                    max_raw_overlap = max_raw_overlap.max(self.raw_gram[(i, j)].norm());
                }
            }
        }
        BasisSummary {
            lattice: self.lattice,
            grid: self.grid,
            cells: self.cells.clone(),
            gram_condition: self.condition,
            max_raw_overlap,
            orthonormality_error: self.orthonormality_error(),
        }
    }

    /// The normalized superposition `sum_k a_k b_k` sampled on the grid.
    pub fn superposition(&self, coefficients: &[Complex64]) -> Result<PureStateVector, LatticeError> {
        if coefficients.len() != self.len() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.len(),
                found: coefficients.len(),
            });
        }
        let samples = (0..self.grid.len)
            .map(|i| {
                coefficients
                    .iter()
                    .enumerate()
                    .map(|(k, a)| self.vectors[(i, k)] * a)
                    .sum()
            })
            .collect();
        PureStateVector::from_samples(self.grid, samples)
    }
}

/// A normalized wave function sampled on a fine grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    grid: FineGrid,
    amplitudes: Vec<Complex64>,
}

impl PureStateVector {
    /// Normalizes `samples` with respect to the grid quadrature.
    pub fn from_samples(grid: FineGrid, samples: Vec<Complex64>) -> Result<Self, LatticeError> {
        if samples.len() != grid.len {
            return Err(LatticeError::DimensionMismatch {
                expected: grid.len,
                found: samples.len(),
            });
        }
        let norm = grid.inner(&samples, &samples).re.sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(LatticeError::ZeroNorm);
        }
        let amplitudes = samples.into_iter().map(|a| a / norm).collect();
        Ok(Self { grid, amplitudes })
    }

    pub fn from_fn(grid: FineGrid, f: impl Fn(f64) -> Complex64) -> Result<Self, LatticeError> {
        let samples = (0..grid.len).map(|i| f(grid.x(i))).collect();
        Self::from_samples(grid, samples)
    }

    pub fn grid(&self) -> &FineGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.grid.inner(&self.amplitudes, &self.amplitudes).re.sqrt()
    }
}

/// Expansion coefficients `c_n = <b_n|psi>` of a state in the packet basis.
///
/// Fails with [`LatticeError::Truncation`] when `sum |c_n|^2 < 1 - delta_trunc`.
pub fn expand(
    state: &PureStateVector,
    basis: &PacketBasis,
    delta_trunc: f64,
) -> Result<Vec<Complex64>, LatticeError> {
    let coefficients = project(state, basis)?;
    let captured: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    if captured < 1.0 - delta_trunc {
        return Err(LatticeError::Truncation {
            captured,
            threshold: 1.0 - delta_trunc,
        });
    }
    Ok(coefficients)
}

/// Projection onto the basis without the truncation check.
pub fn project(state: &PureStateVector, basis: &PacketBasis) -> Result<Vec<Complex64>, LatticeError> {
    if state.grid != basis.grid {
        return Err(LatticeError::DimensionMismatch {
            expected: basis.grid.len,
            found: state.grid.len,
        });
    }
    Ok((0..basis.len())
        .map(|k| {
            basis
                .weights
                .iter()
                .enumerate()
                .map(|(i, w)| basis.vectors[(i, k)].conj() * state.amplitudes[i] * *w)
                .sum()
        })
        .collect())
}

/// Probabilities over cells after the relative phases are discarded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMixture {
    pub probabilities: Vec<f64>,
    pub captured_norm: f64,
}

impl ClassicalMixture {
    /// Whether more than `delta_trunc` of the norm leaked out of the window.
    pub fn leaks(&self, delta_trunc: f64) -> bool {
        self.captured_norm < 1.0 - delta_trunc
    }

    /// Probabilities rescaled to sum to one.
    pub fn normalized(&self) -> Vec<f64> {
        if self.captured_norm > 0.0 {
            self.probabilities
                .iter()
                .map(|p| p / self.captured_norm)
                .collect()
        } else {
            self.probabilities.clone()
        }
    }
}

pub fn classicalize(coefficients: &[Complex64]) -> ClassicalMixture {
    let probabilities: Vec<f64> = coefficients.iter().map(|c| c.norm_sqr()).collect();
    let captured_norm = probabilities.iter().sum();
    ClassicalMixture {
        probabilities,
        captured_norm,
    }
}

/// `-sum p log2 p` of the renormalized mixture, with `0 log 0 = 0`.
pub fn shannon_entropy_bits(mixture: &ClassicalMixture) -> f64 {
    -mixture
        .normalized()
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| p * p.log2())
        .sum::<f64>()
}

/// Von Neumann entropy of the diagonal density matrix, in nats.
pub fn von_neumann_entropy_nats(mixture: &ClassicalMixture) -> f64 {
    BIT * shannon_entropy_bits(mixture)
}

/// Operators whose matrix elements between packets can be inspected.
#[derive(Debug, Clone)]
pub enum Observable {
    /// `sum_k f(k) |b_k><b_k|`, diagonal in the redefined cell indices.
    CellFunction(Vec<f64>),
    /// Multiplication by `f(x)` on the fine grid.
    Multiplication(Vec<f64>),
    /// The original (fine-grained) position operator.
    Position,
    /// A matrix acting on grid samples, `(O psi)_i = sum_j O_ij psi_j`.
    Grid(DMatrix<Complex64>),
}

/// `max_{i != j} |<b_i|O|b_j>|` over the orthonormalized packets.
pub fn check_superselection(basis: &PacketBasis, observable: &Observable) -> Result<f64, LatticeError> {
    let n = basis.grid.len;
    let applied: DMatrix<Complex64> = match observable {
        Observable::CellFunction(f) => {
            if f.len() != basis.len() {
                return Err(LatticeError::DimensionMismatch {
                    expected: basis.len(),
                    found: f.len(),
                });
            }
            // O b_j = sum_k f_k b_k <b_k|b_j>
            let gram = basis.gram();
            let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                f.len(),
                f.iter().map(|v| Complex64::new(*v, 0.0)),
            ));
            &basis.vectors * diag * gram
        }
        Observable::Multiplication(f) => {
            if f.len() != n {
                return Err(LatticeError::DimensionMismatch {
                    expected: n,
                    found: f.len(),
                });
            }
            let mut m = basis.vectors.clone();
            for (i, v) in f.iter().enumerate() {
                m.row_mut(i).scale_mut(*v);
            }
            m
        }
        Observable::Position => {
            let mut m = basis.vectors.clone();
            for i in 0..n {
                m.row_mut(i).scale_mut(basis.grid.x(i));
            }
            m
        }
        Observable::Grid(op) => {
            if op.nrows() != n || op.ncols() != n {
                return Err(LatticeError::DimensionMismatch {
                    expected: n,
                    found: op.nrows().max(op.ncols()),
                });
            }
            op * &basis.vectors
        }
    };
    let elements = weighted_gram(&basis.vectors, &basis.weights, &applied);
    let mut worst = 0.0f64;
    for i in 0..elements.nrows() {
        for j in 0..elements.ncols() {
            if i != j {
                worst = worst.max(elements[(i, j)].norm());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, SQRT_2};

    fn symmetric_lattice(m_max_q: u32, m_max_p: u32) -> PlanckLattice {
        PlanckLattice::new((2.0 * PI).sqrt(), m_max_q, m_max_p).unwrap()
    }

    #[test]
    fn error_bound_is_strict() {
        assert!(validate_errors(1.0, 1.0).unwrap());
        assert!(!validate_errors(60.0, 30.0).unwrap());
        assert!(validate_errors(42.4, 42.4).unwrap());
        assert!(validate_errors(0.0, 1.0).is_err());
        assert!(validate_errors(1.0, -2.0).is_err());
    }

    #[test]
    fn cell_widths_multiply_to_planck() {
        let l = PlanckLattice::new(1.0, 1, 1).unwrap();
        assert!((l.eps_p - 2.0 * PI).abs() < 1e-15);
        let l = PlanckLattice::new((2.0 * PI).sqrt(), 1, 1).unwrap();
        assert!((l.eps_p - (2.0 * PI).sqrt()).abs() < 1e-14);
        let l = PlanckLattice::new(2.0 * PI, 1, 1).unwrap();
        assert!((l.eps_p - 1.0).abs() < 1e-15);
        assert!(PlanckLattice::new(0.0, 1, 1).is_err());
        assert!(PlanckLattice::new(-1.0, 1, 1).is_err());
    }

    #[test]
    fn spectra_are_symmetric_lattices() {
        let l = PlanckLattice::new(1.0, 2, 1).unwrap();
        assert_eq!(l.position_spectrum(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(l.momentum_spectrum().len(), 3);
        assert_eq!(l.cells().len(), l.cell_count());
    }

    #[test]
    fn single_cell_basis_is_the_gaussian() {
        let lattice = symmetric_lattice(0, 0);
        let basis = build_packet_basis(&lattice, GridSpec::default()).unwrap();
        assert_eq!(basis.len(), 1);
        let b = basis.vector(0);
        let raw = basis.raw_vector(0);
        let max_diff = b
            .iter()
            .zip(&raw)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-12, "{max_diff}");
    }

    #[test]
    fn grid_requirements_are_enforced() {
        let lattice = symmetric_lattice(1, 1);
        let coarse = GridSpec {
            points_per_cell: 8,
            padding_cells: 6.0,
        };
        assert!(matches!(
            build_packet_basis(&lattice, coarse),
            Err(LatticeError::GridTooCoarse { .. })
        ));
        let thin = GridSpec {
            points_per_cell: 32,
            padding_cells: 2.0,
        };
        assert!(matches!(
            build_packet_basis(&lattice, thin),
            Err(LatticeError::PaddingTooSmall { .. })
        ));
    }

    #[test]
    fn raw_packets_are_normalized_but_overlap() {
        let basis = build_packet_basis(&symmetric_lattice(1, 0), GridSpec::default()).unwrap();
        assert!(basis.raw_norm_error() < TAU_NORM);
        assert!(basis.raw_gram()[(0, 1)].norm() > 0.1);
        assert!(basis.orthonormality_error() < 1e-10);
    }

    #[test]
    fn expansion_of_a_basis_vector_is_a_kronecker_delta() {
        let basis = build_packet_basis(&symmetric_lattice(1, 1), GridSpec::default()).unwrap();
        let k = 4;
        let state = PureStateVector::from_samples(*basis.grid(), basis.vector(k)).unwrap();
        let c = expand(&state, &basis, DEFAULT_DELTA_TRUNC).unwrap();
        for (n, cn) in c.iter().enumerate() {
            let target = if n == k { 1.0 } else { 0.0 };
            assert!((cn - target).norm() < 1e-10, "c[{n}] = {cn}");
        }
    }

    #[test]
    fn two_packet_superposition() {
        let basis = build_packet_basis(&symmetric_lattice(1, 0), GridSpec::default()).unwrap();
        let s = Complex64::new(1.0 / SQRT_2, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let state = basis.superposition(&[s, s, zero]).unwrap();
        let c = expand(&state, &basis, DEFAULT_DELTA_TRUNC).unwrap();
        assert!((c[0] - s).norm() < 1e-10);
        assert!((c[1] - s).norm() < 1e-10);
        assert!(c[2].norm() < 1e-10);
        let h = shannon_entropy_bits(&classicalize(&c));
        assert!((h - 1.0).abs() < 1e-9);
    }

    #[test]
    fn classicalize_drops_phases() {
        let m = classicalize(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(m.probabilities, vec![1.0, 0.0]);
        let r = 1.0 / SQRT_2;
        let m = classicalize(&[Complex64::new(r, 0.0), Complex64::new(0.0, r)]);
        assert!((m.probabilities[0] - 0.5).abs() < 1e-15);
        assert!((m.probabilities[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn leaky_mixture_is_flagged() {
        let a = (0.97f64).sqrt();
        let m = classicalize(&[Complex64::new(a, 0.0)]);
        assert!((m.captured_norm - 0.97).abs() < 1e-12);
        assert!(m.leaks(0.02));
        assert!(!m.leaks(0.05));
        // Renormalized before the entropy is taken.
        assert_eq!(shannon_entropy_bits(&m), 0.0);
    }

    #[test]
    fn entropy_examples() {
        let mix = |p: Vec<f64>| ClassicalMixture {
            captured_norm: p.iter().sum(),
            probabilities: p,
        };
        assert_eq!(shannon_entropy_bits(&mix(vec![1.0])), 0.0);
        let half = mix(vec![0.5, 0.5]);
        assert!((shannon_entropy_bits(&half) - 1.0).abs() < 1e-15);
        assert!((von_neumann_entropy_nats(&half) - LN_2).abs() < 1e-15);
        assert!((shannon_entropy_bits(&mix(vec![0.5, 0.25, 0.25])) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn truncation_error_on_a_state_outside_the_window() {
        let lattice = symmetric_lattice(1, 0);
        let basis = build_packet_basis(&lattice, GridSpec::default()).unwrap();
        let far = 5.0 * lattice.eps_q;
        let state = PureStateVector::from_fn(*basis.grid(), |x| {
            Complex64::new((-PI * ((x - far) / lattice.eps_q).powi(2)).exp(), 0.0)
        })
        .unwrap();
        assert!(matches!(
            expand(&state, &basis, DEFAULT_DELTA_TRUNC),
            Err(LatticeError::Truncation { .. })
        ));
    }

    #[test]
    fn superselection_distinguishes_cell_functions_from_position() {
        let basis = build_packet_basis(&symmetric_lattice(1, 1), GridSpec::default()).unwrap();
        let f: Vec<f64> = (0..basis.len()).map(|k| (k as f64).powi(2) - 3.0).collect();
        let diag = check_superselection(&basis, &Observable::CellFunction(f)).unwrap();
        assert!(diag < TAU_ORTH, "{diag}");
        let ident = vec![1.0; basis.grid().len];
        let id = check_superselection(&basis, &Observable::Multiplication(ident)).unwrap();
        assert!(id < TAU_ORTH);
        let q = check_superselection(&basis, &Observable::Position).unwrap();
        assert!(q > 1e-3, "{q}");
        assert!(check_superselection(&basis, &Observable::CellFunction(vec![1.0])).is_err());
    }
}
