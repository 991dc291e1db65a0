//! Numerical laboratory for the holographic reading of coherence entropy.
//!
//! A pure state is coarse-grained onto a von Neumann phase-space lattice and
//! its Shannon entropy of coherence is compared against bulk quantities of
//! AdS3: the wedge area under the Ryu-Takayanagi geodesic (holographic
//! complexity), the abbreviated action of a boosted BTZ fluid, and discrete
//! MERA microstate counts. The maximum-entropy derivation of the equal a
//! priori weight and a handful of thermodynamic identities round it off.
//!
//! Natural units are used throughout: `hbar = 1`, so `h = 2 pi`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod geometry;
pub mod hydro;
pub mod lattice;
pub mod maxent;
pub mod mera;
pub mod oracle;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod thermo;
pub mod units;

pub use geometry::{BoostedMetric, WedgeGeometry};
pub use hydro::{FluidState, KineticConvention, OrthogonalizationTime};
pub use lattice::{ClassicalMixture, PacketBasis, PlanckLattice, PureStateVector};
pub use maxent::{MuSpaceGrid, Multipliers, OccupancyField};
pub use mera::{CountLedger, MeraNetwork};
pub use report::RunReport;
pub use scenario::Scenario;
