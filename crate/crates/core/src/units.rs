//! Natural units.

use std::f64::consts::PI;

/// Reduced Planck constant.
pub const HBAR: f64 = 1.0;

/// Planck constant, `2 pi hbar`.
pub const PLANCK: f64 = 2.0 * PI * HBAR;

/// Information content of one classical bit, in nats.
pub const BIT: f64 = std::f64::consts::LN_2;
