//! Static AdS3 in Poincare coordinates, and the boosted BTZ metric.
//!
//! A boundary interval `A = [0, l]` is bounded in the bulk by the half-circle
//! geodesic of radius `a = l/2`. Everything below is evaluated on that arc
//! and the region under it, cut off at `z = eps`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("interval l = {l} must exceed twice the cutoff (eps = {eps})")]
    DegenerateInterval { l: f64, eps: f64 },
    #[error("boost velocity must satisfy |u| < 1, got {0}")]
    Superluminal(f64),
}

fn positive(name: &'static str, value: f64) -> Result<f64, GeometryError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(GeometryError::NonPositive { name, value })
    }
}

/// Boundary interval, cutoff and bulk constants.
///
/// The Poincare cutoff `z = eps` doubles as the boundary lattice constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeGeometry {
    pub l: f64,
    pub eps: f64,
    pub r_ads: f64,
    pub g_newton: f64,
}

/// The half-circle `(w - w0)^2 + z^2 = a^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicArc {
    pub center: f64,
    pub radius: f64,
}

impl GeodesicArc {
    /// Boundary endpoints `(w0 - a, w0 + a)` at `z = 0`.
    pub fn endpoints(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    /// Height of the arc above `w`, or `None` outside the interval.
    pub fn height(&self, w: f64) -> Option<f64> {
        let s = w - self.center;
        let h2 = self.radius * self.radius - s * s;
        (h2 >= 0.0).then(|| h2.sqrt())
    }
}

impl WedgeGeometry {
    pub fn new(l: f64, eps: f64, r_ads: f64, g_newton: f64) -> Result<Self, GeometryError> {
        Ok(Self {
            l: positive("l", l)?,
            eps: positive("eps", eps)?,
            r_ads: positive("r_ads", r_ads)?,
            g_newton: positive("g_newton", g_newton)?,
        })
    }

    /// `l / eps`, the number of boundary lattice sites.
    pub fn sites(&self) -> f64 {
        self.l / self.eps
    }

    pub fn is_degenerate(&self) -> bool {
        self.l <= 2.0 * self.eps
    }

    pub fn arc(&self) -> GeodesicArc {
        GeodesicArc {
            center: self.l / 2.0,
            radius: self.l / 2.0,
        }
    }

    /// Brown-Henneaux central charge `3 R / (2 G_N)`.
    pub fn central_charge(&self) -> f64 {
        3.0 * self.r_ads / (2.0 * self.g_newton)
    }

    /// Hyperbolic length of the arc above `z = eps`:
    /// `2 R arccosh(a / eps)`, asymptotically `2 R ln(l / eps)`.
    pub fn geodesic_length(&self) -> Result<f64, GeometryError> {
        if self.is_degenerate() {
            return Err(GeometryError::DegenerateInterval {
                l: self.l,
                eps: self.eps,
            });
        }
        let a = self.l / 2.0;
        Ok(2.0 * self.r_ads * (a / self.eps).acosh())
    }

    /// Area of the wedge slice `{eps <= z, (w - a)^2 + z^2 <= a^2}` in the
    /// measure `dw dz / z^2`. Zero when the region is empty.
    pub fn wedge_area(&self) -> f64 {
        let a = self.l / 2.0;
        if a <= self.eps {
            return 0.0;
        }
        let half_chord = (a * a - self.eps * self.eps).sqrt();
        2.0 * half_chord / self.eps - 2.0 * (half_chord / a).asin()
    }

    /// `Area / (8 pi G_N R)`.
    pub fn holographic_complexity(&self) -> f64 {
        self.wedge_area() / (8.0 * PI * self.g_newton * self.r_ads)
    }

    /// `Area / (8 pi G_N)`, the spatial length of the minimum program.
    pub fn program_length_spatial(&self) -> f64 {
        self.wedge_area() / (8.0 * PI * self.g_newton)
    }

    /// Entanglement entropy of the interval from its geodesic.
    pub fn rt_entropy(&self) -> Result<f64, GeometryError> {
        Ok(rt_entropy(self.geodesic_length()?, self.g_newton))
    }

    /// The CFT2 form `(c / 3) ln(l / eps)`.
    pub fn cardy_entropy(&self) -> f64 {
        self.central_charge() / 3.0 * self.sites().ln()
    }
}

/// `Length / (4 G_N)`.
pub fn rt_entropy(length: f64, g_newton: f64) -> f64 {
    length / (4.0 * g_newton)
}

/// Boundary Minkowski metric, signature `(-, +)`.
pub const ETA: [[f64; 2]; 2] = [[-1.0, 0.0], [0.0, 1.0]];

/// Non-rotating BTZ black brane boosted along `x` with two-velocity
/// `u^mu = (gamma, gamma u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostedMetric {
    pub r_plus: f64,
    pub u: f64,
}

impl BoostedMetric {
    /// Horizon radius taken as the unit of length.
    pub const DEFAULT_R_PLUS: f64 = 1.0;

    pub fn new(r_plus: f64, u: f64) -> Result<Self, GeometryError> {
        positive("r_plus", r_plus)?;
        if !(u.abs() < 1.0) {
            return Err(GeometryError::Superluminal(u));
        }
        Ok(Self { r_plus, u })
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.u * self.u).sqrt()
    }

    pub fn velocity_upper(&self) -> [f64; 2] {
        let g = self.gamma();
        [g, g * self.u]
    }

    /// `u_mu = eta_{mu nu} u^nu`.
    pub fn velocity_lower(&self) -> [f64; 2] {
        let up = self.velocity_upper();
        [ETA[0][0] * up[0], ETA[1][1] * up[1]]
    }

    /// `u^mu u_mu`, which is `-1`.
    pub fn velocity_norm(&self) -> f64 {
        let (up, lo) = (self.velocity_upper(), self.velocity_lower());
        up[0] * lo[0] + up[1] * lo[1]
    }

    /// Full metric in the coordinate order `(r, t, x)`:
    /// `ds^2 = -2 u_mu dx^mu dr + r^2 [eta + (r_+^2 / r^2) u u]_{mu nu} dx^mu dx^nu`.
    pub fn components(&self, r: f64) -> Result<[[f64; 3]; 3], GeometryError> {
        positive("r", r)?;
        let lo = self.velocity_lower();
        let mut g = [[0.0; 3]; 3];
        for mu in 0..2 {
            g[0][mu + 1] = -lo[mu];
            g[mu + 1][0] = -lo[mu];
            for nu in 0..2 {
                g[mu + 1][nu + 1] =
                    r * r * ETA[mu][nu] + self.r_plus * self.r_plus * lo[mu] * lo[nu];
            }
        }
        Ok(g)
    }

    /// Induced boundary-direction block `gamma_{mu nu}` at radius `r`.
    pub fn slice_metric(&self, r: f64) -> Result<[[f64; 2]; 2], GeometryError> {
        let g = self.components(r)?;
        Ok([[g[1][1], g[1][2]], [g[2][1], g[2][2]]])
    }

    /// `delta g_{mu nu} = gamma_{mu nu} - r^2 eta_{mu nu}`, equal to
    /// `r_+^2 u_mu u_nu` at every `r`.
    pub fn discrepancy(&self, r: f64) -> Result<[[f64; 2]; 2], GeometryError> {
        let gamma = self.slice_metric(r)?;
        let mut d = [[0.0; 2]; 2];
        for mu in 0..2 {
            for nu in 0..2 {
                d[mu][nu] = gamma[mu][nu] - r * r * ETA[mu][nu];
            }
        }
        Ok(d)
    }

    /// Discrepancy with both indices raised by `eta`.
    pub fn discrepancy_upper(&self, r: f64) -> Result<[[f64; 2]; 2], GeometryError> {
        let d = self.discrepancy(r)?;
        let mut up = [[0.0; 2]; 2];
        for mu in 0..2 {
            for nu in 0..2 {
                up[mu][nu] = ETA[mu][mu] * ETA[nu][nu] * d[mu][nu];
            }
        }
        Ok(up)
    }
}
