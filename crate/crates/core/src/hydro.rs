//! Boundary perfect fluid, bulk momentum density and the abbreviated action.
//!
//! A uniform, steady CFT2 fluid with velocity `u` (pressure equal to energy
//! density) is dual to a boosted BTZ brane. Its bulk momentum density and
//! shift vector give the abbreviated action `I_A = int p^x v_x` over the
//! wedge, which together with the holographic complexity is compared to the
//! coherence entropy.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, WedgeGeometry};
use crate::units::{HBAR, PLANCK};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HydroError {
    #[error("fluid velocity must satisfy |u| < 1, got {0}")]
    Superluminal(f64),
    #[error("energy density must be positive and finite, got {0}")]
    NonPositiveEnergy(f64),
    #[error("kinetic energy must be positive for a finite orthogonalization time, got {0}")]
    NonPositiveKinetic(f64),
    #[error("horizon radius {r_plus} is inconsistent with energy density {eps_energy} (need r_+^2 gamma^2 = eps)")]
    HorizonMismatch { r_plus: f64, eps_energy: f64 },
    #[error("|u| = {0} is in the relativistic regime (>= 0.5)")]
    Relativistic(f64),
    #[error("|u| = {0} is outside the non-relativistic regime (> 0.1) and strict regime checks are on")]
    StrictRegime(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// How the kinetic part of the energy density is read off the fluid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KineticConvention {
    /// `eps_kin = rho u^2 / 2`. With this choice the area, kinetic-energy and
    /// central-charge forms of `I_A / (pi hbar)` coincide.
    #[default]
    HalfRhoU2,
    /// `eps_kin = rho u^2`; doubles `1 / t_perp` relative to the action.
    RhoU2,
}

impl KineticConvention {
    pub fn label(self) -> &'static str {
        match self {
            Self::HalfRhoU2 => "eps_kin = rho u^2 / 2",
            Self::RhoU2 => "eps_kin = rho u^2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidState {
    pub u: f64,
    pub gamma: f64,
    pub eps_energy: f64,
    pub pressure: f64,
    /// `eps / gamma^2`.
    pub rho: f64,
    pub eps_kin: f64,
    pub convention: KineticConvention,
}

impl FluidState {
    pub fn new(u: f64, eps_energy: f64, convention: KineticConvention) -> Result<Self, HydroError> {
        if !(u.abs() < 1.0) {
            return Err(HydroError::Superluminal(u));
        }
        if !(eps_energy > 0.0 && eps_energy.is_finite()) {
            return Err(HydroError::NonPositiveEnergy(eps_energy));
        }
        let gamma = 1.0 / (1.0 - u * u).sqrt();
        let rho = eps_energy / (gamma * gamma);
        let eps_kin = match convention {
            KineticConvention::HalfRhoU2 => 0.5 * rho * u * u,
            KineticConvention::RhoU2 => rho * u * u,
        };
        Ok(Self {
            u,
            gamma,
            eps_energy,
            pressure: eps_energy,
            rho,
            eps_kin,
            convention,
        })
    }

    /// Fluid whose energy density matches a brane of horizon radius `r_plus`,
    /// `eps = r_+^2 gamma^2`.
    pub fn from_horizon(u: f64, r_plus: f64, convention: KineticConvention) -> Result<Self, HydroError> {
        if !(u.abs() < 1.0) {
            return Err(HydroError::Superluminal(u));
        }
        let gamma2 = 1.0 / (1.0 - u * u);
        Self::new(u, r_plus * r_plus * gamma2, convention)
    }

    /// Horizon radius implied by the energy density.
    pub fn horizon_radius(&self) -> f64 {
        self.rho.sqrt()
    }

    pub fn regime(&self) -> Regime {
        Regime::classify(self.u)
    }
}

/// `8 pi G_N p^x` evaluated three ways, and `p^x` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumDensity {
    /// `-r_+^2 gamma u`
    pub via_horizon: f64,
    /// `-eps u / gamma`
    pub via_energy: f64,
    /// `-rho gamma u`
    pub via_mass: f64,
    pub p_x: f64,
}

impl MomentumDensity {
    pub fn spread(&self) -> f64 {
        let v = [self.via_horizon, self.via_energy, self.via_mass];
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }
}

/// Horizontal bulk momentum density of the boosted brane.
///
/// `r_plus` must be the horizon radius of the fluid (`r_+^2 gamma^2 = eps`).
pub fn momentum_density(
    fluid: &FluidState,
    r_plus: f64,
    g_newton: f64,
) -> Result<MomentumDensity, HydroError> {
    if !(fluid.u.abs() < 1.0) {
        return Err(HydroError::Superluminal(fluid.u));
    }
    let implied = r_plus * r_plus * fluid.gamma * fluid.gamma;
    if (implied - fluid.eps_energy).abs() > 1e-10 * fluid.eps_energy.max(1.0) {
        return Err(HydroError::HorizonMismatch {
            r_plus,
            eps_energy: fluid.eps_energy,
        });
    }
    let via_horizon = -r_plus * r_plus * fluid.gamma * fluid.u;
    let via_energy = -fluid.eps_energy * fluid.u / fluid.gamma;
    let via_mass = -fluid.rho * fluid.gamma * fluid.u;
    Ok(MomentumDensity {
        via_horizon,
        via_energy,
        via_mass,
        p_x: via_mass / (8.0 * PI * g_newton),
    })
}

/// Shift vector `v_x = -u`.
pub fn shift_vector(fluid: &FluidState) -> f64 {
    -fluid.u
}

/// Margolus-Levitin time. A fluid at rest never reaches an orthogonal state,
/// which is kept as an explicit variant so that `1 / t_perp = 0` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum OrthogonalizationTime {
    Finite(f64),
    NoMomentum,
}

impl OrthogonalizationTime {
    pub fn of_fluid(fluid: &FluidState) -> Self {
        if fluid.eps_kin > 0.0 {
            Self::Finite(PLANCK / (4.0 * fluid.eps_kin))
        } else {
            Self::NoMomentum
        }
    }

    pub fn rate(&self) -> f64 {
        match self {
            Self::Finite(t) => 1.0 / t,
            Self::NoMomentum => 0.0,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Finite(t) => Some(*t),
            Self::NoMomentum => None,
        }
    }
}

/// `t_perp = h / (4 eps_kin)`.
pub fn margolus_levitin(eps_kin: f64) -> Result<f64, HydroError> {
    if !(eps_kin > 0.0) {
        return Err(HydroError::NonPositiveKinetic(eps_kin));
    }
    Ok(PLANCK / (4.0 * eps_kin))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `|u| <= 0.1`
    NonRelativistic,
    /// `0.1 < |u| < 0.5`
    Marginal,
    /// `|u| >= 0.5`
    Relativistic,
}

impl Regime {
    pub fn classify(u: f64) -> Self {
        let a = u.abs();
        if a <= 0.1 {
            Self::NonRelativistic
        } else if a < 0.5 {
            Self::Marginal
        } else {
            Self::Relativistic
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegimePolicy {
    /// Reject the marginal regime as well.
    pub strict: bool,
    /// Evaluate in the relativistic regime instead of failing.
    pub allow_relativistic: bool,
}

impl RegimePolicy {
    pub fn admit(&self, u: f64) -> Result<Regime, HydroError> {
        match Regime::classify(u) {
            Regime::Relativistic if !self.allow_relativistic => Err(HydroError::Relativistic(u)),
            Regime::Marginal if self.strict => Err(HydroError::StrictRegime(u)),
            r => Ok(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbbreviatedAction {
    pub value: f64,
    pub over_pi_hbar: f64,
    pub regime: Regime,
}

/// `I_A = [Area / (8 pi G_N)] rho u^2`.
pub fn abbreviated_action(
    geom: &WedgeGeometry,
    fluid: &FluidState,
    policy: RegimePolicy,
) -> Result<AbbreviatedAction, HydroError> {
    let regime = policy.admit(fluid.u)?;
    let value = geom.program_length_spatial() * fluid.rho * fluid.u * fluid.u;
    Ok(AbbreviatedAction {
        value,
        over_pi_hbar: value / (PI * HBAR),
        regime,
    })
}

/// The three forms of `I_A / (pi hbar)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionRoutes {
    /// `[Area / (8 pi G_N)] rho u^2 / (pi hbar)`
    pub from_area: f64,
    /// `[(l / eps) / (8 pi G_N)] 4 eps_kin / h`
    pub from_kinetic_energy: f64,
    /// `[(c / 12 pi) (l / eps)] / t_perp`
    pub from_central_charge: f64,
}

pub fn action_routes(geom: &WedgeGeometry, fluid: &FluidState) -> ActionRoutes {
    let from_area = geom.wedge_area() / (8.0 * PI * geom.g_newton) * fluid.rho * fluid.u * fluid.u
        / (PI * HBAR);
    let from_kinetic_energy = geom.sites() / (8.0 * PI * geom.g_newton) * 4.0 * fluid.eps_kin / PLANCK;
    let rate = OrthogonalizationTime::of_fluid(fluid).rate();
    // c = 3 / (2 G_N) with R_AdS = 1.
    let c = 3.0 / (2.0 * geom.g_newton);
    let from_central_charge = c / (12.0 * PI) * geom.sites() * rate;
    ActionRoutes {
        from_area,
        from_kinetic_energy,
        from_central_charge,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub h_bits: f64,
    pub complexity: f64,
    pub action_over_pi_hbar: f64,
    /// `H - C_A - I_A / (pi hbar)`
    pub residual: f64,
}

impl ConjectureReport {
    pub fn relative_residual(&self) -> f64 {
        if self.h_bits != 0.0 {
            self.residual.abs() / self.h_bits.abs()
        } else {
            self.residual.abs()
        }
    }
}

pub fn conjecture_check(h_bits: f64, complexity: f64, action: f64) -> ConjectureReport {
    let action_over_pi_hbar = action / (PI * HBAR);
    ConjectureReport {
        h_bits,
        complexity,
        action_over_pi_hbar,
        residual: h_bits - complexity - action_over_pi_hbar,
    }
}

/// `l_A = l_A^s (1 + 1 / t_perp)`.
pub fn program_length_total(ell_spatial: f64, t_perp: OrthogonalizationTime) -> f64 {
    ell_spatial * (1.0 + t_perp.rate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoostedMetric;

    #[test]
    fn fluid_invariants() {
        let f = FluidState::new(0.3, 2.0, KineticConvention::HalfRhoU2).unwrap();
        assert!((f.gamma - 1.0 / (1.0f64 - 0.09).sqrt()).abs() < 1e-15);
        assert_eq!(f.pressure, f.eps_energy);
        assert!((f.rho * f.gamma * f.gamma - f.eps_energy).abs() < 1e-14);
        assert!(f.eps_kin >= 0.0 && f.eps_kin <= f.eps_energy);
        assert!(FluidState::new(1.0, 1.0, KineticConvention::HalfRhoU2).is_err());
        assert!(FluidState::new(0.1, 0.0, KineticConvention::HalfRhoU2).is_err());
    }

    #[test]
    fn momentum_density_at_rest() {
        let f = FluidState::from_horizon(0.0, 1.0, KineticConvention::default()).unwrap();
        let p = momentum_density(&f, 1.0, 0.25).unwrap();
        assert_eq!(p.p_x, 0.0);
        assert_eq!(shift_vector(&f), 0.0);
    }

    #[test]
    fn momentum_density_forms_agree() {
        let gamma2: f64 = 1.0 / (1.0 - 0.01);
        let f = FluidState::new(0.1, 1.0, KineticConvention::default()).unwrap();
        let r_plus = (1.0 / gamma2).sqrt();
        let p = momentum_density(&f, r_plus, 1.0).unwrap();
        assert!(p.spread() < 1e-12);
        assert!(momentum_density(&f, 1.0, 1.0).is_err());
    }

    #[test]
    fn metric_discrepancy_tracks_momentum_density() {
        let u = 0.1;
        let m = BoostedMetric::new(1.0, u).unwrap();
        let f = FluidState::from_horizon(u, 1.0, KineticConvention::default()).unwrap();
        let g = 0.07;
        let p = momentum_density(&f, 1.0, g).unwrap();
        let d = m.discrepancy_upper(2.0).unwrap()[0][1];
        // delta g^{0x} = r_+^2 gamma^2 u, i.e. -8 pi G p^x times gamma.
        assert!((d - (-8.0 * PI * g * p.p_x) * f.gamma).abs() < 1e-12);
        assert!((d + 8.0 * PI * g * p.p_x).abs() < u * u * u);
    }

    #[test]
    fn margolus_levitin_examples() {
        assert!((margolus_levitin(PLANCK / 4.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((margolus_levitin(PLANCK).unwrap() - 0.25).abs() < 1e-15);
        assert!((margolus_levitin(PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(margolus_levitin(0.0).is_err());
        assert!(margolus_levitin(-1.0).is_err());
    }

    #[test]
    fn action_vanishes_at_rest_and_routes_agree() {
        let geom = WedgeGeometry::new(1024.0, 1.0, 1.0, 1.0 / (8.0 * PI)).unwrap();
        let rest = FluidState::from_horizon(0.0, 1.0, KineticConvention::default()).unwrap();
        let a = abbreviated_action(&geom, &rest, RegimePolicy::default()).unwrap();
        assert_eq!(a.value, 0.0);

        let f = FluidState::from_horizon(0.05, 1.0, KineticConvention::default()).unwrap();
        let r = action_routes(&geom, &f);
        assert!((r.from_kinetic_energy - r.from_central_charge).abs() < 1e-12 * r.from_central_charge);
        let area_gap = 1.0 - geom.wedge_area() / geom.sites();
        assert!(((r.from_kinetic_energy - r.from_area) / r.from_kinetic_energy - area_gap).abs() < 1e-12);
    }

    #[test]
    fn regime_policy() {
        let p = RegimePolicy::default();
        assert_eq!(p.admit(0.05).unwrap(), Regime::NonRelativistic);
        assert_eq!(p.admit(-0.2).unwrap(), Regime::Marginal);
        assert!(p.admit(0.5).is_err());
        let strict = RegimePolicy {
            strict: true,
            ..p
        };
        assert!(strict.admit(0.2).is_err());
        let loose = RegimePolicy {
            allow_relativistic: true,
            ..p
        };
        assert_eq!(loose.admit(0.9).unwrap(), Regime::Relativistic);
    }

    #[test]
    fn conjecture_arithmetic() {
        let r = conjecture_check(7.0, 5.0, 2.0 * PI);
        assert!(r.residual.abs() < 1e-15);
        assert_eq!(program_length_total(3.0, OrthogonalizationTime::NoMomentum), 3.0);
        assert_eq!(program_length_total(3.0, OrthogonalizationTime::Finite(0.5)), 9.0);
    }
}
