//! Binary MERA layer bookkeeping and exact microstate counting.
//!
//! Each coarse-graining step reduces the number of classicalized microstates
//! per ensemble member by one bit per site of the deeper layer, so
//! `W^(m) / W^(m+1) = 2^(N l_{m+1})` and `(1/N) log2 W^(0) = sum_{m>=1} l_m`.
//! Counts are kept as exact integers; no floating point enters the ledger.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::WedgeGeometry;
use crate::hydro::OrthogonalizationTime;
use crate::units::HBAR;

/// Below this many boundary sites the discrete area is not expected to track
/// the continuum wedge area.
pub const ASYMPTOTIC_SITES: u64 = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeraError {
    #[error("the boundary layer needs at least one site")]
    EmptyBoundary,
    #[error("coarse-graining arity must be at least 2, got {0}")]
    Arity(u32),
    #[error("truncation layer {m_h} must lie in 1..={depth}")]
    Truncation { m_h: usize, depth: usize },
    #[error("kappa must be positive, got {0}")]
    Kappa(f64),
    #[error("r_inf must be positive, got {0}")]
    Cutoff(f64),
    #[error("network has {found} boundary sites but the geometry rounds to {expected}")]
    SiteMismatch { expected: u64, found: u64 },
    #[error("t_perp must be positive, got {0}")]
    TPerp(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeraNetwork {
    /// Site counts `l_0, l_1, ...` of one tower. For a thermal network the
    /// tower stops at the truncation layer.
    layers: Vec<u64>,
    arity: u32,
    /// Truncation layer `m_h` of a pasted (thermal) network.
    truncation: Option<usize>,
}

/// Halving recursion `l_{m+1} = ceil(l_m / arity)` down to a single site.
pub fn coarse_grain_layers(l0: u64, arity: u32) -> Vec<u64> {
    let mut layers = vec![l0];
    let mut l = l0;
    while l > 1 {
        l = l.div_ceil(arity as u64);
        layers.push(l);
    }
    layers
}

pub fn build_network(l0: u64, arity: u32, m_h: Option<usize>) -> Result<MeraNetwork, MeraError> {
    if l0 < 1 {
        return Err(MeraError::EmptyBoundary);
    }
    if arity < 2 {
        return Err(MeraError::Arity(arity));
    }
    let mut layers = coarse_grain_layers(l0, arity);
    if let Some(m_h) = m_h {
        let depth = layers.len() - 1;
        if m_h < 1 || m_h > depth {
            return Err(MeraError::Truncation { m_h, depth });
        }
        layers.truncate(m_h + 1);
    }
    Ok(MeraNetwork {
        layers,
        arity,
        truncation: m_h,
    })
}

impl MeraNetwork {
    pub fn boundary_sites(&self) -> u64 {
        self.layers[0]
    }

    /// Index `M` of the deepest layer of a tower.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn is_thermal(&self) -> bool {
        self.truncation.is_some()
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn layers(&self) -> &[u64] {
        &self.layers
    }

    /// One tower for the ground state, two mirrored towers when pasted.
    pub fn towers(&self) -> Vec<Vec<u64>> {
        if self.is_thermal() {
            vec![self.layers.clone(), self.layers.clone()]
        } else {
            vec![self.layers.clone()]
        }
    }

    /// Layer sequence read across the pasted network, e.g. `[8, 4, 2, 2, 4, 8]`.
    pub fn pasted_layers(&self) -> Vec<u64> {
        let mut out = self.layers.clone();
        if self.is_thermal() {
            out.extend(self.layers.iter().rev());
        }
        out
    }
}

/// Exact per-layer record of the microstate reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountLedger {
    /// `log2(W^(m) / W^(m+1)) / N = l_{m+1}` for every step of every tower.
    pub steps: Vec<u64>,
    /// `(1/N) log2 W^(0)`.
    #[serde(with = "biguint_decimal")]
    pub total: BigUint,
}

impl CountLedger {
    pub fn from_network(net: &MeraNetwork) -> Self {
        let steps: Vec<u64> = net
            .towers()
            .iter()
            .flat_map(|t| t[1..].to_vec())
            .collect();
        let total = steps.iter().map(|&l| BigUint::from(l)).sum();
        Self { steps, total }
    }

    /// `W^(0) = W^(M) prod_m W^(m) / W^(m+1)` for an ensemble of `n` members,
    /// with `W^(M) = 1`.
    pub fn microstates(&self, ensemble: u32) -> BigUint {
        self.steps
            .iter()
            .fold(BigUint::from(1u8), |w, &l| w << (ensemble as u64 * l))
    }
}

/// `(1/N) log2 W` for an exact power of two `W`, or `None` otherwise.
pub fn bits_per_member(w: &BigUint, ensemble: u32) -> Option<BigUint> {
    if ensemble == 0 || w.count_ones() != 1 {
        return None;
    }
    let log2 = w.bits() - 1;
    log2.is_multiple_of(ensemble as u64).then(|| BigUint::from(log2 / ensemble as u64))
}

/// Shannon entropy per ensemble member, in bits: the discretized wedge area.
pub fn shannon_from_counting(net: &MeraNetwork) -> BigUint {
    CountLedger::from_network(net).total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplicaMode {
    #[default]
    Floor,
    Round,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicaCount {
    pub k: u64,
    /// `R_AdS / t_perp` before rounding.
    pub ratio: f64,
    /// `ratio - k`.
    pub fractional: f64,
}

/// Number of momentum replicas `R_AdS / t_perp` of the MERA.
///
/// The floor carries a relative slack of `1e-9` so that ratios that are
/// integers up to rounding are not pushed down a whole replica.
pub fn momentum_replicas(
    r_ads: f64,
    t_perp: OrthogonalizationTime,
    mode: ReplicaMode,
) -> Result<ReplicaCount, MeraError> {
    let ratio = match t_perp {
        OrthogonalizationTime::NoMomentum => 0.0,
        OrthogonalizationTime::Finite(t) if t > 0.0 => r_ads / t,
        OrthogonalizationTime::Finite(t) => return Err(MeraError::TPerp(t)),
    };
    let k = match mode {
        ReplicaMode::Floor => (ratio * (1.0 + 1e-9)).floor(),
        ReplicaMode::Round => ratio.round(),
    };
    Ok(ReplicaCount {
        k: k as u64,
        ratio,
        fractional: ratio - k,
    })
}

/// `(1/N) log2 W^(bdy)` with `W^(bdy) = W^(0) (W^(0))^k`.
pub fn boundary_microstates(net: &MeraNetwork, k: u64) -> BigUint {
    shannon_from_counting(net) * BigUint::from(1 + k)
}

/// Exact `W^(bdy)` for an ensemble of `n` members.
pub fn boundary_microstate_count(net: &MeraNetwork, k: u64, ensemble: u32) -> BigUint {
    let w0 = CountLedger::from_network(net).microstates(ensemble);
    (0..k).fold(w0.clone(), |w, _| w * &w0)
}

/// Inverse bulk temperature at layer `m`: the layer sits at
/// `r_m = r_inf 2^U` with `U = -m`, and `1 / T = -R U / (kappa hbar)`.
pub fn bulk_temperature(m: u32, kappa: f64, r_inf: f64, r_ads: f64) -> Result<f64, MeraError> {
    if !(kappa > 0.0) {
        return Err(MeraError::Kappa(kappa));
    }
    if !(r_inf > 0.0) {
        return Err(MeraError::Cutoff(r_inf));
    }
    let r_m = r_inf * 2f64.powi(-(m as i32));
    let time = (r_m / r_inf).log2();
    // + 0.0 turns the boundary's -0.0 into 0.0.
    Ok(-r_ads * time / (kappa * HBAR) + 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumComparison {
    pub discrete_area: u64,
    pub wedge_area: f64,
    /// `|sum l_m - Area| / Area`.
    pub deviation: f64,
    /// False below [`ASYMPTOTIC_SITES`] boundary sites.
    pub asymptotic: bool,
}

pub fn continuum_comparison(
    net: &MeraNetwork,
    geom: &WedgeGeometry,
) -> Result<ContinuumComparison, MeraError> {
    let expected = geom.sites().round() as u64;
    if net.boundary_sites() != expected {
        return Err(MeraError::SiteMismatch {
            expected,
            found: net.boundary_sites(),
        });
    }
    let discrete: u64 = net.layers()[1..].iter().sum();
    let area = geom.wedge_area();
    let deviation = if area > 0.0 {
        (discrete as f64 - area).abs() / area
    } else {
        f64::INFINITY
    };
    Ok(ContinuumComparison {
        discrete_area: discrete,
        wedge_area: area,
        deviation,
        asymptotic: expected >= ASYMPTOTIC_SITES,
    })
}

mod biguint_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| serde::de::Error::custom("invalid decimal integer"))
    }
}
