//! Scenario files: one TOML document holding every physical constant a run
//! needs.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hydro::{KineticConvention, RegimePolicy};
use crate::lattice::{GridSpec, DEFAULT_DELTA_TRUNC};
use crate::mera::ReplicaMode;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed scenario: {0}")]
    Parse(String),
    #[error("invalid value for `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
}

fn invalid(field: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub l: f64,
    pub eps: f64,
    pub g_newton: f64,
    pub r_ads: f64,
    /// Horizon radius of the boosted black brane; 1 when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_plus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluidConfig {
    pub u: f64,
    /// Energy density; derived from the horizon as `r_plus^2 gamma^2` when
    /// omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_energy: Option<f64>,
    #[serde(default)]
    pub kinetic_convention: KineticConvention,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub eps_q: f64,
    pub m_max_q: u32,
    pub m_max_p: u32,
    #[serde(default = "default_points_per_cell")]
    pub points_per_cell: usize,
    #[serde(default = "default_padding_cells")]
    pub padding_cells: f64,
    /// Number of packets in the equal-weight test superposition.
    pub superposition: usize,
    #[serde(default = "default_delta_trunc")]
    pub delta_trunc: f64,
}

fn default_points_per_cell() -> usize {
    GridSpec::default().points_per_cell
}

fn default_padding_cells() -> f64 {
    GridSpec::default().padding_cells
}

fn default_delta_trunc() -> f64 {
    DEFAULT_DELTA_TRUNC
}

impl LatticeConfig {
    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            points_per_cell: self.points_per_cell,
            padding_cells: self.padding_cells,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeraConfig {
    #[serde(default = "default_arity")]
    pub arity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_h: Option<usize>,
    pub kappa: f64,
    pub r_inf: f64,
    #[serde(default)]
    pub replica_mode: ReplicaMode,
}

fn default_arity() -> u32 {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaxEntConfig {
    pub n_x: usize,
    pub n_p: usize,
    pub p_max: f64,
    pub n_total: f64,
    /// Random feasible instances solved per run.
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Allowed relative residual of the entropy/complexity comparison.
    pub conjecture: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { conjecture: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub seed: u64,
    pub geometry: GeometryConfig,
    pub fluid: FluidConfig,
    pub lattice: LatticeConfig,
    pub mera: MeraConfig,
    pub maxent: MaxEntConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub regime: RegimePolicy,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Ground state at `l / eps = 64` with `8 pi G_N = R_AdS = 1`.
    pub fn ground() -> Self {
        Self {
            seed: 7,
            geometry: GeometryConfig {
                l: 64.0,
                eps: 1.0,
                g_newton: 1.0 / (8.0 * std::f64::consts::PI),
                r_ads: 1.0,
                r_plus: None,
            },
            fluid: FluidConfig {
                u: 0.0,
                eps_energy: None,
                kinetic_convention: KineticConvention::default(),
            },
            lattice: LatticeConfig {
                eps_q: 1.0,
                m_max_q: 1,
                m_max_p: 1,
                points_per_cell: default_points_per_cell(),
                padding_cells: default_padding_cells(),
                superposition: 4,
                delta_trunc: DEFAULT_DELTA_TRUNC,
            },
            mera: MeraConfig {
                arity: 2,
                m_h: None,
                kappa: 1.0,
                r_inf: 1.0,
                replica_mode: ReplicaMode::Floor,
            },
            maxent: MaxEntConfig {
                n_x: 3,
                n_p: 7,
                p_max: 1.0,
                n_total: 100.0,
                instances: 10,
            },
            tolerances: Tolerances::default(),
            regime: RegimePolicy::default(),
        }
    }

    pub fn r_plus(&self) -> f64 {
        self.geometry.r_plus.unwrap_or(1.0)
    }

    /// Boundary sites `round(l / eps)` of the MERA.
    pub fn boundary_sites(&self) -> u64 {
        (self.geometry.l / self.geometry.eps).round() as u64
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let positive = |field: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(field, format!("must be positive and finite, got {v}")))
            }
        };
        let g = &self.geometry;
        positive("geometry.l", g.l)?;
        positive("geometry.eps", g.eps)?;
        positive("geometry.g_newton", g.g_newton)?;
        positive("geometry.r_ads", g.r_ads)?;
        if let Some(r) = g.r_plus {
            positive("geometry.r_plus", r)?;
        }
        if g.l / g.eps < 1.0 {
            return Err(invalid("geometry.l", "interval is shorter than one lattice site"));
        }
        if g.l / g.eps > (1u64 << 40) as f64 {
            return Err(invalid("geometry.l", "more than 2^40 boundary sites"));
        }

        let f = &self.fluid;
        if !(f.u.is_finite() && f.u.abs() < 1.0) {
            return Err(invalid("fluid.u", format!("need |u| < 1, got {}", f.u)));
        }
        if let Some(e) = f.eps_energy {
            positive("fluid.eps_energy", e)?;
        }

        let l = &self.lattice;
        positive("lattice.eps_q", l.eps_q)?;
        if l.points_per_cell < GridSpec::MIN_POINTS_PER_CELL {
            return Err(invalid(
                "lattice.points_per_cell",
                format!("must be at least {}", GridSpec::MIN_POINTS_PER_CELL),
            ));
        }
        if !(l.padding_cells >= GridSpec::MIN_PADDING_CELLS) {
            return Err(invalid(
                "lattice.padding_cells",
                format!("must be at least {}", GridSpec::MIN_PADDING_CELLS),
            ));
        }
        let cells = (2 * l.m_max_q as usize + 1) * (2 * l.m_max_p as usize + 1);
        if l.superposition == 0 || l.superposition > cells {
            return Err(invalid(
                "lattice.superposition",
                format!("must lie in 1..={cells} (cells in the window)"),
            ));
        }
        if !(l.delta_trunc > 0.0 && l.delta_trunc < 1.0) {
            return Err(invalid("lattice.delta_trunc", "must lie in (0, 1)"));
        }

        let m = &self.mera;
        if m.arity != 2 {
            return Err(invalid("mera.arity", "only binary networks are supported"));
        }
        positive("mera.kappa", m.kappa)?;
        positive("mera.r_inf", m.r_inf)?;

        let x = &self.maxent;
        if x.n_x < 1 {
            return Err(invalid("maxent.n_x", "need at least one site"));
        }
        if x.n_p < 2 {
            return Err(invalid("maxent.n_p", "need at least two momenta"));
        }
        positive("maxent.p_max", x.p_max)?;
        positive("maxent.n_total", x.n_total)?;

        positive("tolerances.conjecture", self.tolerances.conjecture)?;
        Ok(())
    }

    /// Sets a scalar field by dotted path, e.g. `geometry.l` or `fluid.u`.
    /// The result is validated.
    pub fn set_param(&mut self, path: &str, value: f64) -> Result<(), ScenarioError> {
        let unknown = || ScenarioError::UnknownParameter(path.to_string());
        let mut doc = toml::Value::try_from(&*self).expect("scenario serializes");
        let (parents, leaf) = match path.rsplit_once('.') {
            Some((p, l)) => (Some(p), l),
            None => (None, path),
        };
        if leaf.is_empty() {
            return Err(unknown());
        }
        let table = descend(&mut doc, parents).ok_or_else(unknown)?;
        let integral = value.fract() == 0.0 && value.abs() < 9.0e15;
        let candidates = match table.get(leaf) {
            Some(toml::Value::Integer(_)) if integral => vec![toml::Value::Integer(value as i64)],
            Some(toml::Value::Integer(_)) => {
                return Err(invalid(path, format!("expects an integer, got {value}")))
            }
            Some(toml::Value::Float(_)) => vec![toml::Value::Float(value)],
            Some(_) => return Err(unknown()),
            None if integral => vec![toml::Value::Float(value), toml::Value::Integer(value as i64)],
            None => vec![toml::Value::Float(value)],
        };
        let mut last = unknown();
        for candidate in candidates {
            let mut trial = doc.clone();
            descend(&mut trial, parents)
                .expect("path checked")
                .insert(leaf.to_string(), candidate);
            match trial.try_into::<Scenario>() {
                Ok(s) => {
                    s.validate()?;
                    *self = s;
                    return Ok(());
                }
                Err(e) if e.to_string().contains("unknown field") => return Err(unknown()),
                Err(e) => last = invalid(path, e.to_string()),
            }
        }
        Err(last)
    }
}

fn descend<'a>(doc: &'a mut toml::Value, path: Option<&str>) -> Option<&'a mut toml::Table> {
    let mut table = doc.as_table_mut()?;
    for key in path.into_iter().flat_map(|p| p.split('.')) {
        table = table.get_mut(key)?.as_table_mut()?;
    }
    Some(table)
}
