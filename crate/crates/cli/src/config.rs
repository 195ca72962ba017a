//! TOML run configuration, one section per library module.

use std::path::Path;

use gsruin::{
    ClaimComponent, CreepClock, GsConfig, JKernel, LevyModel, ModelKind, PenaltySpec, QuadratureConfig,
    SeverityDistribution, SimConfig,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Model parameters, validated through [`LevyModel::new`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub kind: ModelKind,
    pub drift: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub jump_rate: f64,
    #[serde(default)]
    pub claims: Vec<ClaimComponent>,
}

impl Default for ModelBlock {
    fn default() -> Self {
        Self {
            kind: ModelKind::CramerLundberg,
            drift: 1.5,
            sigma: 0.0,
            jump_rate: 1.0,
            claims: vec![ClaimComponent::exponential(1.0)],
        }
    }
}

impl ModelBlock {
    pub fn build(&self) -> gsruin::Result<LevyModel> {
        LevyModel::new(self.kind, self.drift, self.sigma, self.jump_rate, self.claims.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClockBlock {
    /// Rate of the creeping clock; used only when `sigma > 0`.
    pub lambda: f64,
}

impl Default for ClockBlock {
    fn default() -> Self {
        Self { lambda: 1.0 }
    }
}

/// Quadrature settings plus the `𝒥` kernel switch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsBlock {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail_cut_mass: f64,
    pub j_kernel: JKernel,
}

impl Default for NumericsBlock {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_subdivisions: q.max_subdivisions,
            tail_cut_mass: q.tail_cut_mass,
            j_kernel: JKernel::default(),
        }
    }
}

impl NumericsBlock {
    pub fn quad(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            tail_cut_mass: self.tail_cut_mass,
        }
    }
}

/// Grid of evaluation points; commands iterate over the Cartesian product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryBlock {
    pub x: Vec<f64>,
    pub q: Vec<f64>,
    pub b: Vec<f64>,
    /// Multipliers applied to the severity law by `sweep --axis y-scale`.
    #[serde(default = "unit_scale")]
    pub y_scale: Vec<f64>,
}

fn unit_scale() -> Vec<f64> {
    vec![1.0]
}

impl Default for QueryBlock {
    fn default() -> Self {
        Self { x: vec![0.0], q: vec![0.05], b: vec![5.0], y_scale: unit_scale() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareBlock {
    /// `compare` fails when any `|z|` exceeds this.
    pub z_max: f64,
    /// Added to `b` on the simulation side only (a negative control).
    pub mc_b_shift: f64,
}

impl Default for CompareBlock {
    fn default() -> Self {
        Self { z_max: 4.0, mc_b_shift: 0.0 }
    }
}

/// Everything a command needs. `--print-config` emits this with every
/// default written out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: ModelBlock,
    #[serde(default = "default_severity")]
    pub severity: SeverityDistribution,
    #[serde(default)]
    pub penalty: PenaltySpec,
    #[serde(default)]
    pub clock: ClockBlock,
    #[serde(default)]
    pub numerics: NumericsBlock,
    #[serde(default)]
    pub sim: SimConfig,
    #[serde(default)]
    pub query: QueryBlock,
    #[serde(default)]
    pub compare: CompareBlock,
}

fn default_severity() -> SeverityDistribution {
    SeverityDistribution::Exponential { rate: 1.0 }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelBlock::default(),
            severity: default_severity(),
            penalty: PenaltySpec::default(),
            clock: ClockBlock::default(),
            numerics: NumericsBlock::default(),
            sim: SimConfig::default(),
            query: QueryBlock::default(),
            compare: CompareBlock::default(),
        }
    }
}

/// Validated objects built from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Resolved {
    pub model: LevyModel,
    pub severity: SeverityDistribution,
    pub penalty: PenaltySpec,
    pub clock: Option<CreepClock>,
    pub gs: GsConfig,
    pub sim: SimConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration serializes")
    }

    /// Validate every block and build the library objects.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let model = self.model.build()?;
        self.severity.validate()?;
        self.penalty.validate()?;
        self.numerics.quad().validate()?;
        self.sim.validate()?;
        let clock = if model.sigma() > 0.0 { Some(CreepClock::new(self.clock.lambda)?) } else { None };
        let q = &self.query;
        for (name, list) in [("x", &q.x), ("q", &q.q), ("b", &q.b), ("y_scale", &q.y_scale)] {
            if list.is_empty() {
                return Err(CliError::Config(format!("query.{name} must not be empty")));
            }
            if list.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Config(format!("query.{name} must be finite")));
            }
        }
        if !(self.compare.z_max > 0.0) {
            return Err(CliError::Config(format!("compare.z_max must be positive, got {}", self.compare.z_max)));
        }
        Ok(Resolved {
            model,
            severity: self.severity.clone(),
            penalty: self.penalty,
            clock,
            gs: GsConfig { quad: self.numerics.quad(), j_kernel: self.numerics.j_kernel },
            sim: self.sim,
        })
    }

    /// Query points sorted by `(x, q, b)`.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut pts = Vec::new();
        for &x in &self.query.x {
            for &q in &self.query.q {
                for &b in &self.query.b {
                    pts.push((x, q, b));
                }
            }
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
        pts.dedup();
        pts
    }
}
