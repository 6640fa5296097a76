//! JSON run configuration.
//!
//! Units: drifts `b`, `mu1` and jump intensities are rates per unit time,
//! `sigma2` is a variance per unit time, `sigma1` is per square-root time,
//! horizons are in time units, capital and payoffs in cash units. Jump
//! locations are relative price jumps and must lie in `(−1, 1]`.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "model": {
//!     "kind": "factor",
//!     "horizon": 1.0,
//!     "alpha": { "kind": "atoms", "atoms": [[0.0, 0.5], [1.0, 0.5]] },
//!     "family": {
//!       "kind": "affine_drift",
//!       "sensitivity": 0.05,
//!       "base": { "drift": 0.05, "sigma2": 0.04,
//!                 "measure": { "kind": "atoms", "atoms": [[0.3, 1.0]] } }
//!     }
//!   },
//!   "utility": { "kind": "exp", "gamma": 1.0 },
//!   "capital": 1.0,
//!   "payoff": { "kind": "tabulated", "values": [0.2, 0.4] },
//!   "solver": { "mode": "corrected" },
//!   "oracle": { "n_paths": 100000, "seed": 1 }
//! }
//! ```

use std::path::Path;

use indiff_core::{
    AlphaSpec, ConditionMode, FactorFamily, FactorModel, GbmModel, HaraUtility, LevyMeasure, LevyTriplet,
    PayoffSpec, SolverSettings,
};
use indiff_core::pricer::PricingSettings;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::McConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed configuration: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema_version {0}, expected {SCHEMA_VERSION}")]
    Version(u32),
    #[error("configuration has no {0} block")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: ModelConfig,
    #[serde(default)]
    pub utility: Option<UtilityConfig>,
    /// Initial capital `x`.
    #[serde(default)]
    pub capital: Option<f64>,
    #[serde(default)]
    pub payoff: Option<PayoffConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub oracle: Option<OracleConfig>,
    #[serde(default)]
    pub risk: Option<RiskConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Factor {
        horizon: f64,
        alpha: AlphaConfig,
        family: FamilyConfig,
    },
    Gbm {
        mu1: f64,
        sigma1: f64,
        rho: f64,
        horizon: f64,
        claim_horizon: f64,
        /// Gauss–Hermite nodes for `α = N(0, T′)`.
        #[serde(default = "default_gbm_nodes")]
        nodes: usize,
    },
}

fn default_gbm_nodes() -> usize {
    indiff_core::factor::DEFAULT_GAUSS_NODES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlphaConfig {
    /// `(u, weight)` pairs.
    Atoms { atoms: Vec<(f64, f64)> },
    Gaussian {
        mean: f64,
        variance: f64,
        #[serde(default = "default_gbm_nodes")]
        nodes: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyConfig {
    AffineDrift { base: TripletConfig, sensitivity: f64 },
    IntensityScaled { base: TripletConfig, rate: f64 },
    Tabulated { rows: Vec<TabulatedRow> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedRow {
    pub u: f64,
    pub triplet: TripletConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripletConfig {
    pub drift: f64,
    pub sigma2: f64,
    #[serde(default)]
    pub measure: MeasureConfig,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureConfig {
    #[default]
    None,
    /// `(location, intensity)` pairs.
    Atoms { atoms: Vec<(f64, f64)> },
    /// Cell midpoints, cell widths and density values.
    Density { nodes: Vec<f64>, widths: Vec<f64>, density: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum UtilityConfig {
    Log,
    Power { p: f64 },
    Exp { gamma: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PayoffConfig {
    Tabulated { values: Vec<f64> },
    /// `max(s0·exp(m + v·u) − strike, 0)`.
    CallOnFactor { s0: f64, m: f64, v: f64, strike: f64 },
    Constant { value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeConfig {
    #[default]
    Corrected,
    PaperLiteral,
}

impl From<ModeConfig> for ConditionMode {
    fn from(m: ModeConfig) -> Self {
        match m {
            ModeConfig::Corrected => ConditionMode::Corrected,
            ModeConfig::PaperLiteral => ConditionMode::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub beta_tol: f64,
    pub beta_max_iter: usize,
    pub boundary_margin: f64,
    pub price_tol: f64,
    pub price_max_iter: usize,
    pub domain_margin: f64,
    pub mode: ModeConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let s = SolverSettings::default();
        let p = PricingSettings::default();
        Self {
            beta_tol: s.tol,
            beta_max_iter: s.max_iter,
            boundary_margin: s.boundary_margin,
            price_tol: p.tol,
            price_max_iter: p.max_iter,
            domain_margin: p.domain_margin,
            mode: ModeConfig::Corrected,
        }
    }
}

impl SolverConfig {
    pub fn solver(&self) -> SolverSettings {
        SolverSettings { tol: self.beta_tol, max_iter: self.beta_max_iter, boundary_margin: self.boundary_margin }
    }

    pub fn pricing(&self) -> PricingSettings {
        PricingSettings { tol: self.price_tol, max_iter: self.price_max_iter, domain_margin: self.domain_margin }
    }

    pub fn mode(&self) -> ConditionMode {
        self.mode.into()
    }
}

/// Quantities the `verify` command checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Martingale,
    EntropyPq,
    KlQp,
    Hellinger,
}

fn all_quantities() -> Vec<Quantity> {
    vec![Quantity::Martingale, Quantity::EntropyPq, Quantity::KlQp, Quantity::Hellinger]
}

fn default_orders() -> Vec<f64> {
    vec![-1.0, 0.5]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(flatten)]
    pub mc: McConfig,
    #[serde(default = "all_quantities")]
    pub quantities: Vec<Quantity>,
    /// Hellinger orders `q`.
    #[serde(default = "default_orders")]
    pub hellinger_orders: Vec<f64>,
    /// Factor values for the GBM bridge oracle.
    #[serde(default)]
    pub u_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RiskConfig {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for RiskConfig {
    fn default() -> Self {
        Self { trials: 100, tol: 1e-9, seed: 0 }
    }
}

impl From<UtilityConfig> for HaraUtility {
    fn from(u: UtilityConfig) -> Self {
        match u {
            UtilityConfig::Log => HaraUtility::Log,
            UtilityConfig::Power { p } => HaraUtility::Power { p },
            UtilityConfig::Exp { gamma } => HaraUtility::Exp { gamma },
        }
    }
}

impl From<&MeasureConfig> for LevyMeasure {
    fn from(m: &MeasureConfig) -> Self {
        match m {
            MeasureConfig::None => LevyMeasure::empty(),
            MeasureConfig::Atoms { atoms } => LevyMeasure::atoms(atoms),
            MeasureConfig::Density { nodes, widths, density } => LevyMeasure::DensityGrid {
                nodes: nodes.clone(),
                widths: widths.clone(),
                density: density.clone(),
            },
        }
    }
}

impl From<&TripletConfig> for LevyTriplet {
    fn from(t: &TripletConfig) -> Self {
        LevyTriplet::new(t.drift, t.sigma2, (&t.measure).into())
    }
}

impl From<&AlphaConfig> for AlphaSpec {
    fn from(a: &AlphaConfig) -> Self {
        match a {
            AlphaConfig::Atoms { atoms } => AlphaSpec::DiscreteAtoms(atoms.clone()),
            &AlphaConfig::Gaussian { mean, variance, nodes } => AlphaSpec::GaussianQuadrature { mean, variance, nodes },
        }
    }
}

impl From<&FamilyConfig> for FactorFamily {
    fn from(f: &FamilyConfig) -> Self {
        match f {
            FamilyConfig::AffineDrift { base, sensitivity } => {
                FactorFamily::AffineDrift { base: base.into(), sensitivity: *sensitivity }
            }
            FamilyConfig::IntensityScaled { base, rate } => FactorFamily::IntensityScaled { base: base.into(), rate: *rate },
            FamilyConfig::Tabulated { rows } => {
                FactorFamily::Tabulated(rows.iter().map(|r| (r.u, (&r.triplet).into())).collect())
            }
        }
    }
}

impl From<&PayoffConfig> for PayoffSpec {
    fn from(p: &PayoffConfig) -> Self {
        match p {
            PayoffConfig::Tabulated { values } => PayoffSpec::Tabulated(values.clone()),
            &PayoffConfig::CallOnFactor { s0, m, v, strike } => PayoffSpec::CallOnFactor { s0, m, v, strike },
            &PayoffConfig::Constant { value } => PayoffSpec::Constant(value),
        }
    }
}

/// The model block resolved into core types.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Factor(FactorModel),
    Gbm { model: GbmModel, nodes: usize },
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Version(cfg.schema_version));
        }
        Ok(cfg)
    }

    pub fn model(&self) -> Model {
        match &self.model {
            ModelConfig::Factor { horizon, alpha, family } => {
                Model::Factor(FactorModel { alpha: alpha.into(), family: family.into(), horizon: *horizon })
            }
            &ModelConfig::Gbm { mu1, sigma1, rho, horizon, claim_horizon, nodes } => {
                Model::Gbm { model: GbmModel { mu1, sigma1, rho, horizon, claim_horizon }, nodes }
            }
        }
    }

    pub fn utility(&self) -> Result<HaraUtility, ConfigError> {
        self.utility.map(Into::into).ok_or(ConfigError::Missing("utility"))
    }

    pub fn capital(&self) -> Result<f64, ConfigError> {
        self.capital.ok_or(ConfigError::Missing("capital"))
    }

    pub fn payoff(&self) -> Result<PayoffSpec, ConfigError> {
        self.payoff.as_ref().map(Into::into).ok_or(ConfigError::Missing("payoff"))
    }

    pub fn oracle(&self) -> Result<&OracleConfig, ConfigError> {
        self.oracle.as_ref().ok_or(ConfigError::Missing("oracle"))
    }

    pub fn risk(&self) -> RiskConfig {
        self.risk.unwrap_or_default()
    }

    /// Applies command-line overrides.
    pub fn override_with(&mut self, seed: Option<u64>, mode: Option<ModeConfig>) {
        if let Some(seed) = seed {
            if let Some(o) = self.oracle.as_mut() {
                o.mc.seed = seed;
            }
            let mut risk = self.risk();
            risk.seed = seed;
            self.risk = Some(risk);
        }
        if let Some(mode) = mode {
            self.solver.mode = mode;
        }
    }
}
