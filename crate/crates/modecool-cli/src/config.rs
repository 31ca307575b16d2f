//! Job configuration: TOML schema, validation, and conversion into library
//! types. Unknown keys are rejected everywhere; indices in config files and
//! outputs are 1-based.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use modecool::chain::{PlannerParams, PlannerTopology};
use modecool::{
    compose_maps, beam_splitter, squeezer, ChainSpec64, GaussianMap64, GhzSpec64, HardwareSpec64,
    Topology,
};

/// Schema or semantic config error; the message names the offending field.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type ConfigResult<T> = Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> ConfigResult<T> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Optional echo of the subcommand; must match when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target2: Option<TargetConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardware: Option<HardwareConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planner: Option<PlannerConfig>,
    #[serde(default)]
    pub numerics: NumericsConfig,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum TargetConfig {
    Ghz {
        n: usize,
        r1: f64,
        r2: f64,
    },
    Script {
        n: usize,
        steps: Vec<ScriptStep>,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "op", rename_all = "kebab-case")]
pub enum ScriptStep {
    /// Single-mode squeezer on `mode` (1-based) with parameter `r`.
    Squeezer { mode: usize, r: f64 },
    /// Beam splitter on the (1-based) pair (`mode_j`, `mode_l`) with angle `theta`.
    Beamsplitter {
        mode_j: usize,
        mode_l: usize,
        theta: f64,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareConfig {
    pub omega: Vec<f64>,
    pub epsilon: Vec<f64>,
    /// Homogeneous coupling (2π×MHz); exclusive with `g_matrix`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_matrix: Option<Vec<Vec<f64>>>,
    pub gamma: Vec<f64>,
    pub kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersive_threshold: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub topology: String,
    pub n: usize,
    pub omega: f64,
    pub hopping: f64,
    #[serde(default)]
    pub phase: f64,
    pub g_local: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerConfig {
    pub topology: String,
    pub g: f64,
    pub eps1: f64,
    pub qubit_spacing: f64,
    pub omega_min: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_top: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_spacing: Option<f64>,
    pub margin_threshold: f64,
    pub n_cap: usize,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    /// Per-qubit reference amplitudes; exclusive with `eta1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_pivot: Option<Vec<f64>>,
    /// Uniform reference amplitude.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta1: Option<f64>,
    /// "cooling" (default) or "lasing".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersive_margin: Option<f64>,
    /// Amplitudes for a census taken without a plan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform_eta: Option<f64>,
    /// Squeezing fractions (1 - e^{-2r}) to sweep in `audit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squeezing_grid: Option<Vec<f64>>,
    /// Per-mode decay rates overriding hardware.kappa in `cool`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_override: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cooperativity_threshold: Option<f64>,
}

pub fn parse(text: &str) -> ConfigResult<JobConfig> {
    toml::from_str(text).map_err(|e| ConfigError(e.to_string()))
}

impl TargetConfig {
    pub fn build(&self, field: &str) -> ConfigResult<GaussianMap64> {
        match self {
            TargetConfig::Ghz { n, r1, r2 } => {
                let spec = GhzSpec64::new(*n, *r1, *r2)
                    .map_err(|e| ConfigError(format!("{field}: {e}")))?;
                modecool::ghz_map(&spec).map_err(|e| ConfigError(format!("{field}: {e}")))
            }
            TargetConfig::Script { n, steps } => {
                if steps.is_empty() {
                    return err(format!("{field}.steps: at least one step required"));
                }
                let mut map = GaussianMap64::identity(*n);
                for (i, step) in steps.iter().enumerate() {
                    let factor = match step {
                        ScriptStep::Squeezer { mode, r } => {
                            let mode = one_based(*mode, *n, &format!("{field}.steps[{i}].mode"))?;
                            squeezer(*n, mode, *r)
                        }
                        ScriptStep::Beamsplitter {
                            mode_j,
                            mode_l,
                            theta,
                        } => {
                            let j = one_based(*mode_j, *n, &format!("{field}.steps[{i}].mode_j"))?;
                            let l = one_based(*mode_l, *n, &format!("{field}.steps[{i}].mode_l"))?;
                            beam_splitter(*n, j, l, *theta)
                        }
                    }
                    .map_err(|e| ConfigError(format!("{field}.steps[{i}]: {e}")))?;
                    // scripts execute first entry first
                    map = compose_maps(&factor, &map)
                        .map_err(|e| ConfigError(format!("{field}.steps[{i}]: {e}")))?;
                }
                Ok(map)
            }
        }
    }

    pub fn ghz_spec(&self, field: &str) -> ConfigResult<GhzSpec64> {
        match self {
            TargetConfig::Ghz { n, r1, r2 } => {
                GhzSpec64::new(*n, *r1, *r2).map_err(|e| ConfigError(format!("{field}: {e}")))
            }
            TargetConfig::Script { .. } => {
                err(format!("{field}: this command requires a GHZ target"))
            }
        }
    }
}

fn one_based(index: usize, n: usize, field: &str) -> ConfigResult<usize> {
    if index == 0 || index > n {
        return err(format!("{field}: index {index} out of range 1..={n}"));
    }
    Ok(index - 1)
}

impl HardwareConfig {
    pub fn build(&self) -> ConfigResult<HardwareSpec64> {
        let n = self.omega.len();
        let g = match (&self.g, &self.g_matrix) {
            (Some(g), None) => DMatrix::from_element(n, n, *g),
            (None, Some(rows)) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return err(format!("hardware.g_matrix: expected {n}x{n} entries"));
                }
                DMatrix::from_fn(n, n, |j, l| rows[j][l])
            }
            (Some(_), Some(_)) => {
                return err("hardware: g and g_matrix are mutually exclusive");
            }
            (None, None) => return err("hardware: one of g or g_matrix is required"),
        };
        HardwareSpec64::new(
            DVector::from_vec(self.omega.clone()),
            DVector::from_vec(self.epsilon.clone()),
            g,
            DVector::from_vec(self.gamma.clone()),
            self.kappa,
        )
        .map_err(|e| ConfigError(e.to_string()))
    }

    pub fn dispersive_threshold(&self) -> f64 {
        self.dispersive_threshold.unwrap_or(10.0)
    }
}

impl ChainConfig {
    pub fn build(&self) -> ConfigResult<ChainSpec64> {
        let topology = match self.topology.as_str() {
            "open" => Topology::Open,
            "closed" => Topology::Closed,
            other => return err(format!("chain.topology: unknown value {other:?}")),
        };
        ChainSpec64::new(
            topology,
            self.n,
            self.omega,
            self.hopping,
            self.phase,
            DVector::from_vec(self.g_local.clone()),
        )
        .map_err(|e| ConfigError(format!("chain: {e}")))
    }
}

impl PlannerConfig {
    pub fn build(&self) -> ConfigResult<(PlannerTopology, PlannerParams<f64>)> {
        let topology = match self.topology.as_str() {
            "open" => PlannerTopology::Open,
            "closed" => PlannerTopology::Closed,
            "all-to-all" => PlannerTopology::AllToAll,
            other => return err(format!("planner.topology: unknown value {other:?}")),
        };
        Ok((
            topology,
            PlannerParams {
                g: self.g,
                eps1: self.eps1,
                qubit_spacing: self.qubit_spacing,
                omega_min: self.omega_min,
                omega_top: self.omega_top,
                mode_spacing: self.mode_spacing,
                margin_threshold: self.margin_threshold,
                n_cap: self.n_cap,
            },
        ))
    }
}

impl NumericsConfig {
    pub fn drive_mode(&self) -> ConfigResult<modecool::DriveMode> {
        match self.mode.as_deref() {
            None | Some("cooling") => Ok(modecool::DriveMode::Cooling),
            Some("lasing") => Ok(modecool::DriveMode::Lasing),
            Some(other) => err(format!("numerics.mode: unknown value {other:?}")),
        }
    }

    pub fn eta_pivot(&self, n: usize) -> ConfigResult<DVector<f64>> {
        match (&self.eta_pivot, &self.eta1) {
            (Some(v), None) => {
                if v.len() != n {
                    return err(format!("numerics.eta_pivot: expected {n} entries, got {}", v.len()));
                }
                Ok(DVector::from_vec(v.clone()))
            }
            (None, Some(e)) => Ok(DVector::from_element(n, *e)),
            (Some(_), Some(_)) => err("numerics: eta_pivot and eta1 are mutually exclusive"),
            (None, None) => err("numerics: one of eta_pivot or eta1 is required"),
        }
    }
}
