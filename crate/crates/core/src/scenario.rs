//! Scenario configuration file: one JSON document drives every subcommand.
//!
//! Unknown keys are rejected and every physical quantity carries its unit in
//! the field name. Relaxation times are optional; omitting one means "no
//! decay on that channel" (infinite time constant).

use crate::blochsim::{Ensemble, OffResonance, PopulationSummary};
use crate::fieldmodel::{MagnetSystem, PiecewiseLinear, QubitSite, PROTON_GAMMA};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("scenario parse error at `{key_path}`: {detail}")]
    Parse { key_path: String, detail: String },
    #[error("scenario is missing the `{0}` section required by this command")]
    MissingSection(&'static str),
    #[error("invalid scenario value: {0}")]
    Invalid(String),
}

/// Gradient map configuration: a global linear ramp or explicit breakpoints.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GradientConfig {
    Linear {
        slope_tesla_per_m: f64,
        #[serde(default)]
        offset_tesla: f64,
    },
    Points {
        points_m_tesla: Vec<(f64, f64)>,
    },
    Constant {
        offset_tesla: f64,
    },
}

impl GradientConfig {
    pub fn build(&self) -> Result<PiecewiseLinear, crate::fieldmodel::FieldError> {
        match self {
            GradientConfig::Linear { slope_tesla_per_m, offset_tesla } => {
                Ok(PiecewiseLinear::linear(*slope_tesla_per_m, *offset_tesla))
            }
            GradientConfig::Points { points_m_tesla } => {
                PiecewiseLinear::new(points_m_tesla.clone())
            }
            GradientConfig::Constant { offset_tesla } => {
                Ok(PiecewiseLinear::constant(*offset_tesla))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    pub z_center_m: f64,
    pub half_width_m: f64,
    pub reverse_gradient: GradientConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagnetConfig {
    pub b0_tesla: f64,
    /// Defaults to the proton value.
    pub gamma_rad_per_s_per_tesla: Option<f64>,
    pub main_gradient: GradientConfig,
    pub sites: Vec<SiteConfig>,
}

impl MagnetConfig {
    pub fn build(&self) -> Result<MagnetSystem, crate::fieldmodel::FieldError> {
        let gamma = self.gamma_rad_per_s_per_tesla.unwrap_or(PROTON_GAMMA);
        let sites = self
            .sites
            .iter()
            .enumerate()
            .map(|(index, s)| {
                Ok(QubitSite {
                    index,
                    z_center: s.z_center_m,
                    half_width: s.half_width_m,
                    reverse_gradient: s.reverse_gradient.build()?,
                })
            })
            .collect::<Result<Vec<_>, crate::fieldmodel::FieldError>>()?;
        MagnetSystem::new(self.b0_tesla, gamma, self.main_gradient.build()?, sites)
    }
}

/// How the magnetization starts out before any sequence runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Equilibrium,
    UniformTransversePhases,
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Equilibrium
    }
}

fn default_n_isochromats() -> usize {
    100_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    #[serde(default = "default_n_isochromats")]
    pub n_isochromats: usize,
    /// Longitudinal recovery time; omit for no recovery.
    pub t1_s: Option<f64>,
    /// Transverse decay time; omit for no decay.
    pub t2_s: Option<f64>,
    pub off_resonance: OffResonance,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default)]
    pub seed: u64,
    pub population: Option<PopulationSummary>,
}

impl EnsembleConfig {
    /// Builds the ensemble with `seed` (normally the effective run seed).
    pub fn build(&self, seed: u64) -> Result<Ensemble, crate::blochsim::BlochError> {
        let t1 = self.t1_s.unwrap_or(f64::INFINITY);
        let t2 = self.t2_s.unwrap_or(f64::INFINITY);
        let ensemble = match self.initial_state {
            InitialState::Equilibrium => {
                Ensemble::sampled(self.n_isochromats, self.off_resonance, t1, t2, seed)?
            }
            InitialState::UniformTransversePhases => {
                Ensemble::uniform_transverse_phases(self.n_isochromats, t1, t2, seed)?
            }
        };
        match self.population {
            Some(p) => ensemble.with_population(p),
            None => Ok(ensemble),
        }
    }
}

fn default_shift_probe() -> Vec<f64> {
    vec![0.2, 0.4, 0.6, 0.8, 1.0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteConfig {
    pub t_a1_s: f64,
    pub t_a2_s: f64,
    pub t_a3_s: f64,
    pub t_a4_s: f64,
    pub window_half_width_rad: f64,
    /// Absent means auto-center on the net transverse phase.
    pub selection_phase_rad: Option<f64>,
    /// Constant off-resonance shifts (rad/s) probed by the compensation
    /// comparison.
    #[serde(default = "default_shift_probe")]
    pub shift_probe_rad_per_s: Vec<f64>,
}

fn default_purify_factor() -> f64 {
    1e-6
}

fn default_purify_steps() -> usize {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PurifyLedgerConfig {
    #[serde(default = "default_purify_steps")]
    pub steps: usize,
    #[serde(default = "default_purify_factor")]
    pub factor: f64,
    #[serde(default)]
    pub initial_epsilon: f64,
}

impl Default for PurifyLedgerConfig {
    fn default() -> Self {
        Self {
            steps: default_purify_steps(),
            factor: default_purify_factor(),
            initial_epsilon: 0.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinEchoConfig {
    pub tau_s: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct T1RecoveryConfig {
    /// Absent derives the delay from T1 (the half-recovery point).
    pub coincidence_delay_s: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceConfig {
    pub stimulated_echo: Option<SteConfig>,
    pub spin_echo: Option<SpinEchoConfig>,
    #[serde(default)]
    pub t1_recovery: T1RecoveryConfig,
    #[serde(default)]
    pub purify_ledger: PurifyLedgerConfig,
}

fn default_program() -> String {
    "control=|0>; target=|0>; gates=H,CNOT".to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompilerConfig {
    #[serde(default = "default_program")]
    pub program: String,
    /// Annotate the substitutable control half-turn pair about y instead of z.
    #[serde(default)]
    pub use_y_refocus: bool,
}

impl Default for CompilerConfig {
    fn default() -> Self {
        Self { program: default_program(), use_y_refocus: false }
    }
}

fn default_samples_per_site() -> usize {
    101
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_samples_per_site")]
    pub samples_per_site: usize,
    /// Trajectory sampling step; absent derives one from the sequence length.
    pub trajectory_sample_dt_s: Option<f64>,
    pub homogeneity_tolerance: Option<f64>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            samples_per_site: default_samples_per_site(),
            trajectory_sample_dt_s: None,
            homogeneity_tolerance: None,
        }
    }
}

/// The whole scenario document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub magnet: Option<MagnetConfig>,
    pub ensemble: Option<EnsembleConfig>,
    #[serde(default)]
    pub sequence: SequenceConfig,
    #[serde(default)]
    pub compiler: CompilerConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Scenario {
    /// Parses a scenario from JSON bytes, reporting the offending key path
    /// and position on failure.
    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self, ScenarioError> {
        let mut deserializer = serde_json::Deserializer::from_slice(bytes);
        serde_path_to_error::deserialize(&mut deserializer).map_err(|err| ScenarioError::Parse {
            key_path: err.path().to_string(),
            detail: err.inner().to_string(),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self, ScenarioError> {
        Self::from_json_bytes(text.as_bytes())
    }

    pub fn load(path: &std::path::Path) -> Result<(Self, Vec<u8>), ScenarioError> {
        let bytes = std::fs::read(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let scenario = Self::from_json_bytes(&bytes)?;
        Ok((scenario, bytes))
    }

    pub fn magnet(&self) -> Result<&MagnetConfig, ScenarioError> {
        self.magnet.as_ref().ok_or(ScenarioError::MissingSection("magnet"))
    }

    pub fn ensemble(&self) -> Result<&EnsembleConfig, ScenarioError> {
        self.ensemble.as_ref().ok_or(ScenarioError::MissingSection("ensemble"))
    }

    pub fn stimulated_echo(&self) -> Result<&SteConfig, ScenarioError> {
        self.sequence
            .stimulated_echo
            .as_ref()
            .ok_or(ScenarioError::MissingSection("sequence.stimulated_echo"))
    }
}
