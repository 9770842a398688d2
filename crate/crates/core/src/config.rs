//! Declarative scenario files (TOML).
//!
//! Every field has a default, unknown keys are rejected, and validation
//! errors name the offending field.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::evolution::SamplingPolicy;
use crate::phase::PhaseLaw;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemChoice {
    Harmonic,
    Hydrogen,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    /// Reserved; every computation is deterministic.
    pub seed: u64,
    pub system: SystemConfig,
    pub clock: ClockConfig,
    pub evolution: EvolutionConfig,
    pub phases: PhasesConfig,
    pub density: DensityConfig,
    pub sweep: SweepConfig,
    pub bound: BoundConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            seed: 0,
            system: SystemConfig::default(),
            clock: ClockConfig::default(),
            evolution: EvolutionConfig::default(),
            phases: PhasesConfig::default(),
            density: DensityConfig::default(),
            sweep: SweepConfig::default(),
            bound: BoundConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub kind: SystemChoice,
    // harmonic
    pub omega: f64,
    pub mass: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    /// Highest oscillator level kept.
    pub cutoff: usize,
    // hydrogen
    pub n_max: usize,
    /// Initial amplitudes for hydrogen and custom systems. Empty means an
    /// equal superposition (hydrogen only).
    pub amplitudes_re: Vec<f64>,
    pub amplitudes_im: Vec<f64>,
    // custom
    pub energies: Vec<f64>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            kind: SystemChoice::Harmonic,
            omega: 1.0,
            mass: 1.0,
            alpha_re: 2.0,
            alpha_im: 0.0,
            cutoff: 64,
            n_max: 4,
            amplitudes_re: Vec::new(),
            amplitudes_im: Vec::new(),
            energies: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClockConfig {
    pub lambda: f64,
    pub hbar: f64,
}

impl Default for ClockConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            hbar: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    pub mode: PhaseLaw,
    pub tau_min: f64,
    pub tau_max: f64,
    /// Number of τ samples; 0 picks a resolution from the state.
    pub samples: usize,
    pub max_samples: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            mode: PhaseLaw::Oscillating,
            tau_min: 0.0,
            tau_max: 20.0,
            samples: 0,
            max_samples: 200_000,
        }
    }
}

impl EvolutionConfig {
    pub fn sampling(&self) -> SamplingPolicy {
        if self.samples > 0 {
            SamplingPolicy::Fixed {
                samples: self.samples,
            }
        } else {
            match SamplingPolicy::default() {
                SamplingPolicy::Auto {
                    per_clock_cycle,
                    per_system_period,
                    ..
                } => SamplingPolicy::Auto {
                    per_clock_cycle,
                    per_system_period,
                    max_samples: self.max_samples,
                },
                fixed => fixed,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhasesConfig {
    /// Level indices into the spectrum.
    pub levels: Vec<usize>,
    pub samples: usize,
}

impl Default for PhasesConfig {
    fn default() -> Self {
        Self {
            levels: vec![0, 1, 2],
            samples: 1001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    pub tau_samples: usize,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self {
            x_min: -6.0,
            x_max: 6.0,
            x_points: 241,
            tau_samples: 41,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Coherent amplitude of the swept state (real).
    pub alpha: f64,
    pub cutoff: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub points: usize,
    /// System periods per run.
    pub periods: usize,
    pub samples_per_period: usize,
    /// A run that has not covered `periods` periods by this multiple of
    /// `periods` × (longest expected period) is flagged and excluded.
    pub max_periods_factor: f64,
    pub rescale: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alpha: 0.6,
            cutoff: 40,
            lambda_min: 1.0,
            lambda_max: 1e3,
            points: 7,
            periods: 100,
            samples_per_period: 64,
            max_periods_factor: 25.0,
            rescale: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundConfig {
    pub sigma: f64,
    pub system_period: f64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            sigma: 1e-19,
            system_period: 2e-15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

/// Command-line overrides applied on top of a file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub tau_max: Option<f64>,
    pub out: Option<PathBuf>,
    pub sigma: Option<f64>,
    pub system_period: Option<f64>,
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("must be finite, got {v}")))
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::ConfigParse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::ConfigParse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text, path)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self> {
        if let Some(v) = o.lambda {
            self.clock.lambda = v;
        }
        if let Some(v) = o.tau_max {
            self.evolution.tau_max = v;
        }
        if let Some(v) = &o.out {
            self.output.dir = v.clone();
        }
        if let Some(v) = o.sigma {
            self.bound.sigma = v;
        }
        if let Some(v) = o.system_period {
            self.bound.system_period = v;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::config(
                "version",
                format!(
                    "unsupported version {} (expected {CONFIG_VERSION})",
                    self.version
                ),
            ));
        }
        let s = &self.system;
        positive("system.omega", s.omega)?;
        positive("system.mass", s.mass)?;
        finite("system.alpha_re", s.alpha_re)?;
        finite("system.alpha_im", s.alpha_im)?;
        if s.cutoff < 1 {
            return Err(Error::config("system.cutoff", "must be at least 1"));
        }
        if s.n_max < 2 {
            return Err(Error::config("system.n_max", "must be at least 2"));
        }
        if !s.amplitudes_im.is_empty() && s.amplitudes_im.len() != s.amplitudes_re.len() {
            return Err(Error::config(
                "system.amplitudes_im",
                format!(
                    "has {} entries but amplitudes_re has {}",
                    s.amplitudes_im.len(),
                    s.amplitudes_re.len()
                ),
            ));
        }
        match s.kind {
            SystemChoice::Custom => {
                if s.energies.is_empty() {
                    return Err(Error::config(
                        "system.energies",
                        "custom systems need energies",
                    ));
                }
                if s.energies.len() != s.amplitudes_re.len() {
                    return Err(Error::config(
                        "system.amplitudes_re",
                        format!("needs one entry per energy ({})", s.energies.len()),
                    ));
                }
            }
            SystemChoice::Hydrogen => {
                if !s.amplitudes_re.is_empty() && s.amplitudes_re.len() != s.n_max {
                    return Err(Error::config(
                        "system.amplitudes_re",
                        format!("needs n_max = {} entries", s.n_max),
                    ));
                }
            }
            SystemChoice::Harmonic => {}
        }

        positive("clock.lambda", self.clock.lambda)?;
        positive("clock.hbar", self.clock.hbar)?;

        let e = &self.evolution;
        finite("evolution.tau_min", e.tau_min)?;
        finite("evolution.tau_max", e.tau_max)?;
        if e.tau_max <= e.tau_min {
            return Err(Error::config(
                "evolution.tau_max",
                format!("must exceed tau_min = {}", e.tau_min),
            ));
        }
        if e.samples == 1 {
            return Err(Error::config(
                "evolution.samples",
                "must be 0 (auto) or at least 2",
            ));
        }
        if e.max_samples < 2 {
            return Err(Error::config("evolution.max_samples", "must be at least 2"));
        }

        if self.phases.samples < 2 {
            return Err(Error::config("phases.samples", "must be at least 2"));
        }
        if self.phases.levels.is_empty() {
            return Err(Error::config(
                "phases.levels",
                "must list at least one level",
            ));
        }

        let d = &self.density;
        finite("density.x_min", d.x_min)?;
        finite("density.x_max", d.x_max)?;
        if d.x_max <= d.x_min {
            return Err(Error::config("density.x_max", "must exceed x_min"));
        }
        if d.x_points < 2 {
            return Err(Error::config("density.x_points", "must be at least 2"));
        }
        if d.tau_samples < 2 {
            return Err(Error::config("density.tau_samples", "must be at least 2"));
        }

        let w = &self.sweep;
        positive("sweep.alpha", w.alpha)?;
        if w.cutoff < 1 {
            return Err(Error::config("sweep.cutoff", "must be at least 1"));
        }
        positive("sweep.lambda_min", w.lambda_min)?;
        positive("sweep.lambda_max", w.lambda_max)?;
        if w.lambda_max <= w.lambda_min {
            return Err(Error::config("sweep.lambda_max", "must exceed lambda_min"));
        }
        if w.points < 2 {
            return Err(Error::config("sweep.points", "must be at least 2"));
        }
        if w.periods < 2 {
            return Err(Error::config("sweep.periods", "must be at least 2"));
        }
        if w.samples_per_period < 4 {
            return Err(Error::config(
                "sweep.samples_per_period",
                "must be at least 4",
            ));
        }
        positive("sweep.max_periods_factor", w.max_periods_factor)?;

        if !(self.bound.sigma >= 0.0 && self.bound.sigma.is_finite()) {
            return Err(Error::config(
                "bound.sigma",
                "must be non-negative and finite",
            ));
        }
        positive("bound.system_period", self.bound.system_period)?;

        if self.output.dir.as_os_str().is_empty() {
            return Err(Error::config("output.dir", "must not be empty"));
        }
        Ok(())
    }

    /// Canonical TOML of the resolved configuration.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("scenario config always serializes")
    }

    /// SHA-256 of the canonical TOML, in lowercase hex. The output directory
    /// is left out: it says where results go, not what they are.
    pub fn hash(&self) -> String {
        let mut scenario = self.clone();
        scenario.output = OutputConfig::default();
        Sha256::digest(scenario.canonical_toml().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
