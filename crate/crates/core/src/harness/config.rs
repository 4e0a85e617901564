use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{discretize, sparse_channel, DiscreteChannel};
use crate::dfe::DfeConfig;
use crate::signals::Pulse;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// LMS over every tap.
    Plain,
    /// LMS gated by the plain activity measure.
    Adg,
    /// LMS gated by the tap-decoupled activity measure.
    AdgTd,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Plain, Variant::Adg, Variant::AdgTd];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Adg => "adg",
            Variant::AdgTd => "adg_td",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown variant {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// Taps `gains` at `positions` in a line of `length` taps.
    #[default]
    Sparse,
    /// Discretized cosine-squared pulse of duration `tau` over `span`.
    Cosine,
}

/// Every knob of one simulation run. Serialized as flat TOML; keys match the
/// field names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub variant: Variant,
    pub channel: ChannelKind,
    pub positions: Vec<usize>,
    pub gains: Vec<f64>,
    pub length: usize,
    pub tau: f64,
    pub span: f64,
    pub pulse: Pulse,
    pub noise_variance: f64,
    pub step_size: f64,
    /// Identification samples at the fractional rate.
    pub training_length: usize,
    /// Equalized data symbols.
    pub data_length: usize,
    pub oversampling: usize,
    pub anticausal: usize,
    pub causal: usize,
    pub feedback: usize,
    pub threshold_constant: f64,
    pub cadence: usize,
    pub hysteresis: usize,
    pub seed: u64,
    pub snapshot_stride: usize,
    pub smoothing_window: usize,
    pub tail_fraction: f64,
    /// Convergence level as a multiple of the run's own asymptotic MSE.
    pub convergence_factor: f64,
    /// Leading data symbols excluded from error counts; defaults to `feedback`.
    pub skip: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            variant: Variant::AdgTd,
            channel: ChannelKind::Sparse,
            positions: vec![1, 4],
            gains: vec![1.0, 0.5],
            length: 7,
            tau: 1.5,
            span: 1.5,
            pulse: Pulse::Hold,
            noise_variance: 0.1,
            step_size: 0.005,
            training_length: 4000,
            data_length: 10_000,
            oversampling: 2,
            anticausal: 3,
            causal: 3,
            feedback: 4,
            threshold_constant: 4.0,
            cadence: 50,
            hysteresis: 3,
            seed: 1,
            snapshot_stride: 10,
            smoothing_window: 100,
            tail_fraction: 0.1,
            convergence_factor: 5.0,
            skip: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    /// Returns a copy with `key` set to `value`, where `value` is written as a
    /// TOML value (`0.01`, `[1, 3]`, `"adg"`; bare words are taken as strings).
    pub fn with_override(&self, key: &str, value: &str) -> Result<Self> {
        let mut table = toml::Table::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        let parsed = match toml::from_str::<toml::Table>(&format!("v = {value}")) {
            Ok(mut t) => t.remove("v").expect("key present"),
            Err(_) => toml::Value::String(value.to_string()),
        };
        table.insert(key.to_string(), parsed);
        let cfg: ExperimentConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(format!("{key} = {value}: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn dfe_config(&self) -> DfeConfig {
        DfeConfig {
            anticausal: self.anticausal,
            causal: self.causal,
            feedback: self.feedback,
            oversampling: self.oversampling,
        }
    }

    pub fn skip(&self) -> usize {
        self.skip.unwrap_or(self.feedback)
    }

    /// Ground-truth channel at spacing `T/oversampling`.
    pub fn true_channel(&self) -> Result<DiscreteChannel> {
        let spacing = 1.0 / self.oversampling as f64;
        match self.channel {
            ChannelKind::Sparse => {
                sparse_channel(&self.positions, &self.gains, self.length, spacing)
            }
            ChannelKind::Cosine => discretize(self.tau, spacing, self.span),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("training_length", self.training_length),
            ("data_length", self.data_length),
            ("oversampling", self.oversampling),
            ("cadence", self.cadence),
            ("snapshot_stride", self.snapshot_stride),
            ("smoothing_window", self.smoothing_window),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be > 0")));
            }
        }
        if !(self.noise_variance.is_finite() && self.noise_variance >= 0.0) {
            return Err(Error::Config(
                "noise_variance must be finite and >= 0".into(),
            ));
        }
        if !(self.step_size.is_finite() && self.step_size >= 0.0) {
            return Err(Error::Config("step_size must be finite and >= 0".into()));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::Config("tail_fraction must lie in (0, 1]".into()));
        }
        if !(self.convergence_factor.is_finite() && self.convergence_factor > 0.0) {
            return Err(Error::Config("convergence_factor must be > 0".into()));
        }
        if self.skip() >= self.data_length {
            return Err(Error::Config(
                "skip must be smaller than data_length".into(),
            ));
        }
        let ch = self
            .true_channel()
            .map_err(|e| Error::Config(format!("channel: {e}")))?;
        if ch.len() > self.training_length {
            return Err(Error::Config(
                "training_length must cover the channel length".into(),
            ));
        }
        Ok(())
    }
}
