//! TOML experiment configuration and its mapping onto the engine types.

use std::fmt;
use std::path::Path;

use geqw::evolve::{CoinKind, Engine, ObservablePlan};
use geqw::{CoinParams, WalkConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A q index: a positive number, or the token `"inf"` for the uniform limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QValue(pub f64);

impl<'de> Deserialize<'de> for QValue {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Token(String),
        }
        match Raw::deserialize(de)? {
            Raw::Number(x) => Ok(QValue(x)),
            Raw::Token(s) if s == "inf" => Ok(QValue(f64::INFINITY)),
            Raw::Token(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got \"{s}\""
            ))),
        }
    }
}

impl Serialize for QValue {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            ser.serialize_str("inf")
        } else {
            ser.serialize_f64(self.0)
        }
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn default_dimension() -> u8 {
    2
}
fn default_theta() -> f64 {
    std::f64::consts::FRAC_PI_4
}
fn default_phase() -> f64 {
    std::f64::consts::FRAC_PI_2
}
fn default_coin() -> String {
    "separable".into()
}
fn default_engine() -> String {
    "sparse".into()
}
fn default_t_max() -> u32 {
    100
}
fn default_realizations() -> u32 {
    1
}
fn default_true() -> bool {
    true
}
fn default_stride() -> u32 {
    1
}
fn default_coherence_stride() -> u32 {
    10
}
fn default_spectral_samples() -> u32 {
    100_000
}

/// On-disk experiment description. Unknown keys are rejected so typos fail
/// loudly instead of silently using defaults.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default = "default_dimension")]
    pub dimension: u8,
    pub q1: QValue,
    #[serde(default)]
    pub q2: Option<QValue>,
    /// "separable" or "entangling".
    #[serde(default = "default_coin")]
    pub coin: String,
    #[serde(default = "default_theta")]
    pub theta1: f64,
    #[serde(default = "default_phase")]
    pub beta1: f64,
    #[serde(default = "default_phase")]
    pub gamma1: f64,
    #[serde(default = "default_theta")]
    pub theta2: f64,
    #[serde(default = "default_phase")]
    pub beta2: f64,
    #[serde(default = "default_phase")]
    pub gamma2: f64,
    /// Initial coin amplitudes as [re, im] pairs (4 in 2-D, 2 in 1-D).
    /// Defaults to the balanced symmetric state for the dimension.
    #[serde(default)]
    pub initial_coin: Option<Vec<[f64; 2]>>,
    #[serde(default = "default_t_max")]
    pub t_max: u32,
    pub seed: u64,
    #[serde(default = "default_realizations")]
    pub realizations: u32,
    /// "sparse" or "spectral".
    #[serde(default = "default_engine")]
    pub engine: String,
    #[serde(default = "default_spectral_samples")]
    pub spectral_samples: u32,
    #[serde(default = "default_true")]
    pub variances: bool,
    #[serde(default = "default_true")]
    pub trace_distance: bool,
    #[serde(default = "default_true")]
    pub entropies: bool,
    #[serde(default = "default_true")]
    pub negativity: bool,
    #[serde(default)]
    pub coherence: bool,
    #[serde(default = "default_stride")]
    pub stride: u32,
    #[serde(default = "default_coherence_stride")]
    pub coherence_stride: u32,
    #[serde(default)]
    pub entanglement_t_cap: Option<u32>,
    /// Export the final state of realization 0 as a snapshot file.
    #[serde(default)]
    pub snapshot: bool,
    /// q values visited by the `sweep` command (applied per `sweep_axis`).
    #[serde(default)]
    pub sweep_q: Option<Vec<QValue>>,
    /// "q1", "q2" or "both" (default).
    #[serde(default)]
    pub sweep_axis: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    fn initial_coin_resolved(&self) -> Result<Vec<Complex64>, String> {
        if let Some(pairs) = &self.initial_coin {
            return Ok(pairs
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect());
        }
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        Ok(match self.dimension {
            1 => vec![Complex64::new(inv, 0.0), Complex64::new(0.0, inv)],
            // Equal superposition of both subcoins.
            _ => vec![Complex64::new(0.5, 0.0); 4],
        })
    }

    /// Builds the engine configuration, naming the offending field on error.
    pub fn to_walk_config(&self) -> Result<WalkConfig, String> {
        let coin_kind = match self.coin.as_str() {
            "separable" => CoinKind::Separable,
            "entangling" => CoinKind::Entangling,
            other => {
                return Err(format!(
                    "field `coin`: expected \"separable\" or \"entangling\", got \"{other}\""
                ))
            }
        };
        if coin_kind == CoinKind::Entangling && self.dimension == 1 {
            return Err(
                "field `coin`: an entangling coin requires `dimension = 2`".into(),
            );
        }
        let engine = match self.engine.as_str() {
            "sparse" => Engine::Sparse,
            "spectral" => Engine::Spectral,
            other => {
                return Err(format!(
                    "field `engine`: expected \"sparse\" or \"spectral\", got \"{other}\""
                ))
            }
        };
        let coin1 = CoinParams::new(self.theta1, self.beta1, self.gamma1)
            .map_err(|e| format!("fields `theta1`/`beta1`/`gamma1`: {e}"))?;
        let coin2 = CoinParams::new(self.theta2, self.beta2, self.gamma2)
            .map_err(|e| format!("fields `theta2`/`beta2`/`gamma2`: {e}"))?;
        let q2 = match (self.dimension, self.q2) {
            (1, _) => self.q1.0,
            (_, Some(q)) => q.0,
            (_, None) => return Err("field `q2`: required when `dimension = 2`".into()),
        };
        let cfg = WalkConfig {
            dimension: self.dimension,
            q1: self.q1.0,
            q2,
            coin_kind,
            coin1,
            coin2,
            initial_coin: self.initial_coin_resolved()?,
            t_max: self.t_max,
            seed: self.seed,
            plan: ObservablePlan {
                variances: self.variances,
                trace_distance: self.trace_distance && self.dimension == 2,
                entropies: self.entropies,
                negativity: self.negativity && self.dimension == 2,
                coherence: self.coherence && self.dimension == 2,
                stride: self.stride,
                coherence_stride: self.coherence_stride,
                entanglement_t_cap: self.entanglement_t_cap,
            },
            engine,
            spectral_samples: self.spectral_samples,
        };
        cfg.validate().map_err(|e| match e {
            geqw::WalkError::InvalidConfig(m) if m.contains("q1") => {
                format!("field `q1`: {m}")
            }
            geqw::WalkError::InvalidConfig(m) if m.contains("q2") => {
                format!("field `q2`: {m}")
            }
            geqw::WalkError::InvalidConfig(m) if m.contains("initial coin") => {
                format!("field `initial_coin`: {m}")
            }
            geqw::WalkError::InvalidConfig(m) if m.contains("t_max") => {
                format!("field `t_max`: {m}")
            }
            other => other.to_string(),
        })?;
        Ok(cfg)
    }

    /// The configuration re-serialized as TOML, with every resolved default
    /// made explicit, for echoing into output artifacts.
    pub fn echo_toml(&self) -> String {
        let mut resolved = self.clone();
        if resolved.initial_coin.is_none() {
            resolved.initial_coin = Some(
                self.initial_coin_resolved()
                    .unwrap_or_default()
                    .iter()
                    .map(|c| [c.re, c.im])
                    .collect(),
            );
        }
        toml::to_string(&resolved).unwrap_or_default()
    }
}
