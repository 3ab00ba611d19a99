//! Experiment configuration, seeding and run manifests.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// TTL multipliers swept when none are given.
pub const DEFAULT_TTL_MULTIPLIERS: [f64; 7] = [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0];

fn default_n() -> usize {
    300
}

fn default_exponents() -> Vec<f64> {
    (0..=8).map(|k| k as f64 * 0.25).collect()
}

fn default_trials() -> usize {
    50
}

fn default_failure_probs() -> Vec<f64> {
    (0..=10).map(|k| k as f64 * 0.05).collect()
}

fn default_ttl_multipliers() -> Vec<f64> {
    DEFAULT_TTL_MULTIPLIERS.to_vec()
}

fn default_sizes() -> Vec<usize> {
    (1..=10).map(|k| 100 * k).collect()
}

fn default_cut_mass() -> f64 {
    0.3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_exponents")]
    pub exponents: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_failure_probs")]
    pub failure_probs: Vec<f64>,
    #[serde(default = "default_ttl_multipliers")]
    pub ttl_multipliers: Vec<f64>,
    /// Network sizes for the scaling and cut sweeps.
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    /// Target `p_S` for cut probes.
    #[serde(default = "default_cut_mass")]
    pub cut_mass: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: default_n(),
            exponents: default_exponents(),
            trials: default_trials(),
            seed: 0,
            failure_probs: default_failure_probs(),
            ttl_multipliers: default_ttl_multipliers(),
            sizes: default_sizes(),
            cut_mass: default_cut_mass(),
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if let Some(s) = self.exponents.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return bad(format!("zipf exponent {s} is not a finite value >= 0"));
        }
        if let Some(f) = self.failure_probs.iter().find(|f| !(0.0..1.0).contains(*f)) {
            return bad(format!("failure probability {f} is outside [0, 1)"));
        }
        if let Some(k) = self.ttl_multipliers.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
            return bad(format!("ttl multiplier {k} must be positive"));
        }
        if let Some(n) = self.sizes.iter().find(|n| **n < 2) {
            return bad(format!("network size {n} is below 2"));
        }
        if !(self.cut_mass > 0.0 && self.cut_mass <= 0.5) {
            return bad(format!("cut mass {} is outside (0, 1/2]", self.cut_mass));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// FNV-1a, used only to turn experiment tags into seed offsets.
fn tag_hash(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Independent stream for one trial: the key picks the generator, the trial
/// index picks the stream.
pub fn trial_rng(master: u64, tag: &str, key: u64, trial: u64) -> ChaCha8Rng {
    let seed = master ^ tag_hash(tag) ^ key.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// What a run was, recorded next to its CSVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub build: String,
    pub files: Vec<String>,
}
