//! TOML experiment configs and their mapping onto the simulation types.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use lesc_core::model::Prior;
use lesc_core::schemes::SchemeSpec;
use lesc_core::sim::{DecoderSpec, ExperimentConfig, SweepAxis};

/// On-disk experiment configuration.
///
/// ```toml
/// n = 1000
/// trials = 200
/// base_seed = 7
/// q = 0.1
/// prior = [0.5, 0.5]
///
/// [scheme]
/// kind = "ring-regular"   # group | xor-ensemble | random-and
/// d = 10
///
/// [decoder]
/// kind = "threshold-alg1" # group-same-cluster | xor-typical | and-onehop
///
/// [sweep]                 # optional
/// axis = "d"
/// grid = [10, 20, 30]
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub n: usize,
    pub trials: usize,
    #[serde(default)]
    pub base_seed: Option<u64>,
    pub q: f64,
    pub prior: Vec<f64>,
    pub scheme: SchemeToml,
    pub decoder: DecoderToml,
    #[serde(default)]
    pub sweep: Option<SweepToml>,
    #[serde(default)]
    pub survey: Option<SurveyToml>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeToml {
    pub kind: String,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub c: Option<usize>,
    #[serde(default)]
    pub delta: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecoderToml {
    pub kind: String,
    #[serde(default)]
    pub n_cap: Option<usize>,
    #[serde(default)]
    pub threshold_override: Option<Vec<usize>>,
    #[serde(default)]
    pub d_tilde: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepToml {
    pub axis: String,
    pub grid: Vec<f64>,
}

/// Survey replication: reuses the top-level `n`, `q`, seed, and the ring
/// scheme's `d`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurveyToml {
    pub thresholds: Vec<usize>,
    pub dtilde_grid: Vec<usize>,
}

impl SimulateConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text).context("parsing simulate config")?)
    }

    pub fn seed(&self, flag: Option<u64>) -> Result<u64> {
        flag.or(self.base_seed)
            .context("no seed: set `base_seed` in the config or pass --seed")
    }

    pub fn scheme_spec(&self, prior: &Prior) -> Result<SchemeSpec> {
        let s = &self.scheme;
        match s.kind.as_str() {
            "group" => Ok(SchemeSpec::Group {
                p: s.p.unwrap_or(prior.p1()),
                d_override: s.d,
            }),
            "xor-ensemble" => Ok(SchemeSpec::XorEnsemble {
                c: s.c.context("xor-ensemble scheme needs `c`")?,
                delta: s.delta.context("xor-ensemble scheme needs `delta`")?,
            }),
            "random-and" => Ok(SchemeSpec::RandomAnd {
                m: s.m.context("random-and scheme needs `m`")?,
            }),
            "ring-regular" => Ok(SchemeSpec::RingRegular {
                d: s.d.context("ring-regular scheme needs `d`")?,
            }),
            other => bail!("unknown scheme kind `{other}`"),
        }
    }

    pub fn decoder_spec(&self) -> Result<DecoderSpec> {
        let d = &self.decoder;
        match d.kind.as_str() {
            "group-same-cluster" => Ok(DecoderSpec::GroupSameCluster),
            "xor-typical" => Ok(DecoderSpec::XorTypical {
                n_cap: d
                    .n_cap
                    .unwrap_or(lesc_core::decoders::XOR_TYPICAL_DEFAULT_CAP),
            }),
            "and-onehop" => Ok(DecoderSpec::AndOnehop),
            "threshold-alg1" => Ok(DecoderSpec::ThresholdAlg1 {
                threshold_override: d.threshold_override.clone(),
                d_tilde: d.d_tilde,
            }),
            other => bail!("unknown decoder kind `{other}`"),
        }
    }

    /// Builds the validated experiment config; `seed_flag` overrides the
    /// file's `base_seed`.
    pub fn to_experiment(&self, seed_flag: Option<u64>) -> Result<ExperimentConfig> {
        let prior = Prior::new(self.prior.clone())?;
        let config = ExperimentConfig {
            n: self.n,
            trials: self.trials,
            base_seed: self.seed(seed_flag)?,
            prior: prior.clone(),
            noise_q: self.q,
            scheme: self.scheme_spec(&prior)?,
            decoder: self.decoder_spec()?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn sweep_axis(&self) -> Result<Option<(SweepAxis, Vec<f64>)>> {
        match &self.sweep {
            None => Ok(None),
            Some(s) => Ok(Some((SweepAxis::parse(&s.axis)?, s.grid.clone()))),
        }
    }
}

/// Digest of the semantic config (plus the effective seed): stable across
/// reruns, different whenever any field changes.
pub fn config_hash(config: &SimulateConfig, seed: u64) -> Result<String> {
    let canonical = serde_json::to_string(config).context("serializing config for hashing")?;
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    hasher.update(seed.to_le_bytes());
    let digest = hasher.finalize();
    Ok(hex_prefix(&digest, 16))
}

fn hex_prefix(bytes: &[u8], chars: usize) -> String {
    let mut out = String::new();
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
        if out.len() >= chars {
            break;
        }
    }
    out.truncate(chars);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const RING: &str = r#"
n = 100
trials = 5
base_seed = 7
q = 0.1
prior = [0.5, 0.5]

[scheme]
kind = "ring-regular"
d = 10

[decoder]
kind = "threshold-alg1"
"#;

    #[test]
    fn parses_and_builds() {
        let cfg = SimulateConfig::from_toml_str(RING).unwrap();
        let exp = cfg.to_experiment(None).unwrap();
        assert_eq!(exp.n, 100);
        assert_eq!(exp.base_seed, 7);
        assert_eq!(exp.queries_used().unwrap(), 500);
    }

    #[test]
    fn seed_flag_overrides() {
        let cfg = SimulateConfig::from_toml_str(RING).unwrap();
        assert_eq!(cfg.to_experiment(Some(9)).unwrap().base_seed, 9);
        let no_seed = RING.replace("base_seed = 7\n", "");
        let cfg = SimulateConfig::from_toml_str(&no_seed).unwrap();
        assert!(cfg.to_experiment(None).is_err());
        assert!(cfg.to_experiment(Some(3)).is_ok());
    }

    #[test]
    fn hash_tracks_semantic_changes() {
        let cfg = SimulateConfig::from_toml_str(RING).unwrap();
        let base = config_hash(&cfg, 7).unwrap();
        assert_eq!(base, config_hash(&cfg, 7).unwrap());
        assert_ne!(base, config_hash(&cfg, 8).unwrap());
        let mut changed = cfg.clone();
        changed.q = 0.2;
        assert_ne!(base, config_hash(&changed, 7).unwrap());
    }

    #[test]
    fn rejects_unknown_kinds() {
        let bad = RING.replace("ring-regular", "mystery");
        let cfg = SimulateConfig::from_toml_str(&bad).unwrap();
        assert!(cfg.to_experiment(None).is_err());
    }
}
