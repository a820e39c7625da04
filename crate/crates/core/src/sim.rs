//! Seeded Monte Carlo harness tying schemes, oracle, and decoders together.
//!
//! Every trial derives its own seeds from `base_seed + trial_index`, so
//! results are independent of execution order and reproducible bit for bit.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decoders::{
    decode_and_onehop, decode_group_same_cluster, decode_threshold_alg1, decode_xor_typical,
    DecodeReport,
};
use crate::model::{
    hamming_distortion, labels_from_sizes, sample_labels, AnswerVector, NoiseModel, Prior,
    QueryGraph,
};
use crate::oracle::answer;
use crate::schemes::{SchemeConfig, SchemeSpec};
use crate::{Error, Result};

/// Which decoder to run, with its side parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum DecoderSpec {
    GroupSameCluster,
    XorTypical {
        n_cap: usize,
    },
    AndOnehop,
    ThresholdAlg1 {
        threshold_override: Option<Vec<usize>>,
        /// Keep only each element's `d_tilde` ring-nearest queries.
        d_tilde: Option<usize>,
    },
}

impl Default for DecoderSpec {
    fn default() -> Self {
        DecoderSpec::ThresholdAlg1 {
            threshold_override: None,
            d_tilde: None,
        }
    }
}

/// A full experiment description. Per-trial seeds are derived from
/// `base_seed + trial_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub prior: Prior,
    pub noise_q: f64,
    pub scheme: SchemeSpec,
    pub decoder: DecoderSpec,
}

impl ExperimentConfig {
    /// Rejects incompatible scheme/decoder pairs and malformed parameters
    /// before any trial runs.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be >= 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.noise_q) {
            return Err(Error::InvalidConfig(format!(
                "noise q = {} outside [0, 1]",
                self.noise_q
            )));
        }
        let k = self.prior.k();
        if self.scheme.kind().binary_answers() && k != 2 {
            return Err(Error::InvalidConfig(format!(
                "{} scheme needs a binary prior, got k = {k}",
                self.scheme.kind().name()
            )));
        }
        match (&self.scheme, &self.decoder) {
            (SchemeSpec::Group { p, .. }, DecoderSpec::GroupSameCluster) => {
                if (p - self.prior.p1()).abs() > 1e-12 {
                    return Err(Error::InvalidConfig(format!(
                        "group scheme p = {p} disagrees with prior p1 = {}",
                        self.prior.p1()
                    )));
                }
                Ok(())
            }
            (SchemeSpec::XorEnsemble { .. }, DecoderSpec::XorTypical { n_cap }) => {
                if self.n > *n_cap {
                    return Err(Error::InvalidConfig(format!(
                        "n = {} exceeds the typical-set search cap {n_cap}",
                        self.n
                    )));
                }
                Ok(())
            }
            (SchemeSpec::RandomAnd { .. }, DecoderSpec::AndOnehop) => Ok(()),
            (
                SchemeSpec::RingRegular { d },
                DecoderSpec::ThresholdAlg1 {
                    threshold_override,
                    d_tilde,
                },
            ) => {
                if let Some(t) = threshold_override {
                    if t.len() != (k - 1) as usize {
                        return Err(Error::InvalidConfig(format!(
                            "threshold override has {} entries, need k - 1 = {}",
                            t.len(),
                            k - 1
                        )));
                    }
                }
                if let Some(dt) = d_tilde {
                    if *dt < 2 || dt > d || dt % 2 != 0 || d % 2 != 0 {
                        return Err(Error::InvalidConfig(format!(
                            "d_tilde = {dt} must be even, >= 2 and <= even d = {d}"
                        )));
                    }
                }
                Ok(())
            }
            (scheme, decoder) => Err(Error::InvalidConfig(format!(
                "scheme {:?} is incompatible with decoder {:?}",
                scheme.kind().name(),
                decoder_name(decoder)
            ))),
        }
    }

    /// Queries the decoder actually consumes (after d-tilde subsampling).
    pub fn queries_used(&self) -> Result<usize> {
        if let DecoderSpec::ThresholdAlg1 {
            d_tilde: Some(dt), ..
        } = &self.decoder
        {
            return Ok(self.n * dt / 2);
        }
        SchemeConfig {
            n: self.n,
            seed: 0,
            spec: self.scheme.clone(),
        }
        .query_count()
    }
}

fn decoder_name(d: &DecoderSpec) -> &'static str {
    match d {
        DecoderSpec::GroupSameCluster => "group-same-cluster",
        DecoderSpec::XorTypical { .. } => "xor-typical",
        DecoderSpec::AndOnehop => "and-onehop",
        DecoderSpec::ThresholdAlg1 { .. } => "threshold-alg1",
    }
}

/// Outcome of a single trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub distortion: f64,
    pub exact: bool,
}

/// Aggregated experiment result with per-trial rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub mean_distortion: f64,
    pub std_error: f64,
    pub exact_recovery_rate: f64,
    pub queries_used: usize,
    pub per_trial: Vec<TrialOutcome>,
}

fn trial_seeds(base_seed: u64, trial_index: usize) -> (u64, u64, u64) {
    let mut master = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(trial_index as u64));
    (master.random(), master.random(), master.random())
}

/// Runs one trial: sample labels, build the scheme, answer with noise,
/// decode, and measure distortion. Deterministic in `(config, trial_index)`.
pub fn run_trial(config: &ExperimentConfig, trial_index: usize) -> Result<TrialOutcome> {
    let (labels_seed, scheme_seed, noise_seed) = trial_seeds(config.base_seed, trial_index);
    let truth = sample_labels(&config.prior, config.n, labels_seed)?;
    let graph = SchemeConfig {
        n: config.n,
        seed: scheme_seed,
        spec: config.scheme.clone(),
    }
    .build()?;
    let report = answer_and_decode(config, &graph, &truth, noise_seed)?;
    let distortion = hamming_distortion(&truth, &report.labels)?;
    Ok(TrialOutcome {
        distortion,
        exact: distortion == 0.0,
    })
}

fn answer_and_decode(
    config: &ExperimentConfig,
    graph: &QueryGraph,
    truth: &crate::model::LabelVector,
    noise_seed: u64,
) -> Result<DecodeReport> {
    let answer_k = if graph.kind().binary_answers() {
        2
    } else {
        config.prior.k()
    };
    let noise = if config.noise_q > 0.0 {
        Some(NoiseModel::new(config.noise_q, answer_k)?)
    } else {
        None
    };
    let answers = answer(graph, truth, noise.as_ref(), noise_seed)?;
    match &config.decoder {
        DecoderSpec::GroupSameCluster => {
            decode_group_same_cluster(graph, &answers, config.prior.p1())
        }
        DecoderSpec::XorTypical { n_cap } => {
            decode_xor_typical(graph, &answers, config.prior.p1(), *n_cap)
        }
        DecoderSpec::AndOnehop => decode_and_onehop(graph, &answers),
        DecoderSpec::ThresholdAlg1 {
            threshold_override,
            d_tilde,
        } => {
            let (sub_graph, sub_answers) = match d_tilde {
                Some(dt) => subsample_ring(graph, &answers, config.n, *dt)?,
                None => (graph.clone(), answers.clone()),
            };
            decode_threshold_alg1(
                &sub_graph,
                &sub_answers,
                &config.prior,
                config.noise_q,
                threshold_override.as_deref(),
            )
        }
    }
}

/// Keeps each element's `d_tilde` ring-nearest queries: the ring builder
/// emits nearest-neighbor blocks in increasing offset order, so the
/// subsampled design is exactly the first `n d_tilde / 2` queries (with
/// their already-collected answers).
fn subsample_ring(
    graph: &QueryGraph,
    answers: &AnswerVector,
    n: usize,
    d_tilde: usize,
) -> Result<(QueryGraph, AnswerVector)> {
    if d_tilde % 2 != 0 || d_tilde < 2 {
        return Err(Error::InvalidConfig(format!(
            "d_tilde = {d_tilde} must be even and >= 2"
        )));
    }
    let keep = n * d_tilde / 2;
    if keep > graph.num_queries() {
        return Err(Error::InvalidConfig(format!(
            "d_tilde = {d_tilde} exceeds the built degree"
        )));
    }
    let sub_graph = QueryGraph::new(
        n,
        graph.kind(),
        graph.delta_max(),
        (0..keep).map(|i| graph.query(i).to_vec()),
    )?;
    let sub_answers = AnswerVector::new(answers.symbols()[..keep].to_vec(), answers.k())?;
    Ok((sub_graph, sub_answers))
}

/// Runs all trials and aggregates. The mean and standard error are summed
/// in trial order, so reruns are bit-identical.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SimResult> {
    config.validate()?;
    let mut per_trial = Vec::with_capacity(config.trials);
    for t in 0..config.trials {
        per_trial.push(run_trial(config, t)?);
    }
    let trials = config.trials as f64;
    let mean = per_trial.iter().map(|t| t.distortion).sum::<f64>() / trials;
    let std_error = if config.trials >= 2 {
        let var = per_trial
            .iter()
            .map(|t| (t.distortion - mean) * (t.distortion - mean))
            .sum::<f64>()
            / (trials - 1.0);
        crate::float::sqrt(var / trials)
    } else {
        0.0
    };
    let exact_rate = per_trial.iter().filter(|t| t.exact).count() as f64 / trials;
    Ok(SimResult {
        mean_distortion: mean,
        std_error,
        exact_recovery_rate: exact_rate,
        queries_used: config.queries_used()?,
        per_trial,
    })
}

/// Sweepable parameter axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// `m`: query budget of the random AND scheme.
    QueryBudget,
    /// `d`: degree of the ring scheme (or override of the group scheme's d).
    Degree,
    /// `q`: oracle error probability.
    Noise,
    /// `p`: binary prior.
    PriorP,
    /// `d~`: ring subsampling degree.
    DTilde,
    /// `T`: firing-count override applied to every label.
    Threshold,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(SweepAxis::QueryBudget),
            "d" => Ok(SweepAxis::Degree),
            "q" => Ok(SweepAxis::Noise),
            "p" => Ok(SweepAxis::PriorP),
            "dtilde" | "d_tilde" | "d~" => Ok(SweepAxis::DTilde),
            "T" | "t" => Ok(SweepAxis::Threshold),
            other => Err(Error::InvalidConfig(format!("unknown sweep axis `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::QueryBudget => "m",
            SweepAxis::Degree => "d",
            SweepAxis::Noise => "q",
            SweepAxis::PriorP => "p",
            SweepAxis::DTilde => "dtilde",
            SweepAxis::Threshold => "T",
        }
    }
}

/// One sweep row: the axis value plus the aggregated result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub mean_distortion: f64,
    pub std_error: f64,
    pub exact_rate: f64,
    pub queries: usize,
}

fn as_count(name: &str, v: f64) -> Result<usize> {
    let r = crate::float::round(v);
    if (v - r).abs() > 1e-9 || r < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "axis {name} needs a nonnegative integer, got {v}"
        )));
    }
    Ok(r as usize)
}

/// Runs one experiment per grid value, mutating the named axis and keeping
/// the same base-seed discipline at every point.
pub fn sweep(config: &ExperimentConfig, axis: SweepAxis, grid: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(grid.len());
    for &value in grid {
        let mut point = config.clone();
        match axis {
            SweepAxis::QueryBudget => match &mut point.scheme {
                SchemeSpec::RandomAnd { m } => *m = as_count("m", value)?,
                _ => {
                    return Err(Error::InvalidConfig(
                        "axis m applies to the random AND scheme".into(),
                    ))
                }
            },
            SweepAxis::Degree => match &mut point.scheme {
                SchemeSpec::RingRegular { d } => *d = as_count("d", value)?,
                SchemeSpec::Group { d_override, .. } => {
                    *d_override = Some(as_count("d", value)?)
                }
                _ => {
                    return Err(Error::InvalidConfig(
                        "axis d applies to ring or group schemes".into(),
                    ))
                }
            },
            SweepAxis::Noise => point.noise_q = value,
            SweepAxis::PriorP => {
                point.prior = Prior::binary(value)?;
                if let SchemeSpec::Group { p, .. } = &mut point.scheme {
                    *p = value;
                }
            }
            SweepAxis::DTilde => match &mut point.decoder {
                DecoderSpec::ThresholdAlg1 { d_tilde, .. } => {
                    *d_tilde = Some(as_count("d_tilde", value)?)
                }
                _ => {
                    return Err(Error::InvalidConfig(
                        "axis d_tilde applies to the threshold decoder".into(),
                    ))
                }
            },
            SweepAxis::Threshold => match &mut point.decoder {
                DecoderSpec::ThresholdAlg1 {
                    threshold_override, ..
                } => {
                    let fire = as_count("T", value)?;
                    *threshold_override =
                        Some(alloc::vec![fire; (point.prior.k() - 1) as usize]);
                }
                _ => {
                    return Err(Error::InvalidConfig(
                        "axis T applies to the threshold decoder".into(),
                    ))
                }
            },
        }
        let result = run_experiment(&point)?;
        rows.push(SweepRow {
            axis_value: value,
            mean_distortion: result.mean_distortion,
            std_error: result.std_error,
            exact_rate: result.exact_recovery_rate,
            queries: result.queries_used,
        });
    }
    Ok(rows)
}

/// One survey-replication row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyRow {
    pub d_tilde: usize,
    /// "More than T" rule: label 1 is asserted on T+1 or more yes answers.
    pub threshold: usize,
    pub queries: usize,
    pub distortion: f64,
}

/// Replicates the survey workflow: equal-sized binary clusters on a ring,
/// one noisy answer sheet, then one decode per `(d_tilde, T)` pair keeping
/// each element's `d_tilde` nearest queries and asserting label 1 on more
/// than `T` yes answers. Distortion is tabulated against `n d_tilde / 2`.
pub fn survey_replication(
    n: usize,
    d: usize,
    q: f64,
    thresholds: &[usize],
    dtilde_grid: &[usize],
    seed: u64,
) -> Result<Vec<SurveyRow>> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidConfig(format!(
            "survey replication needs even n >= 2, got {n}"
        )));
    }
    if d % 2 != 0 || d < 2 {
        return Err(Error::InvalidConfig(format!(
            "survey replication needs even d >= 2, got {d}"
        )));
    }
    for &dt in dtilde_grid {
        if dt % 2 != 0 || dt < 2 || dt > d {
            return Err(Error::InvalidConfig(format!(
                "d_tilde = {dt} must be even and within [2, {d}]"
            )));
        }
    }
    let (labels_seed, scheme_seed, noise_seed) = trial_seeds(seed, 0);
    let truth = labels_from_sizes(&[n / 2, n / 2], labels_seed)?;
    let prior = Prior::from_sizes(&[n / 2, n / 2])?;
    let graph = crate::schemes::build_ring_regular_scheme(n, d, scheme_seed)?;
    let noise = if q > 0.0 {
        Some(NoiseModel::new(q, 2)?)
    } else {
        None
    };
    let answers = answer(&graph, &truth, noise.as_ref(), noise_seed)?;
    let mut rows = Vec::with_capacity(dtilde_grid.len() * thresholds.len());
    for &dt in dtilde_grid {
        let (sub_graph, sub_answers) = subsample_ring(&graph, &answers, n, dt)?;
        for &t in thresholds {
            let report =
                decode_threshold_alg1(&sub_graph, &sub_answers, &prior, q, Some(&[t + 1]))?;
            let distortion = hamming_distortion(&truth, &report.labels)?;
            rows.push(SurveyRow {
                d_tilde: dt,
                threshold: t,
                queries: n * dt / 2,
                distortion,
            });
        }
    }
    Ok(rows)
}

/// Human-readable config digest used by callers that need a stable string
/// form (hashing, reproducibility headers).
pub fn describe_config(config: &ExperimentConfig) -> String {
    format!("{config:?}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::and_distortion_formula;

    fn ring_config(n: usize, d: usize, q: f64, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            n,
            trials,
            base_seed: 7,
            prior: Prior::binary(0.5).unwrap(),
            noise_q: q,
            scheme: SchemeSpec::RingRegular { d },
            decoder: DecoderSpec::ThresholdAlg1 {
                threshold_override: None,
                d_tilde: None,
            },
        }
    }

    #[test]
    fn validation_catches_mismatches() {
        let mut cfg = ring_config(100, 10, 0.1, 5);
        cfg.decoder = DecoderSpec::AndOnehop;
        assert!(cfg.validate().is_err());
        let mut cfg = ring_config(100, 10, 0.1, 0);
        cfg.decoder = DecoderSpec::ThresholdAlg1 {
            threshold_override: None,
            d_tilde: None,
        };
        assert!(cfg.validate().is_err()); // trials = 0
        let mut cfg = ring_config(100, 10, 1.5, 5);
        assert!(cfg.validate().is_err()); // q out of range
        cfg.noise_q = 0.1;
        cfg.decoder = DecoderSpec::ThresholdAlg1 {
            threshold_override: None,
            d_tilde: Some(3),
        };
        assert!(cfg.validate().is_err()); // odd d_tilde
    }

    #[test]
    fn trials_are_deterministic_and_order_free() {
        let cfg = ring_config(60, 6, 0.2, 8);
        let full = run_experiment(&cfg).unwrap();
        let rerun = run_experiment(&cfg).unwrap();
        assert_eq!(full, rerun);
        // order independence: trial t alone equals its row in the batch
        for t in (0..8).rev() {
            let solo = run_trial(&cfg, t).unwrap();
            assert_eq!(solo, full.per_trial[t]);
        }
    }

    #[test]
    fn single_trial_equals_run_trial() {
        let cfg = ring_config(40, 4, 0.1, 1);
        let result = run_experiment(&cfg).unwrap();
        assert_eq!(result.per_trial[0], run_trial(&cfg, 0).unwrap());
        assert_eq!(result.mean_distortion, result.per_trial[0].distortion);
        assert_eq!(result.std_error, 0.0);
    }

    #[test]
    fn coin_flip_noise_hits_half_distortion() {
        let cfg = ring_config(600, 100, 0.5, 10);
        let result = run_experiment(&cfg).unwrap();
        assert!(
            (result.mean_distortion - 0.5).abs() <= 0.02,
            "mean {}",
            result.mean_distortion
        );
    }

    #[test]
    fn and_trial_distortion_matches_decoder_error_condition() {
        // per-trial audit: distortion equals the fraction of label-1
        // elements none of whose queried partners is also labeled 1
        // (noiseless one-hop AND errs exactly there)
        let cfg = ExperimentConfig {
            n: 16,
            trials: 1,
            base_seed: 3,
            prior: Prior::binary(0.5).unwrap(),
            noise_q: 0.0,
            scheme: SchemeSpec::RandomAnd { m: 40 },
            decoder: DecoderSpec::AndOnehop,
        };
        for t in 0..20 {
            let (labels_seed, scheme_seed, _) = trial_seeds(cfg.base_seed, t);
            let truth = sample_labels(&cfg.prior, cfg.n, labels_seed).unwrap();
            let graph = SchemeConfig {
                n: cfg.n,
                seed: scheme_seed,
                spec: cfg.scheme.clone(),
            }
            .build()
            .unwrap();
            let mut expected_errors = 0usize;
            for u in 0..cfg.n {
                if truth.get(u) != 1 {
                    continue;
                }
                let has_one_partner = graph.queries().any(|q| {
                    q.contains(&(u as u32))
                        && q.iter()
                            .any(|&v| v as usize != u && truth.get(v as usize) == 1)
                });
                if !has_one_partner {
                    expected_errors += 1;
                }
            }
            let outcome = run_trial(&cfg, t).unwrap();
            assert_eq!(
                outcome.distortion,
                expected_errors as f64 / cfg.n as f64,
                "trial {t}"
            );
        }
    }

    #[test]
    fn all_zero_labels_give_zero_distortion_for_and() {
        let cfg = ExperimentConfig {
            n: 30,
            trials: 1,
            base_seed: 11,
            prior: Prior::new(alloc::vec![1.0, 0.0]).unwrap(),
            noise_q: 0.0,
            scheme: SchemeSpec::RandomAnd { m: 50 },
            decoder: DecoderSpec::AndOnehop,
        };
        assert_eq!(run_trial(&cfg, 0).unwrap().distortion, 0.0);
    }

    #[test]
    fn sweep_over_noise_rises_to_half() {
        let cfg = ring_config(300, 20, 0.0, 8);
        let rows = sweep(&cfg, SweepAxis::Noise, &[0.05, 0.2, 0.35, 0.5]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.windows(2).all(|w| {
            w[0].mean_distortion <= w[1].mean_distortion + 2.0 * w[1].std_error + 0.02
        }));
        let last = rows.last().unwrap();
        assert!((last.mean_distortion - 0.5).abs() < 0.05);
    }

    #[test]
    fn sweep_m_tracks_closed_form() {
        let cfg = ExperimentConfig {
            n: 500,
            trials: 100,
            base_seed: 5,
            prior: Prior::binary(0.5).unwrap(),
            noise_q: 0.0,
            scheme: SchemeSpec::RandomAnd { m: 0 },
            decoder: DecoderSpec::AndOnehop,
        };
        let rows = sweep(&cfg, SweepAxis::QueryBudget, &[250.0, 500.0, 1000.0]).unwrap();
        for row in rows {
            let formula = and_distortion_formula(500, row.axis_value as usize, 0.5, None).unwrap();
            assert!(
                (row.mean_distortion - formula).abs() <= 0.02,
                "m {}: sim {} vs formula {formula}",
                row.axis_value,
                row.mean_distortion
            );
        }
    }

    #[test]
    fn sweep_empty_grid_is_empty() {
        let cfg = ring_config(50, 4, 0.1, 2);
        assert!(sweep(&cfg, SweepAxis::Degree, &[]).unwrap().is_empty());
    }

    #[test]
    fn sweep_rejects_unknown_axis_and_bad_values() {
        assert!(SweepAxis::parse("z").is_err());
        assert_eq!(SweepAxis::parse("d~").unwrap(), SweepAxis::DTilde);
        let cfg = ring_config(50, 4, 0.1, 2);
        assert!(sweep(&cfg, SweepAxis::Degree, &[4.5]).is_err());
        assert!(sweep(&cfg, SweepAxis::QueryBudget, &[10.0]).is_err());
    }

    #[test]
    fn std_error_shrinks_with_trials() {
        let narrow = run_experiment(&ring_config(80, 6, 0.3, 25)).unwrap();
        let wide = run_experiment(&ring_config(80, 6, 0.3, 100)).unwrap();
        let ratio = wide.std_error / narrow.std_error;
        // fourfold trials should halve the standard error, within factor 2
        assert!(ratio > 0.25 && ratio < 1.0, "ratio {ratio}");
    }

    #[test]
    fn survey_full_degree_matches_plain_decode() {
        let n = 60;
        let d = 6;
        let q = 0.105;
        let seed = 21;
        let prior = Prior::binary(0.5).unwrap();
        // "more than T" with T+1 = ceil(C) reproduces the formula decoder
        let fire = crate::decoders::alg1_fire_counts(&prior, q, d).unwrap();
        let rows = survey_replication(n, d, q, &[fire[0] - 1], &[d], seed).unwrap();
        assert_eq!(rows.len(), 1);

        let (labels_seed, scheme_seed, noise_seed) = trial_seeds(seed, 0);
        let truth = labels_from_sizes(&[n / 2, n / 2], labels_seed).unwrap();
        let graph = crate::schemes::build_ring_regular_scheme(n, d, scheme_seed).unwrap();
        let noise = NoiseModel::new(q, 2).unwrap();
        let answers = answer(&graph, &truth, Some(&noise), noise_seed).unwrap();
        let report = decode_threshold_alg1(&graph, &answers, &prior, q, None).unwrap();
        let expected = hamming_distortion(&truth, &report.labels).unwrap();
        assert_eq!(rows[0].distortion, expected);
        assert_eq!(rows[0].queries, n * d / 2);
    }

    #[test]
    fn survey_tiny_degree_cannot_assert_ones() {
        // d_tilde = 2 with thresholds T in {3, 4}: more than T yes answers
        // can never happen, so everything decodes 0 and distortion is 1/2
        let rows = survey_replication(100, 10, 0.105, &[3, 4], &[2], 9).unwrap();
        for row in &rows {
            assert_eq!(row.distortion, 0.5, "T = {}", row.threshold);
        }
    }

    #[test]
    fn survey_rejects_odd_parameters() {
        assert!(survey_replication(100, 10, 0.1, &[2], &[3], 1).is_err());
        assert!(survey_replication(100, 9, 0.1, &[2], &[2], 1).is_err());
        assert!(survey_replication(101, 10, 0.1, &[2], &[2], 1).is_err());
        assert!(survey_replication(100, 10, 0.1, &[2], &[12], 1).is_err());
    }
}
