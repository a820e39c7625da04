//! `lesc decode-answers`: rebuild the query graph from a manifest, validate
//! a collected answer sheet, and recover labels with the threshold decoder.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;

use lesc_core::decoders::{alg1_fire_counts, decode_threshold_alg1};
use lesc_core::model::Prior;

use super::{parse_f64_list, parse_usize_list};
use crate::formats::{read_answers, read_dataset, write_pipeline_labels};
use crate::manifest::PipelineManifest;

#[derive(Debug, Args)]
pub struct DecodeAnswersArgs {
    /// Manifest JSON written by make-queries
    #[arg(long)]
    pub manifest: PathBuf,
    /// Collected answers CSV (`query_id,answer`; yes/no accepted for k = 2)
    #[arg(long)]
    pub answers: PathBuf,
    /// Prior as a comma list, e.g. 0.5,0.5
    #[arg(long, conflicts_with = "sizes")]
    pub prior: Option<String>,
    /// Cluster sizes n_i as a comma list (converted to p_i = n_i / n)
    #[arg(long)]
    pub sizes: Option<String>,
    /// Declared oracle error probability
    #[arg(long)]
    pub q: f64,
    /// "More than T" firing rule per label (comma list or one value for
    /// all); default is the ceil(C_i) thresholds
    #[arg(long)]
    pub more_than: Option<String>,
    /// Output labels CSV
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &DecodeAnswersArgs) -> Result<()> {
    let manifest = PipelineManifest::load(&args.manifest)?;
    let dataset = read_dataset(&manifest.dataset)?;
    if dataset.n() != manifest.n {
        bail!(
            "dataset now has {} rows but the manifest was built for n = {}",
            dataset.n(),
            manifest.n
        );
    }
    let prior = match (&args.prior, &args.sizes) {
        (Some(spec), None) => Prior::new(parse_f64_list(spec)?)?,
        (None, Some(spec)) => {
            let sizes = parse_usize_list(spec)?;
            let total: usize = sizes.iter().sum();
            if total != manifest.n {
                bail!("sizes sum to {total}, dataset has n = {}", manifest.n);
            }
            Prior::from_sizes(&sizes)?
        }
        _ => bail!("pass exactly one of --prior or --sizes"),
    };
    let k = prior.k();
    let graph = manifest.rebuild_graph()?;
    let answers = read_answers(&args.answers, graph.num_queries(), k)?;
    let fire_at = match &args.more_than {
        None => None,
        Some(spec) => {
            let raw = parse_usize_list(spec)?;
            let per_label = if raw.len() == 1 {
                vec![raw[0]; (k - 1) as usize]
            } else if raw.len() == (k - 1) as usize {
                raw
            } else {
                bail!("--more-than needs 1 or k-1 = {} entries", k - 1);
            };
            Some(per_label.into_iter().map(|t| t + 1).collect::<Vec<_>>())
        }
    };
    let report = decode_threshold_alg1(&graph, &answers, &prior, args.q, fire_at.as_deref())?;

    let effective_fire = match &fire_at {
        Some(f) => f.clone(),
        None => alg1_fire_counts(&prior, args.q, graph.degrees()[0])?,
    };
    let mut counts = vec![0usize; k as usize];
    for &label in report.labels.labels() {
        counts[label as usize] += 1;
    }
    let counts_str = counts
        .iter()
        .enumerate()
        .map(|(label, c)| format!("{label}={c}"))
        .collect::<Vec<_>>()
        .join(" ");
    let mut meta = vec![
        ("seed", manifest.seed.to_string()),
        ("d", manifest.d.to_string()),
        ("q", args.q.to_string()),
        ("thresholds_fire_at", format!("{effective_fire:?}")),
        ("per_label_counts", counts_str.clone()),
    ];
    if let Some(truth) = &dataset.labels {
        let correct = truth
            .iter()
            .zip(report.labels.labels())
            .filter(|(a, b)| a == b)
            .count();
        meta.push((
            "accuracy_vs_dataset",
            format!("{}", correct as f64 / manifest.n as f64),
        ));
    }
    write_pipeline_labels(&args.out, &dataset.ids, &report.labels, &meta)?;
    println!(
        "decoded {} elements (fire-at {effective_fire:?}); per-label counts: {counts_str}",
        manifest.n
    );
    if let Some((_, acc)) = meta.iter().find(|(k, _)| *k == "accuracy_vs_dataset") {
        println!("accuracy against dataset labels: {acc}");
    }
    Ok(())
}
