//! `lesc make-queries`: turn a dataset into a ring-regular query sheet plus
//! the manifest needed to decode collected answers later.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use lesc_core::schemes::build_ring_regular_scheme;

use crate::formats::{read_dataset, write_query_sheet};
use crate::manifest::PipelineManifest;

#[derive(Debug, Args)]
pub struct MakeQueriesArgs {
    /// Dataset CSV (`id,name[,label]`)
    #[arg(long)]
    pub dataset: PathBuf,
    /// Ring degree d (the sheet holds n*d/2 queries)
    #[arg(long)]
    pub degree: usize,
    /// Seed fixing the ring permutation (required; no nondeterministic default)
    #[arg(long)]
    pub seed: u64,
    /// Output query sheet CSV
    #[arg(long)]
    pub queries: PathBuf,
    /// Output manifest JSON
    #[arg(long)]
    pub manifest: PathBuf,
    /// Where collected answers are expected (recorded in the manifest);
    /// defaults to `<queries stem>_answers.csv`
    #[arg(long)]
    pub answers: Option<PathBuf>,
}

pub fn run(args: &MakeQueriesArgs) -> Result<()> {
    let dataset = read_dataset(&args.dataset)?;
    let n = dataset.n();
    let graph = build_ring_regular_scheme(n, args.degree, args.seed)
        .with_context(|| format!("building the degree-{} ring on n = {n}", args.degree))?;
    let answers_expected = args.answers.clone().unwrap_or_else(|| {
        let stem = args
            .queries
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "queries".to_string());
        args.queries.with_file_name(format!("{stem}_answers.csv"))
    });
    let meta = [
        ("n", n.to_string()),
        ("d", args.degree.to_string()),
        ("seed", args.seed.to_string()),
        ("dataset", args.dataset.display().to_string()),
    ];
    let meta: Vec<(&str, String)> = meta.iter().map(|(k, v)| (*k, v.clone())).collect();
    write_query_sheet(&args.queries, &graph, &dataset, &meta)?;
    let manifest = PipelineManifest {
        dataset: args.dataset.clone(),
        n,
        d: args.degree,
        seed: args.seed,
        query_sheet: args.queries.clone(),
        answers_expected,
    };
    manifest.save(&args.manifest)?;
    println!(
        "wrote {} queries to {} (manifest {})",
        graph.num_queries(),
        args.queries.display(),
        args.manifest.display()
    );
    Ok(())
}
