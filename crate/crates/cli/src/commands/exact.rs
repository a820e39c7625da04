//! `lesc exact`: closed-form threshold-decoder error over a degree grid.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;

use lesc_core::bounds::{alg1_exact_error, alg1_exact_error_with_thresholds, ExactError};
use lesc_core::model::Prior;

use super::{parse_f64_list, parse_usize_list};
use crate::formats::exact_table_string;

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// Prior as a comma list, e.g. 0.5,0.5
    #[arg(long)]
    pub prior: String,
    /// Oracle error probability
    #[arg(long)]
    pub q: f64,
    /// Single degree
    #[arg(long, conflicts_with = "d_grid")]
    pub d: Option<usize>,
    /// Degree grid start:end:step (integers)
    #[arg(long)]
    pub d_grid: Option<String>,
    /// "More than T" firing rule per label (comma list or one value for
    /// all); default is the ceil(C_i) thresholds
    #[arg(long)]
    pub more_than: Option<String>,
    /// Output CSV; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn degree_grid(args: &ExactArgs) -> Result<Vec<usize>> {
    if let Some(d) = args.d {
        return Ok(vec![d]);
    }
    let spec = args.d_grid.as_ref().context("pass --d or --d-grid")?;
    let grid = super::parse_grid(spec)?;
    grid.into_iter()
        .map(|v| {
            if (v - v.round()).abs() > 1e-9 || v < 1.0 {
                bail!("degree grid entries must be positive integers, got {v}")
            } else {
                Ok(v.round() as usize)
            }
        })
        .collect()
}

pub fn run(args: &ExactArgs) -> Result<()> {
    let prior = Prior::new(parse_f64_list(&args.prior)?)?;
    let k = prior.k() as usize;
    let fire_at = match &args.more_than {
        None => None,
        Some(spec) => {
            let raw = parse_usize_list(spec)?;
            let per_label = if raw.len() == 1 {
                vec![raw[0]; k - 1]
            } else if raw.len() == k - 1 {
                raw
            } else {
                bail!("--more-than needs 1 or k-1 = {} entries", k - 1);
            };
            Some(per_label.into_iter().map(|t| t + 1).collect::<Vec<_>>())
        }
    };
    let mut rows: Vec<(usize, ExactError)> = Vec::new();
    for d in degree_grid(args)? {
        let exact = match &fire_at {
            Some(fire) => alg1_exact_error_with_thresholds(&prior, args.q, d, fire)?,
            None => alg1_exact_error(&prior, args.q, d)?,
        };
        rows.push((d, exact));
    }
    let meta = [
        ("prior", args.prior.clone()),
        ("q", args.q.to_string()),
        (
            "thresholds",
            match &fire_at {
                Some(f) => format!("fire-at {f:?}"),
                None => "ceil(C_i)".to_string(),
            },
        ),
    ];
    let meta: Vec<(&str, String)> = meta.iter().map(|(a, b)| (*a, b.clone())).collect();
    let table = exact_table_string(k, &rows, &meta)?;
    match &args.out {
        Some(path) => std::fs::write(path, table)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{table}"),
    }
    Ok(())
}
