//! `lesc bounds`: tabulate bound curves to CSV, either by figure preset or
//! one named curve at a time.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;

use lesc_core::bounds::{
    and_distortion_formula, counting_lower_rate, distortion_lower_thm3,
    distortion_rate_unconstrained, gallager_lower_rate, massey_bound, miller_rate,
    xor_achievable_rate, BoundCurve, CurvePoint,
};
use lesc_core::math::binary_entropy;

use super::parse_grid;
use crate::formats::write_bound_curve;

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Figure preset: fig1, fig2, or fig6 (writes several CSVs to --out-dir)
    #[arg(long, conflicts_with = "curve")]
    pub figure: Option<String>,
    /// Single curve: xor_achievable, miller, gallager, counting, trivial,
    /// thm3, massey, unconstrained, and_formula (writes one CSV to --out)
    #[arg(long)]
    pub curve: Option<String>,
    /// Query arity for rate curves / arity-constrained distortion curves
    #[arg(long)]
    pub delta: Option<usize>,
    /// Prior P(label = 1) for distortion curves
    #[arg(long)]
    pub p: Option<f64>,
    /// Element count behind the AND-formula curve
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Prior grid `start:end:step` for rate curves
    #[arg(long)]
    pub p_grid: Option<String>,
    /// Rate grid `start:end:step` (bits per element) for distortion curves
    #[arg(long)]
    pub rate_grid: Option<String>,
    /// Output file for --curve
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output directory for --figure
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

const DEFAULT_P_GRID: &str = "0.01:0.49:0.01";
const DEFAULT_RATE_GRID: &str = "0.01:0.99:0.01";

pub fn run(args: &BoundsArgs) -> Result<Vec<PathBuf>> {
    match (&args.figure, &args.curve) {
        (Some(figure), None) => {
            let dir = args
                .out_dir
                .as_ref()
                .context("--figure needs --out-dir")?
                .clone();
            std::fs::create_dir_all(&dir)
                .with_context(|| format!("creating {}", dir.display()))?;
            match figure.as_str() {
                "fig1" => figure1(args, &dir),
                "fig2" => figure2(args, &dir),
                "fig6" => figure6(args, &dir),
                other => bail!("unknown figure `{other}` (expected fig1, fig2, fig6)"),
            }
        }
        (None, Some(curve)) => {
            let out = args.out.as_ref().context("--curve needs --out")?.clone();
            let built = build_curve(args, curve)?;
            write_bound_curve(&out, &built)?;
            Ok(vec![out])
        }
        _ => bail!("pass exactly one of --figure or --curve"),
    }
}

fn p_grid(args: &BoundsArgs) -> Result<Vec<f64>> {
    parse_grid(args.p_grid.as_deref().unwrap_or(DEFAULT_P_GRID))
}

fn rate_grid(args: &BoundsArgs) -> Result<Vec<f64>> {
    parse_grid(args.rate_grid.as_deref().unwrap_or(DEFAULT_RATE_GRID))
}

/// Normalized query complexity of the achievability scheme and the three
/// lower bounds it is compared against.
fn figure1(args: &BoundsArgs, dir: &Path) -> Result<Vec<PathBuf>> {
    let delta = args.delta.unwrap_or(10);
    let grid = p_grid(args)?;
    let mut written = Vec::new();
    for name in ["xor_achievable", "gallager", "counting", "trivial"] {
        let curve = rate_curve(name, &grid, delta)?;
        let path = dir.join(format!("fig1_{name}.csv"));
        write_bound_curve(&path, &curve)?;
        written.push(path);
    }
    Ok(written)
}

/// Distortion-rate picture at a fixed prior: the unconstrained benchmark,
/// the arity-constrained lower bound, the linear-coding lower bound, and
/// the AND-scheme formula.
fn figure2(args: &BoundsArgs, dir: &Path) -> Result<Vec<PathBuf>> {
    let p = args.p.unwrap_or(0.5);
    let delta = args.delta.unwrap_or(2);
    let grid = rate_grid(args)?;
    let mut written = Vec::new();
    for name in ["unconstrained", "thm3", "massey", "and_formula"] {
        let curve = distortion_curve(name, &grid, p, delta, args.n)?;
        let path = dir.join(format!("fig2_{name}.csv"));
        write_bound_curve(&path, &curve)?;
        written.push(path);
    }
    Ok(written)
}

/// Achievable-rate comparison of the two ensemble analyses at arity 7 and 10.
fn figure6(args: &BoundsArgs, dir: &Path) -> Result<Vec<PathBuf>> {
    let grid = p_grid(args)?;
    let mut written = Vec::new();
    for delta in [7usize, 10] {
        let ours = rate_curve("xor_achievable", &grid, delta)?;
        let other = rate_curve("miller", &grid, delta)?;
        let min = min_curve(&ours, &other, format!("min_delta{delta}"))?;
        for (tag, curve) in [
            ("xor_achievable", ours),
            ("miller", other),
            ("min", min),
        ] {
            let path = dir.join(format!("fig6_delta{delta}_{tag}.csv"));
            write_bound_curve(&path, &curve)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn build_curve(args: &BoundsArgs, name: &str) -> Result<BoundCurve> {
    match name {
        "xor_achievable" | "miller" | "gallager" | "counting" | "trivial" => {
            let delta = args.delta.context("rate curves need --delta")?;
            rate_curve(name, &p_grid(args)?, delta)
        }
        "thm3" => {
            let delta = args.delta.context("thm3 needs --delta")?;
            distortion_curve(
                name,
                &rate_grid(args)?,
                args.p.context("thm3 needs --p")?,
                delta,
                args.n,
            )
        }
        "massey" | "unconstrained" | "and_formula" => distortion_curve(
            name,
            &rate_grid(args)?,
            args.p.context("distortion curves need --p")?,
            args.delta.unwrap_or(2),
            args.n,
        ),
        other => bail!("unknown curve `{other}`"),
    }
}

fn rate_curve(name: &str, grid: &[f64], delta: usize) -> Result<BoundCurve> {
    let mut points = Vec::with_capacity(grid.len());
    for &p in grid {
        let value = match name {
            "xor_achievable" => xor_achievable_rate(p, delta)?
                .into_option()
                .map(|r| r.rate),
            "miller" => miller_rate(p, delta)?.into_option().map(|r| r.rate),
            "gallager" => Some(gallager_lower_rate(p, delta)?),
            "counting" => Some(counting_lower_rate(p, delta)?),
            "trivial" => Some(1.0 / delta as f64),
            other => bail!("unknown rate curve `{other}`"),
        };
        points.push(CurvePoint { x: p, value });
    }
    Ok(BoundCurve::new(
        name,
        "p",
        "bits-per-element",
        vec![("delta".into(), delta as f64)],
        points,
    )?)
}

fn distortion_curve(
    name: &str,
    grid: &[f64],
    p: f64,
    delta: usize,
    n: usize,
) -> Result<BoundCurve> {
    let h_p = binary_entropy(p)?;
    let mut points = Vec::with_capacity(grid.len());
    for &rate in grid {
        let value = match name {
            "unconstrained" => Some(distortion_rate_unconstrained(rate, p)?.value),
            "massey" => Some(massey_bound(rate, p)?),
            "and_formula" => {
                let m = (rate * n as f64).round() as usize;
                Some(and_distortion_formula(n, m, p, None)?)
            }
            "thm3" => {
                if rate > 0.0 && rate < h_p {
                    Some(distortion_lower_thm3(rate, p, delta)?)
                } else {
                    None // the bound is defined strictly inside (0, H(p))
                }
            }
            other => bail!("unknown distortion curve `{other}`"),
        };
        points.push(CurvePoint { x: rate, value });
    }
    let mut params = vec![("p".into(), p), ("delta".into(), delta as f64)];
    if name == "and_formula" {
        params.push(("n".into(), n as f64));
    }
    Ok(BoundCurve::new(
        name,
        "rate-bits-per-element",
        "distortion-fraction",
        params,
        points,
    )?)
}

/// Pointwise minimum over matching abscissas; defined wherever at least one
/// input is.
fn min_curve(a: &BoundCurve, b: &BoundCurve, name: String) -> Result<BoundCurve> {
    let points = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(pa, pb)| CurvePoint {
            x: pa.x,
            value: match (pa.value, pb.value) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            },
        })
        .collect();
    Ok(BoundCurve::new(
        name,
        a.abscissa_unit.clone(),
        a.value_unit.clone(),
        a.params.clone(),
        points,
    )?)
}
