//! Subcommand implementations for the `lesc` binary.

pub mod bounds;
pub mod decode_answers;
pub mod exact;
pub mod make_queries;
pub mod simulate;

use anyhow::{bail, Context, Result};

/// Parses `a:b:step` into an inclusive grid, or a bare number into a
/// single-point grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    if !spec.contains(':') {
        let v: f64 = spec.parse().with_context(|| format!("grid `{spec}`"))?;
        return Ok(vec![v]);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("grid `{spec}` must look like start:end:step");
    }
    let start: f64 = parts[0].parse().context("grid start")?;
    let end: f64 = parts[1].parse().context("grid end")?;
    let step: f64 = parts[2].parse().context("grid step")?;
    if step <= 0.0 || end < start {
        bail!("grid `{spec}` needs end >= start and step > 0");
    }
    let mut grid = Vec::new();
    let mut i = 0usize;
    loop {
        let x = start + i as f64 * step;
        if x > end + 1e-12 {
            break;
        }
        grid.push(x);
        i += 1;
    }
    Ok(grid)
}

pub fn parse_f64_list(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("list entry `{s}`"))
        })
        .collect()
}

pub fn parse_usize_list(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("list entry `{s}`"))
        })
        .collect()
}

/// Seconds since the epoch, for the reproducibility header's timestamp line.
pub fn timestamp() -> String {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_else(|_| "0".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0.3").unwrap(), vec![0.3]);
        let g = parse_grid("0.1:0.3:0.1").unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[2] - 0.3).abs() < 1e-12);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_f64_list("0.5, 0.3,0.2").unwrap(), vec![0.5, 0.3, 0.2]);
        assert_eq!(parse_usize_list("100,100").unwrap(), vec![100, 100]);
        assert!(parse_usize_list("1,x").is_err());
    }
}
