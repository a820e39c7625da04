//! CSV readers and writers for every artifact the pipeline touches.
//!
//! All files are plain CSV with an optional block of `#`-prefixed comment
//! lines on top carrying `key: value` metadata. Every writer's output
//! re-parses under the matching reader.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use lesc_core::bounds::BoundCurve;
use lesc_core::decoders::{DecodeReport, ElementFlag};
use lesc_core::model::{AnswerVector, LabelVector, QueryGraph, QueryKind};
use lesc_core::sim::{SurveyRow, SweepRow};

/// `key: value` metadata from the `#` comment header.
pub type Meta = BTreeMap<String, String>;

/// Splits a commented CSV file into its metadata and a CSV reader over the
/// data rows.
pub fn read_commented_csv(
    path: &Path,
) -> Result<(Meta, csv::Reader<std::io::Cursor<String>>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut meta = Meta::new();
    for line in text.lines() {
        let Some(rest) = line.strip_prefix('#') else {
            continue;
        };
        if let Some((key, value)) = rest.split_once(':') {
            meta.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    let reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(std::io::Cursor::new(text));
    Ok((meta, reader))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn comment_block(meta: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (key, value) in meta {
        let _ = writeln!(out, "# {key}: {value}");
    }
    out
}

fn csv_into_string<F>(fill: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    fill(&mut writer)?;
    let bytes = writer.into_inner().context("flushing csv")?;
    Ok(String::from_utf8(bytes).context("csv is utf-8")?)
}

// ---------------------------------------------------------------------------
// label vectors: `id,label`
// ---------------------------------------------------------------------------

pub fn write_labels(path: &Path, labels: &LabelVector, meta: &[(&str, String)]) -> Result<()> {
    let data = csv_into_string(|w| {
        w.write_record(["id", "label"])?;
        for (i, &label) in labels.labels().iter().enumerate() {
            w.write_record([i.to_string(), label.to_string()])?;
        }
        Ok(())
    })?;
    write_file(path, &format!("{}{data}", comment_block(meta)))
}

/// Pipeline output labels keyed by dataset ids: `id,label`.
pub fn write_pipeline_labels(
    path: &Path,
    ids: &[String],
    labels: &LabelVector,
    meta: &[(&str, String)],
) -> Result<()> {
    let data = csv_into_string(|w| {
        w.write_record(["id", "label"])?;
        for (id, &label) in ids.iter().zip(labels.labels()) {
            w.write_record([id.clone(), label.to_string()])?;
        }
        Ok(())
    })?;
    write_file(path, &format!("{}{data}", comment_block(meta)))
}

/// Reads pipeline labels back as `(id, label)` rows.
pub fn read_pipeline_labels(path: &Path) -> Result<Vec<(String, u32)>> {
    let (_, mut reader) = read_commented_csv(path)?;
    let mut rows = Vec::new();
    let mut first = true;
    for row in reader.records() {
        let row = row?;
        if first {
            first = false;
            if row.get(0) == Some("id") {
                continue;
            }
        }
        rows.push((row[0].to_string(), row[1].parse::<u32>().context("label")?));
    }
    Ok(rows)
}

pub fn read_labels(path: &Path) -> Result<LabelVector> {
    let (_, mut reader) = read_commented_csv(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "id" || &headers[1] != "label" {
        bail!("label file must start with an `id,label` header");
    }
    let mut labels = Vec::new();
    for row in reader.records() {
        let row = row?;
        let id: usize = row[0].parse().context("label row id")?;
        if id != labels.len() {
            bail!("label ids must be consecutive from 0, found {id}");
        }
        labels.push(row[1].parse::<u32>().context("label value")?);
    }
    let k = labels.iter().copied().max().unwrap_or(0).max(1) + 1;
    Ok(LabelVector::new(labels, k)?)
}

// ---------------------------------------------------------------------------
// query graphs: `query_id,kind,idx_1,...` (ragged)
// ---------------------------------------------------------------------------

pub fn write_query_graph(path: &Path, graph: &QueryGraph) -> Result<()> {
    let meta = [
        ("n", graph.n().to_string()),
        ("delta_max", graph.delta_max().to_string()),
    ];
    let meta: Vec<(&str, String)> = meta.iter().map(|(k, v)| (*k, v.clone())).collect();
    let data = csv_into_string(|w| {
        let mut header = vec!["query_id".to_string(), "kind".to_string()];
        for i in 1..=graph.delta_max() {
            header.push(format!("idx_{i}"));
        }
        w.write_record(&header)?;
        for (i, q) in graph.queries().enumerate() {
            let mut row = vec![i.to_string(), graph.kind().name().to_string()];
            row.extend(q.iter().map(|idx| idx.to_string()));
            w.write_record(&row)?;
        }
        Ok(())
    })?;
    write_file(path, &format!("{}{data}", comment_block(&meta)))
}

fn parse_kind(name: &str) -> Result<QueryKind> {
    match name {
        "xor" => Ok(QueryKind::Xor),
        "and" => Ok(QueryKind::And),
        "kary-and" => Ok(QueryKind::KaryAnd),
        other => bail!("unknown query kind `{other}`"),
    }
}

pub fn read_query_graph(path: &Path) -> Result<QueryGraph> {
    let (meta, mut reader) = read_commented_csv(path)?;
    let n: usize = meta
        .get("n")
        .context("query graph file lacks `# n:` metadata")?
        .parse()?;
    let delta_max: usize = meta
        .get("delta_max")
        .context("query graph file lacks `# delta_max:` metadata")?
        .parse()?;
    let mut kind: Option<QueryKind> = None;
    let mut queries: Vec<Vec<u32>> = Vec::new();
    for (pos, row) in reader.records().enumerate() {
        let row = row?;
        if pos == 0 && row.get(0) == Some("query_id") {
            continue;
        }
        if row.len() < 4 {
            bail!("query row {pos} has fewer than two indices");
        }
        let row_kind = parse_kind(&row[1])?;
        match kind {
            None => kind = Some(row_kind),
            Some(existing) if existing == row_kind => {}
            Some(_) => bail!("query rows mix kinds"),
        }
        let idx: Vec<u32> = row
            .iter()
            .skip(2)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u32>().context("query index"))
            .collect::<Result<_>>()?;
        queries.push(idx);
    }
    let kind = kind.context("query graph file has no data rows")?;
    Ok(QueryGraph::new(n, kind, delta_max, queries)?)
}

// ---------------------------------------------------------------------------
// answers: `query_id,answer` (yes/no accepted in binary mode)
// ---------------------------------------------------------------------------

pub fn write_answers(path: &Path, answers: &AnswerVector, meta: &[(&str, String)]) -> Result<()> {
    let data = csv_into_string(|w| {
        w.write_record(["query_id", "answer"])?;
        for (i, &a) in answers.symbols().iter().enumerate() {
            w.write_record([i.to_string(), a.to_string()])?;
        }
        Ok(())
    })?;
    write_file(path, &format!("{}{data}", comment_block(meta)))
}

fn parse_answer_symbol(raw: &str, k: u32) -> Result<u32> {
    let trimmed = raw.trim();
    if k == 2 {
        match trimmed.to_ascii_lowercase().as_str() {
            "yes" | "y" => return Ok(1),
            "no" | "n" => return Ok(0),
            _ => {}
        }
    }
    let v: u32 = trimmed
        .parse()
        .with_context(|| format!("answer `{trimmed}` is not a symbol"))?;
    if v >= k {
        bail!("answer {v} outside alphabet of size {k}");
    }
    Ok(v)
}

/// Reads answers for query ids `0..expected`. Every id must appear exactly
/// once; the error lists offending ids.
pub fn read_answers(path: &Path, expected: usize, k: u32) -> Result<AnswerVector> {
    let (_, mut reader) = read_commented_csv(path)?;
    let mut seen: Vec<Option<u32>> = vec![None; expected];
    let mut duplicates: Vec<usize> = Vec::new();
    let mut first = true;
    for row in reader.records() {
        let row = row?;
        if first {
            first = false;
            if row.get(0) == Some("query_id") {
                continue;
            }
        }
        if row.len() < 2 {
            bail!("answer rows need `query_id,answer`");
        }
        let id: usize = row[0].parse().context("answer query_id")?;
        if id >= expected {
            bail!("query_id {id} out of range (expected 0..{expected})");
        }
        let symbol = parse_answer_symbol(&row[1], k)?;
        if seen[id].replace(symbol).is_some() {
            duplicates.push(id);
        }
    }
    let missing: Vec<usize> = seen
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.is_none().then_some(i))
        .collect();
    if !missing.is_empty() || !duplicates.is_empty() {
        bail!(
            "answer sheet does not cover every query exactly once; missing: {missing:?}, duplicated: {duplicates:?}"
        );
    }
    let symbols: Vec<u32> = seen.into_iter().map(|s| s.unwrap()).collect();
    Ok(AnswerVector::new(symbols, k)?)
}

// ---------------------------------------------------------------------------
// decode reports: `id,label,flag`
// ---------------------------------------------------------------------------

pub fn write_decode_report(
    path: &Path,
    report: &DecodeReport,
    ids: Option<&[String]>,
    meta: &[(&str, String)],
) -> Result<()> {
    let data = csv_into_string(|w| {
        w.write_record(["id", "label", "flag"])?;
        for (i, &label) in report.labels.labels().iter().enumerate() {
            let id = match ids {
                Some(ids) => ids[i].clone(),
                None => i.to_string(),
            };
            w.write_record([id, label.to_string(), report.flags[i].name().to_string()])?;
        }
        Ok(())
    })?;
    write_file(path, &format!("{}{data}", comment_block(meta)))
}

pub fn read_decode_report_labels(path: &Path) -> Result<Vec<(String, u32, String)>> {
    let (_, mut reader) = read_commented_csv(path)?;
    let mut rows = Vec::new();
    let mut first = true;
    for row in reader.records() {
        let row = row?;
        if first {
            first = false;
            if row.get(0) == Some("id") {
                continue;
            }
        }
        rows.push((
            row[0].to_string(),
            row[1].parse::<u32>().context("report label")?,
            row.get(2).unwrap_or("").to_string(),
        ));
    }
    Ok(rows)
}

fn flag_from_name(name: &str) -> Result<ElementFlag> {
    match name {
        "" => Ok(ElementFlag::None),
        "unqueried-default" => Ok(ElementFlag::UnqueriedDefault),
        "tie-broken" => Ok(ElementFlag::TieBroken),
        other => bail!("unknown element flag `{other}`"),
    }
}

/// Round-trips a numeric-id report file back into a [`DecodeReport`].
pub fn read_decode_report(path: &Path) -> Result<DecodeReport> {
    let rows = read_decode_report_labels(path)?;
    let mut labels = Vec::with_capacity(rows.len());
    let mut flags = Vec::with_capacity(rows.len());
    for (i, (id, label, flag)) in rows.iter().enumerate() {
        if id.parse::<usize>().ok() != Some(i) {
            bail!("report ids must be consecutive from 0");
        }
        labels.push(*label);
        flags.push(flag_from_name(flag)?);
    }
    let k = labels.iter().copied().max().unwrap_or(0).max(1) + 1;
    Ok(DecodeReport {
        labels: LabelVector::new(labels, k)?,
        flags,
        ambiguity: None,
    })
}

// ---------------------------------------------------------------------------
// bound curves: `abscissa,value,feasible`
// ---------------------------------------------------------------------------

pub fn write_bound_curve(path: &Path, curve: &BoundCurve) -> Result<()> {
    let params = curve
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    let meta = [
        ("name", curve.name.clone()),
        ("params", params),
        (
            "units",
            format!("{},{}", curve.abscissa_unit, curve.value_unit),
        ),
    ];
    let meta: Vec<(&str, String)> = meta.iter().map(|(k, v)| (*k, v.clone())).collect();
    let data = csv_into_string(|w| {
        w.write_record(["abscissa", "value", "feasible"])?;
        for point in &curve.points {
            match point.value {
                Some(v) => w.write_record([point.x.to_string(), v.to_string(), "true".into()])?,
                None => w.write_record([point.x.to_string(), String::new(), "false".into()])?,
            }
        }
        Ok(())
    })?;
    write_file(path, &format!("{}{data}", comment_block(&meta)))
}

pub fn read_bound_curve(path: &Path) -> Result<(Meta, Vec<(f64, Option<f64>)>)> {
    let (meta, mut reader) = read_commented_csv(path)?;
    let mut rows = Vec::new();
    let mut first = true;
    for row in reader.records() {
        let row = row?;
        if first {
            first = false;
            if row.get(0) == Some("abscissa") {
                continue;
            }
        }
        let x: f64 = row[0].parse().context("curve abscissa")?;
        let feasible = row.get(2).unwrap_or("true") == "true";
        let value = if feasible {
            Some(row[1].parse::<f64>().context("curve value")?)
        } else {
            None
        };
        rows.push((x, value));
    }
    Ok((meta, rows))
}

// ---------------------------------------------------------------------------
// sweep and survey tables
// ---------------------------------------------------------------------------

pub fn write_sweep_table(path: &Path, rows: &[SweepRow], meta: &[(&str, String)]) -> Result<()> {
    let data = csv_into_string(|w| {
        w.write_record([
            "axis_value",
            "mean_distortion",
            "std_error",
            "exact_rate",
            "queries",
        ])?;
        for row in rows {
            w.write_record([
                row.axis_value.to_string(),
                row.mean_distortion.to_string(),
                row.std_error.to_string(),
                row.exact_rate.to_string(),
                row.queries.to_string(),
            ])?;
        }
        Ok(())
    })?;
    write_file(path, &format!("{}{data}", comment_block(meta)))
}

pub fn read_sweep_table(path: &Path) -> Result<(Meta, Vec<SweepRow>)> {
    let (meta, mut reader) = read_commented_csv(path)?;
    let mut rows = Vec::new();
    let mut first = true;
    for row in reader.records() {
        let row = row?;
        if first {
            first = false;
            if row.get(0) == Some("axis_value") {
                continue;
            }
        }
        rows.push(SweepRow {
            axis_value: row[0].parse()?,
            mean_distortion: row[1].parse()?,
            std_error: row[2].parse()?,
            exact_rate: row[3].parse()?,
            queries: row[4].parse()?,
        });
    }
    Ok((meta, rows))
}

pub fn write_survey_table(path: &Path, rows: &[SurveyRow], meta: &[(&str, String)]) -> Result<()> {
    let data = csv_into_string(|w| {
        w.write_record(["d_tilde", "threshold", "queries", "distortion"])?;
        for row in rows {
            w.write_record([
                row.d_tilde.to_string(),
                row.threshold.to_string(),
                row.queries.to_string(),
                row.distortion.to_string(),
            ])?;
        }
        Ok(())
    })?;
    write_file(path, &format!("{}{data}", comment_block(meta)))
}

pub fn read_survey_table(path: &Path) -> Result<Vec<SurveyRow>> {
    let (_, mut reader) = read_commented_csv(path)?;
    let mut rows = Vec::new();
    let mut first = true;
    for row in reader.records() {
        let row = row?;
        if first {
            first = false;
            if row.get(0) == Some("d_tilde") {
                continue;
            }
        }
        rows.push(SurveyRow {
            d_tilde: row[0].parse()?,
            threshold: row[1].parse()?,
            queries: row[2].parse()?,
            distortion: row[3].parse()?,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// datasets (`id,name[,label]`) and query sheets
// ---------------------------------------------------------------------------

/// An input dataset: one element per row, optional ground-truth labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub ids: Vec<String>,
    pub names: Vec<String>,
    pub labels: Option<Vec<u32>>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.ids.len()
    }
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let (_, mut reader) = read_commented_csv(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "id" || &headers[1] != "name" {
        bail!("dataset must start with an `id,name[,label]` header");
    }
    let has_labels = headers.get(2) == Some("label");
    let mut ids = Vec::new();
    let mut names = Vec::new();
    let mut labels = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.with_context(|| format!("dataset row {}", i + 1))?;
        if row.len() < 2 {
            bail!("dataset row {} is missing fields", i + 1);
        }
        ids.push(row[0].to_string());
        names.push(row[1].to_string());
        if has_labels {
            let raw = row
                .get(2)
                .with_context(|| format!("dataset row {} lacks its label", i + 1))?;
            labels.push(
                raw.parse::<u32>()
                    .with_context(|| format!("dataset row {} label `{raw}`", i + 1))?,
            );
        }
    }
    if ids.is_empty() {
        bail!("dataset has no rows");
    }
    Ok(Dataset {
        ids,
        names,
        labels: has_labels.then_some(labels),
    })
}

/// Writes the human-facing query sheet `query_id,id_a,name_a,id_b,name_b`.
pub fn write_query_sheet(
    path: &Path,
    graph: &QueryGraph,
    dataset: &Dataset,
    meta: &[(&str, String)],
) -> Result<()> {
    let data = csv_into_string(|w| {
        w.write_record(["query_id", "id_a", "name_a", "id_b", "name_b"])?;
        for (i, q) in graph.queries().enumerate() {
            let a = q[0] as usize;
            let b = q[1] as usize;
            w.write_record([
                i.to_string(),
                dataset.ids[a].clone(),
                dataset.names[a].clone(),
                dataset.ids[b].clone(),
                dataset.names[b].clone(),
            ])?;
        }
        Ok(())
    })?;
    write_file(path, &format!("{}{data}", comment_block(meta)))
}

pub fn read_query_sheet(path: &Path) -> Result<Vec<(String, String)>> {
    let (_, mut reader) = read_commented_csv(path)?;
    let mut rows = Vec::new();
    let mut first = true;
    for row in reader.records() {
        let row = row?;
        if first {
            first = false;
            if row.get(0) == Some("query_id") {
                continue;
            }
        }
        rows.push((row[1].to_string(), row[3].to_string()));
    }
    Ok(rows)
}

/// Exact-error table `d,delta,err_0,...,err_{k-1}` as a string (the `exact`
/// subcommand also prints it to stdout).
pub fn exact_table_string(
    k: usize,
    rows: &[(usize, lesc_core::bounds::ExactError)],
    meta: &[(&str, String)],
) -> Result<String> {
    let data = csv_into_string(|w| {
        let mut header = vec!["d".to_string(), "delta".to_string()];
        for i in 0..k {
            header.push(format!("err_{i}"));
        }
        w.write_record(&header)?;
        for (d, exact) in rows {
            let mut row = vec![d.to_string(), exact.delta.to_string()];
            row.extend(exact.per_label.iter().map(|e| e.to_string()));
            w.write_record(&row)?;
        }
        Ok(())
    })?;
    Ok(format!("{}{data}", comment_block(meta)))
}

pub fn write_exact_table(
    path: &Path,
    k: usize,
    rows: &[(usize, lesc_core::bounds::ExactError)],
    meta: &[(&str, String)],
) -> Result<()> {
    write_file(path, &exact_table_string(k, rows, meta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lesc_core::model::{sample_labels, Prior};
    use lesc_core::oracle::answer_noiseless;
    use lesc_core::schemes::build_ring_regular_scheme;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("lesc-format-tests");
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn labels_roundtrip() {
        let prior = Prior::binary(0.4).unwrap();
        let labels = sample_labels(&prior, 25, 3).unwrap();
        let path = tmp("labels.csv");
        write_labels(&path, &labels, &[("seed", "3".into())]).unwrap();
        let back = read_labels(&path).unwrap();
        assert_eq!(back.labels(), labels.labels());
    }

    #[test]
    fn graph_roundtrip() {
        let graph = build_ring_regular_scheme(12, 4, 9).unwrap();
        let path = tmp("graph.csv");
        write_query_graph(&path, &graph).unwrap();
        let back = read_query_graph(&path).unwrap();
        assert_eq!(back, graph);
    }

    #[test]
    fn answers_roundtrip_and_aliases() {
        let graph = build_ring_regular_scheme(10, 2, 1).unwrap();
        let labels = sample_labels(&Prior::binary(0.5).unwrap(), 10, 2).unwrap();
        let answers = answer_noiseless(&graph, &labels).unwrap();
        let path = tmp("answers.csv");
        write_answers(&path, &answers, &[]).unwrap();
        let back = read_answers(&path, graph.num_queries(), 2).unwrap();
        assert_eq!(back, answers);

        // yes/no aliases in binary mode
        let alias = tmp("answers_alias.csv");
        std::fs::write(&alias, "query_id,answer\n0,yes\n1,no\n2,YES\n3,1\n4,0\n").unwrap();
        let parsed = read_answers(&alias, 5, 2).unwrap();
        assert_eq!(parsed.symbols(), &[1, 0, 1, 1, 0]);
    }

    #[test]
    fn answers_coverage_errors_list_ids() {
        let path = tmp("answers_bad.csv");
        std::fs::write(&path, "query_id,answer\n0,1\n0,0\n2,1\n").unwrap();
        let err = read_answers(&path, 4, 2).unwrap_err().to_string();
        assert!(err.contains("missing: [1, 3]"), "{err}");
        assert!(err.contains("duplicated: [0]"), "{err}");
    }

    #[test]
    fn curve_roundtrip_with_infeasible_rows() {
        use lesc_core::bounds::{BoundCurve, CurvePoint};
        let curve = BoundCurve::new(
            "demo",
            "p",
            "bits-per-element",
            vec![("delta".into(), 10.0)],
            vec![
                CurvePoint {
                    x: 0.1,
                    value: Some(0.5),
                },
                CurvePoint { x: 0.2, value: None },
            ],
        )
        .unwrap();
        let path = tmp("curve.csv");
        write_bound_curve(&path, &curve).unwrap();
        let (meta, rows) = read_bound_curve(&path).unwrap();
        assert_eq!(meta.get("name").map(String::as_str), Some("demo"));
        assert_eq!(rows, vec![(0.1, Some(0.5)), (0.2, None)]);
    }

    #[test]
    fn dataset_with_quoted_names() {
        let path = tmp("dataset.csv");
        std::fs::write(
            &path,
            "id,name,label\nm1,\"Heat, The Movie\",0\nm2,Clue,1\n",
        )
        .unwrap();
        let ds = read_dataset(&path).unwrap();
        assert_eq!(ds.n(), 2);
        assert_eq!(ds.names[0], "Heat, The Movie");
        assert_eq!(ds.labels.as_deref(), Some(&[0, 1][..]));
    }
}
