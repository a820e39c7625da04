//! Pipeline manifest: enough metadata to rebuild the exact query graph that
//! produced a query sheet, so answers collected offline can be decoded later.
//!
//! The manifest stores the seed rather than the graph: the graph is a
//! deterministic function of `(n, d, seed)`, which keeps the artifact small
//! and tamper-evident.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use lesc_core::model::QueryGraph;
use lesc_core::schemes::build_ring_regular_scheme;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PipelineManifest {
    /// Source dataset (`id,name[,label]`).
    pub dataset: PathBuf,
    /// Element count at sheet-generation time.
    pub n: usize,
    /// Ring degree.
    pub d: usize,
    /// Seed that fixes the ring permutation.
    pub seed: u64,
    /// Emitted human-facing query sheet.
    pub query_sheet: PathBuf,
    /// Where collected answers are expected to land.
    pub answers_expected: PathBuf,
}

impl PipelineManifest {
    pub fn validate(&self) -> Result<()> {
        let paths = [&self.dataset, &self.query_sheet, &self.answers_expected];
        for (i, a) in paths.iter().enumerate() {
            for b in paths.iter().skip(i + 1) {
                if a == b {
                    bail!("manifest paths must be distinct, `{}` repeats", a.display());
                }
            }
        }
        if self.n == 0 {
            bail!("manifest has n = 0");
        }
        Ok(())
    }

    /// Rebuilds the exact query graph the sheet was generated from.
    pub fn rebuild_graph(&self) -> Result<QueryGraph> {
        Ok(build_ring_regular_scheme(self.n, self.d, self.seed)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.validate()?;
        let json = serde_json::to_string_pretty(self).context("serializing manifest")?;
        std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let manifest: PipelineManifest =
            serde_json::from_str(&text).context("parsing manifest")?;
        manifest.validate()?;
        Ok(manifest)
    }
}
