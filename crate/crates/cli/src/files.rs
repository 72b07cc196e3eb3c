//! Input reading and output writing, with every file's digest recorded.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use ypc_core::graph::{parse_node_list, LoadReport};
use ypc_core::Graph;

use crate::manifest::FileDigest;
use crate::{Format, GraphInput};

/// A missing or malformed input; maps to the usage exit code.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects digests of everything read and written during one command.
#[derive(Debug, Default)]
pub struct Recorder {
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl Recorder {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path)
            .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(FileDigest::new(path, &bytes));
        String::from_utf8(bytes)
            .map_err(|_| InputError(format!("{} is not valid UTF-8", path.display())).into())
    }

    pub fn load_graph(&mut self, input: &GraphInput) -> Result<Graph> {
        let text = self.read(&input.graph)?;
        let extra = match &input.nodes {
            Some(p) => {
                let nodes = self.read(p)?;
                parse_node_list(&nodes).with_context(|| format!("in {}", p.display()))?
            }
            None => Vec::new(),
        };
        let (g, report) = Graph::load_edge_list_with_report(&text, extra)
            .with_context(|| format!("in {}", input.graph.display()))?;
        log_report(&input.graph, &g, &report);
        Ok(g)
    }

    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(FileDigest::new(path, bytes));
        Ok(())
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, path: &Path, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write(path, &bytes)
    }

    pub fn write_csv<T: Serialize>(&mut self, path: &Path, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv buffer: {e}"))?;
        self.write(path, &bytes)
    }

    /// Writes `rows` as `<base>.csv` and/or `<base>.json`, where `base` is
    /// `path` minus any `.csv` or `.json` extension.
    pub fn write_table<T: Serialize>(&mut self, path: &Path, rows: &[T], format: Format) -> Result<()> {
        if format != Format::Json {
            self.write_csv(&sibling(path, "csv"), rows)?;
        }
        if format != Format::Csv {
            self.write_json(&sibling(path, "json"), rows)?;
        }
        Ok(())
    }
}

fn log_report(path: &Path, g: &Graph, report: &LoadReport) {
    log::info!(
        "loaded {}: {} nodes, {} edges from {} lines",
        path.display(),
        g.num_nodes(),
        g.num_edges(),
        report.edge_lines
    );
    if report.duplicates > 0 {
        log::info!("merged {} duplicate or reciprocal edge line(s)", report.duplicates);
    }
}

/// `path` without a trailing `.csv` or `.json`.
pub fn table_base(path: &Path) -> PathBuf {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv" | "json") => path.with_extension(""),
        _ => path.to_path_buf(),
    }
}

/// `<base>.<suffix>` for the table written at `path`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    suffixed(&table_base(path), suffix)
}

/// `<prefix>.<suffix>`, keeping any dots already in the prefix.
pub fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}
