//! Output files: fixed-format CSV, JSON, and a provenance sidecar for each.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::json;

use crate::config::{Command, RunConfig};

/// 17 significant digits: round-trips every binary64 value.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Writes files under a path prefix and records a sidecar for each.
pub struct Sink<'a> {
    prefix: String,
    command: Command,
    config: &'a RunConfig,
    pub written: Vec<PathBuf>,
}

impl<'a> Sink<'a> {
    pub fn new(prefix: &str, command: Command, config: &'a RunConfig) -> Self {
        Sink { prefix: prefix.to_string(), command, config, written: Vec::new() }
    }

    fn path(&self, name: &str) -> anyhow::Result<PathBuf> {
        let p = PathBuf::from(format!("{}{name}", self.prefix));
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        Ok(p)
    }

    fn provenance(&mut self, path: &Path, columns: Option<&[&str]>) -> anyhow::Result<()> {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let mut record = json!({
            "tool": "flamefront",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "file": name,
            "config": self.config,
        });
        if let Some(c) = columns {
            record["columns"] = json!(c);
        }
        let side = PathBuf::from(format!("{}.provenance.json", path.display()));
        write_text(&side, &(serde_json::to_string_pretty(&record)? + "\n"))?;
        self.written.push(side);
        Ok(())
    }

    /// `rows` are already formatted fields.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
        let path = self.path(name)?;
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(header)?;
        for r in rows {
            debug_assert_eq!(r.len(), header.len());
            w.write_record(r)?;
        }
        w.flush()?;
        self.written.push(path.clone());
        self.provenance(&path, Some(header))
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        let path = self.path(name)?;
        write_text(&path, &(serde_json::to_string_pretty(value)? + "\n"))?;
        self.written.push(path.clone());
        self.provenance(&path, None)
    }
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
