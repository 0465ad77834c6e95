//! CSV tables and run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::CliError;

pub const TOOL: &str = concat!("spdc ", env!("CARGO_PKG_VERSION"));

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub derived: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn derive(&mut self, key: &str, value: impl ToString) {
        self.derived.insert(key.to_string(), value.to_string());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("# spdc run manifest\n");
        out.push_str(&format!("tool = {TOOL}\n"));
        out.push_str(&format!("command = {}\n", self.command));
        out.push_str("[params]\n");
        for (k, v) in &self.params {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out.push_str("[derived]\n");
        for (k, v) in &self.derived {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out.push_str("[warnings]\n");
        for w in &self.warnings {
            out.push_str(&format!("warning = {w}\n"));
        }
        out
    }
}

/// Result table of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Appends a row of floats in shortest round-trip form.
    pub fn push_f64(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| fmt_f64(*v)).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render_body(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest");
    out.with_file_name(name)
}

/// CSV text for a file output: manifest reference line, header, rows.
pub fn render_csv_file(table: &Table, manifest_name: &str) -> String {
    format!("# manifest: {manifest_name}\n{}", table.render_body())
}

/// CSV text for stdout: the manifest is inlined as comment lines.
pub fn render_csv_inline(table: &Table, manifest: &RunManifest) -> String {
    let mut out = String::from("# manifest: inline\n");
    for line in manifest.render().lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&table.render_body());
    out
}

/// Writes the CSV and its manifest next to each other. Both are staged in
/// temporary files and renamed only once both are complete.
pub fn write_outputs(out: &Path, table: &Table, manifest: &RunManifest) -> Result<(), CliError> {
    let mpath = manifest_path(out);
    let mname = mpath
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let staged = [
        (out.to_path_buf(), render_csv_file(table, &mname)),
        (mpath, manifest.render()),
    ];
    let mut temps = Vec::new();
    for (path, text) in &staged {
        let mut tmp_name = path
            .file_name()
            .map(|n| n.to_os_string())
            .unwrap_or_default();
        tmp_name.push(".partial");
        let tmp = path.with_file_name(tmp_name);
        let res = fs::File::create(&tmp).and_then(|mut f| f.write_all(text.as_bytes()));
        if let Err(e) = res {
            let _ = fs::remove_file(&tmp);
            for t in &temps {
                let _ = fs::remove_file(t);
            }
            return Err(CliError::invalid(format!(
                "cannot write {}: {e}",
                path.display()
            )));
        }
        temps.push(tmp);
    }
    for (tmp, (path, _)) in temps.iter().zip(&staged) {
        fs::rename(tmp, path)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
