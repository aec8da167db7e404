use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const REPORT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Files produced by a command, held in memory until the command succeeds.
#[derive(Debug, Clone, Default)]
pub struct Artifacts {
    /// `(file name, contents, format)`.
    pub files: Vec<(String, String, Format)>,
    /// Set when the report records a failed check or an obstruction.
    pub negative: bool,
    /// Short human summary for stderr.
    pub summary: Vec<String>,
}

impl Artifacts {
    pub fn push(&mut self, name: impl Into<String>, contents: String, format: Format) {
        self.files.push((name.into(), contents, format));
    }

    /// Contents of the first file in `format`.
    pub fn primary(&self, format: Format) -> Option<&str> {
        self.files.iter().find(|f| f.2 == format).map(|f| f.1.as_str())
    }
}

/// `{"laxkit_report": 1, "command": ..., ...payload}` with sorted keys.
pub fn envelope(command: &str, payload: &impl Serialize) -> Result<String, CliError> {
    let mut map = match serde_json::to_value(payload)? {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("laxkit_report".into(), Value::from(REPORT_VERSION));
    map.insert("command".into(), Value::from(command));
    let mut s = serde_json::to_string_pretty(&Value::Object(map))?;
    s.push('\n');
    Ok(s)
}

/// Writes every file or none: contents go to temporary siblings first and
/// are renamed into place only after all writes succeed.
pub fn write_all(dir: &Path, files: &[(String, String, Format)]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.to_path_buf(), source })?;
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let cleanup = |staged: &[(PathBuf, PathBuf)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
    };
    for (name, contents, _) in files {
        let path = dir.join(name);
        let tmp = dir.join(format!(".{name}.partial"));
        if let Err(source) = fs::write(&tmp, contents) {
            let _ = fs::remove_file(&tmp);
            cleanup(&staged);
            return Err(CliError::Write { path, source });
        }
        staged.push((tmp, path));
    }
    let mut done = Vec::new();
    for (i, (tmp, path)) in staged.iter().enumerate() {
        if let Err(source) = fs::rename(tmp, path) {
            cleanup(&staged[i..]);
            for p in &done {
                let _ = fs::remove_file(p);
            }
            return Err(CliError::Write { path: path.clone(), source });
        }
        done.push(path.clone());
    }
    Ok(done)
}

pub fn csv_line(cells: impl IntoIterator<Item = String>) -> String {
    let mut s = cells
        .into_iter()
        .map(|c| if c.contains([',', '"', '\n']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c })
        .collect::<Vec<_>>()
        .join(",");
    s.push('\n');
    s
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.17e}")
}
