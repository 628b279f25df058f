//! Output files: provenance headers and line sinks.

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// First lines of every output file: program version, seed and the full
/// effective configuration.
pub struct Header {
    command: String,
    seed: Option<u64>,
    config: Value,
}

impl Header {
    pub fn new(command: &str, seed: Option<u64>, config: Value) -> Header {
        Header { command: command.to_string(), seed, config }
    }

    fn lines(&self, prefix: &str) -> String {
        let mut out = format!("{prefix} selsearch {} {}\n", env!("CARGO_PKG_VERSION"), self.command);
        if let Some(seed) = self.seed {
            out.push_str(&format!("{prefix} seed: {seed}\n"));
        }
        out.push_str(&format!("{prefix} config: {}\n", self.config));
        out
    }

    /// `#` comment lines for CSV, one `{"header": ...}` object for JSON
    /// lines.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.lines("#"),
            Format::Json => {
                let mut h = json!({
                    "program": "selsearch",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": self.command,
                    "config": self.config,
                });
                if let Some(seed) = self.seed {
                    h["seed"] = json!(seed);
                }
                format!("{}\n", json!({ "header": h }))
            }
        }
    }

    /// Rest-of-line PGN comments.
    pub fn render_pgn(&self) -> String {
        format!("{}\n", self.lines(";"))
    }
}

/// Format and configuration of the most recent header in a log.
pub fn read_config(text: &str) -> Option<(Format, Value)> {
    let mut found = None;
    for line in text.lines().map(str::trim) {
        if let Some(rest) = line.strip_prefix("# config:") {
            if let Ok(v) = serde_json::from_str(rest.trim()) {
                found = Some((Format::Csv, v));
            }
        } else if line.starts_with("{\"header\"") {
            if let Ok(Value::Object(mut obj)) = serde_json::from_str::<Value>(line) {
                if let Some(Value::Object(mut h)) = obj.remove("header") {
                    if let Some(c) = h.remove("config") {
                        found = Some((Format::Json, c));
                    }
                }
            }
        }
    }
    found
}

/// A file, or stdout when no path is given. Every write is flushed so an
/// interrupted run leaves whole lines.
pub struct Sink {
    out: Box<dyn Write>,
    path: PathBuf,
}

impl Sink {
    pub fn create(path: Option<&Path>, append: bool) -> Result<Sink, CliError> {
        match path {
            None => Ok(Sink { out: Box::new(io::stdout()), path: PathBuf::from("<stdout>") }),
            Some(p) => {
                let file: io::Result<File> = if append {
                    OpenOptions::new().append(true).open(p)
                } else {
                    File::create(p)
                };
                let file = file.map_err(|e| CliError::io(p, e))?;
                Ok(Sink { out: Box::new(file), path: p.to_path_buf() })
            }
        }
    }

    pub fn write(&mut self, text: &str) -> Result<(), CliError> {
        self.out
            .write_all(text.as_bytes())
            .and_then(|_| self.out.flush())
            .map_err(|e| CliError::io(&self.path, e))
    }
}
