//! Output plumbing: provenance headers, input hashes and sinks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// What every output carries about how it was produced.
pub struct Provenance {
    command: &'static str,
    config: Value,
    inputs: Vec<(PathBuf, String)>,
}

impl Provenance {
    pub fn new<C: Serialize>(command: &'static str, config: &C) -> Self {
        Self {
            command,
            config: serde_json::to_value(config).expect("configs are plain data"),
            inputs: Vec::new(),
        }
    }

    /// Records the SHA-256 of an input file.
    pub fn input(&mut self, path: &Path) -> io::Result<()> {
        let bytes = std::fs::read(path)?;
        self.inputs
            .push((path.to_path_buf(), hex::encode(Sha256::digest(&bytes))));
        Ok(())
    }

    /// `# `-prefixed header lines for CSV output.
    pub fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("apf {VERSION}"),
            format!("command={}", self.command),
            format!("config={}", self.config),
        ];
        for (p, h) in &self.inputs {
            lines.push(format!("input={} sha256={h}", p.display()));
        }
        lines
    }

    /// The `meta` object attached to JSON output.
    pub fn meta(&self) -> Value {
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|(p, h)| json!({"path": p.display().to_string(), "sha256": h}))
            .collect();
        json!({
            "tool": "apf",
            "version": VERSION,
            "command": self.command,
            "config": self.config,
            "inputs": inputs,
        })
    }
}

/// The output file, or stdout when no path is given.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes a CSV table with the provenance header.
pub fn write_table(
    out: &mut dyn Write,
    prov: &Provenance,
    extra_header: &[String],
    columns: &[&str],
    rows: &[Vec<f64>],
) -> io::Result<()> {
    for h in prov.header_lines().iter().chain(extra_header) {
        writeln!(out, "# {h}")?;
    }
    writeln!(out, "{}", columns.join(","))?;
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| fmt_num(*v)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Writes `body` with `meta` merged in as pretty JSON.
pub fn write_json(out: &mut dyn Write, prov: &Provenance, mut body: Value) -> io::Result<()> {
    if let Value::Object(m) = &mut body {
        m.insert("meta".into(), prov.meta());
    }
    serde_json::to_writer_pretty(&mut *out, &body)?;
    writeln!(out)
}

/// Integers print as integers; everything else keeps 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:.16e}")
    }
}
