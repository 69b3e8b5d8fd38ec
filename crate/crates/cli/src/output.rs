//! JSON and CSV rendering of command results.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};

use crate::Format;

/// A result in both shapes: a JSON object and a CSV table.
pub struct Report {
    pub json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

impl Report {
    pub fn new(command: &str, header: &[&str]) -> Self {
        Report {
            json: json!({ "schema": 1, "command": command }),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, format: Format, w: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &self.json)?;
                writeln!(w)
            }
            Format::Csv => {
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(&self.header)?;
                for r in &self.rows {
                    csv.write_record(r)?;
                }
                csv.flush()
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> io::Result<()> {
        match out {
            Some(p) => {
                let mut f = File::create(p)?;
                self.write(format, &mut f)
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                self.write(format, &mut lock)
            }
        }
    }
}
