use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};
use thetagrad_core::config::{OutputFormat, RunConfig};

/// One command's result: a JSON body plus a flat table for CSV output.
pub struct Report {
    pub command: &'static str,
    pub pass: bool,
    pub body: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &'static str, body: impl Serialize) -> anyhow::Result<Report> {
        Ok(Report { command, pass: true, body: serde_json::to_value(body)?, header: Vec::new(), rows: Vec::new() })
    }

    pub fn pass(mut self, pass: bool) -> Report {
        self.pass = pass;
        self
    }

    pub fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Report {
        self.header = header;
        self.rows = rows;
        self
    }

    pub fn emit(&self, config: &RunConfig, out: &mut impl Write) -> anyhow::Result<()> {
        match config.output_format {
            OutputFormat::Json => {
                let doc = json!({ "command": self.command, "config": config, "pass": self.pass, "result": self.body });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)?;
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// Shortest round-trip text for a float.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}
