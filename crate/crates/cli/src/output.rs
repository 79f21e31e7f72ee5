//! Output plumbing: one sink per invocation, JSON or fixed-column CSV,
//! byte-identical across identical runs.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::Serialize;

pub struct Row(pub Vec<String>);

impl Row {
    pub fn new(fields: Vec<String>) -> Self {
        Row(fields)
    }
}

pub struct OutputSink {
    out: Option<PathBuf>,
}

impl OutputSink {
    pub fn new(out: Option<PathBuf>) -> Self {
        OutputSink { out }
    }

    fn write_all(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
            }
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_all(&text)
    }

    pub fn write_csv(&self, header: &[&str], rows: Vec<Row>) -> Result<()> {
        let mut text = String::new();
        text.push_str(&header.join(","));
        text.push('\n');
        for row in rows {
            text.push_str(&row.0.join(","));
            text.push('\n');
        }
        self.write_all(&text)
    }
}
