//! CSV documents with a `#`-prefixed metadata preamble.
//!
//! Layout: one `# dirtymac <subcommand>` line, one `# key = value` line per
//! resolved parameter (in insertion order), the column header, then data
//! rows. LF line endings, no timestamps, no absolute paths; identical
//! invocations must produce identical bytes.

use anyhow::{Context, Result};
use std::io::Write as _;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct CsvDoc {
    command: String,
    meta: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvDoc {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            meta: Vec::new(),
            header: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn header(&mut self, columns: Vec<String>) {
        self.header = columns;
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len(), "ragged CSV row");
        self.rows.push(cells);
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.header.len()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        file.write_all(self.to_string().as_bytes())
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

impl std::fmt::Display for CsvDoc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "# dirtymac {}", self.command)?;
        for (k, v) in &self.meta {
            writeln!(f, "# {k} = {v}")?;
        }
        writeln!(f, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(f, "{}", row.join(","))?;
        }
        Ok(())
    }
}
