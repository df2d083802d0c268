//! CSV emission and reference-file parsing.
//!
//! Every emitted CSV starts with a provenance comment (`# source: ...`)
//! followed by a header row. Values are written with Rust's shortest
//! round-trip float formatting, which is locale-independent and preserves
//! full double precision. No timestamps: identical inputs produce
//! byte-identical files.

use crate::analysis::ReferenceDataset;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One CSV table plus trailing comment lines (used to report skipped rows).
#[derive(Debug, Clone)]
pub struct CsvTable {
    /// File name suffix; the file is written as `<prefix>_<name>.csv`.
    pub name: String,
    /// Provenance line content, emitted as `# source: ...`.
    pub source: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub trailing_comments: Vec<String>,
}

impl CsvTable {
    pub fn new(name: &str, source: String, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            source,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            trailing_comments: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# source: {}\n", self.source));
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for comment in &self.trailing_comments {
            out.push_str(&format!("# {comment}\n"));
        }
        out
    }
}

/// The result of one command: CSV tables plus a human-readable summary.
#[derive(Debug, Clone, Default)]
pub struct OutputBundle {
    pub tables: Vec<CsvTable>,
    pub summary: String,
}

impl OutputBundle {
    /// Writes each table to `<prefix>_<name>.csv`. Returns the paths.
    pub fn write_files(&self, prefix: &str) -> std::io::Result<Vec<PathBuf>> {
        let mut paths = Vec::new();
        for table in &self.tables {
            let path = PathBuf::from(format!("{prefix}_{}.csv", table.name));
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            let mut file = std::fs::File::create(&path)?;
            file.write_all(table.to_csv_string().as_bytes())?;
            paths.push(path);
        }
        Ok(paths)
    }
}

/// Formats a float with shortest round-trip precision.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Reads a reference CSV: comment lines ignored, first column is the
/// abscissa, every further column becomes one dataset labeled by its
/// header name.
pub fn read_reference_csv(path: &Path) -> Result<Vec<ReferenceDataset>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read reference {}: {e}", path.display()))?;
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header_line = lines.next().ok_or("reference file has no header row")?;
    let header: Vec<&str> = header_line.split(',').map(str::trim).collect();
    if header.len() < 2 {
        return Err("reference file needs an abscissa column and at least one value column".into());
    }

    let mut columns: Vec<Vec<(f64, f64)>> = vec![Vec::new(); header.len() - 1];
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != header.len() {
            return Err(format!(
                "reference row {} has {} fields, expected {}",
                lineno + 1,
                fields.len(),
                header.len()
            ));
        }
        let parse = |s: &str| -> Result<f64, String> {
            s.parse::<f64>().map_err(|e| format!("bad number '{s}' in reference row: {e}"))
        };
        let x = parse(fields[0])?;
        for (col, field) in fields[1..].iter().enumerate() {
            if field.is_empty() {
                continue;
            }
            columns[col].push((x, parse(field)?));
        }
    }

    let datasets = header[1..]
        .iter()
        .zip(columns)
        .filter(|(_, points)| !points.is_empty())
        .map(|(name, points)| ReferenceDataset {
            label: name.to_string(),
            unit: name.to_string(),
            points,
            provenance: path.display().to_string(),
        })
        .collect();
    Ok(datasets)
}
