//! Rendering of reports as JSON, CSV or an aligned table.

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// A report: one JSON object plus a flat table view for CSV and table output.
pub struct Rendered {
    pub json: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Rendered {
    pub fn new<T: Serialize>(report: &T, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Result<Self> {
        Ok(Self { json: serde_json::to_string_pretty(report)?, header, rows })
    }

    pub fn emit(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(format!("{}\n", self.json)),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
            Format::Table => Ok(table(&self.header, &self.rows)),
        }
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header.to_vec())];
    let dashes: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push(line(dashes.iter().map(String::as_str).collect()));
    for r in rows {
        out.push(line(r.iter().map(String::as_str).collect()));
    }
    out.join("\n") + "\n"
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn coeffs(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct R {
        b: u32,
        a: Vec<u32>,
    }

    #[test]
    fn csv_header_without_rows() {
        let r = Rendered::new(&R { b: 1, a: vec![] }, vec!["x", "y"], vec![]).unwrap();
        assert_eq!(r.emit(Format::Csv).unwrap(), "x,y\n");
    }

    #[test]
    fn json_keeps_declaration_order_and_empty_lists() {
        let r = Rendered::new(&R { b: 1, a: vec![] }, vec![], vec![]).unwrap();
        let s = r.emit(Format::Json).unwrap();
        assert!(s.find("\"b\"").unwrap() < s.find("\"a\"").unwrap());
        assert!(s.contains("\"a\": []"));
    }

    #[test]
    fn table_is_aligned() {
        let t =
            table(&["d", "status"], &[vec!["12".into(), "feasible".into()], vec!["7".into(), "x".into()]]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "d   status");
        assert_eq!(lines[1], "--  --------");
        assert_eq!(lines[3], "7   x");
    }
}
