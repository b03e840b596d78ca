//! Column-named numeric tables and their CSV form. Floats are written with
//! 17 significant digits so that parsing the output recovers every bit.

use std::io::Write;
use std::path::Path;

use crate::error::{Result, SimError};

/// Columns holding counts or indices; written without exponent.
pub const INTEGER_COLUMNS: [&str; 3] = ["n", "m", "n_fock_used"];

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.index_of(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let integer: Vec<bool> = self
            .header
            .iter()
            .map(|h| INTEGER_COLUMNS.contains(&h.as_str()))
            .collect();
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            let fields = row
                .iter()
                .zip(&integer)
                .map(|(&v, &int)| format_value(v, int));
            w.write_record(fields).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
    }

    pub fn from_csv(text: &str, origin: &Path) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let csv_err = |source| SimError::Csv {
            path: origin.to_path_buf(),
            source,
        };
        let header: Vec<String> = r
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(str::to_string)
            .collect();
        let mut table = Table::new(header);
        for (line, record) in r.records().enumerate() {
            let record = record.map_err(csv_err)?;
            let row = record
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| SimError::Table {
                    path: origin.to_path_buf(),
                    message: format!("row {}: {e}", line + 1),
                })?;
            table.push(row);
        }
        Ok(table)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let io = |source| SimError::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut f = std::fs::File::create(path).map_err(io)?;
        f.write_all(self.to_csv().as_bytes()).map_err(io)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv(&text, path)
    }
}

fn format_value(v: f64, integer: bool) -> String {
    if integer && v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.16e}")
    }
}
