//! CSV tables with shortest round-trip number formatting.

use serde::Serialize;

/// A cell is a number, a count or a flag. Flags print as `1`/`0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

/// Formats a finite value with Rust's shortest round-trip representation,
/// switching to exponent notation outside `[1e-5, 1e16)`, and `+inf` as
/// `inf`. Anything else has no textual form.
pub fn format_number(v: f64) -> Option<String> {
    if v.is_finite() {
        let a = v.abs();
        if a != 0.0 && !(1e-5..1e16).contains(&a) {
            Some(format!("{v:e}"))
        } else {
            Some(format!("{v}"))
        }
    } else if v == f64::INFINITY {
        Some("inf".into())
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Renders the table, or names the first cell that is NaN or `-inf`.
    pub fn to_csv(&self) -> Result<Vec<u8>, String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| e.to_string();
        w.write_record(&self.header).map_err(io)?;
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells = Vec::with_capacity(row.len());
            for (j, c) in row.iter().enumerate() {
                cells.push(match *c {
                    Cell::Num(v) => format_number(v)
                        .ok_or_else(|| format!("non-finite value {v} in row {i}, column {}", self.header[j]))?,
                    Cell::Int(v) => v.to_string(),
                    Cell::Flag(b) => if b { "1" } else { "0" }.to_string(),
                });
            }
            w.write_record(&cells).map_err(io)?;
        }
        w.flush().map_err(|e| e.to_string())?;
        w.into_inner().map_err(|e| e.to_string())
    }
}
