//! Numeric CSV tables with a fixed, locale-independent `%.12e` rendering.

use crate::error::{Error, Result};

/// Formats `x` like C's `printf("%.12e", x)`: twelve fractional mantissa
/// digits, explicit exponent sign, at least two exponent digits.
pub fn format_e12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Header plus rows of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_e12(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?
            .split(',')
            .map(str::to_owned)
            .collect();
        let mut table = Self::new(header);
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|cell| {
                    cell.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("row {}: `{cell}`: {e}", i + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != table.header.len() {
                return Err(Error::Parse(format!(
                    "row {} has {} cells, header has {}",
                    i + 1,
                    row.len(),
                    table.header.len()
                )));
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}
