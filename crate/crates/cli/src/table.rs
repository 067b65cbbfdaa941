//! Column-typed tables and their CSV / JSON encodings.

use std::io::Write;

use serde_json::{Map, Value};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    /// `None` marks an undefined value and is written as an empty field.
    Float(Option<f64>),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn float(v: f64) -> Self {
        Cell::Float(Some(v))
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(Some(v)) => format_float(*v),
            Cell::Float(None) => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(Some(v)) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Float(None) => Value::Null,
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Float(v)
    }
}

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Comma separated, header first, LF line endings.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rows as objects keyed in column order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut m = Map::new();
                    for (k, c) in self.columns.iter().zip(row) {
                        m.insert(k.clone(), c.json());
                    }
                    Value::Object(m)
                })
                .collect(),
        )
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<W: Write>(value: &Value, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 42.0 / 55.0, 0.0] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(0.55), "5.5000000000000004e-1");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["n", "x", "y"]);
        t.push(vec![Cell::from(2u32), Cell::float(0.5), Cell::Float(None)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,x,y\n2,5.0000000000000000e-1,\n");
    }

    #[test]
    fn json_keeps_column_order() {
        let mut t = Table::new(["z", "a"]);
        t.push(vec![Cell::float(1.0), Cell::Float(None)]);
        assert_eq!(t.to_json().to_string(), r#"[{"z":1.0,"a":null}]"#);
    }
}
