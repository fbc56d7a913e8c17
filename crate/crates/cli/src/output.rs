use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Command result: a table of numeric columns or a list of named scalars.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
    },
    Scalars(Vec<(String, f64)>),
}

impl Output {
    pub fn table(columns: &[&str], rows: Vec<Vec<f64>>) -> Self {
        Output::Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer(&mut *out, &self.to_json())?;
                out.write_all(b"\n")
            }
        }
    }

    fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        match self {
            Output::Table { columns, rows } => {
                writeln!(out, "{}", columns.join(","))?;
                for row in rows {
                    let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Output::Scalars(items) => {
                writeln!(out, "name,value")?;
                for (name, v) in items {
                    writeln!(out, "{name},{}", format_number(*v))?;
                }
            }
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        match self {
            Output::Table { columns, rows } => {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|&v| json_number(v)).collect()))
                    .collect();
                json!({ "columns": columns, "rows": rows })
            }
            Output::Scalars(items) => Value::Array(
                items
                    .iter()
                    .map(|(n, v)| json!({ "name": n, "value": json_number(*v) }))
                    .collect(),
            ),
        }
    }
}

/// Shortest text that parses back to the same f64. Plain notation in the
/// usual range, exponent notation outside it.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn json_number(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(format_number(v))
    }
}
