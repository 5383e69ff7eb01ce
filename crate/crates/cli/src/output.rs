//! Tables and their JSON/CSV rendering.
//!
//! JSON keys are sorted and every float is written with 17 significant digits, so a
//! given table always renders to the same bytes.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde_json::ser::Formatter;
use serde_json::{Map, Value};

use crate::config::Format;

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Float text used in both formats.
pub fn float_text(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    pub fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // non-finite floats have no JSON number form
            Cell::Float(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or_else(|| Value::String(float_text(*v))),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from the header");
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Table) {
        debug_assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect::<Map<_, _>>()))
                .collect(),
        )
    }
}

/// A command's full output: metadata, the main table and optional named extras.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub meta: BTreeMap<String, Value>,
    pub table: Table,
    pub extras: BTreeMap<String, Value>,
}

/// Compact JSON with floats written as `{:.16e}`.
struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(float_text(value).as_bytes())
    }
}

pub fn json_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    serde::Serialize::serialize(value, &mut ser).expect("serializing a Value into memory cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

impl Document {
    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("meta".into(), Value::Object(self.meta.clone().into_iter().collect()));
        top.insert("rows".into(), self.table.to_json());
        for (k, v) in &self.extras {
            top.insert(k.clone(), v.clone());
        }
        Value::Object(top)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json_string(&self.to_json()) + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.columns).expect("in-memory CSV");
                for row in &self.table.rows {
                    w.write_record(row.iter().map(Cell::to_csv)).expect("in-memory CSV");
                }
                String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV cells are UTF-8")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(float_text(2.25), "2.2500000000000000e0");
        assert_eq!(float_text(-1e-300), "-1.0000000000000000e-300");
        let back: f64 = float_text(0.1).parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn keys_are_sorted_and_output_parses() {
        let mut t = Table::new(&["z", "a"]);
        t.push(vec![Cell::Float(1.5), Cell::Int(2)]);
        let mut d = Document { table: t, ..Default::default() };
        d.meta.insert("version".into(), Value::from("x"));
        let s = d.render(Format::Json);
        assert_eq!(s, "{\"meta\":{\"version\":\"x\"},\"rows\":[{\"a\":2,\"z\":1.5000000000000000e0}]}\n");
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["rows"][0]["z"], 1.5);
        assert_eq!(d.render(Format::Csv), "z,a\n1.5000000000000000e0,2\n");
    }
}
