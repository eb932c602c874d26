//! Record sink: JSON lines, or CSV as a flat projection of the same records.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub struct Sink {
    format: Format,
    out: Box<dyn Write>,
    /// Header of the CSV section currently open.
    header: Option<Vec<String>>,
}

impl Sink {
    pub fn open(format: Format, path: Option<&Path>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink {
            format,
            out,
            header: None,
        })
    }

    pub fn emit(&mut self, record: Value) -> io::Result<()> {
        match self.format {
            Format::Json => {
                serde_json::to_writer(&mut self.out, &record)?;
                writeln!(self.out)
            }
            Format::Csv => self.emit_csv(&record),
        }
    }

    /// A new header starts a new section, separated by a blank line.
    fn emit_csv(&mut self, record: &Value) -> io::Result<()> {
        let Value::Object(map) = record else {
            return writeln!(self.out, "{}", csv_field(record));
        };
        let keys: Vec<String> = map.keys().cloned().collect();
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        if self.header.as_ref() != Some(&keys) {
            if self.header.is_some() {
                writeln!(self.out)?;
            }
            w.write_record(&keys)?;
            self.header = Some(keys);
        }
        w.write_record(map.values().map(csv_field))?;
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        self.out.write_all(&bytes)
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// Scalars as is, arrays of scalars space-separated, anything else as JSON.
fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            items.iter().map(csv_field).collect::<Vec<_>>().join(" ")
        }
        _ => v.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_projection() {
        assert_eq!(csv_field(&json!([1, -2, 3])), "1 -2 3");
        assert_eq!(csv_field(&json!([[1], [2]])), "[[1],[2]]");
        assert_eq!(csv_field(&json!("1/2")), "1/2");
        assert_eq!(csv_field(&json!(true)), "true");
    }
}
