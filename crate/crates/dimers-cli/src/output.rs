//! Line-oriented output records.
//!
//! Every command writes a stream of [`Record`]s.  In text form a record is
//! its upper-cased kind followed by its field values separated by spaces
//! (integer lists as `[a,b,…]`, the free-text field, if any, last).  In
//! JSON-lines form it is one object per line carrying `"v":1`, the kind and
//! the named fields in the same order.  The text form is a function of the
//! JSON form, so both carry the same data.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};
use thiserror::Error;

/// Output format selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Space-separated text lines.
    Text,
    /// One JSON object per line.
    JsonLines,
}

/// A field value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Field {
    /// An integer.
    Int(i64),
    /// A single token without whitespace.
    Word(String),
    /// Free text; only meaningful as the last field.
    Text(String),
    /// A list of integers (vectors, id lists).
    Ints(Vec<i64>),
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Int(n) => n.to_string(),
            Field::Word(s) | Field::Text(s) => s.clone(),
            Field::Ints(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("[{}]", items.join(","))
            }
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Field::Int(n) => Value::from(*n),
            Field::Word(s) | Field::Text(s) => Value::from(s.clone()),
            Field::Ints(v) => Value::from(v.clone()),
        }
    }
}

/// Failure to read a JSON-lines record back.
#[derive(Debug, Error)]
pub enum RecordError {
    /// Not valid JSON.
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    /// Valid JSON, but not a record.
    #[error("not a record: {0}")]
    Shape(String),
}

/// One output line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    /// Record kind, lower case.
    pub kind: String,
    /// Named fields in output order.
    pub fields: Vec<(String, Field)>,
}

impl Record {
    /// A record without fields.
    pub fn new(kind: &str) -> Record {
        Record {
            kind: kind.to_string(),
            fields: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, f: Field) {
        debug_assert!(name != "v" && name != "kind", "reserved field name {name}");
        self.fields.push((name.into(), f));
    }

    /// Appends an integer field.
    pub fn int(mut self, name: &str, v: impl TryInto<i64>) -> Record {
        let v = v.try_into().unwrap_or(i64::MAX);
        self.push(name, Field::Int(v));
        self
    }

    /// Appends a single-token field.
    pub fn word(mut self, name: &str, v: impl Into<String>) -> Record {
        let v: String = v.into();
        debug_assert!(!v.is_empty() && !v.contains(char::is_whitespace));
        self.push(name, Field::Word(v));
        self
    }

    /// Appends a free-text field.
    pub fn text(mut self, name: &str, v: impl Into<String>) -> Record {
        self.push(name, Field::Text(v.into()));
        self
    }

    /// Appends an integer-list field.
    pub fn ints<I: TryInto<i64>>(mut self, name: &str, v: impl IntoIterator<Item = I>) -> Record {
        let v = v
            .into_iter()
            .map(|x| x.try_into().unwrap_or(i64::MAX))
            .collect();
        self.push(name, Field::Ints(v));
        self
    }

    /// Appends a PASS/FAIL status word.
    pub fn status(self, pass: bool) -> Record {
        self.word("status", if pass { "PASS" } else { "FAIL" })
    }

    /// The value of a field.
    pub fn get(&self, name: &str) -> Option<&Field> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// Text form.
    pub fn to_text(&self) -> String {
        let mut parts = vec![self.kind.to_uppercase()];
        parts.extend(self.fields.iter().map(|(_, f)| f.render()));
        parts.join(" ")
    }

    /// JSON-lines form.
    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        m.insert("v".into(), Value::from(1));
        m.insert("kind".into(), Value::from(self.kind.clone()));
        for (n, f) in &self.fields {
            m.insert(n.clone(), f.to_json());
        }
        Value::Object(m).to_string()
    }

    /// Reads a JSON-lines record.  Strings containing whitespace become
    /// [`Field::Text`], other strings [`Field::Word`].
    pub fn from_json(line: &str) -> Result<Record, RecordError> {
        let v: Value = serde_json::from_str(line)?;
        let Value::Object(m) = v else {
            return Err(RecordError::Shape("expected an object".into()));
        };
        if m.get("v") != Some(&Value::from(1)) {
            return Err(RecordError::Shape("missing \"v\":1".into()));
        }
        let kind = m
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| RecordError::Shape("missing kind".into()))?
            .to_string();
        let mut fields = Vec::new();
        for (n, x) in m.iter().filter(|(n, _)| *n != "v" && *n != "kind") {
            let f =
                match x {
                    Value::Number(k) => Field::Int(k.as_i64().ok_or_else(|| {
                        RecordError::Shape(format!("field {n} is not an integer"))
                    })?),
                    Value::String(s) if s.contains(char::is_whitespace) || s.is_empty() => {
                        Field::Text(s.clone())
                    }
                    Value::String(s) => Field::Word(s.clone()),
                    Value::Array(a) => Field::Ints(
                        a.iter()
                            .map(|y| {
                                y.as_i64().ok_or_else(|| {
                                    RecordError::Shape(format!("field {n} is not an integer list"))
                                })
                            })
                            .collect::<Result<_, _>>()?,
                    ),
                    _ => {
                        return Err(RecordError::Shape(format!(
                            "field {n} has an unsupported type"
                        )))
                    }
                };
            fields.push((n.clone(), f));
        }
        Ok(Record { kind, fields })
    }
}

/// Writes records in the chosen format.
pub struct Sink {
    format: Format,
    out: Box<dyn Write>,
}

impl Sink {
    /// A sink writing to `out`.
    pub fn new(format: Format, out: Box<dyn Write>) -> Sink {
        Sink { format, out }
    }

    /// Writes one record.
    pub fn emit(&mut self, r: &Record) -> io::Result<()> {
        let line = match self.format {
            Format::Text => r.to_text(),
            Format::JsonLines => r.to_json(),
        };
        writeln!(self.out, "{line}")
    }

    /// Flushes the underlying writer.
    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let r = Record::new("rung")
            .word("name", "geometric")
            .status(false)
            .ints("class", [1, -1])
            .int("count", 3)
            .text("summary", "two lifts meet twice");
        assert_eq!(
            r.to_text(),
            "RUNG geometric FAIL [1,-1] 3 two lifts meet twice"
        );
        let back = Record::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().starts_with("{\"v\":1,\"kind\":\"rung\""));
    }

    #[test]
    fn rejects_foreign_json() {
        assert!(Record::from_json("[1,2]").is_err());
        assert!(Record::from_json("{\"kind\":\"x\"}").is_err());
        assert!(Record::from_json("not json").is_err());
    }
}
