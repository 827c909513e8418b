//! Line-delimited JSON reading and writing.

use std::io::{BufRead, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// One parsed object together with its 1-based line number.
#[derive(Debug, Clone)]
pub struct Line {
    pub number: usize,
    pub object: Map<String, Value>,
}

/// Reads every non-blank line of `reader` as a JSON object.
pub fn read_objects<R: BufRead>(reader: R) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let number = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value =
            serde_json::from_str(&line).map_err(|e| Error::Parse { line: number, message: e.to_string() })?;
        match value {
            Value::Object(object) => out.push(Line { number, object }),
            other => {
                return Err(Error::Parse {
                    line: number,
                    message: format!("expected a JSON object, found {}", type_name(&other)),
                })
            }
        }
    }
    Ok(out)
}

/// Decodes a typed record from an already parsed line.
///
/// Missing fields are schema errors; wrong types and out-of-range values are
/// parse errors.
pub fn decode<T: DeserializeOwned>(line: &Line) -> Result<T> {
    serde_json::from_value(Value::Object(line.object.clone())).map_err(|e| {
        let message = e.to_string();
        if message.starts_with("missing field") {
            Error::Schema { line: line.number, message }
        } else {
            Error::Parse { line: line.number, message }
        }
    })
}

pub fn read_records<T: DeserializeOwned, R: BufRead>(reader: R) -> Result<Vec<T>> {
    read_objects(reader)?.iter().map(decode).collect()
}

pub fn write_records<T: Serialize, W: Write>(mut writer: W, records: &[T]) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut writer, record).map_err(std::io::Error::from)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

fn type_name(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}
