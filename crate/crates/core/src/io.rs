//! JSON reading and writing. Floats are written with 17 significant digits so
//! every double survives a round trip through a report file unchanged.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::{Result, TomographyError};

/// Compact JSON with `{:.16e}` floats.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScientificFormatter;

impl Formatter for ScientificFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ScientificFormatter);
    value.serialize(&mut ser)?;
    String::from_utf8(buf).map_err(|e| TomographyError::Numerical(e.to_string()))
}

pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    if text.trim().is_empty() {
        return Err(TomographyError::Parse("empty input (line 1, column 0)".into()));
    }
    Ok(serde_json::from_str(text)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| TomographyError::Parse(format!("{}: {e}", path.display())))?;
    from_json_str(&text).map_err(|e| match e {
        TomographyError::Parse(msg) => TomographyError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Writes `value` followed by a newline to `path`, or to stdout when `None`.
pub fn write_json<T: Serialize + ?Sized>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut text = to_json_string(value)?;
    text.push('\n');
    let written = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    written.map_err(|e| TomographyError::Numerical(format!("write failed: {e}")))
}
