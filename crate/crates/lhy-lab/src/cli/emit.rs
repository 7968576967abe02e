//! Deterministic JSON and CSV writers: every float in scientific notation
//! with 12 significant digits, LF line endings, stable field order.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use super::CliError;

/// `{:.11e}`, or `NaN`/`inf` for non-finite values.
pub fn format_float(v: f64) -> String {
    format!("{v:.11e}")
}

/// Pretty-printing formatter that writes floats in scientific notation.
struct SciFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes to pretty JSON with scientific-notation floats and a final
/// newline. Non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut out = Vec::new();
    let formatter = SciFormatter {
        inner: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Serialize(e.to_string()))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| CliError::Serialize(e.to_string()))
}

/// Comma-separated table with a header row and LF line endings.
pub fn to_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        b: f64,
        a: Vec<f64>,
        name: &'static str,
        missing: f64,
    }

    #[test]
    fn floats_have_twelve_significant_digits() {
        assert_eq!(format_float(4.814417779607521), "4.81441777961e0");
        assert_eq!(format_float(-1e-8), "-1.00000000000e-8");
    }

    #[test]
    fn json_keeps_field_order_and_reparses_identically() {
        let s = to_json(&Sample {
            b: 1.0 / 3.0,
            a: vec![2.5e-7, 0.0],
            name: "x",
            missing: f64::NAN,
        })
        .unwrap();
        assert!(s.find("\"b\"").unwrap() < s.find("\"a\"").unwrap());
        assert!(s.contains("3.33333333333e-1"));
        assert!(s.contains("\"missing\": null"));
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        // serde_json's Value sorts keys, so compare value-wise.
        assert_eq!(parsed["b"].as_f64().unwrap(), 3.33333333333e-1);
        assert_eq!(parsed["a"][0].as_f64().unwrap(), 2.5e-7);
        let again = to_json(&parsed).unwrap();
        assert_eq!(
            serde_json::from_str::<serde_json::Value>(&again).unwrap(),
            parsed
        );
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&["x", "y"], &[vec![1.0, 2.0], vec![3.0, f64::NAN]]);
        assert_eq!(
            s,
            "x,y\n1.00000000000e0,2.00000000000e0\n3.00000000000e0,NaN\n"
        );
    }
}
