//! CSV input, fixed-precision CSV/JSON output.
//!
//! Curve files hold one point per line, comma separated. Blank lines and
//! lines starting with `#` are skipped; a `# closed` comment marks the curve
//! as closed. A single header line of non-numeric names is allowed.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::curves::{Curve, SampledFunction};
use crate::error::{Error, Result};

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct Row {
    line: usize,
    values: Vec<f64>,
}

fn parse_rows(text: &str) -> Result<(Vec<Row>, bool)> {
    let mut rows = Vec::new();
    let mut closed = false;
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if comment.trim().eq_ignore_ascii_case("closed") {
                closed = true;
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let parsed: Vec<std::result::Result<f64, _>> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let is_header = parsed.iter().all(|p| p.is_err())
            && fields
                .iter()
                .all(|f| f.chars().next().is_some_and(|c| c.is_ascii_alphabetic()));
        if is_header && rows.is_empty() && !header_seen {
            header_seen = true;
            continue;
        }
        let mut values = Vec::with_capacity(fields.len());
        for (col, (field, p)) in fields.iter().zip(parsed).enumerate() {
            match p {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("column {}: expected a finite number, found {:?}", col + 1, field),
                    })
                }
            }
        }
        if let Some(first) = rows.first() {
            let first: &Row = first;
            if first.values.len() != values.len() {
                return Err(Error::Parse {
                    line,
                    message: format!(
                        "expected {} columns (as on line {}), found {}",
                        first.values.len(),
                        first.line,
                        values.len()
                    ),
                });
            }
        }
        rows.push(Row { line, values });
    }
    Ok((rows, closed))
}

fn last_line(text: &str) -> usize {
    text.lines().count().max(1)
}

/// Parses a curve; needs at least two points in two or more dimensions.
pub fn parse_curve(text: &str) -> Result<Curve> {
    let (rows, closed) = parse_rows(text)?;
    if rows.len() < 2 {
        return Err(Error::Parse {
            line: last_line(text),
            message: format!("a curve needs at least 2 points, found {}", rows.len()),
        });
    }
    if rows[0].values.len() < 2 {
        return Err(Error::Parse {
            line: rows[0].line,
            message: "curve points need at least 2 coordinates".into(),
        });
    }
    let line = rows[0].line;
    Curve::new(rows.into_iter().map(|r| r.values).collect(), closed).map_err(|e| match e {
        Error::ZeroLength => Error::Parse {
            line,
            message: "curve has zero total length".into(),
        },
        other => other,
    })
}

/// Parses samples of a real function: one value per line, or `t, f(t)`
/// pairs of which only `f` is kept.
pub fn parse_function(text: &str) -> Result<SampledFunction> {
    let (rows, _) = parse_rows(text)?;
    if let Some(r) = rows.first() {
        if r.values.len() > 2 {
            return Err(Error::Parse {
                line: r.line,
                message: format!("expected 1 or 2 columns, found {}", r.values.len()),
            });
        }
    }
    if rows.len() < 2 {
        return Err(Error::Parse {
            line: last_line(text),
            message: format!("a function needs at least 2 samples, found {}", rows.len()),
        });
    }
    SampledFunction::new(rows.into_iter().map(|r| *r.values.last().expect("non-empty row")).collect())
}

pub fn read_curve(path: &Path) -> Result<Curve> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_curve(&text)
}

pub fn read_function(path: &Path) -> Result<SampledFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_function(&text)
}

/// Points as CSV rows; a `# closed` line leads closed curves.
pub fn curve_csv(points: &[Vec<f64>], closed: bool) -> String {
    let mut out = String::new();
    if closed {
        out.push_str("# closed\n");
    }
    for p in points {
        let row: Vec<String> = p.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// serde_json formatter that writes every float with 17 significant digits.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with fixed float formatting, newline terminated.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Io(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
