//! CSV and JSON tables for curves and spectral records.
//!
//! CSV layout: one header row, one row per point, reals with 17 significant
//! digits, then footer lines `# key: value`. JSON mirrors the same content as
//! `{"columns": [...], "rows": [[...]], "meta": [[key, value], ...]}`.
//! JSON has no representation for non-finite reals; they are written as
//! `null` and read back as NaN.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::SpectralRecord;
use crate::C64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format '{other}' (csv|json)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Ordered `key: value` footer entries.
pub type Meta = Vec<(String, String)>;

/// Formats a real with 17 significant digits; parsing it back is exact.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn parse_real(s: &str, line: u64, column: &str) -> Result<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "nan" => Ok(f64::NAN),
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t.parse().map_err(|_| Error::Parse {
            line,
            message: format!("column '{column}': cannot parse '{s}' as a real"),
        }),
    }
}

/// Columns of reals sharing one grid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub meta: Meta,
}

impl CurveTable {
    pub fn new(columns: &[&str]) -> Self {
        CurveTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::domain(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Spectral records plus footer metadata.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecordTable {
    pub records: Vec<SpectralRecord<f64>>,
    pub meta: Meta,
}

pub const RECORD_COLUMNS: [&str; 6] = ["matrix_index", "re_z", "im_z", "t", "residual", "defective"];

pub fn meta_get<'a>(meta: &'a Meta, key: &str) -> Option<&'a str> {
    meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn write_footer(out: &mut String, meta: &Meta) {
    for (k, v) in meta {
        out.push_str(&format!("# {k}: {v}\n"));
    }
}

fn csv_text(header: &[String], rows: impl Iterator<Item = Vec<String>>, meta: &Meta) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::domain(format!("csv: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::domain(format!("csv: {e}")))?;
    let mut out = String::from_utf8(bytes).expect("csv output is utf-8");
    write_footer(&mut out, meta);
    Ok(out)
}

fn read_footer(text: &str) -> Result<Meta> {
    let mut meta = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest.split_once(':').ok_or_else(|| Error::Parse {
                line: i as u64 + 1,
                message: format!("footer line without 'key: value': '{line}'"),
            })?;
            meta.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    Ok(meta)
}

/// Header and data rows with their 1-based line numbers.
fn read_csv(text: &str) -> Result<(Vec<String>, Vec<(u64, Vec<String>)>)> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = r
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok((header, rows))
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    columns: Vec<String>,
    rows: Vec<Vec<serde_json::Value>>,
    meta: Meta,
}

fn json_real(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

fn json_to_real(v: &serde_json::Value, row: usize) -> Result<f64> {
    match v {
        serde_json::Value::Null => Ok(f64::NAN),
        serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| json_row_err(row, "number out of range")),
        _ => Err(json_row_err(row, "expected a number")),
    }
}

fn json_row_err(row: usize, msg: &str) -> Error {
    Error::Parse {
        line: row as u64 + 1,
        message: format!("rows[{row}]: {msg}"),
    }
}

fn parse_json(text: &str) -> Result<JsonTable> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line() as u64,
        message: e.to_string(),
    })
}

fn to_json(t: &JsonTable) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("table serializes");
    s.push('\n');
    s
}

pub fn emit_curves(table: &CurveTable, format: Format) -> Result<String> {
    match format {
        Format::Csv => csv_text(
            &table.columns,
            table.rows.iter().map(|r| r.iter().map(|&x| fmt_real(x)).collect()),
            &table.meta,
        ),
        Format::Json => Ok(to_json(&JsonTable {
            columns: table.columns.clone(),
            rows: table.rows.iter().map(|r| r.iter().map(|&x| json_real(x)).collect()).collect(),
            meta: table.meta.clone(),
        })),
    }
}

pub fn parse_curves(text: &str, format: Format) -> Result<CurveTable> {
    match format {
        Format::Csv => {
            let (columns, raw) = read_csv(text)?;
            let mut rows = Vec::with_capacity(raw.len());
            for (line, fields) in raw {
                let row = fields
                    .iter()
                    .zip(&columns)
                    .map(|(f, c)| parse_real(f, line, c))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
            Ok(CurveTable {
                columns,
                rows,
                meta: read_footer(text)?,
            })
        }
        Format::Json => {
            let j = parse_json(text)?;
            let mut rows = Vec::with_capacity(j.rows.len());
            for (i, r) in j.rows.iter().enumerate() {
                if r.len() != j.columns.len() {
                    return Err(json_row_err(i, "wrong number of values"));
                }
                rows.push(r.iter().map(|v| json_to_real(v, i)).collect::<Result<Vec<_>>>()?);
            }
            Ok(CurveTable {
                columns: j.columns,
                rows,
                meta: j.meta,
            })
        }
    }
}

fn record_fields(r: &SpectralRecord<f64>) -> Vec<String> {
    vec![
        r.matrix_index.to_string(),
        fmt_real(r.z.re),
        fmt_real(r.z.im),
        fmt_real(r.t.unwrap_or(f64::INFINITY)),
        fmt_real(r.residual),
        r.defective.to_string(),
    ]
}

pub fn emit_records(table: &RecordTable, format: Format) -> Result<String> {
    let header: Vec<String> = RECORD_COLUMNS.iter().map(|c| c.to_string()).collect();
    match format {
        Format::Csv => csv_text(&header, table.records.iter().map(record_fields), &table.meta),
        Format::Json => Ok(to_json(&JsonTable {
            columns: header,
            rows: table
                .records
                .iter()
                .map(|r| {
                    vec![
                        serde_json::Value::from(r.matrix_index),
                        json_real(r.z.re),
                        json_real(r.z.im),
                        r.t.map_or(serde_json::Value::Null, json_real),
                        json_real(r.residual),
                        serde_json::Value::Bool(r.defective),
                    ]
                })
                .collect(),
            meta: table.meta.clone(),
        })),
    }
}

fn check_record_header(columns: &[String], line: u64) -> Result<()> {
    if columns.len() != RECORD_COLUMNS.len() || columns.iter().zip(RECORD_COLUMNS).any(|(a, b)| a != b) {
        return Err(Error::Parse {
            line,
            message: format!("expected columns {}, got {}", RECORD_COLUMNS.join(","), columns.join(",")),
        });
    }
    Ok(())
}

fn t_from(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn parse_records(text: &str, format: Format) -> Result<RecordTable> {
    let mut records = Vec::new();
    let meta = match format {
        Format::Csv => {
            let (columns, raw) = read_csv(text)?;
            check_record_header(&columns, 1)?;
            for (line, f) in raw {
                let index = f[0].trim().parse::<u64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("column 'matrix_index': cannot parse '{}'", f[0]),
                })?;
                let defective = f[5].trim().parse::<bool>().map_err(|_| Error::Parse {
                    line,
                    message: format!("column 'defective': cannot parse '{}'", f[5]),
                })?;
                records.push(SpectralRecord {
                    z: C64::new(parse_real(&f[1], line, "re_z")?, parse_real(&f[2], line, "im_z")?),
                    t: t_from(parse_real(&f[3], line, "t")?),
                    residual: parse_real(&f[4], line, "residual")?,
                    matrix_index: index,
                    defective,
                });
            }
            read_footer(text)?
        }
        Format::Json => {
            let j = parse_json(text)?;
            check_record_header(&j.columns, 1)?;
            for (i, r) in j.rows.iter().enumerate() {
                if r.len() != RECORD_COLUMNS.len() {
                    return Err(json_row_err(i, "wrong number of values"));
                }
                records.push(SpectralRecord {
                    z: C64::new(json_to_real(&r[1], i)?, json_to_real(&r[2], i)?),
                    t: t_from(json_to_real(&r[3], i)?),
                    residual: json_to_real(&r[4], i)?,
                    matrix_index: r[0].as_u64().ok_or_else(|| json_row_err(i, "bad matrix_index"))?,
                    defective: r[5].as_bool().ok_or_else(|| json_row_err(i, "bad defective flag"))?,
                });
            }
            j.meta
        }
    };
    Ok(RecordTable { records, meta })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Format implied by a `.json` extension, CSV otherwise.
pub fn format_for_path(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    }
}
