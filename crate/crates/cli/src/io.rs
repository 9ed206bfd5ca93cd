//! File formats.
//!
//! 1D signals are single-column CSV with an optional header. 2D inputs are
//! PGM (P2 or P5) or headerless CSV matrices; 2D outputs are CSV matrices
//! because results are signed. 3D volumes are a JSON header
//! `{shape, spacing, data?}` next to a raw little-endian `f64` file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tgd_core::SampledField;

use crate::error::CliError;

/// A CSV file: optional header names and rows of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn columns(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.as_ref()?.iter().position(|h| h == name)
    }
}

fn format_err(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {msg}", path.display()))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| format_err(path, e))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| format_err(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| format_err(path, e))
}

pub fn parse_csv(path: &Path, text: &str) -> Result<Table, CliError> {
    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = cells.iter().map(|c| c.parse::<f64>()).collect();
        match parsed {
            Ok(v) => {
                if let Some(first) = rows.first() {
                    if first.len() != v.len() {
                        return Err(format_err(path, format!("line {}: expected {} columns", lineno + 1, first.len())));
                    }
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(format_err(path, format!("line {}: non-finite value", lineno + 1)));
                }
                rows.push(v);
            }
            Err(_) if rows.is_empty() && header.is_none() => header = Some(cells.iter().map(|c| c.to_string()).collect()),
            Err(e) => return Err(format_err(path, format!("line {}: {e}", lineno + 1))),
        }
    }
    if let (Some(h), Some(r)) = (&header, rows.first()) {
        if h.len() != r.len() {
            return Err(format_err(path, "header and rows differ in column count"));
        }
    }
    Ok(Table { header, rows })
}

/// Table with a header, one row per sample.
pub fn format_columns(names: &[&str], columns: &[Vec<f64>]) -> String {
    let mut out = names.join(",");
    out.push('\n');
    let len = columns.first().map_or(0, Vec::len);
    for i in 0..len {
        let row: Vec<String> = columns.iter().map(|c| c[i].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Headerless matrix, one row per line.
pub fn format_matrix(values: &[f64], cols: usize) -> String {
    let mut out = String::new();
    for row in values.chunks(cols.max(1)) {
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Tidy plot data: `x,series,value`.
pub fn format_tidy(series: &[(&str, &[f64])], x: &[f64]) -> String {
    let mut out = String::from("x,series,value\n");
    for (name, values) in series {
        for (xi, v) in x.iter().zip(values.iter()) {
            let _ = writeln!(out, "{xi},{name},{v}");
        }
    }
    out
}

/// Netpbm graymap, P2 or P5. Values are raw gray levels.
pub fn parse_pgm(path: &Path, bytes: &[u8]) -> Result<SampledField, CliError> {
    let mut pos = 0;
    let token = |pos: &mut usize| -> Result<String, CliError> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(format_err(path, "truncated PGM header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };
    let magic = token(&mut pos)?;
    let number = |pos: &mut usize| -> Result<usize, CliError> {
        let t = token(pos)?;
        t.parse().map_err(|_| format_err(path, format!("bad PGM number '{t}'")))
    };
    let cols = number(&mut pos)?;
    let rows = number(&mut pos)?;
    let maxval = number(&mut pos)?;
    if cols == 0 || rows == 0 || maxval == 0 || maxval > 65535 {
        return Err(format_err(path, "bad PGM dimensions"));
    }
    let count = rows * cols;
    let values: Vec<f64> = match magic.as_str() {
        "P2" => {
            let mut v = Vec::with_capacity(count);
            for _ in 0..count {
                v.push(number(&mut pos)? as f64);
            }
            v
        }
        "P5" => {
            // a single whitespace byte separates the header from the raster
            let start = pos + 1;
            let width = if maxval < 256 { 1 } else { 2 };
            let raster = bytes
                .get(start..start + count * width)
                .ok_or_else(|| format_err(path, "truncated PGM raster"))?;
            if width == 1 {
                raster.iter().map(|&b| b as f64).collect()
            } else {
                raster.chunks(2).map(|p| u16::from_be_bytes([p[0], p[1]]) as f64).collect()
            }
        }
        other => return Err(format_err(path, format!("unsupported PGM magic '{other}'"))),
    };
    SampledField::new(vec![rows, cols], values).map_err(|e| format_err(path, e))
}

/// Binary PGM with values rounded and clamped to `0..=255`.
pub fn format_pgm(field: &SampledField) -> Vec<u8> {
    let (rows, cols) = (field.shape[0], field.shape[1]);
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    out.extend(field.values.iter().map(|v| v.round().clamp(0.0, 255.0) as u8));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeHeader {
    pub shape: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<Vec<f64>>,
    /// Raw file relative to the header; defaults to the header path with extension `f64`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
}

fn raw_path(header_path: &Path, header: &VolumeHeader) -> PathBuf {
    match &header.data {
        Some(d) => header_path.parent().unwrap_or(Path::new("")).join(d),
        None => header_path.with_extension("f64"),
    }
}

pub fn read_volume(path: &Path) -> Result<SampledField, CliError> {
    let header: VolumeHeader = serde_json::from_str(&read_text(path)?).map_err(|e| format_err(path, e))?;
    let raw = raw_path(path, &header);
    let bytes = read_bytes(&raw)?;
    if bytes.len() % 8 != 0 {
        return Err(format_err(&raw, "length is not a multiple of 8"));
    }
    let values = bytes.chunks(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let field = SampledField::new(header.shape, values).map_err(|e| format_err(&raw, e))?;
    match header.spacing {
        Some(s) => field.with_spacing(s).map_err(|e| format_err(path, e)),
        None => Ok(field),
    }
}

pub fn write_volume(path: &Path, field: &SampledField) -> Result<(), CliError> {
    let raw = path.with_extension("f64");
    let header = VolumeHeader {
        shape: field.shape.clone(),
        spacing: Some(field.spacing.clone()),
        data: raw.file_name().map(|n| n.to_string_lossy().into_owned()),
    };
    let mut text = serde_json::to_string_pretty(&header).expect("header serializes");
    text.push('\n');
    write_bytes(path, text.as_bytes())?;
    let bytes: Vec<u8> = field.values.iter().flat_map(|v| v.to_le_bytes()).collect();
    write_bytes(&raw, &bytes)
}

fn extension(path: &Path) -> String {
    path.extension().map(|e| e.to_string_lossy().to_ascii_lowercase()).unwrap_or_default()
}

/// A field read from disk with the 1D column name, if any.
pub struct Loaded {
    pub field: SampledField,
    pub column: Option<String>,
}

/// Reads a field; the format follows the extension. A CSV with a header or a
/// single column is a 1D signal, a headerless multi-column CSV is a matrix.
pub fn read_field(path: &Path, column: Option<&str>) -> Result<Loaded, CliError> {
    match extension(path).as_str() {
        "pgm" => Ok(Loaded { field: parse_pgm(path, &read_bytes(path)?)?, column: None }),
        "json" => Ok(Loaded { field: read_volume(path)?, column: None }),
        _ => {
            let table = parse_csv(path, &read_text(path)?)?;
            if table.rows.is_empty() {
                return Err(format_err(path, "no data rows"));
            }
            if table.header.is_none() && table.columns() > 1 {
                if column.is_some() {
                    return Err(format_err(path, "--column needs a CSV with a header"));
                }
                let values = table.rows.concat();
                let field = SampledField::new(vec![table.rows.len(), table.columns()], values).map_err(|e| format_err(path, e))?;
                return Ok(Loaded { field, column: None });
            }
            let j = match column {
                Some(name) => table
                    .column_index(name)
                    .ok_or_else(|| format_err(path, format!("no column named '{name}'")))?,
                None => 0,
            };
            let name = table.header.as_ref().map(|h| h[j].clone());
            Ok(Loaded { field: SampledField::new_1d(table.column(j)), column: name })
        }
    }
}

/// Writes a field in the format implied by the extension and dimensionality.
pub fn write_field(path: &Path, field: &SampledField, name: &str) -> Result<(), CliError> {
    match (field.dims(), extension(path).as_str()) {
        (1, _) => write_bytes(path, format_columns(&[name], std::slice::from_ref(&field.values)).as_bytes()),
        (2, "pgm") => write_bytes(path, &format_pgm(field)),
        (2, _) => write_bytes(path, format_matrix(&field.values, field.shape[1]).as_bytes()),
        _ => write_volume(path, field),
    }
}
