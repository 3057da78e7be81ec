//! CSV and Matrix Market readers and writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixFormat {
    Csv,
    MatrixMarket,
}

impl MatrixFormat {
    /// Guess from the file extension; anything other than `.mtx`/`.mm` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") || ext.eq_ignore_ascii_case("mm") => {
                MatrixFormat::MatrixMarket
            }
            _ => MatrixFormat::Csv,
        }
    }
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(MatrixFormat::Csv),
            "mtx" | "mm" | "matrix-market" | "matrixmarket" => Ok(MatrixFormat::MatrixMarket),
            other => Err(Error::Config(format!("unknown matrix format `{other}`"))),
        }
    }
}

pub fn load_matrix(path: impl AsRef<Path>, format: MatrixFormat) -> Result<DataMatrix> {
    let text = fs::read_to_string(path.as_ref())?;
    match format {
        MatrixFormat::Csv => parse_csv(&text),
        MatrixFormat::MatrixMarket => parse_matrix_market(&text),
    }
}

pub fn save_matrix(a: &DataMatrix, path: impl AsRef<Path>, format: MatrixFormat) -> Result<()> {
    let text = match format {
        MatrixFormat::Csv => to_csv(a)?,
        MatrixFormat::MatrixMarket => to_matrix_market(a),
    };
    fs::write(path, text)?;
    Ok(())
}

fn parse_number(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parse comma-separated values. A first row containing any non-numeric
/// field is taken as column labels; a non-numeric first field on the data
/// rows (or an empty header corner) marks a row-label column.
pub fn parse_csv(text: &str) -> Result<DataMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push((line, rec.iter().map(str::to_owned).collect::<Vec<_>>()));
    }
    if records.is_empty() {
        return Err(Error::Format("CSV file contains no rows".into()));
    }

    let (_, first) = &records[0];
    let has_header = first
        .iter()
        .enumerate()
        .any(|(k, f)| !(k == 0 && f.is_empty()) && parse_number(f).is_none());
    let header = has_header.then(|| records.remove(0));
    if records.is_empty() {
        return Err(Error::Format(
            "CSV file has a header but no data rows".into(),
        ));
    }

    let corner_empty = header.as_ref().is_some_and(|(_, h)| h[0].is_empty());
    let label_col = corner_empty || records.iter().any(|(_, r)| parse_number(&r[0]).is_none());
    let skip = usize::from(label_col);

    let width = records[0].1.len();
    if width <= skip {
        return Err(Error::Format("CSV rows contain no numeric columns".into()));
    }
    let n = width - skip;
    let mut values = Vec::with_capacity(records.len() * n);
    let mut row_labels = Vec::new();
    for (line, rec) in &records {
        if rec.len() != width {
            return Err(Error::Format(format!(
                "line {line}: expected {width} fields, found {}",
                rec.len()
            )));
        }
        if label_col {
            row_labels.push(rec[0].clone());
        }
        for (k, field) in rec[skip..].iter().enumerate() {
            let v = parse_number(field).ok_or_else(|| {
                Error::parse(
                    *line,
                    format!("field {} (`{field}`) is not a finite number", k + skip + 1),
                )
            })?;
            values.push(v);
        }
    }

    let col_labels = match header {
        Some((line, h)) => {
            let labels: Vec<String> = if h.len() == width {
                h[skip..].to_vec()
            } else if label_col && h.len() == n {
                h
            } else {
                return Err(Error::Format(format!(
                    "line {line}: header has {} fields, expected {width}",
                    h.len()
                )));
            };
            Some(labels)
        }
        None => None,
    };
    DataMatrix::new(records.len(), n, values)?
        .with_labels(label_col.then_some(row_labels), col_labels)
}

pub fn to_csv(a: &DataMatrix) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    let row_labels = a.row_labels();
    let csv_err = |e: csv::Error| Error::Format(e.to_string());
    if let Some(cols) = a.col_labels() {
        let mut header: Vec<&str> = Vec::with_capacity(cols.len() + 1);
        if row_labels.is_some() {
            header.push("");
        }
        header.extend(cols.iter().map(String::as_str));
        writer.write_record(&header).map_err(csv_err)?;
    }
    for i in 0..a.rows() {
        let mut rec: Vec<String> = Vec::with_capacity(a.cols() + 1);
        if let Some(labels) = row_labels {
            rec.push(labels[i].clone());
        }
        rec.extend(a.row(i).iter().map(|v| format!("{v}")));
        writer.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
}

/// Parse a Matrix Market file in `array` or `coordinate` layout.
pub fn parse_matrix_market(text: &str) -> Result<DataMatrix> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, banner) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty Matrix Market file"))?;
    let tokens: Vec<String> = banner
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::parse(
            1,
            "expected `%%MatrixMarket matrix <layout> <field> <symmetry>`",
        ));
    }
    let coordinate = match tokens[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(Error::parse(1, format!("unsupported layout `{other}`"))),
    };
    let pattern = match tokens[3].as_str() {
        "real" | "integer" | "double" => false,
        "pattern" if coordinate => true,
        other => return Err(Error::parse(1, format!("unsupported field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(Error::parse(1, format!("unsupported symmetry `{other}`"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body
        .next()
        .ok_or_else(|| Error::Format("missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(size_line, format!("bad size field `{t}`")))
        })
        .collect::<Result<_>>()?;
    let expected_fields = if coordinate { 3 } else { 2 };
    if dims.len() != expected_fields {
        return Err(Error::parse(
            size_line,
            format!("size line needs {expected_fields} fields"),
        ));
    }
    let (m, n) = (dims[0], dims[1]);
    if symmetry != Symmetry::General && m != n {
        return Err(Error::Format(format!("{m}x{n} matrix declared symmetric")));
    }
    let mut a = DataMatrix::zeros(m, n)?;

    let parse_value = |line: usize, t: &str| {
        parse_number(t).ok_or_else(|| Error::parse(line, format!("bad value `{t}`")))
    };

    if coordinate {
        let nnz = dims[2];
        let mut seen = vec![false; m * n];
        let mut count = 0;
        for (line, l) in body {
            let f: Vec<&str> = l.split_whitespace().collect();
            let want = if pattern { 2 } else { 3 };
            if f.len() != want {
                return Err(Error::parse(
                    line,
                    format!("expected {want} fields, found {}", f.len()),
                ));
            }
            let index = |t: &str, bound: usize| -> Result<usize> {
                match t.parse::<usize>() {
                    Ok(k) if (1..=bound).contains(&k) => Ok(k - 1),
                    _ => Err(Error::parse(
                        line,
                        format!("index `{t}` outside 1..={bound}"),
                    )),
                }
            };
            let i = index(f[0], m)?;
            let j = index(f[1], n)?;
            let v = if pattern {
                1.0
            } else {
                parse_value(line, f[2])?
            };
            if std::mem::replace(&mut seen[i * n + j], true) {
                return Err(Error::parse(
                    line,
                    format!("duplicate entry ({}, {})", i + 1, j + 1),
                ));
            }
            a.set(i, j, v);
            if i != j {
                match symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => a.set(j, i, v),
                    Symmetry::Skew => a.set(j, i, -v),
                }
            }
            count += 1;
        }
        if count != nnz {
            return Err(Error::Format(format!(
                "size line declares {nnz} entries, found {count}"
            )));
        }
    } else {
        // Column-major; symmetric layouts store the lower triangle only.
        let mut cells = Vec::with_capacity(m * n);
        for j in 0..n {
            let start = match symmetry {
                Symmetry::General => 0,
                Symmetry::Symmetric => j,
                Symmetry::Skew => j + 1,
            };
            cells.extend((start..m).map(|i| (i, j)));
        }
        let mut values = body.flat_map(|(line, l)| l.split_whitespace().map(move |t| (line, t)));
        for &(i, j) in &cells {
            let (line, t) = values.next().ok_or_else(|| {
                Error::Format(format!(
                    "array data ends early, expected {} values",
                    cells.len()
                ))
            })?;
            let v = parse_value(line, t)?;
            a.set(i, j, v);
            match symmetry {
                Symmetry::Symmetric if i != j => a.set(j, i, v),
                Symmetry::Skew => a.set(j, i, -v),
                _ => {}
            }
        }
        if let Some((line, _)) = values.next() {
            return Err(Error::parse(
                line,
                "more array values than the size line declares",
            ));
        }
    }
    Ok(a)
}

/// Coordinate-format writer (only nonzero cells are listed).
pub fn to_matrix_market(a: &DataMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{} {} {}", a.rows(), a.cols(), a.nnz());
    for i in 0..a.rows() {
        for (j, &v) in a.row(i).iter().enumerate() {
            if v != 0.0 {
                let _ = writeln!(out, "{} {} {v}", i + 1, j + 1);
            }
        }
    }
    out
}
