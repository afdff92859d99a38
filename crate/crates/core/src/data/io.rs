//! MatrixMarket and dense CSV readers/writers, plus a JSON metadata sidecar.
//!
//! Values are written with Rust's shortest round-trip float formatting, so a
//! save followed by a load reproduces every entry bit for bit.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::DataMatrix;
use crate::error::{Result, SpcaError};
use crate::linalg::SymmetricMatrix;

/// Default asymmetry tolerance when reading symmetric matrices.
pub const LOAD_SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixFormat {
    MatrixMarket,
    DenseCsv,
}

impl MatrixFormat {
    /// `.mtx` and `.mm` are MatrixMarket, everything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") | Some("mm") => MatrixFormat::MatrixMarket,
            _ => MatrixFormat::DenseCsv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Symmetric,
    Data,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedMatrix {
    Symmetric(SymmetricMatrix),
    Data(DataMatrix),
}

impl LoadedMatrix {
    pub fn into_symmetric(self) -> Result<SymmetricMatrix> {
        match self {
            LoadedMatrix::Symmetric(a) => Ok(a),
            LoadedMatrix::Data(_) => Err(SpcaError::InvalidParameter("expected a symmetric matrix".into())),
        }
    }

    pub fn into_data(self) -> Result<DataMatrix> {
        match self {
            LoadedMatrix::Data(x) => Ok(x),
            LoadedMatrix::Symmetric(_) => Err(SpcaError::InvalidParameter("expected a data matrix".into())),
        }
    }
}

pub fn load_matrix(path: &Path, format: MatrixFormat, kind: MatrixKind) -> Result<LoadedMatrix> {
    let raw = match format {
        MatrixFormat::MatrixMarket => read_matrix_market(BufReader::new(fs::File::open(path)?))?,
        MatrixFormat::DenseCsv => read_dense_csv(fs::File::open(path)?)?,
    };
    match kind {
        MatrixKind::Symmetric => Ok(LoadedMatrix::Symmetric(SymmetricMatrix::symmetrize(&raw, LOAD_SYMMETRY_TOL)?)),
        MatrixKind::Data => Ok(LoadedMatrix::Data(DataMatrix::new(raw)?)),
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> SpcaError {
    SpcaError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into `(1-based column, token)` pairs.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_value<T: std::str::FromStr>(tok: (usize, &str), line: usize, what: &str) -> Result<T> {
    tok.1
        .parse()
        .map_err(|_| parse_err(line, tok.0, format!("invalid {what} '{}'", tok.1)))
}

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

/// Reads real/integer MatrixMarket files in coordinate or array layout.
pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<DMatrix<f64>> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty file"))?;
    let header = header?;
    let htoks = tokens(&header);
    if htoks.len() != 5 || !htoks[0].1.eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(parse_err(hline, 1, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'"));
    }
    if !htoks[1].1.eq_ignore_ascii_case("matrix") {
        return Err(parse_err(hline, htoks[1].0, "only 'matrix' objects are supported"));
    }
    let layout = match htoks[2].1.to_ascii_lowercase().as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(parse_err(hline, htoks[2].0, format!("unknown layout '{other}'"))),
    };
    match htoks[3].1.to_ascii_lowercase().as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(parse_err(hline, htoks[3].0, format!("unsupported field '{other}'"))),
    }
    let symmetry = match htoks[4].1.to_ascii_lowercase().as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => return Err(parse_err(hline, htoks[4].0, format!("unsupported symmetry '{other}'"))),
    };

    let mut data_lines = Vec::new();
    for (no, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        data_lines.push((no, line));
    }
    let mut iter = data_lines.iter();
    let (sno, size_line) = iter.next().ok_or_else(|| parse_err(hline, 1, "missing size line"))?;
    let stoks = tokens(size_line);
    let expected = if layout == Layout::Coordinate { 3 } else { 2 };
    if stoks.len() != expected {
        return Err(parse_err(*sno, 1, format!("size line needs {expected} integers")));
    }
    let rows: usize = parse_value(stoks[0], *sno, "row count")?;
    let cols: usize = parse_value(stoks[1], *sno, "column count")?;
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(*sno, 1, "symmetric storage requires a square matrix"));
    }
    let mut m = DMatrix::zeros(rows, cols);
    let mirror = |m: &mut DMatrix<f64>, i: usize, j: usize, v: f64| {
        m[(i, j)] = v;
        match symmetry {
            Symmetry::General => {}
            Symmetry::Symmetric => m[(j, i)] = v,
            Symmetry::SkewSymmetric => m[(j, i)] = -v,
        }
    };

    match layout {
        Layout::Coordinate => {
            let nnz: usize = parse_value(stoks[2], *sno, "entry count")?;
            let mut seen = 0usize;
            for (no, line) in iter {
                let t = tokens(line);
                if t.len() != 3 {
                    return Err(parse_err(*no, 1, "coordinate entry needs 'row col value'"));
                }
                let i: usize = parse_value(t[0], *no, "row index")?;
                let j: usize = parse_value(t[1], *no, "column index")?;
                let v: f64 = parse_value(t[2], *no, "value")?;
                if i == 0 || i > rows {
                    return Err(parse_err(*no, t[0].0, format!("row index {i} out of range")));
                }
                if j == 0 || j > cols {
                    return Err(parse_err(*no, t[1].0, format!("column index {j} out of range")));
                }
                if symmetry != Symmetry::General && j > i {
                    return Err(parse_err(*no, t[1].0, "symmetric storage lists the lower triangle only"));
                }
                mirror(&mut m, i - 1, j - 1, v);
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(*sno, stoks[2].0, format!("declared {nnz} entries, found {seen}")));
            }
        }
        Layout::Array => {
            // column-major; symmetric storage lists the lower triangle
            let mut slots = Vec::new();
            for j in 0..cols {
                let first = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::Symmetric => j,
                    Symmetry::SkewSymmetric => j + 1,
                };
                for i in first..rows {
                    slots.push((i, j));
                }
            }
            let mut k = 0usize;
            for (no, line) in iter {
                for tok in tokens(line) {
                    let v: f64 = parse_value(tok, *no, "value")?;
                    let &(i, j) = slots
                        .get(k)
                        .ok_or_else(|| parse_err(*no, tok.0, "more values than the declared size"))?;
                    mirror(&mut m, i, j, v);
                    k += 1;
                }
            }
            if k != slots.len() {
                return Err(parse_err(*sno, 1, format!("expected {} values, found {k}", slots.len())));
            }
        }
    }
    Ok(m)
}

/// Writes `m` in array layout. With `symmetric`, only the lower triangle is stored.
pub fn write_matrix_market<W: Write>(mut w: W, m: &DMatrix<f64>, symmetric: bool) -> Result<()> {
    let sym = if symmetric { "symmetric" } else { "general" };
    writeln!(w, "%%MatrixMarket matrix array real {sym}")?;
    writeln!(w, "{} {}", m.nrows(), m.ncols())?;
    for j in 0..m.ncols() {
        let first = if symmetric { j } else { 0 };
        for i in first..m.nrows() {
            writeln!(w, "{:e}", m[(i, j)])?;
        }
    }
    Ok(())
}

pub fn save_matrix_market(path: &Path, m: &DMatrix<f64>, symmetric: bool) -> Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    write_matrix_market(&mut f, m, symmetric)?;
    f.flush()?;
    Ok(())
}

/// Reads comma-separated rows. A first row that does not parse as numbers is a header.
pub fn read_dense_csv<R: std::io::Read>(reader: R) -> Result<DMatrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(idx + 1, |p| p.line() as usize);
        let parsed: std::result::Result<Vec<f64>, usize> = rec
            .iter()
            .enumerate()
            .map(|(c, f)| f.parse::<f64>().map_err(|_| c))
            .collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if rows.is_empty() && idx == 0 => continue,
            Err(c) => return Err(parse_err(line, c + 1, format!("invalid number '{}'", &rec[c]))),
        };
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(parse_err(line, 1, format!("expected {w} fields, found {}", values.len())))
            }
            _ => {}
        }
        rows.push(values);
    }
    let n = width.ok_or_else(|| parse_err(1, 1, "no numeric rows"))?;
    Ok(DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]))
}

pub fn write_dense_csv<W: Write>(w: W, m: &DMatrix<f64>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for i in 0..m.nrows() {
        wtr.write_record(m.row(i).iter().map(|v| format!("{v:e}")))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn save_dense_csv(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    write_dense_csv(fs::File::create(path)?, m)
}

/// Sidecar describing where a saved matrix came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixMetadata {
    pub name: String,
    pub n: usize,
    pub source: String,
    #[serde(default)]
    pub preprocessing: Vec<String>,
}

/// `<path>.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn save_with_metadata(path: &Path, a: &SymmetricMatrix, meta: &MatrixMetadata) -> Result<()> {
    save_matrix_market(path, a.as_matrix(), true)?;
    fs::write(sidecar_path(path), serde_json::to_string_pretty(meta)?)?;
    Ok(())
}

pub fn load_metadata(path: &Path) -> Result<MatrixMetadata> {
    Ok(serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?)
}
