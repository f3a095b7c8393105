//! Dataset ingestion: numeric CSV files, candidate model lists and the
//! prostate cancer fixture.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use cmc_core::{Dataset, Matrix, SubsetMask};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Label used for the intercept in reports and candidate lists.
pub const INTERCEPT: &str = "(intercept)";

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Loads a comma-separated file with a header row. Every column other than
/// `response` becomes a predictor, in file order. Rows are numbered from 1
/// after the header.
pub fn load_csv(path: &Path, response: &str) -> Result<Dataset> {
    read_csv(open(path)?, response)
}

pub fn read_csv<R: Read>(input: R, response: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let y_col = header
        .iter()
        .position(|h| h == response)
        .ok_or_else(|| CliError::MissingResponse(response.to_owned()))?;
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        for (j, cell) in record.iter().enumerate() {
            let value = cell
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse { row: i + 1, col: header[j].clone() })?;
            columns[j].push(value);
        }
    }
    let y = columns.remove(y_col);
    let mut names = header;
    names.remove(y_col);
    build(columns, y, names)
}

fn build(columns: Vec<Vec<f64>>, y: Vec<f64>, names: Vec<String>) -> Result<Dataset> {
    let (n, p) = (y.len(), columns.len());
    if n <= p + 1 {
        return Err(CliError::TooFewRows { n, p });
    }
    let x = if p == 0 { Matrix::zeros(n, 0) } else { Matrix::from_columns(&columns)? };
    Ok(Dataset::new(x, y, names)?)
}

/// Reads candidate models, one per line as comma-separated predictor names.
/// Blank lines and lines starting with `#` are skipped; a line holding only
/// `(intercept)` is the empty model.
pub fn load_candidates(path: &Path, data: &Dataset) -> Result<Vec<SubsetMask>> {
    let masks = parse_candidates(&read_to_string(path)?, data)?;
    if masks.is_empty() {
        return Err(CliError::EmptyCandidates(path.to_path_buf()));
    }
    Ok(masks)
}

pub fn parse_candidates(text: &str, data: &Dataset) -> Result<Vec<SubsetMask>> {
    let mut masks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut indices = Vec::new();
        for name in line.split(',').map(str::trim).filter(|s| !s.is_empty() && *s != INTERCEPT) {
            let j = data
                .index_of(name)
                .ok_or_else(|| CliError::UnknownVariable { line: i + 1, name: name.to_owned() })?;
            indices.push(j);
        }
        masks.push(SubsetMask::new(indices));
    }
    Ok(masks)
}

/// Environment variable overriding the prostate fixture location.
pub const PROSTATE_PATH_VAR: &str = "CMC_PROSTATE_PATH";
/// Optional expected SHA-256 (hex) of the fixture file.
pub const PROSTATE_SHA256_VAR: &str = "CMC_PROSTATE_SHA256";
pub const PROSTATE_DEFAULT_PATH: &str = "data/prostate.data";
pub const PROSTATE_ROWS: usize = 97;
pub const PROSTATE_RESPONSE: &str = "lpsa";
pub const PROSTATE_PREDICTORS: [&str; 8] = ["lcavol", "lweight", "age", "lbph", "svi", "lcp", "gleason", "pgg45"];

pub fn prostate_path() -> PathBuf {
    std::env::var_os(PROSTATE_PATH_VAR).map_or_else(|| PathBuf::from(PROSTATE_DEFAULT_PATH), PathBuf::from)
}

/// Loads the prostate cancer data with `lpsa` as response and the eight
/// clinical predictors in their customary order.
///
/// Accepts the tab-separated file distributed with *The Elements of
/// Statistical Learning* (leading row labels and a trailing `train` column
/// are ignored) or any comma-separated file containing the nine named
/// columns. When [`PROSTATE_SHA256_VAR`] is set the file digest must match.
pub fn load_prostate(path: &Path) -> Result<Dataset> {
    let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    if let Ok(expected) = std::env::var(PROSTATE_SHA256_VAR) {
        let actual = hex::encode(Sha256::digest(&bytes));
        if !actual.eq_ignore_ascii_case(expected.trim()) {
            return Err(CliError::Fixture(format!("checksum mismatch: expected {expected}, found {actual}")));
        }
    }
    let text = String::from_utf8(bytes).map_err(|_| CliError::Fixture("file is not UTF-8".into()))?;
    parse_prostate(&text)
}

fn unquote(s: &str) -> &str {
    s.trim().trim_matches('"')
}

fn tokens(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(unquote).collect()
    } else {
        line.split_whitespace().map(unquote).collect()
    }
}

pub fn parse_prostate(text: &str) -> Result<Dataset> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = tokens(lines.next().ok_or_else(|| CliError::Fixture("empty file".into()))?);
    let header: Vec<&str> = header.into_iter().filter(|h| !h.is_empty()).collect();
    let col = |name: &str| {
        header.iter().position(|h| *h == name).ok_or_else(|| CliError::Fixture(format!("missing column {name}")))
    };
    let y_col = col(PROSTATE_RESPONSE)?;
    let x_cols = PROSTATE_PREDICTORS.iter().map(|n| col(n)).collect::<Result<Vec<_>>>()?;
    let mut y = Vec::new();
    let mut columns = vec![Vec::new(); x_cols.len()];
    for (i, line) in lines.enumerate() {
        let mut row = tokens(line);
        if row.len() == header.len() + 1 {
            row.remove(0);
        }
        if row.len() != header.len() {
            return Err(CliError::Fixture(format!("row {} has {} fields, expected {}", i + 1, row.len(), header.len())));
        }
        let cell = |j: usize| {
            row[j].parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| CliError::Parse {
                row: i + 1,
                col: header[j].to_owned(),
            })
        };
        y.push(cell(y_col)?);
        for (column, &j) in columns.iter_mut().zip(&x_cols) {
            column.push(cell(j)?);
        }
    }
    if y.len() != PROSTATE_ROWS {
        return Err(CliError::Fixture(format!("expected {PROSTATE_ROWS} rows, found {}", y.len())));
    }
    build(columns, y, PROSTATE_PREDICTORS.iter().map(|s| (*s).to_owned()).collect())
}
