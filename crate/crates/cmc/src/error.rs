use std::path::PathBuf;

use thiserror::Error;

/// Exit status for bad input: unreadable files, malformed data, invalid flags.
pub const EXIT_INPUT: i32 = 2;
/// Exit status for failures inside the numerical pipeline.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}, column {col}: cell is not a finite number")]
    Parse { row: usize, col: String },
    #[error("response column {0:?} not found in header")]
    MissingResponse(String),
    #[error("too few rows: n = {n} needs to exceed p + 1 = {}", p + 1)]
    TooFewRows { n: usize, p: usize },
    #[error("candidate list line {line}: unknown variable {name:?}")]
    UnknownVariable { line: usize, name: String },
    #[error("candidate list {0} contains no models")]
    EmptyCandidates(PathBuf),
    #[error("prostate fixture: {0}")]
    Fixture(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] cmc_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use cmc_core::Error as E;
        match self {
            Self::Core(
                E::RankDeficient
                | E::DegenerateFit
                | E::ConstantColumn(_)
                | E::Infeasible
                | E::Inconsistent(_)
                | E::RetriesExhausted(_),
            ) => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
