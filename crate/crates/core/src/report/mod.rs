//! Reference tables and figures, CSV/SVG output and the
//! validation suite.

pub mod figure;
pub mod reference;
pub mod tables;
pub mod validate;

use thiserror::Error;

pub use figure::render_svg;
pub use tables::{build_table, round_half_away, TableArtifact, TableName, TableRow};
pub use validate::{
    local_limit_error, sandwich_violation, validate, witness_distances, Check, ValidationLevel,
    ValidationOptions, ValidationReport,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Compute(#[from] crate::Error),

    #[error("unknown table {0:?} (expected one of en_q, centred, sd_bounds, fig_low, fig_high)")]
    UnknownTable(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed table: {0}")]
    Parse(String),
}

pub type ReportResult<T> = std::result::Result<T, ReportError>;
