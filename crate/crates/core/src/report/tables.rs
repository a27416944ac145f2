use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::asymptotics::{centred_mean_prediction, variance_bounds};
use crate::coupon::{expected_tests, BankSpec, TruncationPolicy};

use super::reference::{FIG_HIGH_Q, SD_A, TABLE_A, TABLE_Q};
use super::{ReportError, ReportResult};

/// The tables and figure datasets the CLI can produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableName {
    /// `E N_q` for a ∈ {5,10,20} × q ∈ {1,5,10,20,50,100,200}.
    EnQ,
    /// `b_q + γ/α` on the same grid.
    Centred,
    /// Limiting s.d. band for a ∈ {2,3,4,5,10,20}.
    SdBounds,
    /// `E N_q` for q = 1..20.
    FigLow,
    /// `E N_q` on the wide q grid up to 200.
    FigHigh,
}

impl TableName {
    pub const ALL: [TableName; 5] = [
        TableName::EnQ,
        TableName::Centred,
        TableName::SdBounds,
        TableName::FigLow,
        TableName::FigHigh,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TableName::EnQ => "en_q",
            TableName::Centred => "centred",
            TableName::SdBounds => "sd_bounds",
            TableName::FigLow => "fig_low",
            TableName::FigHigh => "fig_high",
        }
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            TableName::SdBounds => &["a", "sd_min", "sd_max"],
            _ => &["a", "q", "value", "value_rounded"],
        }
    }

    pub fn is_figure(self) -> bool {
        matches!(self, TableName::FigLow | TableName::FigHigh)
    }
}

impl fmt::Display for TableName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableName {
    type Err = ReportError;

    fn from_str(s: &str) -> ReportResult<Self> {
        TableName::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| ReportError::UnknownTable(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TableRow {
    Value {
        a: u32,
        q: u64,
        value: f64,
        value_rounded: f64,
    },
    SdBand {
        a: u32,
        sd_min: f64,
        sd_max: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableArtifact {
    pub name: TableName,
    pub rows: Vec<TableRow>,
}

/// Rounds half away from zero to `places` decimals.
pub fn round_half_away(x: f64, places: i32) -> f64 {
    let scale = 10f64.powi(places);
    (x * scale).round() / scale
}

fn value_row(a: u32, q: u64, value: f64) -> TableRow {
    TableRow::Value {
        a,
        q,
        value,
        value_rounded: round_half_away(value, 1),
    }
}

fn expected_grid(a_values: &[u32], q_values: &[u64], policy: &TruncationPolicy) -> ReportResult<Vec<TableRow>> {
    let mut rows = Vec::with_capacity(a_values.len() * q_values.len());
    for &a in a_values {
        for &q in q_values {
            let est = expected_tests(BankSpec::new(a, q)?, policy)?;
            rows.push(value_row(a, q, est.value));
        }
    }
    Ok(rows)
}

/// Computes one table from scratch.
pub fn build_table(name: TableName, policy: &TruncationPolicy) -> ReportResult<TableArtifact> {
    let rows = match name {
        TableName::EnQ => expected_grid(&TABLE_A, &TABLE_Q, policy)?,
        TableName::FigLow => {
            let q: Vec<u64> = (1..=20).collect();
            expected_grid(&TABLE_A, &q, policy)?
        }
        TableName::FigHigh => expected_grid(&TABLE_A, &FIG_HIGH_Q, policy)?,
        TableName::Centred => {
            let mut rows = Vec::new();
            for a in TABLE_A {
                for q in TABLE_Q {
                    rows.push(value_row(a, q, centred_mean_prediction(a, q)?));
                }
            }
            rows
        }
        TableName::SdBounds => SD_A
            .iter()
            .map(|&a| {
                variance_bounds(a).map(|v| TableRow::SdBand {
                    a,
                    sd_min: v.sd_lo,
                    sd_max: v.sd_hi,
                })
            })
            .collect::<Result<_, _>>()?,
    };
    Ok(TableArtifact { name, rows })
}

impl TableArtifact {
    pub fn header(&self) -> &'static [&'static str] {
        self.name.header()
    }

    /// Writes the CSV: LF line endings, header first, shortest round-trip
    /// formatting for full-precision columns and one decimal for rounded ones.
    pub fn write_csv<W: Write>(&self, out: W) -> ReportResult<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(self.header())?;
        for row in &self.rows {
            match *row {
                TableRow::Value {
                    a,
                    q,
                    value,
                    value_rounded,
                } => w.write_record([
                    a.to_string(),
                    q.to_string(),
                    value.to_string(),
                    format!("{value_rounded:.1}"),
                ])?,
                TableRow::SdBand { a, sd_min, sd_max } => {
                    w.write_record([a.to_string(), sd_min.to_string(), sd_max.to_string()])?
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> ReportResult<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| ReportError::Parse(e.to_string()))
    }

    /// Parses CSV emitted by [`TableArtifact::write_csv`]; the header must
    /// match the table's schema exactly.
    pub fn parse_csv(name: TableName, text: &str) -> ReportResult<Self> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        if header != name.header() {
            return Err(ReportError::Parse(format!(
                "header {header:?} does not match {:?}",
                name.header()
            )));
        }
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record?;
            let field = |i: usize| -> ReportResult<&str> {
                record
                    .get(i)
                    .ok_or_else(|| ReportError::Parse(format!("missing column {i}")))
            };
            let num = |i: usize| -> ReportResult<f64> {
                field(i)?
                    .parse()
                    .map_err(|e| ReportError::Parse(format!("column {i}: {e}")))
            };
            let a: u32 = field(0)?
                .parse()
                .map_err(|e| ReportError::Parse(format!("a: {e}")))?;
            let row = if name == TableName::SdBounds {
                TableRow::SdBand {
                    a,
                    sd_min: num(1)?,
                    sd_max: num(2)?,
                }
            } else {
                TableRow::Value {
                    a,
                    q: field(1)?
                        .parse()
                        .map_err(|e| ReportError::Parse(format!("q: {e}")))?,
                    value: num(2)?,
                    value_rounded: num(3)?,
                }
            };
            rows.push(row);
        }
        Ok(Self { name, rows })
    }

    /// `(q, value)` pairs of one bank size, in row order.
    pub fn series(&self, a_wanted: u32) -> Vec<(u64, f64)> {
        self.rows
            .iter()
            .filter_map(|r| match *r {
                TableRow::Value { a, q, value, .. } if a == a_wanted => Some((q, value)),
                _ => None,
            })
            .collect()
    }
}
