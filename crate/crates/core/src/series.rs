//! Monthly market time series: the central data shape shared by ingest,
//! fitting, forecasting and analysis.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use chrono::{DateTime, Datelike, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Schema version stamped into serialized series documents.
pub const SERIES_SCHEMA_VERSION: u32 = 1;

/// Fixed column order of the series CSV interface.
pub const SERIES_CSV_HEADER: [&str; 10] = [
    "month", "U", "U_q", "U_a", "U_c", "N_q", "N_a", "N_cq", "N_ca", "N_c",
];

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("invalid month literal {0:?}, expected YYYY-MM")]
    BadMonth(String),
    #[error("series has no months")]
    Empty,
    #[error("months are not consecutive at index {0}")]
    NonConsecutive(usize),
    #[error("negative count in column {column} at month {month}")]
    NegativeCount { column: &'static str, month: Month },
    #[error("comment total mismatch at month {0}: N_c != N_cq + N_ca")]
    CommentTotalMismatch(Month),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv row {row}: {message}")]
    BadCsvRow { row: usize, message: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// A UTC calendar month, ordered chronologically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month {
    year: i32,
    month: u32,
}

impl Month {
    /// `month` is 1-based (1 = January). Panics outside 1..=12.
    pub fn new(year: i32, month: u32) -> Self {
        assert!((1..=12).contains(&month), "month out of range: {month}");
        Self { year, month }
    }

    pub fn from_utc(t: DateTime<Utc>) -> Self {
        Self::new(t.year(), t.month())
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    /// Monotone integer index (months since 0000-01).
    pub fn ordinal(self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month) - 1
    }

    pub fn from_ordinal(ord: i64) -> Self {
        let year = ord.div_euclid(12);
        let month = ord.rem_euclid(12) + 1;
        Self::new(year as i32, month as u32)
    }

    pub fn next(self) -> Self {
        Self::from_ordinal(self.ordinal() + 1)
    }

    /// Number of month steps from `self` to `other` (negative if earlier).
    pub fn months_until(self, other: Month) -> i64 {
        other.ordinal() - self.ordinal()
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for Month {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SeriesError::BadMonth(s.to_string());
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        let year: i32 = y.parse().map_err(|_| bad())?;
        let month: u32 = m.parse().map_err(|_| bad())?;
        if (1..=12).contains(&month) {
            Ok(Self { year, month })
        } else {
            Err(bad())
        }
    }
}

impl Serialize for Month {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Month {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Per creation-month question-cohort outcomes, as of dump time and
/// restricted to same-month attribution. Populated by ingest; synthetic
/// series may omit it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HealthBookkeeping {
    /// Questions created this month.
    pub questions: u64,
    /// Of those, how many ever received an answer (or were marked accepted).
    pub answered_ever: u64,
    /// Of those, how many have an accepted answer.
    pub accepted_ever: u64,
    /// Answered by an answer created in the same calendar month.
    pub answered_same_month: u64,
    /// Accepted answer was created in the same calendar month.
    pub accepted_same_month: u64,
}

/// One month of market counts. Counts are stored as `f64`: ingest always
/// produces integral values, synthetic generators may produce real-valued
/// content counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthRecord {
    pub month: Month,
    /// Distinct users active in any role this month.
    pub u: f64,
    pub u_q: f64,
    pub u_a: f64,
    pub u_c: f64,
    pub n_q: f64,
    pub n_a: f64,
    pub n_cq: f64,
    pub n_ca: f64,
    pub n_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub health: Option<HealthBookkeeping>,
}

impl MonthRecord {
    pub fn zero(month: Month) -> Self {
        Self {
            month,
            u: 0.0,
            u_q: 0.0,
            u_a: 0.0,
            u_c: 0.0,
            n_q: 0.0,
            n_a: 0.0,
            n_cq: 0.0,
            n_ca: 0.0,
            n_c: 0.0,
            health: None,
        }
    }
}

/// Monthly role-participation and content-production counts for one site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthlyMarketSeries {
    pub schema_version: u32,
    pub site_id: String,
    pub months: Vec<MonthRecord>,
    /// Records the resolved interpretation choices this series was built
    /// under (e.g. how U is defined, the ramp threshold used).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl MonthlyMarketSeries {
    pub fn new(site_id: impl Into<String>, months: Vec<MonthRecord>) -> Self {
        Self {
            schema_version: SERIES_SCHEMA_VERSION,
            site_id: site_id.into(),
            months,
            metadata: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.months.len()
    }

    pub fn is_empty(&self) -> bool {
        self.months.is_empty()
    }

    /// Checks the structural invariants: non-empty, consecutive months,
    /// nonnegative counts, comment totals additive.
    pub fn validate(&self) -> Result<(), SeriesError> {
        if self.months.is_empty() {
            return Err(SeriesError::Empty);
        }
        for (i, rec) in self.months.iter().enumerate() {
            if i > 0 && self.months[i - 1].month.next() != rec.month {
                return Err(SeriesError::NonConsecutive(i));
            }
            for (column, v) in [
                ("U", rec.u),
                ("U_q", rec.u_q),
                ("U_a", rec.u_a),
                ("U_c", rec.u_c),
                ("N_q", rec.n_q),
                ("N_a", rec.n_a),
                ("N_cq", rec.n_cq),
                ("N_ca", rec.n_ca),
                ("N_c", rec.n_c),
            ] {
                if !(v >= 0.0) {
                    return Err(SeriesError::NegativeCount {
                        column,
                        month: rec.month,
                    });
                }
            }
            let sum = rec.n_cq + rec.n_ca;
            let scale = rec.n_c.abs().max(sum.abs()).max(1.0);
            if (rec.n_c - sum).abs() > 1e-9 * scale {
                return Err(SeriesError::CommentTotalMismatch(rec.month));
            }
        }
        Ok(())
    }

    /// Writes the fixed 10-column CSV interface.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SeriesError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SERIES_CSV_HEADER)?;
        for rec in &self.months {
            w.write_record([
                rec.month.to_string(),
                fmt_count(rec.u),
                fmt_count(rec.u_q),
                fmt_count(rec.u_a),
                fmt_count(rec.u_c),
                fmt_count(rec.n_q),
                fmt_count(rec.n_a),
                fmt_count(rec.n_cq),
                fmt_count(rec.n_ca),
                fmt_count(rec.n_c),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the 10-column CSV interface. Health bookkeeping is not part
    /// of the CSV schema and comes back as `None`.
    pub fn read_csv<R: Read>(site_id: &str, input: R) -> Result<Self, SeriesError> {
        let mut r = csv::Reader::from_reader(input);
        let mut months = Vec::new();
        for (i, row) in r.records().enumerate() {
            let row = row?;
            let field = |j: usize| -> Result<f64, SeriesError> {
                row.get(j)
                    .ok_or_else(|| SeriesError::BadCsvRow {
                        row: i + 1,
                        message: format!("missing column {j}"),
                    })?
                    .parse()
                    .map_err(|e| SeriesError::BadCsvRow {
                        row: i + 1,
                        message: format!("column {}: {e}", SERIES_CSV_HEADER[j]),
                    })
            };
            let month: Month = row
                .get(0)
                .ok_or_else(|| SeriesError::BadCsvRow {
                    row: i + 1,
                    message: "missing month".into(),
                })?
                .parse()?;
            months.push(MonthRecord {
                month,
                u: field(1)?,
                u_q: field(2)?,
                u_a: field(3)?,
                u_c: field(4)?,
                n_q: field(5)?,
                n_a: field(6)?,
                n_cq: field(7)?,
                n_ca: field(8)?,
                n_c: field(9)?,
                health: None,
            });
        }
        Ok(Self::new(site_id, months))
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<(), SeriesError> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn read_json<R: Read>(input: R) -> Result<Self, SeriesError> {
        Ok(serde_json::from_reader(input)?)
    }
}

fn fmt_count(v: f64) -> String {
    // Shortest round-trip decimal; integral values print without a fraction.
    format!("{v}")
}

/// One active (user, month) cell with its per-type contribution counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UserMonthActivity {
    pub user_id: i64,
    pub month: Month,
    pub n_questions: u64,
    pub n_answers: u64,
    pub n_comments: u64,
}

impl UserMonthActivity {
    pub fn total(&self) -> u64 {
        self.n_questions + self.n_answers + self.n_comments
    }
}

const ACTIVITY_CSV_HEADER: [&str; 5] =
    ["user_id", "month", "n_questions", "n_answers", "n_comments"];

pub fn write_activity_csv<W: Write>(
    records: &[UserMonthActivity],
    out: W,
) -> Result<(), SeriesError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ACTIVITY_CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.user_id.to_string(),
            r.month.to_string(),
            r.n_questions.to_string(),
            r.n_answers.to_string(),
            r.n_comments.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_activity_csv<R: Read>(input: R) -> Result<Vec<UserMonthActivity>, SeriesError> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let parse_u64 = |j: usize| -> Result<u64, SeriesError> {
            row.get(j)
                .ok_or_else(|| SeriesError::BadCsvRow {
                    row: i + 1,
                    message: format!("missing column {j}"),
                })?
                .parse()
                .map_err(|e| SeriesError::BadCsvRow {
                    row: i + 1,
                    message: format!("column {}: {e}", ACTIVITY_CSV_HEADER[j]),
                })
        };
        out.push(UserMonthActivity {
            user_id: row
                .get(0)
                .unwrap_or_default()
                .parse()
                .map_err(|e| SeriesError::BadCsvRow {
                    row: i + 1,
                    message: format!("user_id: {e}"),
                })?,
            month: row
                .get(1)
                .ok_or_else(|| SeriesError::BadCsvRow {
                    row: i + 1,
                    message: "missing month".into(),
                })?
                .parse()?,
            n_questions: parse_u64(2)?,
            n_answers: parse_u64(3)?,
            n_comments: parse_u64(4)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn month_ordering_and_arithmetic() {
        let dec = Month::new(2010, 12);
        let jan = Month::new(2011, 1);
        assert!(dec < jan);
        assert_eq!(dec.next(), jan);
        assert_eq!(dec.months_until(jan), 1);
        assert_eq!(Month::from_ordinal(jan.ordinal()), jan);
    }

    #[test]
    fn month_parse_roundtrip() {
        let m: Month = "2013-07".parse().unwrap();
        assert_eq!(m, Month::new(2013, 7));
        assert_eq!(m.to_string(), "2013-07");
        assert!("2013-13".parse::<Month>().is_err());
        assert!("2013".parse::<Month>().is_err());
    }

    #[test]
    fn validate_rejects_gap_and_mismatch() {
        let mut s = MonthlyMarketSeries::new(
            "t",
            vec![
                MonthRecord::zero(Month::new(2010, 1)),
                MonthRecord::zero(Month::new(2010, 3)),
            ],
        );
        assert!(matches!(s.validate(), Err(SeriesError::NonConsecutive(1))));
        s.months[1].month = Month::new(2010, 2);
        s.months[1].n_cq = 1.0;
        assert!(matches!(
            s.validate(),
            Err(SeriesError::CommentTotalMismatch(_))
        ));
        s.months[1].n_c = 1.0;
        assert!(s.validate().is_ok());
    }

    #[test]
    fn csv_roundtrip_preserves_values() {
        let mut rec = MonthRecord::zero(Month::new(2011, 5));
        rec.u = 12.0;
        rec.u_q = 5.0;
        rec.n_q = 7.0;
        rec.n_a = 13.25; // synthetic series may carry real-valued counts
        let s = MonthlyMarketSeries::new("site", vec![rec]);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("month,U,U_q,U_a,U_c,N_q,N_a,N_cq,N_ca,N_c\n"));
        let back = MonthlyMarketSeries::read_csv("site", &buf[..]).unwrap();
        assert_eq!(back.months, {
            let mut m = s.months.clone();
            m[0].health = None;
            m
        });
    }

    #[test]
    fn activity_csv_roundtrip() {
        let recs = vec![
            UserMonthActivity {
                user_id: 7,
                month: Month::new(2010, 1),
                n_questions: 0,
                n_answers: 2,
                n_comments: 0,
            },
            UserMonthActivity {
                user_id: 9,
                month: Month::new(2010, 2),
                n_questions: 1,
                n_answers: 0,
                n_comments: 3,
            },
        ];
        let mut buf = Vec::new();
        write_activity_csv(&recs, &mut buf).unwrap();
        assert_eq!(read_activity_csv(&buf[..]).unwrap(), recs);
    }
}
