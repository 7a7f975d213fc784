//! CSV series files: a header row naming `date`, `y` and `x` (any order,
//! extra columns ignored), comma-separated, one observation per row.
//!
//! `date` is either an integer index or an ISO-8601 date (`YYYY-MM-DD`, or
//! `YYYY-MM` for monthly data) and must be strictly increasing. Row `t`
//! holds `Y_t` and `X_t`; the response of the first row has no lagged
//! predictor, is never used, and may be left empty.

use std::cmp::Ordering;
use std::fmt;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use predreg::RegressionSample;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header: {0}")]
    Header(String),
    #[error(transparent)]
    Sample(#[from] predreg::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Timestamp {
    Index(i64),
    Date(NaiveDate),
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timestamp::Index(i) => write!(f, "{i}"),
            Timestamp::Date(d) => write!(f, "{d}"),
        }
    }
}

fn parse_timestamp(raw: &str) -> Option<Timestamp> {
    let raw = raw.trim();
    if let Ok(i) = raw.parse::<i64>() {
        return Some(Timestamp::Index(i));
    }
    if let Ok(d) = NaiveDate::parse_from_str(raw, "%Y-%m-%d") {
        return Some(Timestamp::Date(d));
    }
    NaiveDate::parse_from_str(&format!("{raw}-01"), "%Y-%m-%d").ok().map(Timestamp::Date)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub timestamp: Timestamp,
    /// Empty only on the first row.
    pub y: Option<f64>,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeriesFile {
    pub rows: Vec<SeriesRow>,
}

impl SeriesFile {
    pub fn read(path: &Path) -> Result<Self, SeriesError> {
        let file = std::fs::File::open(path).map_err(|source| SeriesError::Io { path: path.display().to_string(), source })?;
        Self::from_reader(file)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, SeriesError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| SeriesError::Header(e.to_string()))?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| SeriesError::Header(format!("missing column {name:?} (need date,y,x)")))
        };
        let (cd, cy, cx) = (col("date")?, col("y")?, col("x")?);

        let mut rows: Vec<SeriesRow> = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| SeriesError::Parse { line, msg: e.to_string() })?;
            let field = |c: usize| rec.get(c).unwrap_or("");
            let timestamp = parse_timestamp(field(cd))
                .ok_or_else(|| SeriesError::Parse { line, msg: format!("bad date {:?}", field(cd)) })?;
            let number = |c: usize, name: &str| -> Result<f64, SeriesError> {
                let raw = field(c);
                match raw.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(SeriesError::Parse { line, msg: format!("bad {name} value {raw:?}") }),
                }
            };
            let x = number(cx, "x")?;
            let y = if rows.is_empty() && field(cy).is_empty() { None } else { Some(number(cy, "y")?) };
            if let Some(prev) = rows.last() {
                let order = match (prev.timestamp, timestamp) {
                    (Timestamp::Index(a), Timestamp::Index(b)) => a.cmp(&b),
                    (Timestamp::Date(a), Timestamp::Date(b)) => a.cmp(&b),
                    _ => {
                        return Err(SeriesError::Parse { line, msg: "mixes integer indices and dates".into() });
                    }
                };
                if order != Ordering::Less {
                    return Err(SeriesError::Parse {
                        line,
                        msg: format!("timestamp {timestamp} does not follow {}", prev.timestamp),
                    });
                }
            }
            rows.push(SeriesRow { timestamp, y, x });
        }
        Ok(Self { rows })
    }

    /// Pairs `(X_{t-1}, Y_t)` for consecutive rows.
    pub fn to_sample(&self) -> Result<RegressionSample, SeriesError> {
        let rows: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.x, r.y.unwrap_or(0.0))).collect();
        Ok(RegressionSample::from_aligned_rows(&rows)?)
    }

    /// Rows with timestamps in `[from, to]`.
    pub fn window(&self, from: Timestamp, to: Timestamp) -> Self {
        let rows = self.rows.iter().filter(|r| r.timestamp >= from && r.timestamp <= to).cloned().collect();
        Self { rows }
    }

    /// Writes the file in the format [`SeriesFile::read`] accepts.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["date", "y", "x"])?;
        for r in &self.rows {
            let y = r.y.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([r.timestamp.to_string(), y, r.x.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Integer-indexed file holding `sample` (first row's `y` left empty).
    pub fn from_sample(sample: &RegressionSample) -> Self {
        let rows = sample
            .x()
            .iter()
            .enumerate()
            .map(|(t, &x)| SeriesRow { timestamp: Timestamp::Index(t as i64), y: t.checked_sub(1).map(|i| sample.y()[i]), x })
            .collect();
        Self { rows }
    }
}
