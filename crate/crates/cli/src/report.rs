//! TSV and JSON encodings of experiment reports.
//!
//! TSV columns, in order:
//! `a phi nu b1 n level method replications frequency se anomalies`.
//! Floats use Rust's shortest round-trip formatting, so the text is a pure
//! function of the values.

use predreg::experiment::ExperimentReport;

pub const TSV_HEADER: [&str; 11] = ["a", "phi", "nu", "b1", "n", "level", "method", "replications", "frequency", "se", "anomalies"];

pub fn to_tsv(reports: &[ExperimentReport]) -> String {
    let mut out = TSV_HEADER.join("\t");
    out.push('\n');
    for r in reports {
        let row = [
            r.a.to_string(),
            r.phi.to_string(),
            r.nu.to_string(),
            r.b1.to_string(),
            r.n.to_string(),
            r.level.to_string(),
            r.method.clone(),
            r.replications.to_string(),
            r.frequency.to_string(),
            r.se.to_string(),
            r.anomalies.to_string(),
        ];
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

/// Parses [`to_tsv`] output back; `rejections` is recovered from the
/// frequency and the completed replications.
pub fn from_tsv(text: &str) -> Result<Vec<ExperimentReport>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty TSV")?;
    if header.split('\t').collect::<Vec<_>>() != TSV_HEADER {
        return Err(format!("unexpected header {header:?}"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != TSV_HEADER.len() {
                return Err(format!("row {}: expected {} fields", i + 2, TSV_HEADER.len()));
            }
            let bad = |k: usize| format!("row {}: bad {}", i + 2, TSV_HEADER[k]);
            let real = |k: usize| f[k].parse::<f64>().map_err(|_| bad(k));
            let int = |k: usize| f[k].parse::<usize>().map_err(|_| bad(k));
            let replications = int(7)?;
            let anomalies = int(10)?;
            let frequency = real(8)?;
            Ok(ExperimentReport {
                a: real(0)?,
                phi: real(1)?,
                nu: real(2)?,
                b1: real(3)?,
                n: int(4)?,
                level: real(5)?,
                method: f[6].to_string(),
                replications,
                rejections: (frequency * (replications - anomalies) as f64).round() as usize,
                frequency,
                se: real(9)?,
                anomalies,
            })
        })
        .collect()
}

pub fn to_json(reports: &[ExperimentReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialise")
}
