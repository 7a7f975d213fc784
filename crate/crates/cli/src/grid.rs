//! Simulation grid files.
//!
//! One cell per line: `a phi nu b1 n level methods`, whitespace separated,
//! where `level` is the significance level and `methods` is a
//! comma-separated subset of `EL1,EL2,NA`. `#` starts a comment.

use predreg::dgp::DgpConfig;
use predreg::experiment::{Cell, Method};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct GridLine {
    pub line: usize,
    pub cell: Cell,
    pub level: f64,
    pub methods: Vec<Method>,
}

#[derive(Debug, Error)]
#[error("{}", .errors.iter().map(|(l, m)| format!("line {l}: {m}")).collect::<Vec<_>>().join("\n"))]
pub struct GridError {
    pub errors: Vec<(usize, String)>,
}

fn parse_line(text: &str) -> Result<Option<(Cell, f64, Vec<Method>)>, String> {
    let body = text.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.len() != 7 {
        return Err(format!("expected 7 fields `a phi nu b1 n level methods`, found {}", fields.len()));
    }
    let real = |i: usize, name: &str| -> Result<f64, String> {
        fields[i]
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("bad {name} {:?}", fields[i]))
    };
    let (a, phi, nu, b1) = (real(0, "a")?, real(1, "phi")?, real(2, "nu")?, real(3, "b1")?);
    let n: usize = fields[4].parse().map_err(|_| format!("bad n {:?}", fields[4]))?;
    let level = real(5, "level")?;
    if !(level > 0.0 && level < 1.0) {
        return Err(format!("level must lie in (0, 1), got {level}"));
    }
    let methods = fields[6]
        .split(',')
        .map(|m| m.parse::<Method>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let cell = Cell::new(a, phi, nu, b1, n);
    DgpConfig::table_cell(a, phi, nu, b1, n).validate().map_err(|e| e.to_string())?;
    Ok(Some((cell, level, methods)))
}

/// Parses a whole grid, reporting every malformed line.
pub fn parse_grid(text: &str) -> Result<Vec<GridLine>, GridError> {
    let mut lines = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        match parse_line(raw) {
            Ok(Some((cell, level, methods))) => lines.push(GridLine { line: i + 1, cell, level, methods }),
            Ok(None) => {}
            Err(msg) => errors.push((i + 1, msg)),
        }
    }
    if lines.is_empty() && errors.is_empty() {
        errors.push((0, "grid has no cells".to_string()));
    }
    if errors.is_empty() {
        Ok(lines)
    } else {
        Err(GridError { errors })
    }
}
