//! Sweep axes: `from:to:points`, `from:to:points:log` or an explicit
//! comma-separated list.

use crate::error::{CliError, CliResult};

pub fn linspace(from: f64, to: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..points).map(|i| from + (to - from) * i as f64 / (points - 1) as f64).collect(),
    }
}

pub fn logspace(from: f64, to: f64, points: usize) -> Vec<f64> {
    linspace(from.log10(), to.log10(), points).into_iter().map(|e| 10f64.powf(e)).collect()
}

pub fn parse_axis(name: &str, text: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Usage(format!("axis {name} = {text:?}: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("{s:?} is not a number")));
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let log = match parts.len() {
            3 => false,
            4 if parts[3].trim() == "log" => true,
            _ => return Err(bad("expected from:to:points or from:to:points:log")),
        };
        let (from, to) = (num(parts[0])?, num(parts[1])?);
        let points: usize = parts[2].trim().parse().map_err(|_| bad("points must be a positive integer"))?;
        if points == 0 {
            return Err(bad("points must be >= 1"));
        }
        if log {
            if !(from > 0.0 && to > 0.0) {
                return Err(bad("log axes need positive bounds"));
            }
            logspace(from, to, points)
        } else {
            linspace(from, to, points)
        }
    } else {
        text.split(',').map(num).collect::<CliResult<Vec<f64>>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite and at least one point is needed"));
    }
    Ok(values)
}
