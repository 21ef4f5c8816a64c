//! CSV points: one point per line, comma-separated decimals, optionally a
//! final integer label column.

use std::path::Path;

use crate::error::{Error, Result};

use super::PointSet;

pub fn load(path: &Path, labeled: bool) -> Result<PointSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut data = Vec::new();
    let mut labels = Vec::new();
    let mut dim = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let n_coords = if labeled {
            fields.len().saturating_sub(1)
        } else {
            fields.len()
        };
        if n_coords == 0 {
            return Err(Error::format(
                "csv",
                path,
                format!("line {}: no coordinate columns", lineno + 1),
            ));
        }
        match dim {
            None => dim = Some(n_coords),
            Some(d) if d != n_coords => {
                return Err(Error::DimensionMismatch(format!(
                    "line {}: {} columns, expected {}",
                    lineno + 1,
                    n_coords,
                    d
                )))
            }
            _ => {}
        }
        for f in &fields[..n_coords] {
            let v: f64 = f.parse().map_err(|_| {
                Error::format("csv", path, format!("line {}: bad number {f:?}", lineno + 1))
            })?;
            data.push(v);
        }
        if labeled {
            let f = fields[n_coords];
            let l: i64 = f.parse().map_err(|_| {
                Error::format("csv", path, format!("line {}: bad label {f:?}", lineno + 1))
            })?;
            labels.push(l);
        }
    }
    let dim = dim.ok_or_else(|| Error::format("csv", path, "no data lines"))?;
    PointSet::new(
        data,
        dim,
        labeled.then_some(labels),
        path.display().to_string(),
    )
}
