//! Raw tensor format: little-endian 32-bit floats, row-major, plus a
//! sidecar text header `<path>.meta` with `key=value` lines.
//!
//! Required header keys: `n`, `dim`. Optional: `labels` (a file of
//! little-endian i64, relative to the data file), `name`, and free-text
//! metadata keys such as `spec`, which are preserved but ignored on load.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{read_file, PointSet};

pub fn load(path: &Path) -> Result<PointSet> {
    let meta_path = meta_path(path);
    let meta = std::fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let mut n = None;
    let mut dim = None;
    let mut labels_file = None;
    let mut name = None;
    for line in meta.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::format(
                "raw-tensor",
                &meta_path,
                format!("bad header line {line:?}"),
            ));
        };
        match key.trim() {
            "n" => n = Some(parse_count(key, value, &meta_path)?),
            "dim" => dim = Some(parse_count(key, value, &meta_path)?),
            "labels" => labels_file = Some(value.trim().to_string()),
            "name" => name = Some(value.trim().to_string()),
            _ => {} // free-form metadata (e.g. generator spec)
        }
    }
    let n = n.ok_or_else(|| Error::format("raw-tensor", &meta_path, "missing n"))?;
    let dim = dim.ok_or_else(|| Error::format("raw-tensor", &meta_path, "missing dim"))?;

    let bytes = read_file(path)?;
    if bytes.len() != n * dim * 4 {
        return Err(Error::format(
            "raw-tensor",
            path,
            format!("{} bytes, expected {} (n={n}, dim={dim})", bytes.len(), n * dim * 4),
        ));
    }
    let data: Vec<f64> = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect();

    let labels = match labels_file {
        Some(rel) => {
            let lp = path.parent().unwrap_or(Path::new(".")).join(rel);
            let lbytes = read_file(&lp)?;
            if lbytes.len() != n * 8 {
                return Err(Error::format(
                    "raw-tensor",
                    &lp,
                    format!("{} label bytes, expected {}", lbytes.len(), n * 8),
                ));
            }
            Some(
                lbytes
                    .chunks_exact(8)
                    .map(|c| i64::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            )
        }
        None => None,
    };
    PointSet::new(data, dim, labels, name.unwrap_or_else(|| path.display().to_string()))
}

/// Write a point set in the raw tensor format. `extra_meta` lines (already
/// `key=value` shaped) are appended to the header; `load . save` round-trips
/// the data file bit-exactly.
pub fn save_raw(ps: &PointSet, path: &Path, extra_meta: &[(&str, String)]) -> Result<()> {
    let mut bytes = Vec::with_capacity(ps.data().len() * 4);
    for v in ps.data() {
        bytes.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    std::fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;

    let mut meta = String::new();
    let _ = writeln!(meta, "format=raw-tensor-v1");
    let _ = writeln!(meta, "n={}", ps.len());
    let _ = writeln!(meta, "dim={}", ps.dim());
    let _ = writeln!(meta, "name={}", ps.name());
    if let Some(labels) = ps.labels() {
        let labels_name = format!(
            "{}.labels",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("data")
        );
        let lp = path.with_file_name(&labels_name);
        let mut lbytes = Vec::with_capacity(labels.len() * 8);
        for l in labels {
            lbytes.extend_from_slice(&l.to_le_bytes());
        }
        std::fs::write(&lp, &lbytes).map_err(|e| Error::io(&lp, e))?;
        let _ = writeln!(meta, "labels={labels_name}");
    }
    for (k, v) in extra_meta {
        let _ = writeln!(meta, "{k}={v}");
    }
    let mp = meta_path(path);
    std::fs::write(&mp, meta).map_err(|e| Error::io(&mp, e))
}

fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".meta");
    PathBuf::from(s)
}

fn parse_count(key: &str, value: &str, path: &Path) -> Result<usize> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::format("raw-tensor", path, format!("bad {key}={value:?}")))
}
