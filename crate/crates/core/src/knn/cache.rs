//! Neighbor-table persistence.
//!
//! A cached table lets estimator sweeps over several `k` values reuse one
//! search at the maximum `k`. Layout: a `<path>.meta` text header with the
//! shape and the checksum of the dataset the table was computed against,
//! and a binary payload of little-endian f64 distances, u32 neighbor
//! indices and u32 anchor indices, in that order.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::NeighborTable;

pub fn save_table(table: &NeighborTable, dataset_checksum: u64, path: &Path) -> Result<()> {
    let m = table.anchor_count();
    let k = table.k();
    let mut bytes = Vec::with_capacity(m * k * 12 + m * 4);
    for d in &table.distances {
        bytes.extend_from_slice(&d.to_le_bytes());
    }
    for n in &table.neighbors {
        bytes.extend_from_slice(&n.to_le_bytes());
    }
    for a in &table.anchors {
        bytes.extend_from_slice(&a.to_le_bytes());
    }
    std::fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
    let meta = format!(
        "format=knn-cache-v1\nanchors={m}\nk={k}\nchecksum={dataset_checksum:016x}\n"
    );
    let mp = meta_path(path);
    std::fs::write(&mp, meta).map_err(|e| Error::io(&mp, e))
}

/// Load a cached table, validating it was computed on the dataset with the
/// given checksum.
pub fn load_table(path: &Path, dataset_checksum: u64) -> Result<NeighborTable> {
    let mp = meta_path(path);
    let meta = std::fs::read_to_string(&mp).map_err(|e| Error::io(&mp, e))?;
    let mut m = None;
    let mut k = None;
    let mut checksum = None;
    for line in meta.lines() {
        match line.trim().split_once('=') {
            Some(("anchors", v)) => m = v.parse::<usize>().ok(),
            Some(("k", v)) => k = v.parse::<usize>().ok(),
            Some(("checksum", v)) => checksum = u64::from_str_radix(v, 16).ok(),
            _ => {}
        }
    }
    let (m, k, checksum) = match (m, k, checksum) {
        (Some(m), Some(k), Some(c)) => (m, k, c),
        _ => return Err(Error::format("knn-cache", &mp, "missing anchors/k/checksum")),
    };
    if checksum != dataset_checksum {
        return Err(Error::InvalidParam(format!(
            "neighbor cache was built for a different dataset \
             (checksum {checksum:016x}, dataset {dataset_checksum:016x})"
        )));
    }
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let expected = m * k * 12 + m * 4;
    if bytes.len() != expected {
        return Err(Error::format(
            "knn-cache",
            path,
            format!("{} bytes, expected {expected}", bytes.len()),
        ));
    }
    let (dist_bytes, rest) = bytes.split_at(m * k * 8);
    let (nbr_bytes, anchor_bytes) = rest.split_at(m * k * 4);
    let distances = dist_bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let neighbors = nbr_bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let anchors = anchor_bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(NeighborTable {
        anchors,
        k,
        distances,
        neighbors,
    })
}

fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".meta");
    PathBuf::from(s)
}
