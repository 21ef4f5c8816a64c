//! CIFAR-10 binary batches.
//!
//! Each record is 3073 bytes: one label byte followed by 3072 pixel bytes
//! stored channel-planar (the full red plane, then green, then blue, each
//! 32x32 row-major). Rows come out channel-interleaved to match the rest of
//! the loaders. A path may name a single `.bin` file or a directory whose
//! `data_batch_*.bin` files are read in lexicographic order.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{read_file, PointSet};

const SIDE: usize = 32;
const CHANNELS: usize = 3;
const PIXELS: usize = SIDE * SIDE * CHANNELS;
const RECORD: usize = 1 + PIXELS;

pub fn load(path: &Path, scale: bool) -> Result<PointSet> {
    let files = batch_files(path)?;
    let mut data = Vec::new();
    let mut labels = Vec::new();
    let scale_by = if scale { 1.0 / 255.0 } else { 1.0 };
    for file in &files {
        let bytes = read_file(file)?;
        if bytes.is_empty() || bytes.len() % RECORD != 0 {
            return Err(Error::format(
                "cifar10-binary",
                file,
                format!("{} bytes is not a multiple of the {RECORD}-byte record", bytes.len()),
            ));
        }
        for record in bytes.chunks_exact(RECORD) {
            labels.push(record[0] as i64);
            let planar = &record[1..];
            // planar [c][y][x] -> interleaved [y][x][c]
            for yx in 0..SIDE * SIDE {
                for c in 0..CHANNELS {
                    data.push(planar[c * SIDE * SIDE + yx] as f64 * scale_by);
                }
            }
        }
    }
    PointSet::new(data, PIXELS, Some(labels), path.display().to_string())
}

fn batch_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .map(|n| n.starts_with("data_batch_") && n.ends_with(".bin"))
                    .unwrap_or(false)
            })
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Error::format(
                "cifar10-binary",
                path,
                "directory contains no data_batch_*.bin files",
            ));
        }
        Ok(files)
    } else {
        Ok(vec![path.to_path_buf()])
    }
}
