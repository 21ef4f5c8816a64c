//! IDX tensor format (big-endian), as used by MNIST.
//!
//! Magic `0x00000803` marks a 3-D uint8 tensor of images, `0x00000801` a
//! 1-D uint8 label vector. When loading an images file, a labels file named
//! by the conventional `images-idx3` -> `labels-idx1` substitution is picked
//! up automatically if it exists next to it.

use std::path::Path;

use crate::error::{Error, Result};

use super::{read_file, PointSet};

const MAGIC_IMAGES: u32 = 0x0000_0803;
const MAGIC_LABELS: u32 = 0x0000_0801;

pub fn load(path: &Path, scale: bool) -> Result<PointSet> {
    let bytes = read_file(path)?;
    let (magic, rest) = split_u32(&bytes, path)?;
    if magic != MAGIC_IMAGES {
        return Err(Error::format(
            "idx",
            path,
            format!("magic {magic:#010x}, expected {MAGIC_IMAGES:#010x} (3-D uint8 images)"),
        ));
    }
    let (n, rest) = split_u32(rest, path)?;
    let (rows, rest) = split_u32(rest, path)?;
    let (cols, payload) = split_u32(rest, path)?;
    let (n, rows, cols) = (n as usize, rows as usize, cols as usize);
    let expected = n * rows * cols;
    if payload.len() != expected {
        return Err(Error::format(
            "idx",
            path,
            format!("payload {} bytes, expected {}", payload.len(), expected),
        ));
    }
    let scale_by = if scale { 1.0 / 255.0 } else { 1.0 };
    let data: Vec<f64> = payload.iter().map(|&b| b as f64 * scale_by).collect();

    let labels = match labels_path(path) {
        Some(lp) if lp.exists() => Some(load_labels(&lp, n)?),
        _ => None,
    };
    PointSet::new(data, rows * cols, labels, path.display().to_string())
}

fn load_labels(path: &Path, expected_n: usize) -> Result<Vec<i64>> {
    let bytes = read_file(path)?;
    let (magic, rest) = split_u32(&bytes, path)?;
    if magic != MAGIC_LABELS {
        return Err(Error::format(
            "idx",
            path,
            format!("magic {magic:#010x}, expected {MAGIC_LABELS:#010x} (labels)"),
        ));
    }
    let (n, payload) = split_u32(rest, path)?;
    if n as usize != expected_n {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {} images",
            n, expected_n
        )));
    }
    if payload.len() != n as usize {
        return Err(Error::format(
            "idx",
            path,
            format!("label payload {} bytes, expected {}", payload.len(), n),
        ));
    }
    Ok(payload.iter().map(|&b| b as i64).collect())
}

fn labels_path(images: &Path) -> Option<std::path::PathBuf> {
    let name = images.file_name()?.to_str()?;
    if !name.contains("images-idx3") {
        return None;
    }
    let labels = name.replace("images-idx3", "labels-idx1");
    Some(images.with_file_name(labels))
}

fn split_u32<'a>(bytes: &'a [u8], path: &Path) -> Result<(u32, &'a [u8])> {
    if bytes.len() < 4 {
        return Err(Error::format("idx", path, "truncated header"));
    }
    let v = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
    Ok((v, &bytes[4..]))
}
