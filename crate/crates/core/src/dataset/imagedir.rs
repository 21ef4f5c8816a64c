//! Directory-of-images loader.
//!
//! Files are read in sorted name order and decoded to 8-bit; grayscale
//! images stay single-channel rather than being promoted to RGB. Every
//! image must share the shape of the first one.

use std::path::Path;

use image::ColorType;

use crate::error::{Error, Result};

use super::PointSet;

pub fn load(path: &Path, scale: bool) -> Result<PointSet> {
    let mut files: Vec<_> = std::fs::read_dir(path)
        .map_err(|e| Error::io(path, e))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::format("image-directory", path, "no files"));
    }

    let scale_by = if scale { 1.0 / 255.0 } else { 1.0 };
    let mut data = Vec::new();
    let mut shape: Option<(u32, u32, usize)> = None;
    for file in &files {
        let img = image::open(file)
            .map_err(|e| Error::format("image-directory", file, e.to_string()))?;
        let grayscale = matches!(
            img.color(),
            ColorType::L8 | ColorType::L16 | ColorType::La8 | ColorType::La16
        );
        let (w, h, channels, pixels): (u32, u32, usize, Vec<u8>) = if grayscale {
            let g = img.to_luma8();
            (g.width(), g.height(), 1, g.into_raw())
        } else {
            let rgb = img.to_rgb8();
            (rgb.width(), rgb.height(), 3, rgb.into_raw())
        };
        match shape {
            None => shape = Some((w, h, channels)),
            Some(s) if s != (w, h, channels) => {
                return Err(Error::DimensionMismatch(format!(
                    "{}: {}x{}x{} differs from first image {}x{}x{}",
                    file.display(),
                    w,
                    h,
                    channels,
                    s.0,
                    s.1,
                    s.2
                )))
            }
            _ => {}
        }
        data.extend(pixels.iter().map(|&b| b as f64 * scale_by));
    }
    let (w, h, channels) = shape.unwrap();
    PointSet::new(
        data,
        (w * h) as usize * channels,
        None,
        path.display().to_string(),
    )
}
