//! Point-cloud data model, ingestion and dataset transforms.
//!
//! Every loader produces a [`PointSet`]: a dense row-major matrix with one
//! row per record, pixels flattened row-major and channel-interleaved for
//! multi-channel images. Byte-valued sources are scaled to `[0,1]` unless
//! the source disables scaling.

mod cifar;
mod csv;
mod idx;
mod imagedir;
mod raw;

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use rand::seq::index::sample as index_sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub use raw::save_raw;

/// A set of `n` points in `N` ambient dimensions, optionally labeled.
///
/// The matrix is immutable after construction and safe to share read-only
/// across worker threads. Arithmetic downstream is all in `f64`; sources
/// stored at lower precision are widened on load.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    data: Vec<f64>,
    dim: usize,
    labels: Option<Vec<i64>>,
    name: String,
}

impl PointSet {
    /// Build a point set from row-major data, validating the container
    /// invariants: at least one row and one column, all entries finite,
    /// label length equal to the row count.
    pub fn new(
        data: Vec<f64>,
        dim: usize,
        labels: Option<Vec<i64>>,
        name: impl Into<String>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParam("ambient dimension must be >= 1".into()));
        }
        if data.is_empty() || data.len() % dim != 0 {
            return Err(Error::DimensionMismatch(format!(
                "data length {} is not a positive multiple of dim {}",
                data.len(),
                dim
            )));
        }
        let n = data.len() / dim;
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{} labels for {} rows",
                    l.len(),
                    n
                )));
            }
        }
        if !data.par_iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParam(
                "point data contains NaN or infinite entries".into(),
            ));
        }
        Ok(PointSet {
            data,
            dim,
            labels,
            name: name.into(),
        })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    /// Ambient dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    /// Provenance string (source path, generator recipe, transform trail).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Copy of this point set containing only the given rows, in the given
    /// order. Labels follow their rows.
    pub fn select(&self, indices: &[usize], name: impl Into<String>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySelection("no rows selected".into()));
        }
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i]).collect());
        Ok(PointSet {
            data,
            dim: self.dim,
            labels,
            name: name.into(),
        })
    }
}

/// Supported on-disk dataset formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    /// IDX tensor files (big-endian, uint8 payload), e.g. MNIST.
    Idx,
    /// CIFAR-10 binary batches (1 label byte + 3072 channel-planar bytes).
    Cifar10Binary,
    /// Comma-separated decimals, one point per line. `labeled` declares an
    /// integer label in the final column.
    Csv { labeled: bool },
    /// Little-endian f32 row-major tensor with a sidecar text header.
    RawTensor,
    /// Directory of image files, decoded to 8-bit and flattened.
    ImageDirectory,
}

/// A dataset location plus the options that control parsing.
#[derive(Debug, Clone)]
pub struct DatasetSource {
    pub kind: SourceKind,
    pub path: PathBuf,
    /// Divide byte-valued pixels by 255. Irrelevant to the estimators (they
    /// are scale-invariant) but recorded for report reproducibility.
    pub scale_to_unit: bool,
}

impl DatasetSource {
    pub fn new(kind: SourceKind, path: impl Into<PathBuf>) -> Self {
        DatasetSource {
            kind,
            path: path.into(),
            scale_to_unit: true,
        }
    }

    pub fn scale_to_unit(mut self, scale: bool) -> Self {
        self.scale_to_unit = scale;
        self
    }
}

/// Load a dataset from disk into a [`PointSet`].
///
/// One row per image/record; pixels flattened row-major and
/// channel-interleaved for multi-channel images.
pub fn load(source: &DatasetSource) -> Result<PointSet> {
    match source.kind {
        SourceKind::Idx => idx::load(&source.path, source.scale_to_unit),
        SourceKind::Cifar10Binary => cifar::load(&source.path, source.scale_to_unit),
        SourceKind::Csv { labeled } => csv::load(&source.path, labeled),
        SourceKind::RawTensor => raw::load(&source.path),
        SourceKind::ImageDirectory => imagedir::load(&source.path, source.scale_to_unit),
    }
}

/// Resample every image row with nearest-neighbor interpolation.
///
/// Each row of `ps` must reshape to `src_shape = (h, w, c)` with channels
/// interleaved. The destination pixel `(i, j, ch)` reads the source pixel at
/// `(floor(i*src_h/dst_h), floor(j*src_w/dst_w), floor(ch*src_c/dst_c))`, so
/// resizing to the source shape is the identity and channel replication
/// (e.g. grayscale to RGB) reads channel 0.
pub fn resize_nearest(
    ps: &PointSet,
    h: usize,
    w: usize,
    c: usize,
    src_shape: (usize, usize, usize),
) -> Result<PointSet> {
    let (sh, sw, sc) = src_shape;
    if sh * sw * sc != ps.dim() {
        return Err(Error::DimensionMismatch(format!(
            "source shape {}x{}x{} does not match ambient dimension {}",
            sh,
            sw,
            sc,
            ps.dim()
        )));
    }
    if h == 0 || w == 0 || c == 0 {
        return Err(Error::InvalidParam("target shape must be nonzero".into()));
    }
    // Precompute the flat source index for every destination position.
    let mut map = Vec::with_capacity(h * w * c);
    for i in 0..h {
        let si = i * sh / h;
        for j in 0..w {
            let sj = j * sw / w;
            for ch in 0..c {
                let sch = ch * sc / c;
                map.push((si * sw + sj) * sc + sch);
            }
        }
    }
    let dim_out = h * w * c;
    let mut data = vec![0.0; ps.len() * dim_out];
    data.par_chunks_mut(dim_out)
        .enumerate()
        .for_each(|(r, out)| {
            let src = ps.row(r);
            for (o, &m) in out.iter_mut().zip(&map) {
                *o = src[m];
            }
        });
    Ok(PointSet {
        data,
        dim: dim_out,
        labels: ps.labels.clone(),
        name: format!("{} resized {}x{}x{}", ps.name, h, w, c),
    })
}

/// Keep only the rows whose label is in `classes`, preserving order.
pub fn filter_classes(ps: &PointSet, classes: &[i64]) -> Result<PointSet> {
    let labels = ps
        .labels()
        .ok_or_else(|| Error::InvalidParam("dataset has no labels to filter on".into()))?;
    let indices: Vec<usize> = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| classes.contains(l))
        .map(|(i, _)| i)
        .collect();
    if indices.is_empty() {
        return Err(Error::EmptySelection(format!(
            "no rows with labels {:?}",
            classes
        )));
    }
    ps.select(&indices, format!("{} classes {:?}", ps.name, classes))
}

/// Draw `m` rows uniformly without replacement, deterministically for a
/// fixed seed. Selected rows keep their original relative order, so `m = n`
/// returns a copy in the input order.
pub fn subsample(ps: &PointSet, m: usize, seed: u64) -> Result<PointSet> {
    let n = ps.len();
    if m == 0 || m > n {
        return Err(Error::InvalidParam(format!(
            "subsample size {} out of range 1..={}",
            m, n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices = index_sample(&mut rng, n, m).into_vec();
    indices.sort_unstable();
    ps.select(&indices, format!("{} subsample {}@{}", ps.name, m, seed))
}

/// Remove exact duplicate rows (bitwise equality), keeping the first
/// occurrence. Returns the cleaned set and the number of rows removed.
pub fn deduplicate(ps: &PointSet) -> (PointSet, usize) {
    let n = ps.len();
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut keep = Vec::with_capacity(n);
    for i in 0..n {
        let row = ps.row(i);
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for v in row {
            v.to_bits().hash(&mut h);
        }
        let key = h.finish();
        let bucket = buckets.entry(key).or_default();
        let dup = bucket.iter().any(|&j| rows_bit_equal(ps.row(j), row));
        if !dup {
            bucket.push(i);
            keep.push(i);
        }
    }
    let removed = n - keep.len();
    if removed == 0 {
        return (ps.clone(), 0);
    }
    let out = ps
        .select(&keep, ps.name.clone())
        .expect("dedup keeps at least the first row");
    (out, removed)
}

fn rows_bit_equal(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

/// FNV-1a over the raw data bytes plus the shape; identifies a dataset for
/// neighbor-table cache validation.
pub fn checksum(ps: &PointSet) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    feed(&(ps.len() as u64).to_le_bytes());
    feed(&(ps.dim() as u64).to_le_bytes());
    for v in &ps.data {
        feed(&v.to_bits().to_le_bytes());
    }
    h
}

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}
