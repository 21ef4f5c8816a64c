//! Synthetic datasets of known intrinsic dimension and a noise transform
//! that raises the dimension of a real dataset by a controlled amount.
//!
//! All generators embed a low-dimensional sample through a seeded random
//! orthonormal map, which preserves pairwise distances exactly (up to
//! rounding), so the intrinsic dimension of the output equals that of the
//! pre-embedding sample by construction.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::PointSet;
use crate::error::{Error, Result};

/// Shape of manifold to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldKind {
    /// Uniform on the unit d-cube.
    Hypercube,
    /// Uniform on the surface of the unit d-sphere (which lives in d+1
    /// pre-embedding coordinates).
    Hypersphere,
    /// Uniform on the unit d-cube, embedded and then shifted by a random
    /// offset.
    Affine,
}

impl ManifoldKind {
    fn pre_embedding_dim(self, d: usize) -> usize {
        match self {
            ManifoldKind::Hypersphere => d + 1,
            _ => d,
        }
    }
}

/// Recipe for a synthetic dataset with known intrinsic dimension `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub kind: ManifoldKind,
    /// Intrinsic dimension.
    pub d: usize,
    /// Ambient dimension N >= d (N >= d+1 for hyperspheres).
    pub ambient_dim: usize,
    pub n: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn describe(&self) -> String {
        format!(
            "{:?} d={} N={} n={} seed={}",
            self.kind, self.d, self.ambient_dim, self.n, self.seed
        )
    }
}

/// Hypercube-noise recipe for raising the dimension of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Dimension of the noise hypercube.
    pub d_noise: usize,
    pub mode: NoiseMode,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// Add `B z` with a fixed random orthonormal basis B and per-row
    /// uniform z. Outputs are not clipped: clipping would collapse the
    /// cube's corners and lower its dimension.
    Add,
    /// Overwrite a fixed random set of `d_noise` coordinates with fresh
    /// uniform draws per row.
    ReplacePixels,
}

/// Generate a synthetic dataset. Deterministic per seed and independent of
/// worker count: each row derives its own generator stream.
pub fn generate(spec: &SyntheticSpec) -> Result<PointSet> {
    let pre_dim = spec.kind.pre_embedding_dim(spec.d);
    if spec.d == 0 || spec.n == 0 {
        return Err(Error::InvalidParam("d and n must be at least 1".into()));
    }
    if pre_dim > spec.ambient_dim {
        return Err(Error::InvalidParam(format!(
            "{:?} of intrinsic dimension {} needs ambient dimension >= {}, got {}",
            spec.kind, spec.d, pre_dim, spec.ambient_dim
        )));
    }

    // identity embedding when the cube already fills the ambient space,
    // so coordinates stay in [0,1]
    let basis = if pre_dim == spec.ambient_dim {
        identity_basis(spec.ambient_dim)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(u64::MAX); // basis stream, disjoint from row streams
        orthonormal_basis(spec.ambient_dim, pre_dim, &mut rng)
    };
    let offset: Vec<f64> = match spec.kind {
        ManifoldKind::Affine => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(u64::MAX - 1);
            (0..spec.ambient_dim).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect()
        }
        _ => vec![0.0; spec.ambient_dim],
    };

    let big_n = spec.ambient_dim;
    let mut data = vec![0.0f64; spec.n * big_n];
    data.par_chunks_mut(big_n).enumerate().for_each(|(row, out)| {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(row as u64);
        let mut pre = vec![0.0f64; pre_dim];
        match spec.kind {
            ManifoldKind::Hypercube | ManifoldKind::Affine => {
                for u in pre.iter_mut() {
                    *u = rng.gen::<f64>();
                }
            }
            ManifoldKind::Hypersphere => {
                // normalized Gaussian is uniform on the sphere
                loop {
                    let mut norm_sq = 0.0;
                    for u in pre.iter_mut() {
                        *u = gaussian(&mut rng);
                        norm_sq += *u * *u;
                    }
                    if norm_sq > 1e-12 {
                        let inv = norm_sq.sqrt().recip();
                        for u in pre.iter_mut() {
                            *u *= inv;
                        }
                        break;
                    }
                }
            }
        }
        embed(&basis, &pre, out);
        for (o, &c) in out.iter_mut().zip(&offset) {
            *o += c;
        }
    });

    PointSet::new(data, big_n, None, spec.describe())
}

/// Add hypercube noise to every row, exactly once per row.
pub fn add_hypercube_noise(ps: &PointSet, spec: &NoiseSpec) -> Result<PointSet> {
    let big_n = ps.dim();
    if spec.d_noise == 0 || spec.d_noise > big_n {
        return Err(Error::InvalidParam(format!(
            "noise dimension {} outside 1..={}",
            spec.d_noise, big_n
        )));
    }
    let mut data = ps.data().to_vec();
    match spec.mode {
        NoiseMode::Add => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(u64::MAX);
            let basis = orthonormal_basis(big_n, spec.d_noise, &mut rng);
            data.par_chunks_mut(big_n).enumerate().for_each(|(row, out)| {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                rng.set_stream(row as u64);
                let mut z = vec![0.0f64; spec.d_noise];
                for v in z.iter_mut() {
                    *v = rng.gen::<f64>();
                }
                for (col, &zc) in z.iter().enumerate() {
                    let col_vec = &basis[col * big_n..(col + 1) * big_n];
                    for (o, &b) in out.iter_mut().zip(col_vec) {
                        *o += zc * b;
                    }
                }
            });
        }
        NoiseMode::ReplacePixels => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(u64::MAX);
            let mut positions =
                rand::seq::index::sample(&mut rng, big_n, spec.d_noise).into_vec();
            positions.sort_unstable();
            data.par_chunks_mut(big_n).enumerate().for_each(|(row, out)| {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                rng.set_stream(row as u64);
                for &p in &positions {
                    out[p] = rng.gen::<f64>();
                }
            });
        }
    }
    PointSet::new(
        data,
        big_n,
        ps.labels().map(|l| l.to_vec()),
        format!("{} +noise d={} {:?}", ps.name(), spec.d_noise, spec.mode),
    )
}

/// Column-major orthonormal basis (`cols` columns of length `rows`),
/// obtained by twice-reorthogonalized Gram-Schmidt on a seeded Gaussian
/// matrix with a deterministic column order.
pub fn orthonormal_basis(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    assert!(cols <= rows, "cannot orthonormalize {cols} columns in {rows} rows");
    let mut basis = vec![0.0f64; cols * rows];
    for col in 0..cols {
        // gaussian draw, retried in the vanishing-probability event of
        // (numerical) linear dependence
        loop {
            {
                let column = &mut basis[col * rows..(col + 1) * rows];
                for v in column.iter_mut() {
                    *v = gaussian(rng);
                }
            }
            let mut ok = true;
            for _pass in 0..2 {
                for prev in 0..col {
                    let mut dot = 0.0;
                    for r in 0..rows {
                        dot += basis[col * rows + r] * basis[prev * rows + r];
                    }
                    for r in 0..rows {
                        basis[col * rows + r] -= dot * basis[prev * rows + r];
                    }
                }
                let norm: f64 = basis[col * rows..(col + 1) * rows]
                    .iter()
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt();
                if norm < 1e-8 {
                    ok = false;
                    break;
                }
                for v in &mut basis[col * rows..(col + 1) * rows] {
                    *v /= norm;
                }
            }
            if ok {
                break;
            }
        }
    }
    basis
}

fn identity_basis(dim: usize) -> Vec<f64> {
    let mut basis = vec![0.0f64; dim * dim];
    for i in 0..dim {
        basis[i * dim + i] = 1.0;
    }
    basis
}

/// x = Q u for a column-major basis Q.
fn embed(basis: &[f64], pre: &[f64], out: &mut [f64]) {
    let rows = out.len();
    out.fill(0.0);
    for (col, &u) in pre.iter().enumerate() {
        let col_vec = &basis[col * rows..(col + 1) * rows];
        for (o, &b) in out.iter_mut().zip(col_vec) {
            *o += u * b;
        }
    }
}

/// Pre-embedding coordinates recovered through the transpose of the same
/// seeded basis; exact for hypercube samples up to rounding.
pub fn recover_pre_embedding(spec: &SyntheticSpec, ps: &PointSet) -> Result<Vec<f64>> {
    let pre_dim = spec.kind.pre_embedding_dim(spec.d);
    if ps.dim() != spec.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "point set has dimension {}, spec says {}",
            ps.dim(),
            spec.ambient_dim
        )));
    }
    let basis = if pre_dim == spec.ambient_dim {
        identity_basis(spec.ambient_dim)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(u64::MAX);
        orthonormal_basis(spec.ambient_dim, pre_dim, &mut rng)
    };
    let rows = spec.ambient_dim;
    let mut pre = vec![0.0f64; ps.len() * pre_dim];
    for i in 0..ps.len() {
        let x = ps.row(i);
        for col in 0..pre_dim {
            let col_vec = &basis[col * rows..(col + 1) * rows];
            pre[i * pre_dim + col] = x.iter().zip(col_vec).map(|(a, b)| a * b).sum();
        }
    }
    Ok(pre)
}

/// Standard normal via Box-Muller; two uniforms per draw keeps the stream
/// layout simple and deterministic.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u1: f64 = rng.gen();
        let u2: f64 = rng.gen();
        if u1 > f64::MIN_POSITIVE {
            return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        }
    }
}
