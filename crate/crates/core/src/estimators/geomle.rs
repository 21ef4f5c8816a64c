//! Bootstrap-regression MLE.
//!
//! For each bootstrap resample of the dataset and each neighborhood size k
//! in [k1, k2], compute the arithmetic-mean MLE estimate and the mean
//! distance to the k-th neighbor, then regress the estimates on the radii
//! with a low-degree polynomial. The value extrapolated to radius zero
//! removes the finite-neighborhood bias that plain MLE picks up from
//! curvature and density variation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::PointSet;
use crate::error::{Error, Result};
use crate::knn::{all_anchors, knn};

use super::mle::{mle_global, Aggregation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoMleParams {
    /// Smallest neighborhood size (k1 >= 2).
    pub k1: usize,
    /// Largest neighborhood size (k2 > k1).
    pub k2: usize,
    /// Number of bootstrap resamples (>= 2).
    pub bootstraps: usize,
    /// Polynomial degree of the radius regression.
    pub degree: usize,
    pub seed: u64,
}

impl Default for GeoMleParams {
    fn default() -> Self {
        GeoMleParams {
            k1: 20,
            k2: 55,
            bootstraps: 20,
            degree: 2,
            seed: 0,
        }
    }
}

/// Regression-corrected MLE estimate of `ps`, extrapolated to radius zero
/// and clamped positive.
///
/// Each resample draws `n` row indices with replacement; the distinct rows
/// form the subset on which neighbors are searched, so the subset must keep
/// more than `k2` distinct rows.
///
/// The per-k means carry the (k-2)/(k-1) debias factor: the arithmetic mean
/// of local estimates is inflated by (k-1)/(k-2) under the Poisson model,
/// a pure k artifact that would masquerade as radius dependence and blow up
/// the extrapolation to radius zero.
pub fn geomle(ps: &PointSet, params: &GeoMleParams) -> Result<f64> {
    if params.k1 < 3 || params.k2 <= params.k1 {
        return Err(Error::InvalidParam(format!(
            "need 3 <= k1 < k2, got k1={} k2={}",
            params.k1, params.k2
        )));
    }
    if params.bootstraps < 2 {
        return Err(Error::InvalidParam("need at least 2 bootstraps".into()));
    }
    let n = ps.len();

    let mut radii = Vec::with_capacity(params.bootstraps * (params.k2 - params.k1 + 1));
    let mut estimates = Vec::with_capacity(radii.capacity());
    for b in 0..params.bootstraps {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(b as u64 + 1);
        let mut indices: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        indices.sort_unstable();
        indices.dedup();
        if indices.len() <= params.k2 {
            return Err(Error::InvalidParam(format!(
                "bootstrap subset of {} distinct rows cannot support k2={}",
                indices.len(),
                params.k2
            )));
        }
        let subset = ps.select(&indices, format!("{} bootstrap {b}", ps.name()))?;
        let table = knn(&subset, &all_anchors(&subset), params.k2)?;
        for k in params.k1..=params.k2 {
            let (est, _) = mle_global(&table, k, Aggregation::Levina)?;
            let debiased = est * (k - 2) as f64 / (k - 1) as f64;
            let mean_radius = (0..table.anchor_count())
                .map(|i| table.distances_of(i)[k - 1])
                .sum::<f64>()
                / table.anchor_count() as f64;
            radii.push(mean_radius);
            estimates.push(debiased);
        }
    }

    let coeffs = polyfit(&radii, &estimates, params.degree)?;
    Ok(coeffs[0].max(1e-6))
}

/// Least-squares polynomial fit, returning coefficients from the constant
/// term up. Radii are rescaled by their maximum for conditioning; the
/// constant term is unaffected.
fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Result<Vec<f64>> {
    let n = xs.len();
    if n <= degree {
        return Err(Error::InvalidParam(format!(
            "{n} points cannot determine a degree-{degree} polynomial"
        )));
    }
    let x_scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let spread = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    if x_scale == 0.0 || spread.1 - spread.0 <= f64::EPSILON * x_scale {
        return Err(Error::Degenerate(
            "regression radii are all equal; polynomial fit is underdetermined".into(),
        ));
    }

    let terms = degree + 1;
    // normal equations on scaled x
    let mut ata = vec![0.0f64; terms * terms];
    let mut aty = vec![0.0f64; terms];
    for (&x, &y) in xs.iter().zip(ys) {
        let xs_scaled = x / x_scale;
        let mut powers = vec![1.0; terms];
        for p in 1..terms {
            powers[p] = powers[p - 1] * xs_scaled;
        }
        for i in 0..terms {
            aty[i] += powers[i] * y;
            for j in 0..terms {
                ata[i * terms + j] += powers[i] * powers[j];
            }
        }
    }
    let solution = solve_dense(&mut ata, &mut aty, terms)?;
    // only coefficient 0 is consumed unscaled; rescale the rest anyway
    Ok(solution
        .iter()
        .enumerate()
        .map(|(p, c)| c / x_scale.powi(p as i32))
        .collect())
}

/// Gaussian elimination with partial pivoting on a dense system.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Result<Vec<f64>> {
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap();
        if a[pivot_row * n + col].abs() < 1e-12 {
            return Err(Error::Degenerate("singular regression system".into()));
        }
        if pivot_row != col {
            for c in 0..n {
                a.swap(col * n + c, pivot_row * n + c);
            }
            b.swap(col, pivot_row);
        }
        for row in col + 1..n {
            let factor = a[row * n + col] / a[col * n + col];
            for c in col..n {
                a[row * n + c] -= factor * a[col * n + c];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row * n + c] * x[c];
        }
        x[row] = acc / a[row * n + row];
    }
    Ok(x)
}
