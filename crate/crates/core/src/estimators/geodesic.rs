//! Geodesic-distribution estimator.
//!
//! Pools shortest-path distances over a kNN graph and fits the shape of
//! their histogram against the geodesic-distance density of a d-dimensional
//! hypersphere, `p(r) ~ sin^(d-1)(pi r / (2 r_mode))`, where the empirical
//! modal distance is aligned with the sphere's equator. The best d on a
//! fixed grid wins; only the left flank of the peak (bins at half the peak
//! count or more) enters the fit, since the right flank mixes in boundary
//! effects.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{subsample, PointSet};
use crate::error::{Error, Result};
use crate::knn::build_knn_graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicParams {
    /// Neighbor count of the graph.
    pub k: usize,
    /// Histogram bin count.
    pub bins: usize,
    /// Largest point count the graph is built on; bigger datasets are
    /// subsampled to this size first.
    pub sample_cap: usize,
    pub seed: u64,
}

impl Default for GeodesicParams {
    fn default() -> Self {
        GeodesicParams {
            k: 4,
            bins: 1000,
            sample_cap: 10_000,
            seed: 0,
        }
    }
}

const GRID_MIN: f64 = 1.0;
const GRID_MAX: f64 = 100.0;
const GRID_STEP: f64 = 0.05;

pub fn geodesic_id(ps: &PointSet, params: &GeodesicParams) -> Result<f64> {
    if params.bins < 4 {
        return Err(Error::InvalidParam("need at least 4 histogram bins".into()));
    }
    if params.sample_cap < 2 {
        return Err(Error::InvalidParam("sample cap must be at least 2".into()));
    }
    let capped;
    let working = if ps.len() > params.sample_cap {
        capped = subsample(ps, params.sample_cap, params.seed)?;
        &capped
    } else {
        ps
    };

    let graph = build_knn_graph(working, params.k)?;
    let component = graph.largest_component();
    if component.len() * 2 <= working.len() {
        return Err(Error::Degenerate(format!(
            "largest graph component holds {} of {} points; graph too disconnected",
            component.len(),
            working.len()
        )));
    }
    let sources: Vec<usize> = component.iter().map(|&v| v as usize).collect();

    // Two passes keep memory at O(bins) instead of O(sources * nodes):
    // first the global maximum to fix the bin width, then the counts.
    let max_distance = sources
        .par_iter()
        .map(|&s| {
            graph
                .shortest_paths(s)
                .into_iter()
                .filter(|d| d.is_finite())
                .fold(0.0f64, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    if max_distance <= 0.0 {
        return Err(Error::Degenerate("no positive geodesic distances".into()));
    }

    let bins = params.bins;
    let counts: Vec<u64> = sources
        .par_iter()
        .fold(
            || vec![0u64; bins],
            |mut acc, &s| {
                for d in graph.shortest_paths(s) {
                    if d.is_finite() && d > 0.0 {
                        let b = ((d / max_distance) * bins as f64) as usize;
                        acc[b.min(bins - 1)] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    fit_sphere_dimension(&counts, max_distance)
}

/// Grid-search the sphere dimension best matching the histogram counts.
///
/// The peak is located on a smoothed histogram, with near-ties resolved
/// toward the largest distance: a flat distance distribution (a circle) has
/// no real interior mode, and anchoring it at the right edge lets the
/// constant d=1 shape fit the whole histogram.
fn fit_sphere_dimension(counts: &[u64], max_distance: f64) -> Result<f64> {
    let bins = counts.len();
    let smoothed = moving_average(counts, (bins / 50).max(3));
    let smooth_max = smoothed.iter().fold(0.0f64, |m, &v| m.max(v));
    if smooth_max <= 0.0 {
        return Err(Error::Degenerate("empty histogram".into()));
    }
    let peak = (0..bins)
        .rev()
        .find(|&j| smoothed[j] >= 0.99 * smooth_max)
        .unwrap();
    let peak_height = smoothed[peak];
    let r_mode = (peak as f64 + 0.5) * max_distance / bins as f64;

    // left flank at half maximum or above; zero-count bins cannot enter the
    // log fit
    let window: Vec<usize> = (0..=peak)
        .filter(|&j| 2.0 * smoothed[j] >= peak_height && counts[j] > 0)
        .collect();
    if window.len() < 2 {
        return Err(Error::Degenerate(
            "fitting window around the histogram peak is empty".into(),
        ));
    }

    let log_density: Vec<f64> = window.iter().map(|&j| (counts[j] as f64).ln()).collect();
    let log_sin: Vec<f64> = window
        .iter()
        .map(|&j| {
            let r = (j as f64 + 0.5) * max_distance / bins as f64;
            (std::f64::consts::FRAC_PI_2 * r / r_mode).sin().ln()
        })
        .collect();

    Ok(grid_search(&log_density, &log_sin, window.len()))
}

/// Centered moving average with truncated edge windows.
fn moving_average(counts: &[u64], half_width: usize) -> Vec<f64> {
    let n = counts.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half_width);
            let hi = (i + half_width + 1).min(n);
            counts[lo..hi].iter().sum::<u64>() as f64 / (hi - lo) as f64
        })
        .collect()
}

fn grid_search(log_density: &[f64], log_sin: &[f64], window_len: usize) -> f64 {
    let steps = ((GRID_MAX - GRID_MIN) / GRID_STEP).round() as usize;
    let mut best = (f64::INFINITY, GRID_MIN);
    for step in 0..=steps {
        let d = GRID_MIN + step as f64 * GRID_STEP;
        // optimal additive constant, then sum of squared residuals
        let mut mean_resid = 0.0;
        for (y, s) in log_density.iter().zip(log_sin) {
            mean_resid += y - (d - 1.0) * s;
        }
        mean_resid /= window_len as f64;
        let mut sse = 0.0;
        for (y, s) in log_density.iter().zip(log_sin) {
            let r = y - (d - 1.0) * s - mean_resid;
            sse += r * r;
        }
        if sse < best.0 {
            best = (sse, d);
        }
    }
    best.1
}
