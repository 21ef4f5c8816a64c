//! Intrinsic dimension estimators.
//!
//! All estimators work from nearest-neighbor distances and are invariant
//! under scaling, rotation, translation and zero-padding of the data. The
//! uniform entry point is [`estimate`], which deduplicates by default
//! (distance-ratio estimators are undefined at zero distance), applies an
//! optional subsample, dispatches, and assembles an [`EstimateReport`].

mod geodesic;
mod geomle;
mod mle;
mod twonn;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataset::{self, PointSet};
use crate::error::{Error, Result};
use crate::knn;

pub use geodesic::{geodesic_id, GeodesicParams};
pub use geomle::{geomle, GeoMleParams};
pub use mle::{draw_anchors, mle_global, mle_local, Aggregation, MleParams};
pub use twonn::twonn;

/// Which estimator to run, with its estimator-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "estimator", rename_all = "snake_case")]
pub enum EstimatorSpec {
    #[serde(rename = "mle")]
    Mle {
        k: usize,
        anchor_fraction: f64,
        aggregation: Aggregation,
    },
    #[serde(rename = "twonn")]
    TwoNn { discard_fraction: f64 },
    #[serde(rename = "geomle")]
    GeoMle {
        k1: usize,
        k2: usize,
        bootstraps: usize,
        degree: usize,
    },
    #[serde(rename = "geodesic")]
    Geodesic {
        k: usize,
        bins: usize,
        sample_cap: usize,
    },
}

impl EstimatorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorSpec::Mle { .. } => "mle",
            EstimatorSpec::TwoNn { .. } => "twonn",
            EstimatorSpec::GeoMle { .. } => "geomle",
            EstimatorSpec::Geodesic { .. } => "geodesic",
        }
    }

    /// Full-data MacKay-aggregated MLE at the given k.
    pub fn mle(k: usize) -> Self {
        EstimatorSpec::Mle {
            k,
            anchor_fraction: 1.0,
            aggregation: Aggregation::MacKay,
        }
    }

    /// Two-NN with the conventional 10% discard of the largest ratios.
    pub fn twonn_default() -> Self {
        EstimatorSpec::TwoNn {
            discard_fraction: 0.1,
        }
    }

    /// Bootstrap-regression MLE with the recommended neighborhood range.
    pub fn geomle_default() -> Self {
        EstimatorSpec::GeoMle {
            k1: 20,
            k2: 55,
            bootstraps: 20,
            degree: 2,
        }
    }

    /// Geodesic-distribution estimator on a 4-NN graph, 1000 histogram
    /// bins, capped at 10000 points.
    pub fn geodesic_default() -> Self {
        EstimatorSpec::Geodesic {
            k: 4,
            bins: 1000,
            sample_cap: 10_000,
        }
    }

    /// The anchor fraction this spec will use (1.0 where not applicable).
    pub fn anchor_fraction(&self) -> f64 {
        match self {
            EstimatorSpec::Mle {
                anchor_fraction, ..
            } => *anchor_fraction,
            _ => 1.0,
        }
    }
}

/// Run-level options shared by all estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    /// Master seed for anchor draws, subsampling and bootstraps.
    pub seed: u64,
    /// Remove exact duplicate rows before estimating (default true).
    pub dedup: bool,
    /// Estimate on a seeded subsample of this size instead of the full set.
    pub subsample: Option<usize>,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            seed: 0,
            dedup: true,
            subsample: None,
        }
    }
}

impl EstimateOptions {
    pub fn seeded(seed: u64) -> Self {
        EstimateOptions {
            seed,
            ..Self::default()
        }
    }
}

/// A completed estimate with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimator: String,
    pub params: EstimatorSpec,
    /// Point estimate (mean of `per_replicate`).
    pub estimate: f64,
    pub per_replicate: Vec<f64>,
    /// Sample standard deviation of the replicates divided by sqrt(R);
    /// zero for a single replicate.
    pub stderr: f64,
    /// Rows actually estimated on, after subsampling and deduplication.
    pub n_used: usize,
    /// Ambient dimension N.
    pub ambient_dim: usize,
    pub dedup_removed: usize,
    /// Local estimates excluded as infinite (exact distance ties).
    pub infinite_locals: usize,
    pub anchor_fraction: f64,
    pub seed: u64,
    pub runtime_ms: u64,
}

/// Estimate the intrinsic dimension of `ps` with the given estimator.
pub fn estimate(ps: &PointSet, spec: &EstimatorSpec, opts: &EstimateOptions) -> Result<EstimateReport> {
    let started = Instant::now();

    let subsampled;
    let mut working = ps;
    if let Some(m) = opts.subsample {
        subsampled = dataset::subsample(ps, m, opts.seed)?;
        working = &subsampled;
    }
    let deduped;
    let dedup_removed = if opts.dedup {
        let (clean, removed) = dataset::deduplicate(working);
        deduped = clean;
        working = &deduped;
        removed
    } else {
        0
    };

    let outcome = run_spec(working, spec, opts.seed)?;
    if !(outcome.value.is_finite() && outcome.value > 0.0) {
        return Err(Error::Degenerate(format!(
            "estimator {} produced {}",
            spec.name(),
            outcome.value
        )));
    }

    Ok(EstimateReport {
        estimator: spec.name().to_string(),
        params: spec.clone(),
        estimate: outcome.value,
        per_replicate: vec![outcome.value],
        stderr: 0.0,
        n_used: working.len(),
        ambient_dim: working.dim(),
        dedup_removed,
        infinite_locals: outcome.infinite_locals,
        anchor_fraction: spec.anchor_fraction(),
        seed: opts.seed,
        runtime_ms: started.elapsed().as_millis() as u64,
    })
}

pub(crate) struct Outcome {
    pub value: f64,
    pub infinite_locals: usize,
}

fn run_spec(ps: &PointSet, spec: &EstimatorSpec, seed: u64) -> Result<Outcome> {
    match spec {
        EstimatorSpec::Mle {
            k,
            anchor_fraction,
            aggregation,
        } => {
            let anchors = draw_anchors(ps.len(), *anchor_fraction, seed)?;
            let table = knn::knn(ps, &anchors, *k)?;
            let (value, infinite_locals) = mle_global(&table, *k, *aggregation)?;
            Ok(Outcome {
                value,
                infinite_locals,
            })
        }
        EstimatorSpec::TwoNn { discard_fraction } => {
            let table = knn::knn(ps, &knn::all_anchors(ps), 2)?;
            Ok(Outcome {
                value: twonn(&table, *discard_fraction)?,
                infinite_locals: 0,
            })
        }
        EstimatorSpec::GeoMle {
            k1,
            k2,
            bootstraps,
            degree,
        } => {
            let params = GeoMleParams {
                k1: *k1,
                k2: *k2,
                bootstraps: *bootstraps,
                degree: *degree,
                seed,
            };
            Ok(Outcome {
                value: geomle(ps, &params)?,
                infinite_locals: 0,
            })
        }
        EstimatorSpec::Geodesic { k, bins, sample_cap } => {
            let params = GeodesicParams {
                k: *k,
                bins: *bins,
                sample_cap: *sample_cap,
                seed,
            };
            Ok(Outcome {
                value: geodesic_id(ps, &params)?,
                infinite_locals: 0,
            })
        }
    }
}

/// Anchor-subsampled global MLE: draws `anchor_fraction * n` anchors by
/// seed, searches their neighbors over the entire dataset, and aggregates
/// over the anchors only. At `anchor_fraction = 1` this is exactly the
/// full-data global estimate.
pub fn mle_anchor(ps: &PointSet, params: &MleParams) -> Result<EstimateReport> {
    estimate(
        ps,
        &EstimatorSpec::Mle {
            k: params.k,
            anchor_fraction: params.anchor_fraction,
            aggregation: params.aggregation,
        },
        &EstimateOptions {
            seed: params.seed,
            dedup: true,
            subsample: None,
        },
    )
}

/// Sweep several `k` values over one shared neighbor search at the largest
/// `k`. One report per entry of `ks`; anchors, deduplication and the
/// neighbor table are computed once.
pub fn mle_sweep(
    ps: &PointSet,
    ks: &[usize],
    anchor_fraction: f64,
    aggregation: Aggregation,
    opts: &EstimateOptions,
) -> Result<Vec<EstimateReport>> {
    let started = Instant::now();
    if ks.is_empty() {
        return Err(Error::InvalidParam("empty k list".into()));
    }
    let k_max = *ks.iter().max().unwrap();

    let subsampled;
    let mut working = ps;
    if let Some(m) = opts.subsample {
        subsampled = dataset::subsample(ps, m, opts.seed)?;
        working = &subsampled;
    }
    let deduped;
    let dedup_removed = if opts.dedup {
        let (clean, removed) = dataset::deduplicate(working);
        deduped = clean;
        working = &deduped;
        removed
    } else {
        0
    };

    let anchors = draw_anchors(working.len(), anchor_fraction, opts.seed)?;
    let table = knn::knn(working, &anchors, k_max)?;
    ks.iter()
        .map(|&k| {
            let (value, infinite_locals) = mle_global(&table, k, aggregation)?;
            Ok(EstimateReport {
                estimator: "mle".to_string(),
                params: EstimatorSpec::Mle {
                    k,
                    anchor_fraction,
                    aggregation,
                },
                estimate: value,
                per_replicate: vec![value],
                stderr: 0.0,
                n_used: working.len(),
                ambient_dim: working.dim(),
                dedup_removed,
                infinite_locals,
                anchor_fraction,
                seed: opts.seed,
                runtime_ms: started.elapsed().as_millis() as u64,
            })
        })
        .collect()
}
