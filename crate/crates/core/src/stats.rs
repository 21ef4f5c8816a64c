//! Replicate orchestration, standard errors and convergence curves.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::PointSet;
use crate::error::{Error, Result};
use crate::estimators::{
    estimate, mle_sweep, Aggregation, EstimateOptions, EstimateReport, EstimatorSpec,
};

/// Mean estimate and standard error as a function of sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCurve {
    pub sample_sizes: Vec<usize>,
    pub mean_estimates: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub replicates: usize,
    pub spec: EstimatorSpec,
}

impl ConvergenceCurve {
    /// CSV rows `m,mean,stderr,R` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,mean,stderr,R\n");
        for i in 0..self.sample_sizes.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.sample_sizes[i], self.mean_estimates[i], self.stderrs[i], self.replicates
            ));
        }
        out
    }
}

/// Run `r` replicates of an estimator with independent seeds `seed + i` and
/// pool them into one report: estimate = mean, stderr = sample standard
/// deviation / sqrt(r) (zero for a single replicate).
///
/// Randomness differs between replicates through the seed alone, so the
/// spread reflects subsample/anchor/bootstrap variation; an estimator that
/// uses no randomness yields identical replicates and stderr 0.
pub fn replicate_estimate(
    ps: &PointSet,
    spec: &EstimatorSpec,
    opts: &EstimateOptions,
    r: usize,
) -> Result<EstimateReport> {
    if r == 0 {
        return Err(Error::InvalidParam("need at least 1 replicate".into()));
    }
    let reports: Vec<EstimateReport> = (0..r)
        .into_par_iter()
        .map(|i| {
            let rep_opts = EstimateOptions {
                seed: opts.seed + i as u64,
                ..opts.clone()
            };
            estimate(ps, spec, &rep_opts)
        })
        .collect::<Result<Vec<_>>>()?;

    let values: Vec<f64> = reports.iter().map(|rep| rep.estimate).collect();
    let mean = values.iter().sum::<f64>() / r as f64;
    let total_runtime: u64 = reports.iter().map(|rep| rep.runtime_ms).sum();
    let first = &reports[0];
    Ok(EstimateReport {
        estimator: first.estimator.clone(),
        params: first.params.clone(),
        estimate: mean,
        stderr: standard_error(&values),
        per_replicate: values,
        n_used: first.n_used,
        ambient_dim: first.ambient_dim,
        dedup_removed: first.dedup_removed,
        infinite_locals: first.infinite_locals,
        anchor_fraction: first.anchor_fraction,
        seed: opts.seed,
        runtime_ms: total_runtime,
    })
}

/// Replicated MLE sweep over several `k` values: each replicate reuses one
/// neighbor search at the largest `k`, and the replicate loop runs per
/// sweep, so `R` replicates cost `R` searches rather than `R * len(ks)`.
/// Returns one pooled report per `k`.
pub fn replicate_sweep(
    ps: &PointSet,
    ks: &[usize],
    anchor_fraction: f64,
    aggregation: Aggregation,
    opts: &EstimateOptions,
    r: usize,
) -> Result<Vec<EstimateReport>> {
    if r == 0 {
        return Err(Error::InvalidParam("need at least 1 replicate".into()));
    }
    let sweeps: Vec<Vec<EstimateReport>> = (0..r)
        .into_par_iter()
        .map(|i| {
            let rep_opts = EstimateOptions {
                seed: opts.seed + i as u64,
                ..opts.clone()
            };
            mle_sweep(ps, ks, anchor_fraction, aggregation, &rep_opts)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok((0..ks.len())
        .map(|ki| {
            let values: Vec<f64> = sweeps.iter().map(|sweep| sweep[ki].estimate).collect();
            let mean = values.iter().sum::<f64>() / r as f64;
            let first = &sweeps[0][ki];
            EstimateReport {
                estimate: mean,
                stderr: standard_error(&values),
                per_replicate: values,
                seed: opts.seed,
                runtime_ms: sweeps.iter().map(|sweep| sweep[ki].runtime_ms).sum(),
                ..first.clone()
            }
        })
        .collect())
}

/// Sample standard deviation over sqrt(len); 0 for a single value.
pub fn standard_error(values: &[f64]) -> f64 {
    let r = values.len();
    if r < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / r as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1) as f64;
    (var / r as f64).sqrt()
}

/// Estimate at each sample size with `r` replicates per size, each on an
/// independent seeded subsample (sizes do not nest).
pub fn convergence_curve(
    ps: &PointSet,
    spec: &EstimatorSpec,
    opts: &EstimateOptions,
    sample_sizes: &[usize],
    r: usize,
) -> Result<ConvergenceCurve> {
    if sample_sizes.is_empty() {
        return Err(Error::InvalidParam("no sample sizes".into()));
    }
    if let Some(&too_big) = sample_sizes.iter().find(|&&m| m > ps.len()) {
        return Err(Error::InvalidParam(format!(
            "sample size {} exceeds dataset size {}",
            too_big,
            ps.len()
        )));
    }
    if sample_sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam(
            "sample sizes must be strictly increasing".into(),
        ));
    }
    // disjoint replicate seed ranges per size
    const SIZE_SEED_STRIDE: u64 = 10_000_019;
    let mut means = Vec::with_capacity(sample_sizes.len());
    let mut stderrs = Vec::with_capacity(sample_sizes.len());
    for (si, &m) in sample_sizes.iter().enumerate() {
        let size_opts = EstimateOptions {
            seed: opts.seed + si as u64 * SIZE_SEED_STRIDE,
            subsample: if m < ps.len() { Some(m) } else { opts.subsample },
            ..opts.clone()
        };
        let report = replicate_estimate(ps, spec, &size_opts, r)?;
        means.push(report.estimate);
        stderrs.push(report.stderr);
    }
    Ok(ConvergenceCurve {
        sample_sizes: sample_sizes.to_vec(),
        mean_estimates: means,
        stderrs,
        replicates: r,
        spec: spec.clone(),
    })
}
