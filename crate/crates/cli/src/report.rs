//! The JSON run report and the one-decimal summary table.
//!
//! The JSON field names are a stable interface (documented in the README);
//! reruns of the same config produce byte-identical documents except for
//! the runtime_ms fields.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use idim::estimators::{EstimateReport, EstimatorSpec};
use idim::PointSet;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Echo of every resolved setting, sorted by key.
    pub config: BTreeMap<String, String>,
    pub dataset: DatasetInfo,
    pub seed: u64,
    pub reports: Vec<EstimateReport>,
    pub runtime_ms: u64,
}

#[derive(Debug, Serialize)]
pub struct DatasetInfo {
    pub name: String,
    /// Rows as loaded, before subsampling and deduplication.
    pub n_loaded: usize,
    pub ambient_dim: usize,
    pub scaled_to_unit: bool,
}

impl RunReport {
    pub fn new(
        command: &str,
        config: BTreeMap<String, String>,
        ps: &PointSet,
        scaled: bool,
        seed: u64,
        reports: Vec<EstimateReport>,
        runtime_ms: u64,
    ) -> Self {
        RunReport {
            tool: "idim",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            dataset: DatasetInfo {
                name: ps.name().to_string(),
                n_loaded: ps.len(),
                ambient_dim: ps.dim(),
                scaled_to_unit: scaled,
            },
            seed,
            reports,
            runtime_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())
            .with_context(|| format!("writing report {}", path.display()))
    }

    /// Tabular summary, estimates at one decimal.
    pub fn table(&self) -> String {
        let mut out = String::from("estimator       k   alpha  estimate  stderr       n      N\n");
        for r in &self.reports {
            let k = match &r.params {
                EstimatorSpec::Mle { k, .. } => k.to_string(),
                EstimatorSpec::Geodesic { k, .. } => k.to_string(),
                EstimatorSpec::GeoMle { k1, k2, .. } => format!("{k1}-{k2}"),
                EstimatorSpec::TwoNn { .. } => "2".to_string(),
            };
            out.push_str(&format!(
                "{:<12} {:>5}  {:>6.2}  {:>8.1}  {:>6.1}  {:>6} {:>6}\n",
                r.estimator, k, r.anchor_fraction, r.estimate, r.stderr, r.n_used, r.ambient_dim
            ));
        }
        out
    }

    /// The same summary as CSV.
    pub fn table_csv(&self) -> String {
        let mut out = String::from("estimator,k,alpha,estimate,stderr,n,N\n");
        for r in &self.reports {
            let k = match &r.params {
                EstimatorSpec::Mle { k, .. } => k.to_string(),
                EstimatorSpec::Geodesic { k, .. } => k.to_string(),
                EstimatorSpec::GeoMle { k1, k2, .. } => format!("{k1}-{k2}"),
                EstimatorSpec::TwoNn { .. } => "2".to_string(),
            };
            out.push_str(&format!(
                "{},{},{},{:.1},{:.1},{},{}\n",
                r.estimator, k, r.anchor_fraction, r.estimate, r.stderr, r.n_used, r.ambient_dim
            ));
        }
        out
    }
}
