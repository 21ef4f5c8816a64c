//! Command-line surface and config-file expansion.
//!
//! A config file holds `key=value` lines mirroring the long flag names
//! (without the leading dashes). Flags given on the command line take
//! precedence; config entries fill in the rest.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "idim", version, about = "Intrinsic dimension estimation for point clouds")]
pub struct Cli {
    /// Cap on worker threads (the IDIM_THREADS environment variable
    /// overrides this; results do not depend on the thread count)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate intrinsic dimension of a dataset
    Estimate(EstimateArgs),
    /// Generate a synthetic dataset of known intrinsic dimension
    Generate(GenerateArgs),
    /// Add hypercube noise to a dataset to raise its intrinsic dimension
    Noise(NoiseArgs),
    /// Estimate as a function of sample size
    Convergence(ConvergenceArgs),
    /// Run all estimators on one dataset and tabulate them
    Compare(CompareArgs),
    /// Precompute and store a neighbor table for later estimate runs
    KnnCache(KnnCacheArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorKind {
    Mle,
    Twonn,
    Geomle,
    Geodesic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregationArg {
    Mackay,
    Levina,
}

impl From<AggregationArg> for idim::estimators::Aggregation {
    fn from(a: AggregationArg) -> Self {
        match a {
            AggregationArg::Mackay => idim::estimators::Aggregation::MacKay,
            AggregationArg::Levina => idim::estimators::Aggregation::Levina,
        }
    }
}

/// Flags shared by every command that reads a dataset.
#[derive(Debug, Clone, clap::Args)]
pub struct DatasetArgs {
    /// Dataset as kind:path, e.g. idx:train-images-idx3-ubyte,
    /// cifar10-binary:batches/, csv:points.csv, csv-labeled:points.csv,
    /// raw-tensor:data.bin, image-directory:shots/
    #[arg(long)]
    pub dataset: String,

    /// Keep byte-valued pixels as 0..255 instead of scaling to [0,1]
    #[arg(long)]
    pub no_scale: bool,

    /// Keep only rows with these labels (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub classes: Option<Vec<i64>>,

    /// Resize image rows to HxWxC with nearest-neighbor interpolation
    #[arg(long)]
    pub resize: Option<String>,

    /// Source image shape HxWxC (required with --resize unless the source
    /// format implies it)
    #[arg(long)]
    pub src_shape: Option<String>,
}

#[derive(Debug, clap::Args)]
pub struct EstimateArgs {
    /// Read defaults from a key=value config file (flags win)
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub data: DatasetArgs,

    #[arg(long, value_enum, default_value_t = EstimatorKind::Mle)]
    pub estimator: EstimatorKind,

    /// Neighbor counts for the MLE estimator; several values sweep one
    /// shared neighbor search
    #[arg(long, value_delimiter = ',', default_value = "5")]
    pub k: Vec<usize>,

    /// Anchor fraction for the MLE estimator
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    #[arg(long, value_enum, default_value_t = AggregationArg::Mackay)]
    pub aggregation: AggregationArg,

    /// Fraction of the largest two-NN ratios to discard
    #[arg(long, default_value_t = 0.1)]
    pub discard: f64,

    /// Smallest neighborhood of the bootstrap-regression estimator
    #[arg(long, default_value_t = 20)]
    pub k1: usize,

    /// Largest neighborhood of the bootstrap-regression estimator
    #[arg(long, default_value_t = 55)]
    pub k2: usize,

    #[arg(long, default_value_t = 20)]
    pub bootstraps: usize,

    /// Polynomial degree of the bootstrap regression
    #[arg(long, default_value_t = 2)]
    pub degree: usize,

    /// Neighbor count of the geodesic graph
    #[arg(long, default_value_t = 4)]
    pub graph_k: usize,

    /// Histogram bins of the geodesic estimator
    #[arg(long, default_value_t = 1000)]
    pub bins: usize,

    /// Point cap of the geodesic estimator
    #[arg(long, default_value_t = 10000)]
    pub sample_cap: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1)]
    pub replicates: usize,

    /// Estimate on a seeded subsample of this size
    #[arg(long)]
    pub subsample: Option<usize>,

    /// Keep exact duplicate rows (estimators fail on zero distances)
    #[arg(long)]
    pub no_dedup: bool,

    /// Reuse a neighbor table written by knn-cache
    #[arg(long)]
    pub knn_cache: Option<PathBuf>,

    /// Write the JSON run report here
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Write the one-decimal summary table here as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// hypercube, hypersphere or affine
    #[arg(long)]
    pub kind: String,

    /// Intrinsic dimension
    #[arg(long)]
    pub d: usize,

    /// Ambient dimension
    #[arg(long, visible_alias = "ambient")]
    pub n_ambient: usize,

    /// Sample count
    #[arg(long)]
    pub n: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output path (raw tensor + .meta header)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct NoiseArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub data: DatasetArgs,

    /// Dimension of the noise hypercube
    #[arg(long)]
    pub d_noise: usize,

    /// add or replace-pixels
    #[arg(long, default_value = "replace-pixels")]
    pub mode: String,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output path (raw tensor + .meta header)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub data: DatasetArgs,

    /// Strictly increasing sample sizes
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,

    #[arg(long, value_enum, default_value_t = EstimatorKind::Mle)]
    pub estimator: EstimatorKind,

    /// Neighbor count (single k)
    #[arg(long, default_value_t = 5)]
    pub k: usize,

    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    #[arg(long, value_enum, default_value_t = AggregationArg::Mackay)]
    pub aggregation: AggregationArg,

    #[arg(long, default_value_t = 0.1)]
    pub discard: f64,

    #[arg(long, default_value_t = 5)]
    pub replicates: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write the curve CSV here (stdout otherwise)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub data: DatasetArgs,

    /// Neighbor count of the MLE row
    #[arg(long, default_value_t = 5)]
    pub k: usize,

    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct KnnCacheArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub data: DatasetArgs,

    /// Neighbor count to store (estimate runs may use any smaller k)
    #[arg(long)]
    pub k: usize,

    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Keep exact duplicate rows
    #[arg(long)]
    pub no_dedup: bool,

    /// Estimate on a seeded subsample of this size
    #[arg(long)]
    pub subsample: Option<usize>,

    /// Output path for the table (+ .meta header)
    #[arg(long)]
    pub out: PathBuf,
}

/// Expand `--config FILE` into synthetic flags inserted after the
/// subcommand, skipping keys the command line already sets.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let strings: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let config_path = strings.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            strings.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    let Some(path) = config_path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config file {path}: {e}"))?;

    let explicit: Vec<String> = strings
        .iter()
        .filter(|a| a.starts_with("--"))
        .map(|a| a.trim_start_matches("--").split('=').next().unwrap().to_string())
        .collect();

    let mut injected: Vec<OsString> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "config file {path} line {}: expected key=value, got {line:?}",
                lineno + 1
            ));
        };
        let key = key.trim();
        let value = value.trim();
        if explicit.iter().any(|e| e == key) {
            continue;
        }
        match value {
            "true" => injected.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                injected.push(format!("--{key}").into());
                injected.push(value.into());
            }
        }
    }

    // insert after the subcommand token (the first non-flag argument past
    // the program name)
    let subcommand_pos = strings
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, a)| !a.starts_with('-'))
        .map(|(i, _)| i)
        .ok_or_else(|| "config file given but no subcommand".to_string())?;
    let mut out = args;
    for (offset, flag) in injected.into_iter().enumerate() {
        out.insert(subcommand_pos + 1 + offset, flag);
    }
    Ok(out)
}

/// Parse an HxWxC shape argument.
pub fn parse_shape(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    if parts.len() != 3 {
        return Err(format!("shape {s:?} is not HxWxC"));
    }
    let dims: Result<Vec<usize>, _> = parts.iter().map(|p| p.parse()).collect();
    match dims {
        Ok(d) => Ok((d[0], d[1], d[2])),
        Err(_) => Err(format!("shape {s:?} has non-numeric parts")),
    }
}
