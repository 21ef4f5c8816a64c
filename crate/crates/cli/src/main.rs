mod args;
mod report;
mod sources;

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Parser;

use idim::dataset;
use idim::estimators::{
    draw_anchors, mle_global, EstimateOptions, EstimateReport, EstimatorSpec,
};
use idim::knn;
use idim::stats;
use idim::synth;

use args::{Cli, Command, EstimateArgs, EstimatorKind};
use report::RunReport;

/// Exit codes: 2 usage/config, 3 dataset/file errors, 4 estimator errors.
fn main() {
    let raw: Vec<std::ffi::OsString> = std::env::args_os().collect();
    let expanded = match args::expand_config(raw) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("idim: config error: {msg}");
            std::process::exit(2);
        }
    };
    let cli = Cli::parse_from(expanded);

    init_thread_pool(cli.threads);

    if let Err(err) = run(cli.command) {
        eprintln!("idim: error: {err:#}");
        std::process::exit(classify(&err));
    }
}

fn init_thread_pool(flag: Option<usize>) {
    let from_env = std::env::var("IDIM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(threads) = from_env.or(flag) {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

fn classify(err: &anyhow::Error) -> i32 {
    use idim::Error::*;
    match err.downcast_ref::<idim::Error>() {
        Some(Io { .. } | Format { .. } | DimensionMismatch(_) | EmptySelection(_)) => 3,
        Some(InvalidParam(_) | ZeroDistance { .. } | Degenerate(_)) => 4,
        None => 3, // non-estimator failures are file/config shaped
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Estimate(a) => run_estimate(a),
        Command::Generate(a) => run_generate(a),
        Command::Noise(a) => run_noise(a),
        Command::Convergence(a) => run_convergence(a),
        Command::Compare(a) => run_compare(a),
        Command::KnnCache(a) => run_knn_cache(a),
    }
}

fn run_estimate(a: EstimateArgs) -> Result<()> {
    let started = Instant::now();
    let ps = sources::load_dataset(&a.data)?;
    let opts = EstimateOptions {
        seed: a.seed,
        dedup: !a.no_dedup,
        subsample: a.subsample,
    };

    let reports: Vec<EstimateReport> = match a.estimator {
        EstimatorKind::Mle => {
            if let Some(cache) = &a.knn_cache {
                estimate_from_cache(&ps, &a, &opts, cache)?
            } else if a.replicates == 1 {
                idim::estimators::mle_sweep(&ps, &a.k, a.alpha, a.aggregation.into(), &opts)?
            } else {
                stats::replicate_sweep(
                    &ps,
                    &a.k,
                    a.alpha,
                    a.aggregation.into(),
                    &opts,
                    a.replicates,
                )?
            }
        }
        EstimatorKind::Twonn => vec![stats::replicate_estimate(
            &ps,
            &EstimatorSpec::TwoNn {
                discard_fraction: a.discard,
            },
            &opts,
            a.replicates,
        )?],
        EstimatorKind::Geomle => vec![stats::replicate_estimate(
            &ps,
            &EstimatorSpec::GeoMle {
                k1: a.k1,
                k2: a.k2,
                bootstraps: a.bootstraps,
                degree: a.degree,
            },
            &opts,
            a.replicates,
        )?],
        EstimatorKind::Geodesic => vec![stats::replicate_estimate(
            &ps,
            &EstimatorSpec::Geodesic {
                k: a.graph_k,
                bins: a.bins,
                sample_cap: a.sample_cap,
            },
            &opts,
            a.replicates,
        )?],
    };

    let config = estimate_config_echo(&a);
    let run_report = RunReport::new(
        "estimate",
        config,
        &ps,
        !a.data.no_scale,
        a.seed,
        reports,
        started.elapsed().as_millis() as u64,
    );
    emit(&run_report, a.out.as_deref(), a.csv.as_deref())
}

/// Evaluate the MLE sweep from a previously stored neighbor table. The
/// table must match the working set (checksum) and the anchor draw.
fn estimate_from_cache(
    ps: &idim::PointSet,
    a: &EstimateArgs,
    opts: &EstimateOptions,
    cache: &std::path::Path,
) -> Result<Vec<EstimateReport>> {
    if a.replicates != 1 {
        bail!("--knn-cache holds one anchor draw and cannot serve --replicates > 1");
    }
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
    let table = knn::load_table(cache, dataset::checksum(working))?;
    let expected: Vec<u32> = draw_anchors(working.len(), a.alpha, a.seed)?
        .iter()
        .map(|&x| x as u32)
        .collect();
    if table.anchors() != expected {
        bail!(
            "cached table was built with a different anchor draw \
             (alpha/seed mismatch: {} cached anchors, {} expected)",
            table.anchors().len(),
            expected.len()
        );
    }
    a.k.iter()
        .map(|&k| {
            let (value, infinite_locals) = mle_global(&table, k, a.aggregation.into())?;
            Ok(EstimateReport {
                estimator: "mle".into(),
                params: EstimatorSpec::Mle {
                    k,
                    anchor_fraction: a.alpha,
                    aggregation: a.aggregation.into(),
                },
                estimate: value,
                per_replicate: vec![value],
                stderr: 0.0,
                n_used: working.len(),
                ambient_dim: working.dim(),
                dedup_removed,
                infinite_locals,
                anchor_fraction: a.alpha,
                seed: a.seed,
                runtime_ms: started.elapsed().as_millis() as u64,
            })
        })
        .collect::<idim::Result<Vec<_>>>()
        .map_err(Into::into)
}

fn estimate_config_echo(a: &EstimateArgs) -> BTreeMap<String, String> {
    let mut config = dataset_config_echo(&a.data);
    config.insert("estimator".into(), format!("{:?}", a.estimator).to_lowercase());
    config.insert(
        "k".into(),
        a.k.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
    );
    config.insert("alpha".into(), a.alpha.to_string());
    config.insert(
        "aggregation".into(),
        format!("{:?}", a.aggregation).to_lowercase(),
    );
    config.insert("discard".into(), a.discard.to_string());
    config.insert("k1".into(), a.k1.to_string());
    config.insert("k2".into(), a.k2.to_string());
    config.insert("bootstraps".into(), a.bootstraps.to_string());
    config.insert("degree".into(), a.degree.to_string());
    config.insert("graph-k".into(), a.graph_k.to_string());
    config.insert("bins".into(), a.bins.to_string());
    config.insert("sample-cap".into(), a.sample_cap.to_string());
    config.insert("seed".into(), a.seed.to_string());
    config.insert("replicates".into(), a.replicates.to_string());
    if let Some(m) = a.subsample {
        config.insert("subsample".into(), m.to_string());
    }
    config.insert("dedup".into(), (!a.no_dedup).to_string());
    config
}

fn dataset_config_echo(d: &args::DatasetArgs) -> BTreeMap<String, String> {
    let mut config = BTreeMap::new();
    config.insert("dataset".into(), d.dataset.clone());
    config.insert("scale".into(), (!d.no_scale).to_string());
    if let Some(classes) = &d.classes {
        config.insert(
            "classes".into(),
            classes.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
        );
    }
    if let Some(resize) = &d.resize {
        config.insert("resize".into(), resize.clone());
    }
    if let Some(src) = &d.src_shape {
        config.insert("src-shape".into(), src.clone());
    }
    config
}

fn emit(
    run_report: &RunReport,
    out: Option<&std::path::Path>,
    csv: Option<&std::path::Path>,
) -> Result<()> {
    print!("{}", run_report.table());
    if let Some(path) = out {
        run_report.write(path)?;
        println!("report written to {}", path.display());
    }
    if let Some(path) = csv {
        std::fs::write(path, run_report.table_csv())
            .with_context(|| format!("writing table {}", path.display()))?;
        println!("table written to {}", path.display());
    }
    Ok(())
}

fn run_generate(a: args::GenerateArgs) -> Result<()> {
    let kind = match a.kind.as_str() {
        "hypercube" => synth::ManifoldKind::Hypercube,
        "hypersphere" => synth::ManifoldKind::Hypersphere,
        "affine" => synth::ManifoldKind::Affine,
        other => bail!("unknown manifold kind {other:?}"),
    };
    let spec = synth::SyntheticSpec {
        kind,
        d: a.d,
        ambient_dim: a.n_ambient,
        n: a.n,
        seed: a.seed,
    };
    let ps = synth::generate(&spec)?;
    dataset::save_raw(&ps, &a.out, &[("spec", spec.describe())])?;
    println!(
        "generated {} points of intrinsic dimension {} in R^{} -> {}",
        a.n,
        a.d,
        a.n_ambient,
        a.out.display()
    );
    Ok(())
}

fn run_noise(a: args::NoiseArgs) -> Result<()> {
    let ps = sources::load_dataset(&a.data)?;
    let mode = match a.mode.as_str() {
        "add" => synth::NoiseMode::Add,
        "replace-pixels" => synth::NoiseMode::ReplacePixels,
        other => bail!("unknown noise mode {other:?} (add or replace-pixels)"),
    };
    let spec = synth::NoiseSpec {
        d_noise: a.d_noise,
        mode,
        seed: a.seed,
    };
    let noised = synth::add_hypercube_noise(&ps, &spec)?;
    dataset::save_raw(
        &noised,
        &a.out,
        &[(
            "spec",
            format!("noise d={} mode={:?} seed={}", a.d_noise, mode, a.seed),
        )],
    )?;
    println!(
        "noised {} rows with a {}-dimensional hypercube -> {}",
        noised.len(),
        a.d_noise,
        a.out.display()
    );
    Ok(())
}

fn run_convergence(a: args::ConvergenceArgs) -> Result<()> {
    let ps = sources::load_dataset(&a.data)?;
    let spec = match a.estimator {
        EstimatorKind::Mle => EstimatorSpec::Mle {
            k: a.k,
            anchor_fraction: a.alpha,
            aggregation: a.aggregation.into(),
        },
        EstimatorKind::Twonn => EstimatorSpec::TwoNn {
            discard_fraction: a.discard,
        },
        EstimatorKind::Geomle => EstimatorSpec::geomle_default(),
        EstimatorKind::Geodesic => EstimatorSpec::geodesic_default(),
    };
    let opts = EstimateOptions::seeded(a.seed);
    let curve = stats::convergence_curve(&ps, &spec, &opts, &a.sizes, a.replicates)?;
    let csv = curve.to_csv();
    match &a.out {
        Some(path) => {
            std::fs::write(path, &csv)
                .with_context(|| format!("writing curve {}", path.display()))?;
            println!("curve written to {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn run_compare(a: args::CompareArgs) -> Result<()> {
    let started = Instant::now();
    let ps = sources::load_dataset(&a.data)?;

    // the bootstrap-regression estimator is quadratic per bootstrap; cap it
    // at 10k points like the geodesic estimator caps itself
    let geomle_opts = EstimateOptions {
        seed: a.seed,
        dedup: true,
        subsample: (ps.len() > 10_000).then_some(10_000),
    };
    let opts = EstimateOptions::seeded(a.seed);

    let specs = [
        (
            EstimatorSpec::Mle {
                k: a.k,
                anchor_fraction: a.alpha,
                aggregation: idim::estimators::Aggregation::MacKay,
            },
            &opts,
        ),
        (EstimatorSpec::twonn_default(), &opts),
        (EstimatorSpec::geomle_default(), &geomle_opts),
        (EstimatorSpec::geodesic_default(), &opts),
    ];
    let mut reports = Vec::new();
    for (spec, run_opts) in specs {
        let label = spec.name();
        let report = idim::estimators::estimate(&ps, &spec, run_opts)
            .with_context(|| format!("running {label}"))?;
        println!("{:<10} -> {:.1}", label, report.estimate);
        reports.push(report);
    }

    let mut config = dataset_config_echo(&a.data);
    config.insert("k".into(), a.k.to_string());
    config.insert("alpha".into(), a.alpha.to_string());
    config.insert("seed".into(), a.seed.to_string());
    let run_report = RunReport::new(
        "compare",
        config,
        &ps,
        !a.data.no_scale,
        a.seed,
        reports,
        started.elapsed().as_millis() as u64,
    );
    emit(&run_report, a.out.as_deref(), a.csv.as_deref())
}

fn run_knn_cache(a: args::KnnCacheArgs) -> Result<()> {
    let ps = sources::load_dataset(&a.data)?;
    let subsampled;
    let mut working = &ps;
    if let Some(m) = a.subsample {
        subsampled = dataset::subsample(&ps, m, a.seed)?;
        working = &subsampled;
    }
    let deduped;
    if !a.no_dedup {
        let (clean, removed) = dataset::deduplicate(working);
        deduped = clean;
        working = &deduped;
        if removed > 0 {
            println!("removed {removed} duplicate rows");
        }
    }
    let anchors = draw_anchors(working.len(), a.alpha, a.seed)?;
    let table = knn::knn(working, &anchors, a.k)?;
    knn::save_table(&table, dataset::checksum(working), &a.out)?;
    println!(
        "cached {} anchors x {} neighbors -> {}",
        table.anchor_count(),
        a.k,
        a.out.display()
    );
    Ok(())
}
