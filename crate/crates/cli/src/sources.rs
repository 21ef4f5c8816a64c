//! Dataset argument parsing and the load + transform pipeline.

use anyhow::{anyhow, bail, Context, Result};
use idim::dataset::{self, DatasetSource, PointSet, SourceKind};

use crate::args::{parse_shape, DatasetArgs};

/// Parse a `kind:path` dataset argument.
pub fn parse_source(spec: &str, scale: bool) -> Result<DatasetSource> {
    let (kind_str, path) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("dataset {spec:?} is not kind:path"))?;
    let kind = match kind_str {
        "idx" | "mnist-idx" => SourceKind::Idx,
        "cifar10-binary" | "cifar10-bin" => SourceKind::Cifar10Binary,
        "csv" => SourceKind::Csv { labeled: false },
        "csv-labeled" => SourceKind::Csv { labeled: true },
        "raw-tensor" | "raw" => SourceKind::RawTensor,
        "image-directory" | "image-dir" => SourceKind::ImageDirectory,
        other => bail!(
            "unknown dataset kind {other:?} (expected idx, cifar10-binary, csv, \
             csv-labeled, raw-tensor or image-directory)"
        ),
    };
    Ok(DatasetSource::new(kind, path).scale_to_unit(scale))
}

/// Shapes implied by the source format, used when --src-shape is omitted.
fn implied_shape(kind: SourceKind, dim: usize) -> Option<(usize, usize, usize)> {
    match kind {
        SourceKind::Cifar10Binary => Some((32, 32, 3)),
        SourceKind::Idx if dim == 784 => Some((28, 28, 1)),
        _ => None,
    }
}

/// Load the dataset and apply class filtering and resizing.
pub fn load_dataset(args: &DatasetArgs) -> Result<PointSet> {
    let source = parse_source(&args.dataset, !args.no_scale)?;
    let mut ps = dataset::load(&source).context("loading dataset")?;

    if let Some(classes) = &args.classes {
        ps = dataset::filter_classes(&ps, classes).context("filtering classes")?;
    }
    if let Some(target) = &args.resize {
        let (h, w, c) = parse_shape(target).map_err(|e| anyhow!(e))?;
        let src = match &args.src_shape {
            Some(s) => parse_shape(s).map_err(|e| anyhow!(e))?,
            None => implied_shape(source.kind, ps.dim())
                .ok_or_else(|| anyhow!("--resize needs --src-shape for this source"))?,
        };
        ps = dataset::resize_nearest(&ps, h, w, c, src).context("resizing")?;
    }
    Ok(ps)
}
