//! Intrinsic dimension estimation for high-dimensional point clouds.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`dataset`] — the [`PointSet`](dataset::PointSet) container, loaders for
//!   common on-disk formats (IDX, CIFAR-10 binary, CSV, raw tensors, image
//!   directories) and dataset transforms (resize, class filtering,
//!   subsampling, deduplication).
//! * [`knn`] — exact Euclidean k-nearest-neighbor search against the full
//!   dataset, kNN graph construction and geodesic (shortest-path) distances.
//! * [`estimators`] — the dimension estimators proper: local and global
//!   nearest-neighbor MLE, the anchor-accelerated global MLE, the
//!   two-nearest-neighbor ratio estimator, a bootstrap/regression MLE
//!   variant, and a geodesic-distribution estimator.
//! * [`synth`] — generators for datasets of known intrinsic dimension
//!   (hypercubes, hyperspheres, affine patches embedded through random
//!   orthonormal maps) and a hypercube-noise transform that raises the
//!   dimension of a real dataset by a controlled amount.
//! * [`stats`] — replicate orchestration, standard errors and
//!   estimate-vs-sample-size convergence curves.
//!
//! All randomized operations take explicit integer seeds and are
//! deterministic for a fixed seed, independent of the number of worker
//! threads.

pub mod dataset;
pub mod error;
pub mod estimators;
pub mod knn;
pub mod stats;
pub mod synth;

pub use dataset::PointSet;
pub use error::{Error, Result};
pub use estimators::{EstimateOptions, EstimateReport, EstimatorSpec};
