//! Estimate-vs-sample-size behavior on data of known dimension: more
//! samples move the estimate toward the true value and shrink the spread.

use idim::estimators::{EstimateOptions, EstimatorSpec};
use idim::stats::convergence_curve;
use idim::synth::{generate, ManifoldKind, SyntheticSpec};

#[test]
fn curve_converges_toward_the_true_dimension() {
    let d_true = 10.0;
    let ps = generate(&SyntheticSpec {
        kind: ManifoldKind::Hypercube,
        d: 10,
        ambient_dim: 32,
        n: 50_000,
        seed: 4,
    })
    .unwrap();
    let curve = convergence_curve(
        &ps,
        &EstimatorSpec::mle(5),
        &EstimateOptions::seeded(11),
        &[500, 2000, 10_000, 50_000],
        5,
    )
    .unwrap();

    // means approach the true dimension monotonically from below
    for w in curve.mean_estimates.windows(2) {
        assert!(w[0] < w[1], "means not increasing: {:?}", curve.mean_estimates);
    }
    for w in curve.mean_estimates.windows(2) {
        assert!(
            (d_true - w[1]).abs() < (d_true - w[0]).abs(),
            "gap to {d_true} not shrinking: {:?}",
            curve.mean_estimates
        );
    }
    // replicate spread shrinks (non-strictly) with sample size; the full
    // size has identical replicates and stderr exactly 0
    for w in curve.stderrs.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "stderrs not decreasing: {:?}", curve.stderrs);
    }
    assert_eq!(curve.stderrs[3], 0.0);
    assert_eq!(curve.replicates, 5);
}
