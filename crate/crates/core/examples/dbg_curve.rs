use idim::estimators::{EstimateOptions, EstimatorSpec};
use idim::stats::convergence_curve;
use idim::synth::{generate, ManifoldKind, SyntheticSpec};

fn main() {
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
    for i in 0..curve.sample_sizes.len() {
        println!(
            "m={:>6} mean={:.3} stderr={:.4}",
            curve.sample_sizes[i], curve.mean_estimates[i], curve.stderrs[i]
        );
    }
}
