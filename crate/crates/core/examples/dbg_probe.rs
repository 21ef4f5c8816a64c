use std::time::Instant;

use idim::estimators::{estimate, EstimateOptions, EstimatorSpec};
use idim::synth::{generate, ManifoldKind, SyntheticSpec};

fn main() {
    // criterion-6 shape: hypercube d in {2,4,8}, N=128, n=10000, mackay k=20
    for d in [2usize, 4, 8] {
        let ps = generate(&SyntheticSpec {
            kind: ManifoldKind::Hypercube,
            d,
            ambient_dim: 128,
            n: 10_000,
            seed: 1,
        })
        .unwrap();
        let t0 = Instant::now();
        let report = estimate(&ps, &EstimatorSpec::mle(20), &EstimateOptions::seeded(0)).unwrap();
        println!(
            "hypercube d={d}: estimate {:.3} ({:.1}% off) in {:?}",
            report.estimate,
            100.0 * (report.estimate - d as f64).abs() / d as f64,
            t0.elapsed()
        );
    }
}
