use idim::estimators::{mle_sweep, Aggregation, EstimateOptions};
use idim::synth::{generate, ManifoldKind, SyntheticSpec};

fn main() {
    let ps = generate(&SyntheticSpec {
        kind: ManifoldKind::Hypercube,
        d: 8,
        ambient_dim: 128,
        n: 10_000,
        seed: 2,
    })
    .unwrap();
    let ks: Vec<usize> = (3..=25).collect();
    let reports = mle_sweep(&ps, &ks, 1.0, Aggregation::MacKay, &EstimateOptions::seeded(0)).unwrap();
    for r in &reports {
        if let idim::estimators::EstimatorSpec::Mle { k, .. } = r.params {
            println!("k={k:>2} estimate={:.4}", r.estimate);
        }
    }
}
