use std::time::Instant;

use idim::knn::knn;
use idim::synth::{generate, ManifoldKind, SyntheticSpec};

fn main() {
    let ps = generate(&SyntheticSpec {
        kind: ManifoldKind::Hypercube,
        d: 10,
        ambient_dim: 784,
        n: 60_000,
        seed: 1,
    })
    .unwrap();
    let anchors: Vec<usize> = (0..2000).map(|i| i * 30).collect();
    let t0 = Instant::now();
    let table = knn(&ps, &anchors, 20).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    println!(
        "2000 anchors x 60000 points x 784 dims: {:.1}s -> full-table estimate {:.0}s",
        dt,
        dt * 30.0
    );
    println!("first distance {:.4}", table.distances_of(0)[0]);
}
