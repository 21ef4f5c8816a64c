use std::time::Instant;

use idim::knn::squared_distance;

fn main() {
    for dim in [128usize, 784, 3072] {
        let n = 2000;
        let data: Vec<f64> = (0..n * dim).map(|i| (i as f64 * 0.618).sin()).collect();
        let rows: Vec<&[f64]> = (0..n).map(|i| &data[i * dim..(i + 1) * dim]).collect();
        // warm
        let mut acc = 0.0;
        for i in 0..100 {
            acc += squared_distance(rows[i], rows[i + 1]);
        }
        let t0 = Instant::now();
        let reps = 400;
        for r in 0..reps {
            for i in 0..n - 1 {
                acc += squared_distance(rows[i], rows[i + 1]);
            }
            std::hint::black_box(&acc);
        }
        let dt = t0.elapsed().as_secs_f64();
        let flops = (reps * (n - 1)) as f64 * dim as f64 * 2.0;
        println!("dim {dim}: {:.1} Gflop/s single-thread (acc {acc:.1})", flops / dt / 1e9);
    }
}
