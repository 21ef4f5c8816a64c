use idim::synth::{generate, ManifoldKind, SyntheticSpec};
use idim::knn::build_knn_graph;

fn main() {
    let ps = generate(&SyntheticSpec {
        kind: ManifoldKind::Hypersphere,
        d: 1,
        ambient_dim: 10,
        n: 2000,
        seed: 17,
    })
    .unwrap();
    for k in [4usize, 6, 8] {
        let g = build_knn_graph(&ps, k).unwrap();
        let comp = g.largest_component();
        println!("k={k}: largest component {} of {}", comp.len(), ps.len());
        if comp.len() * 2 > ps.len() {
            // replicate the histogram internals
            let sources: Vec<usize> = comp.iter().map(|&v| v as usize).collect();
            let maxd = sources.iter().map(|&s| {
                g.shortest_paths(s).into_iter().filter(|d| d.is_finite()).fold(0.0f64, f64::max)
            }).fold(0.0f64, f64::max);
            let bins = 500usize;
            let mut counts = vec![0u64; bins];
            for &s in &sources {
                for d in g.shortest_paths(s) {
                    if d.is_finite() && d > 0.0 {
                        let b = ((d / maxd) * bins as f64) as usize;
                        counts[b.min(bins - 1)] += 1;
                    }
                }
            }
            let peak = counts.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))).map(|(i, _)| i).unwrap();
            let window: Vec<usize> = (0..=peak).filter(|&j| 2 * counts[j] >= counts[peak]).collect();
            println!("  maxd={maxd:.3} peak_bin={peak} peak_count={} window_len={}", counts[peak], window.len());
            println!("  first bins: {:?}", &counts[..12]);
            println!("  around peak: {:?}", &counts[peak.saturating_sub(5)..(peak + 5).min(bins)]);
        }
    }
}
