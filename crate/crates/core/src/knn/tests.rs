use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::PointSet;

use super::graph::build_knn_graph;
use super::*;

fn random_points(n: usize, dim: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..n * dim).map(|_| rng.gen::<f64>()).collect();
    PointSet::new(data, dim, None, "random").unwrap()
}

/// O(n^2) reference: full sort of (distance, index) pairs per anchor.
fn naive_knn(ps: &PointSet, anchors: &[usize], k: usize) -> (Vec<f64>, Vec<u32>) {
    let n = ps.len();
    let mut distances = Vec::new();
    let mut neighbors = Vec::new();
    for &a in anchors {
        let mut pairs: Vec<(f64, u32)> = (0..n)
            .filter(|&j| j != a)
            .map(|j| {
                let d2: f64 = ps
                    .row(a)
                    .iter()
                    .zip(ps.row(j))
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum();
                (d2.sqrt(), j as u32)
            })
            .collect();
        pairs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for &(d, j) in &pairs[..k] {
            distances.push(d);
            neighbors.push(j);
        }
    }
    (distances, neighbors)
}

fn one_d(points: &[f64]) -> PointSet {
    PointSet::new(points.to_vec(), 1, None, "1d").unwrap()
}

#[test]
fn line_points_basic() {
    let ps = one_d(&[0.0, 1.0, 3.0]);
    let t = knn(&ps, &[0], 2).unwrap();
    assert_eq!(t.distances_of(0), &[1.0, 3.0]);
    assert_eq!(t.neighbors_of(0), &[1, 2]);
}

#[test]
fn k_equals_n_minus_one_is_a_permutation() {
    let ps = random_points(12, 3, 1);
    let t = knn(&ps, &all_anchors(&ps), 11).unwrap();
    for i in 0..12 {
        let mut nbrs: Vec<u32> = t.neighbors_of(i).to_vec();
        nbrs.sort_unstable();
        let expected: Vec<u32> = (0..12u32).filter(|&j| j != i as u32).collect();
        assert_eq!(nbrs, expected);
    }
}

#[test]
fn matches_naive_oracle_on_200_points() {
    let ps = random_points(200, 16, 7);
    let anchors = all_anchors(&ps);
    let t = knn(&ps, &anchors, 10).unwrap();
    let (nd, nn) = naive_knn(&ps, &anchors, 10);
    for i in 0..200 {
        assert_eq!(t.neighbors_of(i), &nn[i * 10..(i + 1) * 10], "anchor {i}");
        for (a, b) in t.distances_of(i).iter().zip(&nd[i * 10..(i + 1) * 10]) {
            assert!(((a - b) / b).abs() < 1e-12);
        }
    }
}

#[test]
fn rows_are_sorted_and_exclude_self() {
    let ps = random_points(80, 5, 3);
    let t = knn(&ps, &all_anchors(&ps), 9).unwrap();
    for i in 0..80 {
        let d = t.distances_of(i);
        assert!(d[0] > 0.0);
        assert!(d.windows(2).all(|w| w[0] <= w[1]));
        assert!(t.neighbors_of(i).iter().all(|&j| j != i as u32));
        let mut seen = t.neighbors_of(i).to_vec();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 9, "duplicate neighbor for anchor {i}");
    }
}

#[test]
fn duplicate_rows_are_reported() {
    let ps = PointSet::new(vec![1.0, 2.0, 1.0, 2.0, 5.0, 6.0], 2, None, "dup").unwrap();
    match knn(&ps, &[0], 1) {
        Err(crate::Error::ZeroDistance { a: 0, b: 1 }) => {}
        other => panic!("expected zero-distance error, got {other:?}"),
    }
}

#[test]
fn rejects_bad_k_and_anchors() {
    let ps = random_points(5, 2, 0);
    assert!(knn(&ps, &[0], 5).is_err());
    assert!(knn(&ps, &[0], 0).is_err());
    assert!(knn(&ps, &[9], 1).is_err());
    assert!(knn(&ps, &[], 1).is_err());
}

#[test]
fn results_identical_for_any_worker_count() {
    let ps = random_points(300, 24, 11);
    let anchors = all_anchors(&ps);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| knn(&ps, &anchors, 7).unwrap())
    };
    let t1 = run(1);
    let t4 = run(4);
    assert_eq!(t1, t4);
}

#[test]
fn isometry_preserves_distances_and_indices() {
    let n = 120;
    let dim = 6;
    let ps = random_points(n, dim, 13);
    // rotate coordinate pairs by fixed angles, then translate
    let angles = [0.3f64, 1.1, 2.7];
    let mut data = Vec::with_capacity(n * dim);
    for i in 0..n {
        let row = ps.row(i);
        let mut out = row.to_vec();
        for (p, &theta) in angles.iter().enumerate() {
            let (a, b) = (out[2 * p], out[2 * p + 1]);
            out[2 * p] = a * theta.cos() - b * theta.sin();
            out[2 * p + 1] = a * theta.sin() + b * theta.cos();
        }
        for (c, v) in out.iter_mut().enumerate() {
            *v += 10.0 + c as f64;
        }
        data.extend_from_slice(&out);
    }
    let moved = PointSet::new(data, dim, None, "moved").unwrap();

    let t0 = knn(&ps, &all_anchors(&ps), 5).unwrap();
    let t1 = knn(&moved, &all_anchors(&moved), 5).unwrap();
    assert_eq!(t0.neighbors, t1.neighbors);
    for (a, b) in t0.distances.iter().zip(&t1.distances) {
        assert!(((a - b) / a).abs() < 1e-9);
    }
}

#[test]
fn truncated_table_is_prefix_of_larger_k() {
    let ps = random_points(90, 4, 17);
    let anchors = all_anchors(&ps);
    let big = knn(&ps, &anchors, 12).unwrap();
    let small = knn(&ps, &anchors, 5).unwrap();
    assert_eq!(big.truncated(5).unwrap(), small);
    assert!(big.truncated(13).is_err());
    assert!(big.truncated(0).is_err());
}

#[test]
fn anchor_subset_rows_match_full_table() {
    let ps = random_points(64, 3, 23);
    let full = knn(&ps, &all_anchors(&ps), 4).unwrap();
    let subset = [3usize, 17, 40];
    let t = knn(&ps, &subset, 4).unwrap();
    for (row, &a) in subset.iter().enumerate() {
        assert_eq!(t.neighbors_of(row), full.neighbors_of(a));
        assert_eq!(t.distances_of(row), full.distances_of(a));
    }
}

// --- graph ---

#[test]
fn collinear_points_symmetrize_to_a_path() {
    let ps = one_d(&[0.0, 1.0, 3.0]);
    let g = build_knn_graph(&ps, 1).unwrap();
    assert_eq!(g.edge_count(), 2);
    let mut e0: Vec<(u32, f64)> = g.neighbors(0).collect();
    e0.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(e0, vec![(1, 1.0)]);
    let mut e1: Vec<(u32, f64)> = g.neighbors(1).collect();
    e1.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(e1, vec![(0, 1.0), (2, 2.0)]);
}

#[test]
fn full_k_gives_complete_graph() {
    let ps = random_points(10, 3, 5);
    let g = build_knn_graph(&ps, 9).unwrap();
    assert_eq!(g.edge_count(), 45);
}

#[test]
fn symmetrization_only_adds_edges() {
    let ps = random_points(150, 8, 29);
    let g = build_knn_graph(&ps, 4).unwrap();
    for v in 0..150 {
        assert!(g.degree(v) >= 4);
    }
}

#[test]
fn path_graph_geodesics() {
    let ps = one_d(&[0.0, 1.0, 3.0]);
    let g = build_knn_graph(&ps, 1).unwrap();
    let mut d = geodesic_distances(&g, &[0]).unwrap();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(d, vec![1.0, 3.0]);
}

#[test]
fn complete_graph_geodesics_are_euclidean() {
    let ps = random_points(40, 3, 31);
    let g = build_knn_graph(&ps, 39).unwrap();
    let sp = g.shortest_paths(7);
    for j in 0..40 {
        if j == 7 {
            continue;
        }
        let direct = squared_distance(ps.row(7), ps.row(j)).sqrt();
        assert!((sp[j] - direct).abs() <= 1e-12 * direct.max(1.0));
    }
}

#[test]
fn geodesics_match_floyd_warshall() {
    let ps = random_points(60, 2, 37);
    let g = build_knn_graph(&ps, 4).unwrap();
    let n = g.node_count();
    let mut fw = vec![f64::INFINITY; n * n];
    for v in 0..n {
        fw[v * n + v] = 0.0;
        for (t, w) in g.neighbors(v) {
            fw[v * n + t as usize] = w;
        }
    }
    for mid in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = fw[i * n + mid] + fw[mid * n + j];
                if through < fw[i * n + j] {
                    fw[i * n + j] = through;
                }
            }
        }
    }
    let component = g.largest_component();
    let sources: Vec<usize> = component.iter().map(|&v| v as usize).collect();
    for &s in &sources {
        let sp = g.shortest_paths(s);
        for j in 0..n {
            let want = fw[s * n + j];
            if want.is_finite() {
                assert!((sp[j] - want).abs() <= 1e-9, "source {s} node {j}");
            } else {
                assert!(sp[j].is_infinite());
            }
        }
    }
}

#[test]
fn geodesic_source_outside_component_errors() {
    // two far-apart pairs: k=1 graph is disconnected
    let ps = PointSet::new(vec![0.0, 0.1, 100.0, 100.1], 1, None, "2comp").unwrap();
    let g = build_knn_graph(&ps, 1).unwrap();
    let comp = g.largest_component();
    assert_eq!(comp.len(), 2);
    let outside = (0..4u32).find(|v| !comp.contains(v)).unwrap();
    assert!(geodesic_distances(&g, &[outside as usize]).is_err());
}

// --- cache ---

#[test]
fn table_cache_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.knn");
    let ps = random_points(50, 4, 41);
    let table = knn(&ps, &[0, 3, 9], 6).unwrap();
    let sum = crate::dataset::checksum(&ps);
    save_table(&table, sum, &path).unwrap();
    let loaded = load_table(&path, sum).unwrap();
    assert_eq!(loaded, table);
    assert!(load_table(&path, sum ^ 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn blocked_path_equals_oracle(n in 2usize..70, dim in 1usize..9, seed in 0u64..1000) {
        let ps = random_points(n, dim, seed);
        let k = 1 + (seed as usize) % (n - 1).min(12);
        let anchors = all_anchors(&ps);
        let t = knn(&ps, &anchors, k).unwrap();
        let (nd, nn) = naive_knn(&ps, &anchors, k);
        prop_assert_eq!(&t.neighbors, &nn);
        for (a, b) in t.distances.iter().zip(&nd) {
            prop_assert!(((a - b) / b).abs() < 1e-12);
        }
    }
}
