//! Symmetrized kNN graph and shortest-path (geodesic) distances.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::dataset::PointSet;
use crate::error::{Error, Result};

use super::{all_anchors, knn};

/// Weighted undirected kNN graph in compressed adjacency form. An edge is
/// present if either endpoint lists the other among its k nearest neighbors;
/// weights are the Euclidean distances.
#[derive(Debug, Clone)]
pub struct KnnGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
}

impl KnnGraph {
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Node indices of the largest connected component, ascending.
    pub fn largest_component(&self) -> Vec<u32> {
        let n = self.node_count();
        let mut component = vec![u32::MAX; n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if component[start] != u32::MAX {
                continue;
            }
            let id = sizes.len() as u32;
            let mut size = 0usize;
            stack.push(start);
            component[start] = id;
            while let Some(v) = stack.pop() {
                size += 1;
                for (t, _) in self.neighbors(v) {
                    let t = t as usize;
                    if component[t] == u32::MAX {
                        component[t] = id;
                        stack.push(t);
                    }
                }
            }
            sizes.push(size);
        }
        let best = (0..sizes.len()).max_by_key(|&i| sizes[i]).unwrap_or(0) as u32;
        (0..n as u32)
            .filter(|&v| component[v as usize] == best)
            .collect()
    }

    /// Dijkstra from `source`; `f64::INFINITY` for unreachable nodes.
    pub fn shortest_paths(&self, source: usize) -> Vec<f64> {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(HeapEntry {
            dist: 0.0,
            node: source as u32,
        });
        while let Some(HeapEntry { dist: d, node }) = heap.pop() {
            if d > dist[node as usize] {
                continue;
            }
            for (t, w) in self.neighbors(node as usize) {
                let nd = d + w;
                if nd < dist[t as usize] {
                    dist[t as usize] = nd;
                    heap.push(HeapEntry { dist: nd, node: t });
                }
            }
        }
        dist
    }
}

/// Min-heap entry ordered by distance (ties by node for determinism).
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap, we need smallest-distance first
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Build the symmetrized k-nearest-neighbor graph of a point set.
pub fn build_knn_graph(ps: &PointSet, k: usize) -> Result<KnnGraph> {
    let table = knn(ps, &all_anchors(ps), k)?;
    let n = ps.len();

    // Collect undirected edges (small index first) and drop the duplicates
    // that mutual neighbor pairs produce.
    let mut edges: Vec<(u32, u32, f64)> = Vec::with_capacity(n * k);
    for i in 0..n {
        let a = i as u32;
        for (&b, &w) in table.neighbors_of(i).iter().zip(table.distances_of(i)) {
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            edges.push((u, v, w));
        }
    }
    edges.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    edges.dedup_by_key(|e| (e.0, e.1));

    let mut degrees = vec![0usize; n];
    for &(u, v, _) in &edges {
        degrees[u as usize] += 1;
        degrees[v as usize] += 1;
    }
    let mut offsets = vec![0usize; n + 1];
    for i in 0..n {
        offsets[i + 1] = offsets[i] + degrees[i];
    }
    let mut targets = vec![0u32; edges.len() * 2];
    let mut weights = vec![0.0f64; edges.len() * 2];
    let mut cursor = offsets.clone();
    for &(u, v, w) in &edges {
        targets[cursor[u as usize]] = v;
        weights[cursor[u as usize]] = w;
        cursor[u as usize] += 1;
        targets[cursor[v as usize]] = u;
        weights[cursor[v as usize]] = w;
        cursor[v as usize] += 1;
    }
    Ok(KnnGraph {
        offsets,
        targets,
        weights,
    })
}

/// Pool the shortest-path distances from each source to every node it can
/// reach into one multiset, zeros (the sources themselves) excluded.
///
/// Every source must lie in the graph's largest connected component.
pub fn geodesic_distances(graph: &KnnGraph, sources: &[usize]) -> Result<Vec<f64>> {
    let component = graph.largest_component();
    let in_component = membership_mask(graph.node_count(), &component);
    if !sources.iter().all(|&s| in_component[s]) {
        return Err(Error::Degenerate(
            "a source lies outside the graph's largest component".into(),
        ));
    }
    if sources.is_empty() {
        return Err(Error::InvalidParam("no sources".into()));
    }
    let per_source: Vec<Vec<f64>> = sources
        .par_iter()
        .map(|&s| {
            graph
                .shortest_paths(s)
                .into_iter()
                .filter(|d| d.is_finite() && *d > 0.0)
                .collect()
        })
        .collect();
    Ok(per_source.into_iter().flatten().collect())
}

pub(crate) fn membership_mask(n: usize, members: &[u32]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &m in members {
        mask[m as usize] = true;
    }
    mask
}
