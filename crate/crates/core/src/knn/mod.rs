//! Exact Euclidean k-nearest-neighbor search and kNN graphs.
//!
//! The search is a blocked brute-force scan: in the ambient dimensions this
//! crate targets (10^2..10^5) space-partitioning trees degenerate to linear
//! scans anyway, and a dense scan keeps the arithmetic order fixed.
//! Distances are accumulated as squared sums in a fixed lane order within
//! each point pair, with the square root taken once at the end, so results
//! are identical for any worker count or anchor batching.

mod cache;
mod dist;
mod graph;

use rayon::prelude::*;

use crate::dataset::PointSet;
use crate::error::{Error, Result};

pub use cache::{load_table, save_table};
pub use dist::squared_distance;
pub use graph::{build_knn_graph, geodesic_distances, KnnGraph};

/// Per-anchor sorted neighbor distances and indices, self excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    anchors: Vec<u32>,
    k: usize,
    /// `m x k`, each row ascending, strictly positive.
    distances: Vec<f64>,
    /// `m x k` dataset row indices; never the anchor itself.
    neighbors: Vec<u32>,
}

impl NeighborTable {
    pub fn anchor_count(&self) -> usize {
        self.anchors.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn anchors(&self) -> &[u32] {
        &self.anchors
    }

    /// Sorted distances from anchor `i` (position in the anchor list).
    pub fn distances_of(&self, i: usize) -> &[f64] {
        &self.distances[i * self.k..(i + 1) * self.k]
    }

    pub fn neighbors_of(&self, i: usize) -> &[u32] {
        &self.neighbors[i * self.k..(i + 1) * self.k]
    }

    /// The same table truncated to the first `k` neighbors. Neighbor lists
    /// for a smaller `k` are exactly the prefixes of the larger table, so a
    /// sweep over several `k` values can reuse one search at the maximum.
    pub fn truncated(&self, k: usize) -> Result<NeighborTable> {
        if k == 0 || k > self.k {
            return Err(Error::InvalidParam(format!(
                "cannot truncate table of k={} to k={}",
                self.k, k
            )));
        }
        if k == self.k {
            return Ok(self.clone());
        }
        let m = self.anchor_count();
        let mut distances = Vec::with_capacity(m * k);
        let mut neighbors = Vec::with_capacity(m * k);
        for i in 0..m {
            distances.extend_from_slice(&self.distances_of(i)[..k]);
            neighbors.extend_from_slice(&self.neighbors_of(i)[..k]);
        }
        Ok(NeighborTable {
            anchors: self.anchors.clone(),
            k,
            distances,
            neighbors,
        })
    }
}

/// How many dataset rows each parallel work item scans at once.
const DATA_BLOCK: usize = 128;
/// How many anchors share one streamed pass over the dataset.
const ANCHOR_BLOCK: usize = 64;

/// Exact k nearest neighbors of each anchor over all `n` points, the anchor
/// itself excluded. Ties are broken toward the smaller dataset index.
///
/// Fails with [`Error::ZeroDistance`] if an anchor meets a bitwise-distinct
/// row at distance zero or a duplicate of itself; run
/// [`deduplicate`](crate::dataset::deduplicate) first.
pub fn knn(ps: &PointSet, anchors: &[usize], k: usize) -> Result<NeighborTable> {
    let n = ps.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidParam(format!(
            "k={} out of range 1..={} for {} points",
            k,
            n - 1,
            n
        )));
    }
    if anchors.is_empty() {
        return Err(Error::InvalidParam("no anchors".into()));
    }
    if let Some(&bad) = anchors.iter().find(|&&a| a >= n) {
        return Err(Error::InvalidParam(format!(
            "anchor index {} out of range for {} points",
            bad, n
        )));
    }

    let m = anchors.len();
    let mut distances = vec![0.0f64; m * k];
    let mut neighbors = vec![0u32; m * k];

    let results: Vec<Result<()>> = anchors
        .par_chunks(ANCHOR_BLOCK)
        .zip(distances.par_chunks_mut(ANCHOR_BLOCK * k))
        .zip(neighbors.par_chunks_mut(ANCHOR_BLOCK * k))
        .map(|((anchor_chunk, dist_out), nbr_out)| {
            scan_chunk(ps, anchor_chunk, k, dist_out, nbr_out)
        })
        .collect();
    for r in results {
        r?;
    }

    Ok(NeighborTable {
        anchors: anchors.iter().map(|&a| a as u32).collect(),
        k,
        distances,
        neighbors,
    })
}

/// Scan the whole dataset for one chunk of anchors. The dataset is walked in
/// ascending row blocks so every anchor sees candidates in ascending index
/// order, which makes the heap contents independent of the blocking.
fn scan_chunk(
    ps: &PointSet,
    anchor_chunk: &[usize],
    k: usize,
    dist_out: &mut [f64],
    nbr_out: &mut [u32],
) -> Result<()> {
    let n = ps.len();
    let mut heaps: Vec<BoundedHeap> = anchor_chunk.iter().map(|_| BoundedHeap::new(k)).collect();

    let mut block_start = 0;
    while block_start < n {
        let block_end = (block_start + DATA_BLOCK).min(n);
        for (ai, &anchor) in anchor_chunk.iter().enumerate() {
            let anchor_row = ps.row(anchor);
            let heap = &mut heaps[ai];
            for j in block_start..block_end {
                if j == anchor {
                    continue;
                }
                let d2 = squared_distance(anchor_row, ps.row(j));
                if d2 <= 0.0 {
                    return Err(Error::ZeroDistance { a: anchor, b: j });
                }
                heap.offer(d2, j as u32);
            }
        }
        block_start = block_end;
    }

    for (ai, heap) in heaps.into_iter().enumerate() {
        let sorted = heap.into_sorted();
        for (slot, (d2, j)) in sorted.into_iter().enumerate() {
            dist_out[ai * k + slot] = d2.sqrt();
            nbr_out[ai * k + slot] = j;
        }
    }
    Ok(())
}

/// Fixed-capacity max-heap over (squared distance, index) with index
/// tie-breaking: keeps the k lexicographically smallest pairs.
struct BoundedHeap {
    k: usize,
    entries: Vec<(f64, u32)>,
}

impl BoundedHeap {
    fn new(k: usize) -> Self {
        BoundedHeap {
            k,
            entries: Vec::with_capacity(k + 1),
        }
    }

    #[inline]
    fn offer(&mut self, d2: f64, idx: u32) {
        if self.entries.len() < self.k {
            self.entries.push((d2, idx));
            if self.entries.len() == self.k {
                // heapify once full
                for i in (0..self.k / 2).rev() {
                    self.sift_down(i);
                }
            }
            return;
        }
        let top = self.entries[0];
        if (d2, idx) < top {
            self.entries[0] = (d2, idx);
            self.sift_down(0);
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let len = self.entries.len();
        loop {
            let l = 2 * i + 1;
            let r = l + 1;
            let mut largest = i;
            if l < len && self.entries[l] > self.entries[largest] {
                largest = l;
            }
            if r < len && self.entries[r] > self.entries[largest] {
                largest = r;
            }
            if largest == i {
                return;
            }
            self.entries.swap(i, largest);
            i = largest;
        }
    }

    fn into_sorted(mut self) -> Vec<(f64, u32)> {
        self.entries
            .sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite distances"));
        self.entries
    }
}

/// Convenience anchor list `0..n`.
pub fn all_anchors(ps: &PointSet) -> Vec<usize> {
    (0..ps.len()).collect()
}

#[cfg(test)]
mod tests;
