//! Squared Euclidean distance kernel.
//!
//! Thirty-two independent accumulator lanes, combined left-to-right at the
//! end, plus a serial tail. The lane count keeps eight 4-wide FMA chains in
//! flight, enough to cover the FMA latency; the fixed lane structure means
//! a given build on a given machine walks coordinates in one fixed order,
//! so results do not depend on worker count or anchor batching. The FMA
//! path is chosen once per process by runtime feature detection.

const LANES: usize = 32;

/// Squared l2 distance between two equal-length slices.
#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2")
            && std::arch::is_x86_feature_detected!("fma")
        {
            // SAFETY: feature presence checked at runtime.
            return unsafe { squared_distance_fma(a, b) };
        }
    }
    squared_distance_portable(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2", enable = "fma")]
unsafe fn squared_distance_fma(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; LANES];
    let a_chunks = a.chunks_exact(LANES);
    let b_chunks = b.chunks_exact(LANES);
    let a_rem = a_chunks.remainder();
    let b_rem = b_chunks.remainder();
    for (ca, cb) in a_chunks.zip(b_chunks) {
        for l in 0..LANES {
            let d = ca[l] - cb[l];
            acc[l] = d.mul_add(d, acc[l]);
        }
    }
    let mut sum = 0.0;
    for l in 0..LANES {
        sum += acc[l];
    }
    for (x, y) in a_rem.iter().zip(b_rem) {
        let d = x - y;
        sum = d.mul_add(d, sum);
    }
    sum
}

fn squared_distance_portable(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; LANES];
    let a_chunks = a.chunks_exact(LANES);
    let b_chunks = b.chunks_exact(LANES);
    let a_rem = a_chunks.remainder();
    let b_rem = b_chunks.remainder();
    for (ca, cb) in a_chunks.zip(b_chunks) {
        for l in 0..LANES {
            let d = ca[l] - cb[l];
            acc[l] += d * d;
        }
    }
    let mut sum = 0.0;
    for l in 0..LANES {
        sum += acc[l];
    }
    for (x, y) in a_rem.iter().zip(b_rem) {
        let d = x - y;
        sum += d * d;
    }
    sum
}
