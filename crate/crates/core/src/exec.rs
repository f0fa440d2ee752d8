//! Data-parallel execution with a deterministic contract.
//!
//! Grid evaluations are embarrassingly parallel over sample points. Each
//! point's value depends only on its index, results are collected in index
//! order, and every aggregation (max scans, pairwise sums) runs sequentially
//! over that ordered buffer — so output is bit-identical whether the map ran
//! on one thread or many.
//!
//! The `parallel` cargo feature (default on) backs [`map_indexed`] with
//! rayon; without it everything runs sequentially. At runtime `LMS_THREADS`
//! caps the worker count: `LMS_THREADS=0` forces the sequential path, any
//! positive value sizes the global pool, unset uses the rayon default.

use std::sync::OnceLock;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Parsed value of `LMS_THREADS`, read once per process.
pub fn thread_cap() -> Option<usize> {
    static CAP: OnceLock<Option<usize>> = OnceLock::new();
    *CAP.get_or_init(|| {
        let cap = std::env::var("LMS_THREADS").ok()?.trim().parse::<usize>().ok()?;
        #[cfg(feature = "parallel")]
        if cap > 0 {
            // Sizing the global pool can only happen before first use; a
            // failure means the default pool is already live, which is fine.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(cap).build_global();
        }
        Some(cap)
    })
}

/// Evaluate `f(0..n)` and collect results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if thread_cap() != Some(0) {
            return map_indexed_par(n, f);
        }
    }
    map_indexed_seq(n, f)
}

/// Sequential reference path (also used by the benchmark suite).
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Parallel path over the global rayon pool.
#[cfg(feature = "parallel")]
pub fn map_indexed_par<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Pairwise (cascade) summation. The recursion shape depends only on the
/// slice length, so the result is reproducible and has O(log n) error growth.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
