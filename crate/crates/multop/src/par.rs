//! Feature-switched data-parallel map for per-atom work.
//!
//! With the `parallel` feature (default) the map fans out over rayon;
//! without it the same call runs sequentially. Results are collected in
//! index order either way, so outputs are bit-identical across both builds
//! and any thread count. Reductions happen after collection, sequentially,
//! for the same reason.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}
