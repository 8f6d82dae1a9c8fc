//! Data-parallel helpers with a sequential fallback.
//!
//! Monte-Carlo trials and per-subcarrier inner loops are embarrassingly
//! parallel; everything funnels through [`map_indexed`] so the crate has one
//! switch between rayon and plain iteration. `map_indexed_seq` is always
//! available so benchmarks can compare both paths in a single binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
///
/// Runs on the rayon pool when the `parallel` feature is enabled. Output
/// ordering (and therefore any downstream reduction) is identical either way.
#[cfg(feature = "parallel")]
pub fn map_indexed<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Sequential counterpart of [`map_indexed`], available under every feature
/// combination.
pub fn map_indexed_seq<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}
