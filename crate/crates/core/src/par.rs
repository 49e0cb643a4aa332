//! Data-parallel execution seam.
//!
//! Monte-Carlo trials and sweep grid points are embarrassingly parallel;
//! with the `parallel` feature (default) they run on rayon, without it the
//! same closures run sequentially. Reductions are over integers or
//! index-ordered vectors, so results are bit-identical across thread
//! schedules and between the two modes.

/// Maps `f` over `0..count`, preserving index order in the output.
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Sequential variant, always available (used by benches to compare
/// against the parallel path).
pub fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}
