//! Execution plumbing: data-parallel map helpers and thread-pool setup.
//!
//! Every parallel loop in the crate goes through [`map_indexed`], which
//! returns results in index order. Reductions over that vector happen
//! sequentially, so numeric output is independent of the worker count and
//! identical between the `parallel` and sequential builds up to the usual
//! floating-point reassociation across the fixed chunk boundaries.

/// Cap the global worker pool from the `SYMGM_THREADS` environment variable.
///
/// Call once at startup; later calls (or an already-initialized pool) are
/// ignored. A no-op in sequential builds.
pub fn configure_threads_from_env() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("SYMGM_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n > 0 {
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    }
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_indexed_preserves_order() {
        let v = map_indexed(100, |i| i * i);
        assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}
