//! Data-parallel sweep helper.
//!
//! With the default `parallel` feature the sweep fans out over rayon;
//! without it, the same closure runs sequentially in input order. Both
//! paths collect results in input order, so output bytes are identical
//! either way.

/// Applies `f` to every item, in parallel when the `parallel` feature is
/// enabled, preserving input order in the output.
pub fn sweep<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Caps the rayon worker pool (no-op without the `parallel` feature, or
/// when a global pool was already installed).
pub fn set_jobs(jobs: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_preserves_order() {
        let out = sweep((0..100i64).collect(), |x| x * x);
        assert_eq!(out, (0..100i64).map(|x| x * x).collect::<Vec<_>>());
    }
}
