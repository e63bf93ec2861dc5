//! Data-parallel maps over independent inputs.
//!
//! With the `parallel` feature the work is spread over the rayon pool;
//! without it (or through [`map_sequential`]) items are processed in order.
//! Results always come back in input order.

/// Applies `f` to every item, in parallel when the `parallel` feature is on.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Whether [`map`] runs on the thread pool.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
