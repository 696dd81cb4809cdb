//! Data-parallel evaluation over independent instances.
//!
//! With the `parallel` feature (default) work is spread over the rayon
//! pool; without it everything runs in order on the calling thread. Results
//! keep the input order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `f` applied to every item.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// `f(seed)` for `seed` in `0..count`.
pub fn map_seeds<R, F>(count: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Sequential reference, always available for comparison.
pub fn map_seeds_sequential<R, F>(count: u64, f: F) -> Vec<R>
where
    F: Fn(u64) -> R,
{
    (0..count).map(f).collect()
}

/// Seeds in `0..count` for which `pred` fails, in increasing order.
pub fn failures<F>(count: u64, pred: F) -> Vec<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    map_seeds(count, |s| (!pred(s)).then_some(s))
        .into_iter()
        .flatten()
        .collect()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
