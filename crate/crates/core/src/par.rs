//! Data-parallel helpers. With the `parallel` feature the work is spread
//! over the current rayon pool; without it everything runs sequentially.
//! Results are always returned in index order so outputs do not depend on
//! the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluate `f(i)` for `i in 0..n`, collected in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Apply `f` to every element of `items`, collected in order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
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

/// Fixed-size chunk width for reductions; partial sums are combined in
/// chunk order, so floating-point results are thread-count independent.
pub const CHUNK: usize = 4096;

/// Sum `f(i)` over `0..n` as two components with a deterministic grouping.
pub fn sum2_range<F>(n: usize, f: F) -> (f64, f64)
where
    F: Fn(usize) -> (f64, f64) + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let partial = map_range(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        (lo..hi).fold((0.0, 0.0), |acc, i| {
            let (a, b) = f(i);
            (acc.0 + a, acc.1 + b)
        })
    });
    partial
        .into_iter()
        .fold((0.0, 0.0), |acc, (a, b)| (acc.0 + a, acc.1 + b))
}

/// Number of worker threads available to the helpers above.
pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
