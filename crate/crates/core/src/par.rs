//! Data-parallel helpers. With the `parallel` feature the index-space maps run
//! on the current rayon pool; without it they fall back to plain iterators.
//! Results are always returned in index order, so output never depends on
//! the number of workers.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..len).map(f)` collected in order, possibly in parallel.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_range_seq(len, f)
    }
}

/// Sequential reference path for [`map_range`].
pub fn map_range_seq<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

/// Splits `0..len` into contiguous chunks of at most `chunk` indices and maps
/// each chunk; chunk results come back in order.
pub fn map_chunks<T, F>(len: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    map_range(len.div_ceil(chunk), |c| f(c * chunk..((c + 1) * chunk).min(len)))
}

/// Runs `op` on a dedicated pool of `workers` threads (`None` = global pool).
/// A no-op wrapper when built without `parallel`.
pub fn with_workers<R, F>(workers: Option<usize>, op: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        match workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool")
                .install(op),
            None => op(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        op()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_results_independent_of_workers() {
        let a = with_workers(Some(1), || map_range(1000, |i| i * i));
        let b = with_workers(Some(4), || map_range(1000, |i| i * i));
        assert_eq!(a, b);
        assert_eq!(a, map_range_seq(1000, |i| i * i));
    }

    #[test]
    fn chunks_cover_range() {
        let parts = map_chunks(10, 3, |r| r.collect::<Vec<_>>());
        assert_eq!(parts.concat(), (0..10).collect::<Vec<_>>());
        assert!(map_chunks(0, 3, |r| r.len()).is_empty());
    }
}
