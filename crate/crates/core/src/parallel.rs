//! Data-parallel helpers. With the `parallel` feature the batch loops and
//! the large product kernels run on rayon; without it (or after
//! `set_enabled(false)`) everything runs sequentially. Results are exact, so
//! both paths produce identical values.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Toggle the rayon paths at runtime (no effect without the feature).
pub fn set_enabled(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

pub fn enabled() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed)
}

/// Map every item, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if enabled() && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Split `items` into chunks, map each chunk, and combine the partial
/// results. Falls back to a single chunk below `min_parallel` items.
pub fn chunked_reduce<T, R, M, C>(items: &[T], min_parallel: usize, map_chunk: M, combine: C) -> Option<R>
where
    T: Sync,
    R: Send,
    M: Fn(&[T]) -> R + Sync + Send,
    C: Fn(R, R) -> R + Sync + Send,
{
    if items.is_empty() {
        return None;
    }
    #[cfg(feature = "parallel")]
    if enabled() && items.len() >= min_parallel {
        use rayon::prelude::*;
        let threads = rayon::current_num_threads().max(1);
        let chunk = items.len().div_ceil(threads * 4).max(1);
        return items.par_chunks(chunk).map(&map_chunk).reduce_with(&combine);
    }
    let _ = (min_parallel, &combine);
    Some(map_chunk(items))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let v: Vec<u64> = (0..1000).collect();
        assert_eq!(map(&v, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn chunked_sum_matches_sequential() {
        let v: Vec<u64> = (1..=5000).collect();
        let s = chunked_reduce(&v, 10, |c| c.iter().sum::<u64>(), |a, b| a + b).unwrap();
        assert_eq!(s, 5000 * 5001 / 2);
        assert!(chunked_reduce(&[] as &[u64], 1, |c| c.len(), |a, b| a + b).is_none());
    }
}
