//! Sequential/parallel execution helpers.
//!
//! With the `parallel` feature (default) the `par_*` functions fan out over
//! rayon's current pool; without it they fall back to the sequential
//! implementations, which are always compiled and exported so benchmarks can
//! compare both paths. All callers merge results in input order, so the
//! output bytes never depend on the worker count.

/// Map in input order, sequentially.
pub fn seq_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    seq_map(items, f)
}

/// Flat-map chunks of `items` in input order.
pub fn seq_flat_map_chunks<T, U, F>(items: &[T], chunk: usize, f: F) -> Vec<U>
where
    F: Fn(&[T]) -> Vec<U>,
{
    let mut out = Vec::new();
    for c in items.chunks(chunk.max(1)) {
        out.extend(f(c));
    }
    out
}

#[cfg(feature = "parallel")]
pub fn par_flat_map_chunks<T, U, F>(items: &[T], chunk: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&[T]) -> Vec<U> + Sync + Send,
{
    use rayon::prelude::*;
    items
        .par_chunks(chunk.max(1))
        .map(|c| f(c))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_flat_map_chunks<T, U, F>(items: &[T], chunk: usize, f: F) -> Vec<U>
where
    F: Fn(&[T]) -> Vec<U>,
{
    seq_flat_map_chunks(items, chunk, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_matches_seq() {
        let xs: Vec<i64> = (0..1000).collect();
        let f = |x: &i64| x * x - 3;
        assert_eq!(par_map(&xs, f), seq_map(&xs, f));
        let g = |c: &[i64]| c.iter().map(|x| x + 1).collect::<Vec<_>>();
        assert_eq!(
            par_flat_map_chunks(&xs, 37, g),
            seq_flat_map_chunks(&xs, 37, g)
        );
    }
}
