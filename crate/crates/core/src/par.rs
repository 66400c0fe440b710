//! Data-parallel helpers. With the `parallel` feature the work is spread
//! over rayon's pool; without it (or inside [`sequential`]) the same closures
//! run on the calling thread. Results are always combined in input order, so
//! output never depends on scheduling.

use std::ops::Range;

#[cfg(feature = "parallel")]
use std::cell::Cell;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with every helper in this module pinned to the sequential path.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    #[cfg(feature = "parallel")]
    {
        let prev = FORCE_SEQUENTIAL.with(|c| c.replace(true));
        let out = f();
        FORCE_SEQUENTIAL.with(|c| c.set(prev));
        out
    }
    #[cfg(not(feature = "parallel"))]
    {
        f()
    }
}

/// True when the helpers will fan out to the rayon pool.
pub fn is_parallel() -> bool {
    #[cfg(feature = "parallel")]
    {
        !FORCE_SEQUENTIAL.with(|c| c.get())
    }
    #[cfg(not(feature = "parallel"))]
    {
        false
    }
}

/// Maps `f` over a slice, preserving order.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Splits `range` into chunks of at most `chunk` elements, evaluates
/// `work` on each chunk and folds the results left-to-right with `combine`.
pub fn fold_chunks<T, W, C>(range: Range<u64>, chunk: u64, work: W, combine: C) -> Option<T>
where
    T: Send,
    W: Fn(Range<u64>) -> T + Sync + Send,
    C: Fn(T, T) -> T,
{
    let chunk = chunk.max(1);
    let len = range.end.saturating_sub(range.start);
    let pieces = len.div_ceil(chunk) as usize;
    let start = range.start;
    let end = range.end;
    let results = map_range(pieces, |p| {
        let lo = start + p as u64 * chunk;
        work(lo..(lo + chunk).min(end))
    });
    results.into_iter().reduce(combine)
}
