//! Thin switch between rayon and a sequential fallback.
//!
//! With the `parallel` feature disabled every helper here runs on the calling
//! thread, and results are identical either way.

/// Number of worker threads that a `workers = 0` request resolves to.
#[cfg(feature = "parallel")]
pub fn available_workers() -> usize {
    rayon::current_num_threads()
}

#[cfg(not(feature = "parallel"))]
pub fn available_workers() -> usize {
    1
}

/// Maps `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Runs `f` on every item using at most `workers` threads, handing each result
/// to `sink` on the calling thread as soon as it is ready. Completion order is
/// unspecified; callers sort afterwards.
#[cfg(feature = "parallel")]
pub fn for_each_streamed<T, R, F, S>(items: Vec<T>, workers: usize, f: F, mut sink: S)
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
    S: FnMut(R),
{
    use rayon::prelude::*;
    use std::sync::mpsc;

    let workers = workers.max(1);
    if workers == 1 {
        for item in items {
            sink(f(item));
        }
        return;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build worker pool");
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|scope| {
        let f = &f;
        scope.spawn(move || {
            pool.install(|| {
                items.into_par_iter().for_each_with(tx, |tx, item| {
                    // receiver lives until every sender is dropped
                    let _ = tx.send(f(item));
                });
            });
        });
        for r in rx {
            sink(r);
        }
    });
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_streamed<T, R, F, S>(items: Vec<T>, _workers: usize, f: F, mut sink: S)
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
    S: FnMut(R),
{
    for item in items {
        sink(f(item));
    }
}
