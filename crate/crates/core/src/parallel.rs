//! Replication-level data parallelism.
//!
//! [`replicate`] evaluates `f(0), f(1), ..., f(count - 1)` and returns the
//! results in index order. With the `parallel` feature the work is spread over
//! the current rayon pool, otherwise it runs on the calling thread. Either way
//! the output vector is identical, because each replication derives its own
//! state from its index.

/// Runs `f` for every index in `0..count`, buffering results by index.
pub fn replicate<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        replicate_sequential(count, f)
    }
}

/// Sequential reference path, always available.
pub fn replicate_sequential<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Runs `op` inside a pool of `threads` workers. Without the `parallel`
/// feature the thread count is ignored.
pub fn with_threads<R, OP>(threads: usize, op: OP) -> R
where
    R: Send,
    OP: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
        {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        op()
    }
}
