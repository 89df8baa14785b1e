//! Data-parallel map with a sequential fallback.
//!
//! The `parallel` feature (default) routes batch work through rayon; without
//! it everything runs sequentially. `force_sequential` is a runtime knob so
//! benchmarks can compare both paths in a single build. Results always come
//! back in input order, so output is deterministic either way.

use std::sync::atomic::{AtomicBool, Ordering};

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Forces the sequential path even when the `parallel` feature is enabled.
pub fn force_sequential(enabled: bool) {
    FORCE_SEQUENTIAL.store(enabled, Ordering::SeqCst);
}

/// True when batch work will actually fan out across threads.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.load(Ordering::SeqCst)
}

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if FORCE_SEQUENTIAL.load(Ordering::SeqCst) {
        items.into_iter().map(f).collect()
    } else {
        items.into_par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}
