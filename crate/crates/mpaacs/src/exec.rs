//! Execution strategy for the data-parallel kernels.
//!
//! Grid evaluation, parameter sweeps, and the parity-based cross-checks all
//! map an independent kernel over an index range. `Execution` selects between
//! a plain sequential loop and a rayon-backed parallel map. Without the
//! `parallel` cargo feature the parallel variant degrades to the sequential
//! loop, so callers can hold an `Execution` unconditionally.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to schedule an embarrassingly parallel loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    /// Single-threaded loop in index order.
    Sequential,
    /// rayon work-stealing loop; falls back to `Sequential` when the crate
    /// is built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Maps `f` over `0..len`, producing the results in index order regardless
/// of the schedule.
pub(crate) fn map_indexed<T, F>(exec: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..len).map(f).collect(),
        Execution::Parallel => {
            #[cfg(feature = "parallel")]
            {
                (0..len).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..len).map(f).collect()
            }
        }
    }
}
