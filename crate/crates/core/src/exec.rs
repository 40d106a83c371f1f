//! Execution policy for the data-parallel loops (matrix products, quadrature
//! accumulation, parameter sweeps).
//!
//! Every parallel path maps independent work items and then folds the
//! partial results in index order, so the output is bit-identical to the
//! sequential path regardless of thread count. Without the `parallel`
//! feature, [`Execution::Parallel`] silently runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
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

impl Execution {
    /// Evaluates `f` on `0..n` and returns the results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Fills `out` in chunks of `chunk` elements; `f` receives the chunk index
    /// and the mutable chunk.
    pub fn for_each_chunk<T, F>(self, out: &mut [T], chunk: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => out
                .par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(i, c)| f(i, c)),
            _ => out.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c)),
        }
    }
}
