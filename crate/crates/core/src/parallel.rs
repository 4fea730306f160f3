//! Deterministic fork-join executor.
//!
//! A phase maps a pure per-cell computation over a dense list of cells. The
//! list is split into `ceil(len / workers)`-sized static chunks, each chunk is
//! evaluated by one worker, and the per-chunk outputs are concatenated in
//! input order. Computations read an immutable snapshot and write only their
//! return value, so the result never depends on the worker count.
//!
//! With the `parallel` feature disabled (or `workers == 1`) every phase runs
//! inline on the calling thread.

use std::ops::Range;

use crate::error::{Error, Result};

/// Environment variable consulted when no worker count is given explicitly.
pub const WORKERS_ENV: &str = "EIKONAL_WORKERS";

/// Phases shorter than this run inline; thread dispatch costs more than the work.
pub const MIN_PARALLEL_LEN: usize = 512;

/// Number of hardware threads, at least 1.
pub fn hardware_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Picks the worker count: an explicit request wins, then `EIKONAL_WORKERS`,
/// then hardware parallelism. A value of 0 also means hardware parallelism.
pub fn resolve_workers(requested: Option<usize>) -> usize {
    let n = requested.or_else(|| {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
    });
    match n {
        None | Some(0) => hardware_workers(),
        Some(n) => n,
    }
}

/// Static partition of a phase's input list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhasePlan {
    pub len: usize,
    pub chunk: usize,
    pub workers: usize,
}

impl PhasePlan {
    pub fn new(len: usize, workers: usize) -> Self {
        let workers = workers.max(1);
        PhasePlan {
            len,
            chunk: len.div_ceil(workers).max(1),
            workers,
        }
    }

    /// Contiguous index ranges covering `0..len` exactly once, in order.
    pub fn chunks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.len)
            .step_by(self.chunk)
            .map(move |start| start..(start + self.chunk).min(self.len))
    }
}

pub struct Executor {
    workers: usize,
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("workers", &self.workers)
            .finish()
    }
}

impl Executor {
    /// `workers == 0` selects hardware parallelism.
    pub fn new(workers: usize) -> Result<Self> {
        let workers = if workers == 0 { hardware_workers() } else { workers };
        #[cfg(feature = "parallel")]
        {
            let pool = if workers > 1 {
                Some(
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(workers)
                        .thread_name(|k| format!("eikonal-worker-{k}"))
                        .build()
                        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?,
                )
            } else {
                None
            };
            Ok(Executor { workers, pool })
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = Error::InvalidArgument;
            Ok(Executor { workers })
        }
    }

    pub fn sequential() -> Self {
        Executor {
            workers: 1,
            #[cfg(feature = "parallel")]
            pool: None,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn plan(&self, len: usize) -> PhasePlan {
        PhasePlan::new(len, self.workers)
    }

    /// Evaluates `f(k)` for `k in 0..len`, returning results in index order.
    pub fn map_indices<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            if len >= MIN_PARALLEL_LEN {
                use rayon::prelude::*;
                let plan = self.plan(len);
                let ranges: Vec<Range<usize>> = plan.chunks().collect();
                let parts: Vec<Vec<T>> = pool.install(|| {
                    ranges
                        .into_par_iter()
                        .map(|r| r.map(&f).collect::<Vec<T>>())
                        .collect()
                });
                let mut out = Vec::with_capacity(len);
                for part in parts {
                    out.extend(part);
                }
                return out;
            }
        }
        (0..len).map(f).collect()
    }

    /// Evaluates `f` on every cell of `cells`, results in input order.
    pub fn map_cells<T, F>(&self, cells: &[usize], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        self.map_indices(cells.len(), |k| f(cells[k]))
    }

    /// Fallible [`Executor::map_cells`]; the reported error is the first one
    /// in input order, not the first one to occur in time.
    pub fn try_map_cells<T, E, F>(&self, cells: &[usize], f: F) -> std::result::Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> std::result::Result<T, E> + Sync,
    {
        self.map_cells(cells, f).into_iter().collect()
    }
}
