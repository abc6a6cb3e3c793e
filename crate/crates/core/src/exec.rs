//! Data-parallel helpers.
//!
//! Batch operations (grid scans, line scans, Monte-Carlo samples) are written
//! as index maps over independent work items. With the `parallel` feature the
//! map runs on the rayon pool; without it, or with [`Exec::Sequential`], it is a
//! plain loop. Results are collected in index order either way, so the output
//! never depends on scheduling.

/// How batch work is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `(0..len).map(f).collect()`, possibly on the rayon pool.
    pub fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }
}
