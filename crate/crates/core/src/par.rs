//! Index-parallel map with a sequential fallback.
//!
//! With the `parallel` feature, work fans out over rayon; results always come
//! back in index order, so output does not depend on scheduling.

use std::ops::Range;

#[cfg_attr(not(feature = "parallel"), allow(unused_imports))]
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon's global pool, or a dedicated pool of `jobs` threads.
    #[default]
    Parallel,
    Jobs(usize),
}

impl Execution {
    /// `None` or `Some(0)` means the global pool; `Some(1)` runs inline.
    pub fn from_jobs(jobs: Option<usize>) -> Execution {
        match jobs {
            None | Some(0) => Execution::Parallel,
            Some(1) => Execution::Sequential,
            Some(n) => Execution::Jobs(n),
        }
    }
}

pub fn map_range<T, F>(range: Range<usize>, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => Ok(range.map(f).collect()),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            Ok(range.into_par_iter().map(f).collect())
        }
        #[cfg(feature = "parallel")]
        Execution::Jobs(n) => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(|| range.into_par_iter().map(f).collect()))
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel | Execution::Jobs(_) => Ok(range.map(f).collect()),
    }
}
