//! Batch evaluation over independent instances.
//!
//! With the `parallel` feature (on by default) batches run on the rayon pool;
//! without it every mode runs sequentially. Results are always returned in
//! index order, so reports do not depend on scheduling.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    /// Parallel when the feature is compiled in.
    #[default]
    Auto,
    Sequential,
    Parallel,
}

impl Execution {
    /// Whether this mode actually runs on the thread pool in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != Execution::Sequential
    }
}

/// `(0..n).map(f)` collected in order, possibly in parallel.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}
