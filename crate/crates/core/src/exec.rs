//! Node-level fan-out and deterministic reductions.
//!
//! Every grid computation is a pure per-node map. With the `parallel`
//! feature the map runs on the rayon pool; without it (or with
//! [`Exec::Sequential`]) it runs in order on the calling thread. Output order
//! is the input order in both cases, and all reductions go through
//! [`pairwise_sum`], so results are bit-identical across worker counts.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How per-node work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Maps `f` over `0..n`, preserving index order in the output.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Like [`Exec::map`] but short-circuits on the first error (lowest index wins).
    pub fn try_map<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map(n, f).into_iter().collect()
    }
}

/// Sizes the global worker pool. Must run before the first parallel map;
/// a no-op without the `parallel` feature.
pub fn set_worker_count(n: usize) -> crate::Result<()> {
    if n == 0 {
        return Err(crate::Error::Input("worker count must be positive".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| crate::Error::Input(format!("cannot size the worker pool: {e}")))?;
    Ok(())
}

/// Ordered pairwise summation. The split points depend only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if xs.len() <= LEAF {
        return xs.iter().fold(0.0, |acc, x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
