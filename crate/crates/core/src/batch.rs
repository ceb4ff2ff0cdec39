//! Factorizing many independent texts at once.
//!
//! A single factorization is sequential. Batches are spread over a rayon
//! pool when the `parallel` feature is on; without it, or with
//! [`Parallelism::Sequential`], items run in order on the calling thread.

use crate::suffix::TextBuffer;
use crate::{Algorithm, Epsilon, Factor, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether [`Parallelism::Parallel`] actually uses more than one thread.
    pub fn available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Applies `f` to every item, keeping input order in the output.
pub fn map<T, R, F>(items: &[T], mode: Parallelism, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub fn factorize_all(
    texts: &[TextBuffer],
    algorithm: Algorithm,
    epsilon: Epsilon,
    mode: Parallelism,
) -> Vec<Result<Vec<Factor>>> {
    map(texts, mode, |t| algorithm.factorize(t, epsilon))
}
