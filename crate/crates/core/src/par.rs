//! Node maps that run on rayon when the `parallel` feature is on.
//!
//! Each node is computed independently against immutable inputs, and results
//! are collected in index order, so output does not depend on scheduling.

use alloc::vec::Vec;

use crate::error::Result;

#[cfg(feature = "parallel")]
pub(crate) fn try_map<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_map<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T>,
{
    (0..n).map(f).collect()
}
