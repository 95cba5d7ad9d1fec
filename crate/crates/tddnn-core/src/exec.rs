//! Parallel/sequential execution helpers. With the default `parallel`
//! feature the bulk maps fan out over rayon; without it they degrade to
//! plain loops. The `*_seq` variants always run sequentially so the two
//! paths can be compared directly (see the criterion bench).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn try_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>, crate::Error>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U, crate::Error> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>, crate::Error>
where
    F: Fn(&T) -> Result<U, crate::Error>,
{
    try_map_seq(items, f)
}

pub(crate) fn try_map_seq<T, U, F>(items: &[T], f: F) -> Result<Vec<U>, crate::Error>
where
    F: Fn(&T) -> Result<U, crate::Error>,
{
    items.iter().map(f).collect()
}

/// Map each item to a result, keeping per-item failures.
#[cfg(feature = "parallel")]
pub(crate) fn map_results<T, U, F>(items: &[T], f: F) -> Vec<Result<U, crate::Error>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U, crate::Error> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_results<T, U, F>(items: &[T], f: F) -> Vec<Result<U, crate::Error>>
where
    F: Fn(&T) -> Result<U, crate::Error>,
{
    items.iter().map(f).collect()
}
