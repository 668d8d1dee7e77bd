//! Mapping a per-genus job over a range of genera.
//!
//! Output order always follows the input range. With the `parallel` feature
//! the work is spread over a rayon pool; `MUKAI_WALLS_THREADS` pins its size.

use std::ops::RangeInclusive;

use crate::verify::{check_genus, GenusCheck};

pub const THREADS_ENV: &str = "MUKAI_WALLS_THREADS";

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

pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

pub fn map_sequential<T, F>(genera: RangeInclusive<i64>, f: F) -> Vec<T>
where
    F: Fn(i64) -> T,
{
    genera.map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, F>(genera: RangeInclusive<i64>, threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(i64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let run = || genera.clone().into_par_iter().map(&f).collect::<Vec<T>>();
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    }
}

/// Without the `parallel` feature this is the sequential map.
#[cfg(not(feature = "parallel"))]
pub fn map_parallel<T, F>(genera: RangeInclusive<i64>, _threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(i64) -> T + Sync + Send,
{
    map_sequential(genera, f)
}

pub fn map_genera<T, F>(genera: RangeInclusive<i64>, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(i64) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => map_sequential(genera, f),
        Execution::Parallel => map_parallel(genera, threads_from_env(), f),
    }
}

pub fn verify_range(genera: RangeInclusive<i64>, exec: Execution) -> Vec<GenusCheck> {
    map_genera(genera, exec, check_genus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let a = verify_range(4..=40, Execution::Sequential);
        let b = verify_range(4..=40, Execution::Parallel);
        assert_eq!(a, b);
        assert!(a.iter().all(GenusCheck::passed));
    }

    #[test]
    fn fixed_pool_keeps_order() {
        let out = map_parallel(4..=30, Some(3), |g| g * g);
        assert_eq!(out, (4..=30).map(|g| g * g).collect::<Vec<_>>());
    }
}
