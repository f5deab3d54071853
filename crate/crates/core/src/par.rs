//! Execution strategy for the data-parallel loops (determinant grids, exhaustive
//! enumerations, primal sampling). Results never depend on the strategy: searches
//! return the lowest matching index and maps preserve order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Strategy::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Strategy::Sequential
        }
    }
}

/// Lowest index in `0..n` satisfying `pred`.
pub fn find_first<F>(strategy: Strategy, n: usize, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    match strategy {
        Strategy::Sequential => (0..n).find(|&i| pred(i)),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..n).into_par_iter().find_first(|&i| pred(i)),
    }
}

/// `f` applied to `0..n`, in index order.
pub fn map_indices<T, F>(strategy: Strategy, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match strategy {
        Strategy::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let pred = |i: usize| i > 10 && i % 7 == 3;
        let seq = find_first(Strategy::Sequential, 1000, pred);
        assert_eq!(seq, Some(17));
        assert_eq!(find_first(Strategy::default(), 1000, pred), seq);
        assert_eq!(
            map_indices(Strategy::default(), 50, |i| i * i),
            map_indices(Strategy::Sequential, 50, |i| i * i)
        );
    }
}
