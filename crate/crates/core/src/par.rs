//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature (default) work items run on the rayon pool;
//! without it they run in order on the calling thread. Outputs are always
//! returned in index order, so reductions downstream are deterministic.

/// Maps `f` over `0..len`, in parallel when the `parallel` feature is on.
pub fn map_indices<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_indices_parallel(len, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indices_sequential(len, f)
    }
}

pub fn map_indices_sequential<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indices_parallel<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

/// Configures the global pool. A no-op in sequential builds.
pub fn init_threads(threads: Option<usize>) -> Result<(), String> {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())?;
        }
        Ok(())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(())
    }
}

pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v = map_indices(100, |i| i * i);
        assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
        assert_eq!(v, map_indices_sequential(100, |i| i * i));
    }
}
