//! Data-parallel mapping with a sequential fallback. With the `parallel`
//! feature (enabled by default) slices are mapped on the rayon thread
//! pool; compiled without it, the identical API runs sequentially. Either
//! way results keep the input order, so outputs are deterministic.

#[cfg(feature = "parallel")]
pub fn map_slice<T, U, F>(xs: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    use rayon::prelude::*;
    xs.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U, F>(xs: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    xs.iter().map(f).collect()
}
