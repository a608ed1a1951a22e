//! Execution-mode switch for the data-parallel drivers.
//!
//! Batch work (length tables, oracle grids, residual sweeps) goes through
//! [`map_collect`], which runs on rayon when the `parallel` feature is
//! enabled and falls back to a plain sequential loop otherwise. Results are
//! collected in input order in both modes, so output is deterministic and
//! independent of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a batch driver should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Parallel when the `parallel` feature is compiled in, sequential otherwise.
    #[default]
    Auto,
    /// Always sequential, even when rayon is available.
    Sequential,
}

/// Sizes the global worker pool (no-op without the `parallel` feature or
/// when a pool already exists). The RAYON_NUM_THREADS environment variable
/// works as well.
#[cfg(feature = "parallel")]
pub fn configure_threads(n: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_n: usize) {}

/// Ordered map over a slice. The order of `items` is preserved in the output
/// regardless of mode or thread count.
pub fn map_collect<T, U, F>(mode: Mode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode {
        Mode::Sequential => items.iter().map(f).collect(),
        Mode::Auto => map_auto(items, f),
    }
}

#[cfg(feature = "parallel")]
fn map_auto<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_auto<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_collect(Mode::Sequential, &items, |x| x * x);
        let auto = map_collect(Mode::Auto, &items, |x| x * x);
        assert_eq!(seq, auto);
        assert_eq!(seq[10], 100);
    }
}
