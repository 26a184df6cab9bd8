//! Rayon/sequential compatibility layer.
//!
//! With the `parallel` feature (the default) this re-exports rayon's parallel
//! iterator traits. Without it, a sequential stand-in provides the same
//! `into_par_iter` entry point so call sites compile unchanged and run on the
//! plain `Iterator` chain.

#[cfg(feature = "parallel")]
pub use rayon::prelude::*;

#[cfg(not(feature = "parallel"))]
mod sequential {
    pub trait IntoParallelIterator {
        type Iter;
        type Item;
        fn into_par_iter(self) -> Self::Iter;
    }

    impl<I: IntoIterator> IntoParallelIterator for I {
        type Iter = I::IntoIter;
        type Item = I::Item;
        fn into_par_iter(self) -> Self::Iter {
            self.into_iter()
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub use sequential::*;

/// Runs `op` on a pool of `workers` threads when parallelism is compiled in;
/// `None` uses the machine's default parallelism. The sequential build runs
/// `op` directly.
pub fn with_workers<T: Send>(workers: Option<usize>, op: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        match workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool construction")
                .install(op),
            None => op(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        op()
    }
}
