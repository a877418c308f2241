use faer::Par;

/// Execution mode for the numerical kernels.
///
/// `Sequential` is the bit-reproducible mode: repeated runs on the same
/// input produce identical bits. `Threads(n)` uses a rayon pool of `n`
/// threads (0 = one per core); results are then reproducible only up to
/// floating-point reassociation inside the dense kernels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    #[default]
    Sequential,
    Threads(usize),
}

impl Parallelism {
    /// Maps the `threads` setting: 1 is sequential, 0 is automatic.
    pub fn from_threads(threads: usize) -> Self {
        match threads {
            1 => Parallelism::Sequential,
            n => Parallelism::Threads(n),
        }
    }

    pub fn is_sequential(self) -> bool {
        self == Parallelism::Sequential
    }

    pub(crate) fn faer_par(self) -> Par {
        match self {
            Parallelism::Sequential => Par::Seq,
            Parallelism::Threads(_) => Par::rayon(0),
        }
    }

    /// Runs `f` inside a pool sized for this mode.
    pub fn install<T: Send>(self, f: impl FnOnce() -> T + Send) -> T {
        match self {
            Parallelism::Sequential | Parallelism::Threads(0) => f(),
            Parallelism::Threads(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build()
            {
                Ok(pool) => pool.install(f),
                Err(e) => {
                    log::warn!("could not build a {n}-thread pool ({e}); using the global pool");
                    f()
                }
            },
        }
    }
}
