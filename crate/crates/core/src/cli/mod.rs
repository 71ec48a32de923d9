//! File formats, named fixtures and verification suites behind the `ainf` binary.

pub mod fixture;
pub mod format;
pub mod report;
pub mod suites;

pub use fixture::{make_fixture, FixtureName};
pub use report::{Check, Status, VerifyReport};
pub use suites::{detect_datum, detect_datum_at, run_suite, Input, Suite};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "AINF_THREADS";

/// Sizes the global thread pool from [`THREADS_VAR`] when it holds a positive integer.
pub fn configure_threads() {
    let n = std::env::var(THREADS_VAR).ok().and_then(|s| s.trim().parse::<usize>().ok());
    if let Some(n) = n.filter(|&n| n > 0) {
        // a second call finds the pool already built, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
