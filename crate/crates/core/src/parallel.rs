//! Worker-count control. Results never depend on the worker count.

use crate::error::{Error, Result};

/// Caps the number of worker threads when set to a positive integer.
pub const THREADS_ENV: &str = "PALINTOEP_THREADS";

/// Worker cap requested through [`THREADS_ENV`], if any.
pub fn configured_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::Config(format!("{THREADS_ENV}: {e}"))),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got {s:?}"
            ))),
        },
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool for `None`.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs `f` under the worker cap from the environment.
pub fn with_configured_threads<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    with_threads(configured_threads()?, f)
}
