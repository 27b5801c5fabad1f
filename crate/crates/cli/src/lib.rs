//! Command-line driver for the `qcfem` binary.

pub mod config;
pub mod emit;
pub mod run;

pub use config::Cli;
pub use run::{run, Outcome, RunError};

/// Caps the global worker pool at `QCFEM_THREADS` when set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("QCFEM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("QCFEM_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}
