use floquet_core::floquet::energy_grid;
use floquet_core::{DiscriminantSample, Error, FloquetSolver, HillConfig, HillSpectrum, PotentialExpr};
use rayon::prelude::*;

use crate::error::CliError;

/// Environment variable capping worker threads (`0` or unset: one per core).
pub const THREADS_ENV: &str = "FLOQUET_BANDS_THREADS";

pub fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got '{v}'"))),
    }
}

/// Worker pool honouring [`THREADS_ENV`].
pub fn pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

/// Uniform scan evaluated in parallel; results are in energy order whatever
/// the schedule.
pub fn parallel_scan(
    pool: &rayon::ThreadPool,
    solver: &FloquetSolver,
    e_min: f64,
    e_max: f64,
    n: usize,
) -> Result<Vec<DiscriminantSample>, Error> {
    let grid = energy_grid(e_min, e_max, n)?;
    let results: Vec<Result<DiscriminantSample, Error>> =
        pool.install(|| grid.par_iter().map(|&e| solver.sample(e)).collect());
    results.into_iter().collect()
}

/// Hill spectra for each `k`, in parallel.
pub fn parallel_hill(
    pool: &rayon::ThreadPool,
    p: &PotentialExpr,
    k_grid: &[f64],
    cfg: &HillConfig,
) -> Result<Vec<HillSpectrum>, Error> {
    let results: Vec<Result<HillSpectrum, Error>> = pool.install(|| {
        k_grid
            .par_iter()
            .map(|&k| floquet_core::hill_energies(p, k, cfg))
            .collect()
    });
    results.into_iter().collect()
}
