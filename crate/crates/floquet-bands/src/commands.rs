use std::path::PathBuf;

use floquet_core::{
    cross_validate, parse_potential, validate_potential, BandAnalysis, FloquetSolver,
    PotentialExpr, ValidationTable, DEFAULT_VALIDATION_GRID, DEFAULT_VALIDATION_TOL,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output;
use crate::scan::{parallel_hill, parallel_scan, pool, threads_from_env};

/// Bound on `|ΔE|` for a passing `hill-compare`.
pub const HILL_COMPARE_TOL: f64 = 1e-6;
/// Points in the `hill-compare` k grid, `k_j = j/15`.
pub const HILL_COMPARE_K_POINTS: usize = 16;

/// What a command wrote and whether its check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Parses the potential and checks periodicity and PT symmetry.
pub fn validated_potential(cfg: &RunConfig) -> Result<PotentialExpr, CliError> {
    let p = parse_potential(&cfg.potential).map_err(|e| CliError::Usage(format!("potential: {e}")))?;
    let r = validate_potential(&p, DEFAULT_VALIDATION_GRID, DEFAULT_VALIDATION_TOL)?;
    if !r.passed() {
        return Err(CliError::Validation(format!(
            "'{}': periodicity residual {:e}, PT residual {:e} (tolerance {:e})",
            cfg.potential, r.periodicity_residual, r.pt_residual, r.tol
        )));
    }
    Ok(p)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = validated_potential(cfg)?;
    let workers = pool(threads_from_env()?)?;
    let solver = FloquetSolver::new(&p, &cfg.integration())?;
    let samples = parallel_scan(&workers, &solver, cfg.e_min, cfg.e_max, cfg.n_samples)?;
    let worst = samples
        .iter()
        .map(|s| s.residuals.max())
        .fold(0.0, |m: f64, v| if v.is_nan() { v } else { m.max(v) });
    let passed = worst <= cfg.tol_identity;
    let path = cfg.output_file("verify");
    output::write_file(
        &path,
        &output::verify_table(&cfg.potential, &samples, cfg.tol_identity, passed, cfg.output_format),
    )?;
    Ok(Outcome {
        passed,
        files: vec![path],
        summary: format!(
            "verify {}: {} energies, max residual {worst:e} (tolerance {:e})",
            cfg.potential, cfg.n_samples, cfg.tol_identity
        ),
    })
}

/// Scan plus band assembly over the configured window.
pub fn band_analysis(cfg: &RunConfig, p: &PotentialExpr, e_min: f64, e_max: f64) -> Result<BandAnalysis, CliError> {
    let workers = pool(threads_from_env()?)?;
    let solver = FloquetSolver::new(p, &cfg.integration())?;
    let samples = parallel_scan(&workers, &solver, e_min, e_max, cfg.n_samples)?;
    Ok(solver.analyze_samples(samples, &cfg.tolerances())?)
}

pub fn cmd_bands(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = validated_potential(cfg)?;
    let a = band_analysis(cfg, &p, cfg.e_min, cfg.e_max)?;
    let band_path = cfg.output_file("bands");
    let scan_path = output::sibling(&band_path, "scan", cfg.output_format);
    output::write_file(
        &band_path,
        &output::band_table(&cfg.potential, &a.structure, cfg.output_format),
    )?;
    output::write_file(&scan_path, &output::scan_table(&a.samples, cfg.output_format))?;
    let coalesced = a.structure.gaps.iter().filter(|g| g.coalesced).count();
    Ok(Outcome {
        passed: true,
        files: vec![band_path, scan_path],
        summary: format!(
            "bands {}: {} bands, {} gaps ({coalesced} coalesced) in [{}, {}]",
            cfg.potential,
            a.structure.bands.len(),
            a.structure.gaps.len(),
            cfg.e_min,
            cfg.e_max
        ),
    })
}

pub fn hill_compare_k_grid() -> Vec<f64> {
    (0..HILL_COMPARE_K_POINTS)
        .map(|j| j as f64 / (HILL_COMPARE_K_POINTS - 1) as f64)
        .collect()
}

/// Cross-validation table. The scan window is widened when needed so that it
/// covers the lowest three Hill eigenvalues at every `k`.
pub fn hill_comparison(cfg: &RunConfig, p: &PotentialExpr) -> Result<ValidationTable, CliError> {
    let workers = pool(threads_from_env()?)?;
    let k_grid = hill_compare_k_grid();
    let spectra = parallel_hill(&workers, p, &k_grid, &cfg.hill())?;
    let (mut lo, mut hi) = (cfg.e_min, cfg.e_max);
    for s in &spectra {
        lo = lo.min(s.eigenvalues[0].re - 1.0);
        hi = hi.max(s.eigenvalues[2].re + 1.0);
    }
    let bands = band_analysis(cfg, p, lo, hi)?.structure;
    Ok(cross_validate(p, &bands, &k_grid, &cfg.hill(), &cfg.integration())?)
}

pub fn cmd_hill_compare(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = validated_potential(cfg)?;
    let table = hill_comparison(cfg, &p)?;
    let max = table.overall_max_error();
    let passed = max.is_some_and(|m| m <= HILL_COMPARE_TOL);
    let path = cfg.output_file("hill_compare");
    output::write_file(&path, &output::hill_table(&cfg.potential, &table, cfg.output_format))?;
    let max_text = max.map_or_else(|| "n/a".to_string(), |m| format!("{m:e}"));
    Ok(Outcome {
        passed,
        files: vec![path],
        summary: format!(
            "hill-compare {}: max |ΔE| {max_text} (tolerance {HILL_COMPARE_TOL:e}), Hill spectrum real: {}",
            cfg.potential, table.hill_real
        ),
    })
}
