//! Hill's method: the Schrödinger operator `−d²/dx² − V` in the Bloch plane
//! wave basis `e^{i(2n+k)x}`, `n = −N..=N`, truncated and diagonalised densely.
//! It shares nothing with the ODE path and serves as its independent check.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::floquet::{BandStructure, FloquetSolver, Tolerances};
use crate::linalg::{eigenvalues, ComplexMatrix};
use crate::ode::IntegrationConfig;
use crate::potential::{fourier_coefficients, FourierCoeffs, PotentialExpr};
use crate::Error;

/// Largest `|Im λ|` for which a spectrum still counts as real.
pub const TOL_REAL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HillConfig {
    /// Plane-wave cutoff `N`; the matrix has dimension `2N + 1`.
    pub truncation: usize,
    /// Fourier cutoff `M` for the potential; must not exceed `N`.
    pub fourier: usize,
}

impl Default for HillConfig {
    fn default() -> Self {
        HillConfig {
            truncation: 24,
            fourier: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HillSpectrum {
    pub k: f64,
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// `max |Im λ| ≤ TOL_REAL`.
    pub reality_flag: bool,
}

impl HillSpectrum {
    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

fn check_k(k: f64) -> Result<(), Error> {
    if (0.0..=1.0).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(alloc::format!("Bloch index {k} outside [0, 1]")))
    }
}

/// `H_{mn} = (2n+k)² δ_{mn} − c_{m−n}`, rows and columns indexed `n = −N..=N`.
pub fn hill_matrix(c: &FourierCoeffs, k: f64, truncation: usize) -> Result<ComplexMatrix, Error> {
    check_k(k)?;
    if truncation < c.truncation() {
        return Err(Error::InvalidArgument(alloc::format!(
            "plane-wave cutoff {truncation} below Fourier cutoff {}",
            c.truncation()
        )));
    }
    let n = truncation as i64;
    Ok(ComplexMatrix::from_fn(2 * truncation + 1, |row, col| {
        let m = row as i64 - n;
        let j = col as i64 - n;
        let kinetic = if m == j {
            let q = 2.0 * j as f64 + k;
            Complex64::new(q * q, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        kinetic - c.get(m - j)
    }))
}

/// Sorts by real part then imaginary part; exact ties keep input order.
fn sort_spectrum(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

pub fn hill_spectrum(c: &FourierCoeffs, k: f64, truncation: usize) -> Result<HillSpectrum, Error> {
    let h = hill_matrix(c, k, truncation)?;
    let mut eigenvalues = eigenvalues(&h)?;
    sort_spectrum(&mut eigenvalues);
    let reality_flag = eigenvalues.iter().all(|z| z.im.abs() <= TOL_REAL);
    Ok(HillSpectrum {
        k,
        eigenvalues,
        reality_flag,
    })
}

/// Hill-method energies of `p` at Bloch index `k`.
pub fn hill_energies(p: &PotentialExpr, k: f64, cfg: &HillConfig) -> Result<HillSpectrum, Error> {
    let c = hill_coefficients(p, cfg)?;
    hill_spectrum(&c, k, cfg.truncation)
}

/// Fourier coefficients sized for `cfg`.
pub fn hill_coefficients(p: &PotentialExpr, cfg: &HillConfig) -> Result<FourierCoeffs, Error> {
    if cfg.truncation < cfg.fourier {
        return Err(Error::InvalidArgument(alloc::format!(
            "plane-wave cutoff {} below Fourier cutoff {}",
            cfg.truncation,
            cfg.fourier
        )));
    }
    let raw = fourier_coefficients(p, cfg.fourier, (8 * cfg.fourier + 8).max(64))?;
    // Quadrature roundoff would otherwise fill exactly vanishing harmonics and
    // perturb defective eigenvalues by O(sqrt(eps)).
    let scale = raw.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = 64.0 * f64::EPSILON * scale;
    let cleaned: Vec<Complex64> = raw
        .as_slice()
        .iter()
        .map(|&z| if z.norm() <= floor { Complex64::new(0.0, 0.0) } else { z })
        .collect();
    FourierCoeffs::from_slice(&cleaned)
}

/// One `(k, band)` comparison. `floquet_energy` is `None` when the band does
/// not reach Bloch index `k` inside the scanned window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationRow {
    pub k: f64,
    pub band: usize,
    pub floquet_energy: Option<f64>,
    pub hill_energy: Complex64,
    pub abs_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationTable {
    pub rows: Vec<ValidationRow>,
    /// Largest error per band over the applicable rows.
    pub max_error: Vec<Option<f64>>,
    /// Hill spectra were real at every `k`.
    pub hill_real: bool,
}

impl ValidationTable {
    pub fn overall_max_error(&self) -> Option<f64> {
        self.max_error.iter().flatten().copied().reduce(f64::max)
    }
}

/// Bands compared by [`cross_validate`].
pub const CROSS_VALIDATED_BANDS: usize = 3;

/// Compares the lowest three Floquet bands with the sorted Hill eigenvalues
/// at each `k`. On band `j` the energy with `Re Δ(E) = cos(kπ)` is found by
/// bisection; at `k = 0` and `k = 1` the matching band edge is used.
pub fn cross_validate(
    p: &PotentialExpr,
    bands: &BandStructure,
    k_grid: &[f64],
    hcfg: &HillConfig,
    icfg: &IntegrationConfig,
) -> Result<ValidationTable, Error> {
    let solver = FloquetSolver::new(p, icfg)?;
    let coeffs = hill_coefficients(p, hcfg)?;
    let tol = Tolerances::default();
    let mut rows = Vec::new();
    let mut max_error = alloc::vec![None; CROSS_VALIDATED_BANDS];
    let mut hill_real = true;
    for &k in k_grid {
        let spectrum = hill_spectrum(&coeffs, k, hcfg.truncation)?;
        hill_real &= spectrum.reality_flag;
        for band in 0..CROSS_VALIDATED_BANDS {
            let hill_energy = spectrum.eigenvalues[band];
            let floquet_energy = match bands.bands.get(band) {
                Some(b) => energy_at_k(&solver, b, k, tol.root)?,
                None => None,
            };
            let abs_error = floquet_energy.map(|e| (Complex64::new(e, 0.0) - hill_energy).norm());
            if let Some(err) = abs_error {
                let slot = &mut max_error[band];
                *slot = Some(slot.map_or(err, |m: f64| m.max(err)));
            }
            rows.push(ValidationRow {
                k,
                band,
                floquet_energy,
                hill_energy,
                abs_error,
            });
        }
    }
    Ok(ValidationTable {
        rows,
        max_error,
        hill_real,
    })
}

/// Energy in `band` where `Re Δ = cos(kπ)`.
fn energy_at_k(
    solver: &FloquetSolver,
    band: &crate::floquet::Band,
    k: f64,
    tol_root: f64,
) -> Result<Option<f64>, Error> {
    let target = (k * PI).cos();
    if k == 0.0 || k == 1.0 {
        let sign = if k == 0.0 { 1 } else { -1 };
        let edge = [band.lower_edge, band.upper_edge]
            .into_iter()
            .flatten()
            .find(|e| e.sign == sign);
        return Ok(edge.map(|e| e.energy));
    }
    let f = |e: f64| -> Result<f64, Error> { Ok(solver.delta(e)?.re - target) };
    let (mut lo, mut hi) = (band.lower, band.upper);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo == 0.0 {
        return Ok(Some(lo));
    }
    if fhi == 0.0 {
        return Ok(Some(hi));
    }
    if flo * fhi > 0.0 {
        return Ok(None);
    }
    let lo_positive = flo > 0.0;
    while hi - lo > tol_root {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid)? > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
