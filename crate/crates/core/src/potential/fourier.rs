use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::PotentialExpr;
use crate::Error;

/// Coefficients `c_n`, `n = −M..=M`, of `V(x) = Σ c_n e^{2inx}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    coeffs: Vec<Complex64>,
    truncation: usize,
}

impl FourierCoeffs {
    /// Builds from `2M+1` values ordered `c_{−M}, …, c_M`.
    pub fn from_slice(coeffs: &[Complex64]) -> Result<Self, Error> {
        if coeffs.len() < 3 || coeffs.len() % 2 == 0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "need 2M+1 coefficients with M >= 1, got {}",
                coeffs.len()
            )));
        }
        Ok(FourierCoeffs {
            coeffs: coeffs.to_vec(),
            truncation: coeffs.len() / 2,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `c_n`, zero outside the stored range.
    pub fn get(&self, n: i64) -> Complex64 {
        let m = self.truncation as i64;
        if n.abs() > m {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + m) as usize]
        }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `max(|c_M|, |c_{−M}|)`; large values mean the truncation is too small.
    pub fn tail(&self) -> f64 {
        let m = self.truncation as i64;
        self.get(m).norm().max(self.get(-m).norm())
    }

    pub fn truncation_suspect(&self, tol: f64) -> bool {
        self.tail() > tol
    }

    /// Evaluates the truncated series at `x`.
    pub fn reconstruct(&self, x: f64) -> Complex64 {
        let m = self.truncation as i64;
        (-m..=m)
            .map(|n| self.get(n) * Complex64::from_polar(1.0, 2.0 * n as f64 * x))
            .sum()
    }

    /// Largest `|Σ c_n e^{2inx} − V(x)|` over `n_grid` uniform points of `[0, π)`.
    pub fn round_trip_error(&self, p: &PotentialExpr, n_grid: usize) -> f64 {
        (0..n_grid)
            .map(|j| {
                let x = PI * j as f64 / n_grid as f64;
                (self.reconstruct(x) - p.eval(x)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Discrete Fourier sum `c_n = (1/N) Σ_j V(x_j) e^{−2inx_j}` on `x_j = jπ/N`.
///
/// Exact for trigonometric polynomials of degree below `N − M`.
pub fn fourier_coefficients(
    p: &PotentialExpr,
    truncation: usize,
    n_samples: usize,
) -> Result<FourierCoeffs, Error> {
    if truncation < 1 {
        return Err(Error::InvalidArgument("Fourier truncation must be at least 1".into()));
    }
    if n_samples < 4 * truncation + 4 {
        return Err(Error::InvalidArgument(alloc::format!(
            "need at least {} samples for truncation {truncation}, got {n_samples}",
            4 * truncation + 4
        )));
    }
    let samples: Vec<Complex64> = (0..n_samples)
        .map(|j| p.eval(PI * j as f64 / n_samples as f64))
        .collect();
    let m = truncation as i64;
    let coeffs = (-m..=m)
        .map(|n| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    // Reduce the phase index mod N so large n·j stays exact.
                    let idx = (n * j as i64).rem_euclid(n_samples as i64);
                    let phase = -2.0 * PI * idx as f64 / n_samples as f64;
                    v * Complex64::from_polar(1.0, phase)
                })
                .sum();
            sum / n_samples as f64
        })
        .collect();
    Ok(FourierCoeffs { coeffs, truncation })
}
