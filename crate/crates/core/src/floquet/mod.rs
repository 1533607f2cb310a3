//! Floquet discriminant `Δ = ½(u1(π) + u2'(π))`, Bloch index and Bloch
//! coefficients, energy scans and band structures.

mod bands;
mod identities;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub use bands::{
    assemble_bands, find_band_edges, Band, BandAnalysis, BandEdge, BandStructure, EdgeKind, Gap,
};
pub use identities::{verify_pt_identities, IdentityResiduals};

use crate::ode::{IntegrationConfig, SampledPotential, ShiftedTransfer, TransferData};
use crate::potential::PotentialExpr;
use crate::Error;

/// Numerical tolerances shared by the analysis routines. The defaults are
/// sized for RK4 at 4096 steps per period; scale `identity` with `h⁴` when
/// changing the step count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Bound on identity residuals and `|Im Δ|`.
    pub identity: f64,
    /// Width of the final bisection bracket for band edges.
    pub root: f64,
    /// Gaps narrower than this are reported as coalesced.
    pub merge: f64,
    /// Relative residual accepted for the monodromy eigenvector.
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-8,
            root: 1e-10,
            merge: 1e-6,
            eig: 1e-8,
        }
    }
}

pub fn discriminant(t: &TransferData) -> Complex64 {
    (t.end.u1 + t.end.u2p) * 0.5
}

/// Solves `cos(kπ) = Δ` on the reduced-zone branch.
///
/// Real `Δ` gives `Re k ∈ [0, 1]` and `Im k ≥ 0`: real `k` inside `[−1, 1]`,
/// `k = iκ` above `1` and `k = 1 + iκ` below `−1`. For genuinely complex `Δ`
/// the principal arccosine is used, which keeps `Re k ∈ [0, 1]` but not the
/// sign of `Im k`.
pub fn bloch_k(delta: Complex64) -> Complex64 {
    if delta.im == 0.0 {
        let d = delta.re;
        return if d > 1.0 {
            Complex64::new(0.0, d.acosh() / PI)
        } else if d < -1.0 {
            Complex64::new(1.0, (-d).acosh() / PI)
        } else {
            Complex64::new(d.acos() / PI, 0.0)
        };
    }
    delta.acos() / PI
}

/// Coefficients of `ψ_k = c·u1 + d·u2`, normalised to `|c|² + |d|² = 1` with
/// the first non-negligible component real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSolution {
    pub k: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    /// `‖(M − e^{ikπ})(c, d)ᵀ‖ / max(1, max|M_ij|)`
    pub residual: f64,
}

pub fn bloch_coefficients(t: &TransferData, k: Complex64) -> Result<BlochSolution, Error> {
    bloch_coefficients_with_tol(t, k, Tolerances::default().eig)
}

/// Eigenvector of the monodromy `[[u1(π), u2(π)], [u1'(π), u2'(π)]]` for the
/// eigenvalue `e^{ikπ}`. A scalar monodromy returns `(1, 0)`.
pub fn bloch_coefficients_with_tol(
    t: &TransferData,
    k: Complex64,
    tol_eig: f64,
) -> Result<BlochSolution, Error> {
    let m = t.end.matrix();
    let lambda = (Complex64::i() * k * PI).exp();
    let scale = m.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    let a = [[m[0][0] - lambda, m[0][1]], [m[1][0], m[1][1] - lambda]];
    let row_norm = |r: &[Complex64; 2]| r[0].norm().hypot(r[1].norm());
    let (n0, n1) = (row_norm(&a[0]), row_norm(&a[1]));

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (mut c, mut d) = if n0.max(n1) <= tol_eig * scale {
        (one, zero)
    } else if n0 >= n1 {
        (a[0][1], -a[0][0])
    } else {
        (a[1][1], -a[1][0])
    };
    let norm = c.norm().hypot(d.norm());
    c /= norm;
    d /= norm;
    let lead = if c.norm() > 1e-12 { c } else { d };
    let phase = lead.conj() / lead.norm();
    c *= phase;
    d *= phase;

    let r0 = a[0][0] * c + a[0][1] * d;
    let r1 = a[1][0] * c + a[1][1] * d;
    let residual = r0.norm().hypot(r1.norm()) / scale;
    if !(residual <= tol_eig) {
        return Err(Error::NotEigenvalue { residual });
    }
    Ok(BlochSolution { k, c, d, residual })
}

/// Everything computed at one scan energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminantSample {
    pub energy: f64,
    pub delta: Complex64,
    pub k: Complex64,
    pub residuals: IdentityResiduals,
    pub wronskian_drift: f64,
}

/// Pre-sampled potential grids for one `(potential, config)` pair; evaluates
/// the discriminant and identity residuals at any real energy.
#[derive(Debug, Clone)]
pub struct FloquetSolver {
    fundamental: SampledPotential,
    forward: SampledPotential,
    backward: SampledPotential,
    cfg: IntegrationConfig,
}

impl FloquetSolver {
    pub fn new(p: &PotentialExpr, cfg: &IntegrationConfig) -> Result<Self, Error> {
        Ok(FloquetSolver {
            fundamental: SampledPotential::fundamental(p, cfg)?,
            forward: SampledPotential::shifted_forward(p, cfg)?,
            backward: SampledPotential::shifted_backward(p, cfg)?,
            cfg: *cfg,
        })
    }

    pub fn config(&self) -> &IntegrationConfig {
        &self.cfg
    }

    /// Fundamental record with midpoint values.
    pub fn transfer(&self, energy: f64) -> Result<TransferData, Error> {
        check_energy(energy)?;
        self.fundamental.transfer_data(energy, true)
    }

    pub fn shifted(&self, energy: f64) -> Result<ShiftedTransfer, Error> {
        check_energy(energy)?;
        Ok(ShiftedTransfer {
            forward: self.forward.transfer_data(energy, false)?,
            backward: self.backward.transfer_data(energy, false)?,
        })
    }

    pub fn delta(&self, energy: f64) -> Result<Complex64, Error> {
        check_energy(energy)?;
        Ok(discriminant(&self.fundamental.transfer_data(energy, false)?))
    }

    pub fn sample(&self, energy: f64) -> Result<DiscriminantSample, Error> {
        let t = self.transfer(energy)?;
        let s = self.shifted(energy)?;
        let residuals = verify_pt_identities(&t, &s.forward, &s.backward)?;
        let delta = discriminant(&t);
        Ok(DiscriminantSample {
            energy,
            delta,
            k: bloch_k(delta),
            residuals,
            wronskian_drift: t.wronskian_drift,
        })
    }

    pub fn scan(&self, e_min: f64, e_max: f64, n: usize) -> Result<Vec<DiscriminantSample>, Error> {
        energy_grid(e_min, e_max, n)?
            .into_iter()
            .map(|e| self.sample(e))
            .collect()
    }
}

fn check_energy(energy: f64) -> Result<(), Error> {
    if energy.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("energy must be finite".into()))
    }
}

/// `n` uniformly spaced energies from `e_min` to `e_max` inclusive.
pub fn energy_grid(e_min: f64, e_max: f64, n: usize) -> Result<Vec<f64>, Error> {
    if !(e_min.is_finite() && e_max.is_finite() && e_min < e_max) {
        return Err(Error::InvalidArgument(alloc::format!(
            "energy range must satisfy e_min < e_max, got [{e_min}, {e_max}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("an energy scan needs at least 2 samples".into()));
    }
    let span = e_max - e_min;
    Ok((0..n)
        .map(|j| {
            if j == n - 1 {
                e_max
            } else {
                e_min + span * j as f64 / (n - 1) as f64
            }
        })
        .collect())
}

/// Uniform scan of `Δ`, `k` and every identity residual, in increasing `E`.
pub fn scan_discriminant(
    p: &PotentialExpr,
    e_min: f64,
    e_max: f64,
    n: usize,
    cfg: &IntegrationConfig,
) -> Result<Vec<DiscriminantSample>, Error> {
    FloquetSolver::new(p, cfg)?.scan(e_min, e_max, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::parse_potential;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn free_transfer(e: f64) -> TransferData {
        FloquetSolver::new(&parse_potential("0").unwrap(), &IntegrationConfig::default())
            .unwrap()
            .transfer(e)
            .unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert!((discriminant(&free_transfer(1.0)) - c(-1.0, 0.0)).norm() < 1e-10);
        assert!((discriminant(&free_transfer(0.25)) - c(0.0, 0.0)).norm() < 1e-10);
        assert!((discriminant(&free_transfer(-1.0)) - c(PI.cosh(), 0.0)).norm() < 1e-9);
    }

    #[test]
    fn bloch_k_examples() {
        assert_eq!(bloch_k(c(1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(bloch_k(c(-1.0, 0.0)), c(1.0, 0.0));
        assert!((bloch_k(c(0.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((bloch_k(c(PI.cosh(), 0.0)) - c(0.0, 1.0)).norm() < 1e-14);
        assert!((bloch_k(c((0.3 * PI).cos(), 0.0)) - c(0.3, 0.0)).norm() < 1e-14);
        let k = bloch_k(c(-PI.cosh(), 0.0));
        assert!((k - c(1.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn bloch_coefficients_scalar_monodromy() {
        let sol = bloch_coefficients(&free_transfer(1.0), c(1.0, 0.0)).unwrap();
        assert_eq!((sol.c, sol.d), (c(1.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn bloch_coefficients_quarter_energy() {
        let sol = bloch_coefficients(&free_transfer(0.25), c(0.5, 0.0)).unwrap();
        let n = (1.0f64 + 0.25).sqrt();
        assert!((sol.c - c(1.0 / n, 0.0)).norm() < 1e-9, "{}", sol.c);
        assert!((sol.d - c(0.0, 0.5 / n)).norm() < 1e-9, "{}", sol.d);
    }

    #[test]
    fn bloch_coefficients_jordan_block() {
        // Free particle at E = 0: monodromy [[1, π], [0, 1]], eigenvector (1, 0).
        let sol = bloch_coefficients(&free_transfer(0.0), c(0.0, 0.0)).unwrap();
        assert!((sol.c - c(1.0, 0.0)).norm() < 1e-12 && sol.d.norm() < 1e-12);
    }

    #[test]
    fn bloch_coefficients_rejects_non_eigenvalue() {
        let err = bloch_coefficients(&free_transfer(0.25), c(0.2, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NotEigenvalue { .. }));
    }

    #[test]
    fn energy_grid_endpoints() {
        let g = energy_grid(0.0, 4.0, 5).unwrap();
        assert_eq!(g, [0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(energy_grid(1.0, 1.0, 5).is_err());
        assert!(energy_grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn free_scan_closed_form() {
        let s = scan_discriminant(&parse_potential("0").unwrap(), 0.0, 4.0, 5, &IntegrationConfig::default())
            .unwrap();
        for sample in &s {
            let want = (PI * sample.energy.sqrt()).cos();
            assert!((sample.delta - c(want, 0.0)).norm() < 1e-10, "E={}", sample.energy);
        }
        assert!((s[0].delta.re - 1.0).abs() < 1e-12 && (s[4].delta.re - 1.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn secular_equation_round_trip(re in -10.0f64..10.0, im in -10.0f64..10.0, real in any::<bool>()) {
            let delta = if real { c(re, 0.0) } else { c(re, im) };
            prop_assume!(delta.norm() <= 10.0);
            let k = bloch_k(delta);
            prop_assert!(((k * PI).cos() - delta).norm() <= 1e-12, "Δ={} k={}", delta, k);
            prop_assert!(k.re >= 0.0 && k.re <= 1.0);
            if real {
                prop_assert!(k.im >= 0.0);
                if re.abs() <= 1.0 { prop_assert_eq!(k.im, 0.0); } else { prop_assert!(k.im > 0.0); }
            }
        }
    }
}
