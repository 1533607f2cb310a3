//! Fixed-step RK4 propagation of the fundamental solutions of
//! `ψ'' + (E + V(x))ψ = 0`.
//!
//! `u1` starts from `(ψ, ψ') = (1, 0)` and `u2` from `(0, 1)` at `x = 0`; both
//! are carried together as the columns of a 2×2 matrix. The potential is
//! sampled once on the half-step grid so repeated integrations at different
//! energies reuse the samples.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::potential::PotentialExpr;
use crate::Error;

/// Any state component above this magnitude aborts the integration.
pub const OVERFLOW_GUARD: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegrationConfig {
    /// RK4 steps across one period; must be even and at least 16 so that
    /// `π/2` is a grid node.
    pub steps_per_period: usize,
    /// Keep the values at `π/2` in [`TransferData::half`].
    pub record_midpoint: bool,
}

impl IntegrationConfig {
    /// Order of the (only) integration scheme.
    pub const METHOD_ORDER: u32 = 4;

    pub fn with_steps(steps_per_period: usize) -> Self {
        IntegrationConfig {
            steps_per_period,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.steps_per_period < 16 || self.steps_per_period % 2 != 0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "steps_per_period must be even and >= 16, got {}",
                self.steps_per_period
            )));
        }
        Ok(())
    }
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig {
            steps_per_period: 4096,
            record_midpoint: true,
        }
    }
}

/// `u1, u1', u2, u2'` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalValues {
    pub u1: Complex64,
    pub u1p: Complex64,
    pub u2: Complex64,
    pub u2p: Complex64,
}

impl FundamentalValues {
    fn from_matrix(m: &Mat2) -> Self {
        FundamentalValues {
            u1: m[0][0],
            u1p: m[1][0],
            u2: m[0][1],
            u2p: m[1][1],
        }
    }

    pub fn wronskian(&self) -> Complex64 {
        self.u1 * self.u2p - self.u1p * self.u2
    }

    /// `[[u1, u2], [u1', u2']]`; at `x = π` this is the monodromy matrix.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.u1, self.u2], [self.u1p, self.u2p]]
    }

    fn is_finite(&self) -> bool {
        [self.u1, self.u1p, self.u2, self.u2p].iter().all(|z| z.is_finite())
    }
}

/// Fundamental pair recorded at the midpoint and the end of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferData {
    pub energy: f64,
    /// Values at `π/2` when midpoint recording is on.
    pub half: Option<FundamentalValues>,
    /// Values at the end point (`π` for the fundamental integration).
    pub end: FundamentalValues,
    /// Largest `|u1·u2' − u1'·u2 − 1|` over all RK4 nodes.
    pub wronskian_drift: f64,
}

impl TransferData {
    pub fn is_finite(&self) -> bool {
        self.end.is_finite() && self.half.map_or(true, |h| h.is_finite())
    }
}

/// The shifted pair `v1, v2` of `U(z) = V(z + π/2)`, integrated from `z = 0`
/// to `+π/2` and to `−π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedTransfer {
    pub forward: TransferData,
    pub backward: TransferData,
}

type Mat2 = [[Complex64; 2]; 2];

const IDENTITY: Mat2 = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];

/// Potential values on the half-step nodes `x_j = start + j·h/2`,
/// `j = 0..=2·steps`, with `h` negative for backward integration.
#[derive(Debug, Clone)]
pub struct SampledPotential {
    values: Vec<Complex64>,
    start: f64,
    step: f64,
    steps: usize,
}

impl SampledPotential {
    fn sample(steps: usize, start: f64, length: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let nodes = 2 * steps;
        let values = (0..=nodes)
            .map(|j| f(start + length * j as f64 / nodes as f64))
            .collect();
        SampledPotential {
            values,
            start,
            step: length / steps as f64,
            steps,
        }
    }

    /// `V` on `[0, π]`.
    pub fn fundamental(p: &PotentialExpr, cfg: &IntegrationConfig) -> Result<Self, Error> {
        cfg.validate()?;
        Ok(Self::sample(cfg.steps_per_period, 0.0, PI, |x| p.eval(x)))
    }

    /// `U(z) = V(z + π/2)` on `[0, π/2]`.
    pub fn shifted_forward(p: &PotentialExpr, cfg: &IntegrationConfig) -> Result<Self, Error> {
        cfg.validate()?;
        Ok(Self::sample(cfg.steps_per_period / 2, 0.0, FRAC_PI_2, |z| {
            p.eval(z + FRAC_PI_2)
        }))
    }

    /// `U(z) = V(z + π/2)` on `[0, −π/2]`, stepping backwards.
    pub fn shifted_backward(p: &PotentialExpr, cfg: &IntegrationConfig) -> Result<Self, Error> {
        cfg.validate()?;
        Ok(Self::sample(cfg.steps_per_period / 2, 0.0, -FRAC_PI_2, |z| {
            p.eval(z + FRAC_PI_2)
        }))
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Propagates `initial` (columns are solutions, rows value/derivative).
    /// Returns the state after `steps/2` steps (when `record_half` and the
    /// step count is even) and at the end, plus the Wronskian drift relative
    /// to `det(initial)`.
    fn propagate(
        &self,
        energy: Complex64,
        initial: Mat2,
        record_half: bool,
    ) -> Result<(Option<Mat2>, Mat2, f64), Error> {
        let h = self.step;
        let w0 = initial[0][0] * initial[1][1] - initial[1][0] * initial[0][1];
        let mut y = initial;
        let mut half = None;
        let mut drift: f64 = 0.0;
        let half_index = (record_half && self.steps % 2 == 0).then_some(self.steps / 2);
        for n in 0..self.steps {
            let q0 = energy + self.values[2 * n];
            let qm = energy + self.values[2 * n + 1];
            let q1 = energy + self.values[2 * n + 2];
            for col in 0..2 {
                let (u, up) = rk4_step(y[0][col], y[1][col], q0, qm, q1, h);
                y[0][col] = u;
                y[1][col] = up;
            }
            let bad = y
                .iter()
                .flatten()
                .any(|z| !z.is_finite() || z.norm() > OVERFLOW_GUARD);
            if bad {
                return Err(Error::NonFinite {
                    energy: energy.re,
                    x: self.start + h * (n + 1) as f64,
                });
            }
            let w = y[0][0] * y[1][1] - y[1][0] * y[0][1];
            drift = drift.max((w - w0).norm());
            if half_index == Some(n + 1) {
                half = Some(y);
            }
        }
        Ok((half, y, drift))
    }

    pub(crate) fn transfer(
        &self,
        energy: Complex64,
        record_half: bool,
    ) -> Result<(Option<FundamentalValues>, FundamentalValues, f64), Error> {
        let (half, end, drift) = self.propagate(energy, IDENTITY, record_half)?;
        Ok((
            half.as_ref().map(FundamentalValues::from_matrix),
            FundamentalValues::from_matrix(&end),
            drift,
        ))
    }

    pub(crate) fn transfer_data(&self, energy: f64, record_half: bool) -> Result<TransferData, Error> {
        let (half, end, wronskian_drift) = self.transfer(Complex64::new(energy, 0.0), record_half)?;
        Ok(TransferData {
            energy,
            half,
            end,
            wronskian_drift,
        })
    }
}

/// One classical RK4 step of `(u, u')' = (u', −q u)`.
#[inline]
fn rk4_step(
    u: Complex64,
    up: Complex64,
    q0: Complex64,
    qm: Complex64,
    q1: Complex64,
    h: f64,
) -> (Complex64, Complex64) {
    let hh = 0.5 * h;
    let k1u = up;
    let k1p = -q0 * u;
    let k2u = up + k1p * hh;
    let k2p = -qm * (u + k1u * hh);
    let k3u = up + k2p * hh;
    let k3p = -qm * (u + k2u * hh);
    let k4u = up + k3p * h;
    let k4p = -q1 * (u + k3u * h);
    let s = h / 6.0;
    (
        u + (k1u + (k2u + k3u) * 2.0 + k4u) * s,
        up + (k1p + (k2p + k3p) * 2.0 + k4p) * s,
    )
}

/// Integrates `u1`, `u2` from `0` to `π` at energy `E`, recording values at
/// `π/2` (if configured) and `π`.
pub fn integrate_fundamental(
    p: &PotentialExpr,
    energy: f64,
    cfg: &IntegrationConfig,
) -> Result<TransferData, Error> {
    if !energy.is_finite() {
        return Err(Error::InvalidArgument("energy must be finite".into()));
    }
    SampledPotential::fundamental(p, cfg)?.transfer_data(energy, cfg.record_midpoint)
}

/// Complex-energy variant of [`integrate_fundamental`]; returns the values at
/// `π/2`, at `π`, and the Wronskian drift.
#[allow(dead_code)]
pub(crate) fn integrate_fundamental_complex(
    p: &PotentialExpr,
    energy: Complex64,
    cfg: &IntegrationConfig,
) -> Result<(Option<FundamentalValues>, FundamentalValues, f64), Error> {
    SampledPotential::fundamental(p, cfg)?.transfer(energy, cfg.record_midpoint)
}

/// Integrates the fundamental pair of the half-period-shifted potential
/// forward to `z = π/2` and backward to `z = −π/2`.
pub fn integrate_shifted(
    p: &PotentialExpr,
    energy: f64,
    cfg: &IntegrationConfig,
) -> Result<ShiftedTransfer, Error> {
    if !energy.is_finite() {
        return Err(Error::InvalidArgument("energy must be finite".into()));
    }
    Ok(ShiftedTransfer {
        forward: SampledPotential::shifted_forward(p, cfg)?.transfer_data(energy, false)?,
        backward: SampledPotential::shifted_backward(p, cfg)?.transfer_data(energy, false)?,
    })
}

/// `(ψ(π), ψ'(π))` for the solution with `(ψ(0), ψ'(0)) = initial`.
pub fn propagate_solution(
    p: &PotentialExpr,
    energy: f64,
    initial: [Complex64; 2],
    cfg: &IntegrationConfig,
) -> Result<[Complex64; 2], Error> {
    let zero = Complex64::new(0.0, 0.0);
    // The second column is a dummy partner that keeps the Wronskian nonzero.
    let start = [[initial[0], zero], [initial[1], Complex64::new(1.0, 0.0)]];
    let (_, end, _) =
        SampledPotential::fundamental(p, cfg)?.propagate(Complex64::new(energy, 0.0), start, false)?;
    Ok([end[0][0], end[1][0]])
}
