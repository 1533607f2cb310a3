//! Residuals of the reality and half-period composition identities that a
//! PT-symmetric potential (`V*(−x) = V(x) = V(x+π)`) forces on the
//! fundamental solutions.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::ode::TransferData;
use crate::Error;

/// Absolute residuals of every identity; all are zero in exact arithmetic for
/// a PT-symmetric potential.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityResiduals {
    /// `|u1(π) − u2'(π)*|`
    pub conj_residual: f64,
    /// `|Im u1'(π)|`
    pub im_u1p: f64,
    /// `|Im u2(π)|`
    pub im_u2: f64,
    /// Worse of the two equalities
    /// `u1(π) = u2'(π)* = u1(π/2)·u2'(π/2)* + u1'(π/2)·u2(π/2)*`.
    pub compose_residual: f64,
    /// `|u1'(π) − 2 Re(u1(π/2)* u1'(π/2))|`
    pub trace1_residual: f64,
    /// `|u2(π) − 2 Re(u2(π/2)* u2'(π/2))|`
    pub trace2_residual: f64,
    /// Reflection of the shifted pair through `z = 0`:
    /// `v1(−π/2) = v1(π/2)*`, `v1'(−π/2) = −v1'(π/2)*`,
    /// `v2(−π/2) = −v2(π/2)*`, `v2'(−π/2) = v2'(π/2)*`.
    pub reflection: [f64; 4],
    /// Midpoint values against the backward shifted pair:
    /// `u1(π/2) = v2'(−π/2)`, `u1'(π/2) = −v1'(−π/2)`,
    /// `u2(π/2) = −v2(−π/2)`, `u2'(π/2) = v1(−π/2)`.
    pub correspondence: [f64; 4],
    /// `u(π)` rebuilt from the shifted pair at `±π/2`; holds for any periodic
    /// potential, PT or not.
    pub transport: [f64; 4],
}

impl IdentityResiduals {
    /// Named view, in a fixed order, for reports.
    pub fn named(&self) -> [(&'static str, f64); 18] {
        let r = &self.reflection;
        let c = &self.correspondence;
        let t = &self.transport;
        [
            ("conj_residual", self.conj_residual),
            ("im_u1p", self.im_u1p),
            ("im_u2", self.im_u2),
            ("compose_residual", self.compose_residual),
            ("trace1_residual", self.trace1_residual),
            ("trace2_residual", self.trace2_residual),
            ("reflect_v1", r[0]),
            ("reflect_v1p", r[1]),
            ("reflect_v2", r[2]),
            ("reflect_v2p", r[3]),
            ("corr_u1", c[0]),
            ("corr_u1p", c[1]),
            ("corr_u2", c[2]),
            ("corr_u2p", c[3]),
            ("transport_u1", t[0]),
            ("transport_u1p", t[1]),
            ("transport_u2", t[2]),
            ("transport_u2p", t[3]),
        ]
    }

    /// Largest residual. NaN if any residual is NaN.
    pub fn max(&self) -> f64 {
        self.named().iter().fold(0.0, |acc: f64, (_, v)| {
            if acc.is_nan() || v.is_nan() {
                f64::NAN
            } else {
                acc.max(*v)
            }
        })
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Computes every identity residual from the fundamental record `t` (with
/// midpoint values) and the shifted records at `z = +π/2` and `z = −π/2`.
pub fn verify_pt_identities(
    t: &TransferData,
    v_plus: &TransferData,
    v_minus: &TransferData,
) -> Result<IdentityResiduals, Error> {
    if t.energy != v_plus.energy {
        return Err(Error::EnergyMismatch(t.energy, v_plus.energy));
    }
    if t.energy != v_minus.energy {
        return Err(Error::EnergyMismatch(t.energy, v_minus.energy));
    }
    if !(t.is_finite() && v_plus.is_finite() && v_minus.is_finite()) {
        return Err(Error::InvalidArgument("transfer records must be finite".into()));
    }
    let half = t.half.ok_or(Error::MissingMidpoint)?;
    let end = t.end;
    let vp = v_plus.end;
    let vm = v_minus.end;

    let two_re = |a: Complex64, b: Complex64| 2.0 * (a.conj() * b).re;
    let composed = half.u1 * half.u2p.conj() + half.u1p * half.u2.conj();

    Ok(IdentityResiduals {
        conj_residual: (end.u1 - end.u2p.conj()).norm(),
        im_u1p: end.u1p.im.abs(),
        im_u2: end.u2.im.abs(),
        compose_residual: (end.u1 - composed).norm().max((end.u2p.conj() - composed).norm()),
        trace1_residual: (end.u1p - two_re(half.u1, half.u1p)).norm(),
        trace2_residual: (end.u2 - two_re(half.u2, half.u2p)).norm(),
        reflection: [
            (vm.u1 - vp.u1.conj()).norm(),
            (vm.u1p + vp.u1p.conj()).norm(),
            (vm.u2 + vp.u2.conj()).norm(),
            (vm.u2p - vp.u2p.conj()).norm(),
        ],
        correspondence: [
            (half.u1 - vm.u2p).norm(),
            (half.u1p + vm.u1p).norm(),
            (half.u2 + vm.u2).norm(),
            (half.u2p - vm.u1).norm(),
        ],
        transport: [
            (end.u1 - (vm.u2p * vp.u1 - vm.u1p * vp.u2)).norm(),
            (end.u1p - (vm.u2p * vp.u1p - vm.u1p * vp.u2p)).norm(),
            (end.u2 - (-vm.u2 * vp.u1 + vm.u1 * vp.u2)).norm(),
            (end.u2p - (-vm.u2 * vp.u1p + vm.u1 * vp.u2p)).norm(),
        ],
    })
}
