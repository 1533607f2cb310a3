//! Complex periodic potentials `V(x)` with period π.

mod expr;
mod fourier;
mod parser;

use alloc::string::{String, ToString};
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub use expr::{BinOp, Expr, Func};
pub use fourier::{fourier_coefficients, FourierCoeffs};

use crate::{Error, ParseError};

/// Grid size used when callers have no reason to pick another.
pub const DEFAULT_VALIDATION_GRID: usize = 256;
/// Residual tolerance for the periodicity and PT checks.
pub const DEFAULT_VALIDATION_TOL: f64 = 1e-9;

/// A parsed potential. Immutable; evaluation is a pure function of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialExpr {
    root: Expr,
    source: String,
}

impl PotentialExpr {
    /// Wraps an expression tree; the source text is its printed form.
    pub fn from_expr(root: Expr) -> Self {
        let source = root.to_string();
        PotentialExpr { root, source }
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn source_text(&self) -> &str {
        &self.source
    }

    /// The period is fixed to π.
    pub fn period(&self) -> f64 {
        PI
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.root.eval(x)
    }
}

impl fmt::Display for PotentialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.root, f)
    }
}

impl core::str::FromStr for PotentialExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_potential(s)
    }
}

pub fn parse_potential(text: &str) -> Result<PotentialExpr, ParseError> {
    let root = parser::parse_expr(text)?;
    Ok(PotentialExpr {
        root,
        source: text.to_string(),
    })
}

pub fn eval_potential(p: &PotentialExpr, x: f64) -> Complex64 {
    p.eval(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// `max_j |V(x_j + π) − V(x_j)|`
    pub periodicity_residual: f64,
    /// `max_j |V*(−x_j) − V(x_j)|`
    pub pt_residual: f64,
    pub periodic: bool,
    pub pt_symmetric: bool,
    pub n_grid: usize,
    pub tol: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.periodic && self.pt_symmetric
    }
}

/// Checks `V(x+π) = V(x)` and `V*(−x) = V(x)` on `n_grid` uniform points of
/// `[0, π)`. Failures are reported in the result, not as errors; a NaN
/// residual counts as a failure.
pub fn validate_potential(
    p: &PotentialExpr,
    n_grid: usize,
    tol: f64,
) -> Result<ValidationReport, Error> {
    if n_grid < 64 {
        return Err(Error::InvalidArgument(alloc::format!(
            "validation grid needs at least 64 points, got {n_grid}"
        )));
    }
    let mut periodicity_residual: f64 = 0.0;
    let mut pt_residual: f64 = 0.0;
    for j in 0..n_grid {
        let x = PI * j as f64 / n_grid as f64;
        let v = p.eval(x);
        let per = (p.eval(x + PI) - v).norm();
        let pt = (p.eval(-x).conj() - v).norm();
        // f64::max drops NaN; keep it.
        periodicity_residual = nan_max(periodicity_residual, per);
        pt_residual = nan_max(pt_residual, pt);
    }
    Ok(ValidationReport {
        periodicity_residual,
        pt_residual,
        periodic: periodicity_residual <= tol,
        pt_symmetric: pt_residual <= tol,
        n_grid,
        tol,
    })
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// `x ↦ V(x + π/2)`, built by substituting `x + π/2` for the variable.
pub fn shift_half_period(p: &PotentialExpr) -> PotentialExpr {
    let shifted_var = Expr::binary(BinOp::Add, Expr::Var, Expr::Real(FRAC_PI_2));
    PotentialExpr::from_expr(p.root.substitute(&shifted_var))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pot(s: &str) -> PotentialExpr {
        parse_potential(s).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn eval_examples() {
        let c = Complex64::new;
        assert_eq!(pot("cos(2*x)").eval(0.0), c(1.0, 0.0));
        assert!(close(pot("cos(2*x)").eval(PI / 4.0), c(0.0, 0.0), 1e-15));
        assert!(close(pot("i*sin(2*x)").eval(PI / 4.0), c(0.0, 1.0), 1e-15));
        assert!(close(pot("exp(2i*x)").eval(PI / 4.0), c(0.0, 1.0), 1e-15));
        assert!(close(pot("x^2 - 2^0.5").eval(3.0), c(9.0 - 2f64.sqrt(), 0.0), 1e-14));
        assert!(close(pot("i^2").eval(0.0), c(-1.0, 0.0), 0.0));
    }

    #[test]
    fn validation_examples() {
        let r = validate_potential(&pot("cos(2x) + i*sin(2x)"), 256, 1e-9).unwrap();
        assert!(r.pt_residual < 1e-14 && r.periodicity_residual < 1e-12);
        assert!(r.passed());

        let r = validate_potential(&pot("cos(2x) + i*cos(2x)"), 256, 1e-9).unwrap();
        assert!((r.pt_residual - 2.0).abs() < 1e-12, "{}", r.pt_residual);
        assert!(r.periodic && !r.pt_symmetric);

        let r = validate_potential(&pot("sin(x)"), 256, 1e-9).unwrap();
        assert!((r.periodicity_residual - 2.0).abs() < 1e-12);
        assert!(!r.periodic);
    }

    #[test]
    fn validation_rejects_small_grid() {
        assert!(validate_potential(&pot("1"), 63, 1e-9).is_err());
    }

    #[test]
    fn non_finite_values_fail_validation() {
        let r = validate_potential(&pot("1/(x-x)"), 64, 1e-9).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn shift_examples() {
        let grid = (0..64).map(|j| PI * j as f64 / 64.0);
        let cases = [
            ("cos(2*x)", "-cos(2*x)"),
            ("cos(2*x)+0.5i*sin(2*x)", "-cos(2*x)-0.5i*sin(2*x)"),
            ("3", "3"),
        ];
        for (src, expected) in cases {
            let shifted = shift_half_period(&pot(src));
            let expected = pot(expected);
            for x in grid.clone() {
                assert!(close(shifted.eval(x), expected.eval(x), 1e-14), "{src} at {x}");
            }
            assert!(validate_potential(&shifted, 256, 1e-9).unwrap().passed());
        }
    }

    #[test]
    fn double_shift_is_full_period() {
        let p = pot("cos(2x) + 0.3i*sin(2x) + 0.2cos(4x)");
        let twice = shift_half_period(&shift_half_period(&p));
        for j in 0..256 {
            let x = PI * j as f64 / 256.0;
            assert!(close(twice.eval(x), p.eval(x), 1e-12));
        }
    }

    #[test]
    fn shifted_source_reparses() {
        let s = shift_half_period(&pot("cos(2x)"));
        let again = pot(s.source_text());
        assert_eq!(again.root(), s.root());
    }
}
