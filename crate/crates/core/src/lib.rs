//! Floquet discriminants and Bloch band structures for complex periodic
//! potentials of period π, together with the numerical certificates that the
//! discriminant of a PT-symmetric lattice is real.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function
//! of its inputs: potentials are immutable after parsing, integrations and
//! eigenvalue computations share no state, so callers may fan work out across
//! threads freely. File formats, configuration and parallel drivers live in the
//! `floquet-bands` companion crate.
//!
//! The main pieces:
//!
//! * [`potential`]: a small expression language for `V(x)`, with PT and
//!   periodicity validation, the half-period shift and Fourier coefficients.
//! * [`ode`]: fixed-step RK4 propagation of the fundamental pair `u1`, `u2` of
//!   `ψ'' + (E + V)ψ = 0`, and of the shifted pair `v1`, `v2`.
//! * [`floquet`]: discriminant, reality/composition residuals, Bloch index,
//!   scans, band-edge location and band assembly.
//! * [`hill`]: truncated plane-wave (Hill) matrices and an in-crate dense
//!   eigensolver used as an independent oracle.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod floquet;
pub mod hill;
pub mod linalg;
pub mod ode;
pub mod potential;

pub use num_complex::Complex64;

pub use error::{Error, ParseError};
pub use floquet::{
    assemble_bands, bloch_coefficients, bloch_k, discriminant, find_band_edges,
    scan_discriminant, verify_pt_identities, Band, BandAnalysis, BandEdge, BandStructure,
    BlochSolution, DiscriminantSample, EdgeKind, FloquetSolver, Gap, IdentityResiduals,
    Tolerances,
};
pub use hill::{
    cross_validate, hill_energies, hill_matrix, HillConfig, HillSpectrum, ValidationRow,
    ValidationTable,
};
pub use ode::{integrate_fundamental, integrate_shifted, IntegrationConfig, ShiftedTransfer, TransferData};
pub use potential::{
    fourier_coefficients, parse_potential, shift_half_period, validate_potential, FourierCoeffs,
    PotentialExpr, ValidationReport, DEFAULT_VALIDATION_GRID, DEFAULT_VALIDATION_TOL,
};

pub type Result<T, E = Error> = core::result::Result<T, E>;
