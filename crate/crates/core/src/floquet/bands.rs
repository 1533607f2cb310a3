//! Band edges (roots of `Re Δ ∓ 1`) and band assembly.
//!
//! Edges are bracketed from sign changes between scan samples and refined by
//! bisection on fresh integrations. Between samples that stay inside a band,
//! an extremum of `Re Δ` pointing at `±1` is refined as well: it may hide a
//! narrow gap, a tangency (closed gap), or an extremum that never reaches
//! `±1`, which means the two edges have left the real axis.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{DiscriminantSample, FloquetSolver, Tolerances};
use crate::ode::IntegrationConfig;
use crate::potential::PotentialExpr;
use crate::Error;

/// Samples this close to `±1` are treated as lying on the edge.
const SNAP: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// `|Δ|` drops through 1: a band starts.
    Lower,
    /// `|Δ|` rises through 1: a band ends.
    Upper,
    /// `|Δ|` touches 1 from inside: two bands meet with no gap.
    Touching,
    /// `|Δ|` has an extremum short of 1 by more than the merge tolerance: the
    /// two bands have merged and their edges are no longer real.
    Merged,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEdge {
    pub energy: f64,
    /// `+1` or `−1`: which of `Δ = ±1` this edge belongs to.
    pub sign: i8,
    pub kind: EdgeKind,
}

/// A band; a missing edge means the band runs past the scan range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
    pub lower_edge: Option<BandEdge>,
    pub upper_edge: Option<BandEdge>,
}

impl Band {
    pub fn truncated(&self) -> bool {
        self.lower_edge.is_none() || self.upper_edge.is_none()
    }
}

/// The gap between two consecutive bands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    /// Width at most the merge tolerance.
    pub coalesced: bool,
    /// The bands meet at an extremum of `Δ` that does not reach `±1`.
    pub exceptional: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    pub bands: Vec<Band>,
    /// `gaps[i]` separates `bands[i]` and `bands[i + 1]`.
    pub gaps: Vec<Gap>,
    pub e_min: f64,
    pub e_max: f64,
}

impl BandStructure {
    /// Whether the gap between band `i` and band `i + 1` (0-based) is closed.
    pub fn coalesced(&self, i: usize) -> Option<bool> {
        self.gaps.get(i).map(|g| g.coalesced)
    }
}

/// Locates band edges from an ordered scan. Requires `|Im Δ| ≤
/// 100·tol.identity` at every sample; otherwise the discriminant is not real
/// and band edges are meaningless.
pub fn find_band_edges(
    p: &PotentialExpr,
    samples: &[DiscriminantSample],
    cfg: &IntegrationConfig,
    tol: &Tolerances,
) -> Result<Vec<BandEdge>, Error> {
    FloquetSolver::new(p, cfg)?.band_edges(samples, tol)
}

impl FloquetSolver {
    /// [`find_band_edges`] reusing this solver's sampled potential.
    pub fn band_edges(
        &self,
        samples: &[DiscriminantSample],
        tol: &Tolerances,
    ) -> Result<Vec<BandEdge>, Error> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument("need at least 2 samples".into()));
        }
        if samples.windows(2).any(|w| !(w[0].energy < w[1].energy)) {
            return Err(Error::InvalidArgument("samples must be sorted by increasing energy".into()));
        }
        for s in samples {
            if !(s.delta.im.abs() <= 100.0 * tol.identity) {
                return Err(Error::NonRealDiscriminant {
                    energy: s.energy,
                    imag: s.delta.im.abs(),
                });
            }
        }
        let energies: Vec<f64> = samples.iter().map(|s| s.energy).collect();
        let mut edges = Vec::new();
        for sign in [1i8, -1] {
            let g: Vec<f64> = samples
                .iter()
                .map(|s| f64::from(sign) * s.delta.re - 1.0)
                .collect();
            self.edges_for_sign(sign, &energies, &g, tol, &mut edges)?;
        }
        // Stable: edges pushed together at one energy keep their order.
        edges.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        Ok(edges)
    }

    /// `σ·Re Δ(E) − 1`: positive in the gap beyond `Δ = σ`.
    fn outside(&self, sign: i8, energy: f64) -> Result<f64, Error> {
        Ok(f64::from(sign) * self.delta(energy)?.re - 1.0)
    }

    fn edges_for_sign(
        &self,
        sign: i8,
        e: &[f64],
        g: &[f64],
        tol: &Tolerances,
        out: &mut Vec<BandEdge>,
    ) -> Result<(), Error> {
        let n = e.len();
        let snapped = |j: usize| g[j].abs() <= SNAP;
        let edge = |energy, kind| BandEdge { energy, sign, kind };

        for j in 0..n - 1 {
            if !snapped(j) && !snapped(j + 1) && g[j] * g[j + 1] < 0.0 {
                let root = self.bisect_level(sign, e[j], e[j + 1], g[j] > 0.0, tol.root)?;
                let kind = if g[j] > 0.0 { EdgeKind::Lower } else { EdgeKind::Upper };
                out.push(edge(root, kind));
            }
        }

        for j in (0..n).filter(|&j| snapped(j)) {
            let before_out = j == 0 || g[j - 1] > SNAP;
            let after_out = j == n - 1 || g[j + 1] > SNAP;
            match (before_out, after_out) {
                (true, false) => out.push(edge(e[j], EdgeKind::Lower)),
                (false, true) => out.push(edge(e[j], EdgeKind::Upper)),
                (false, false) => {
                    let (at, _) = self.refine_extremum(sign, e[j - 1], e[j + 1], tol.root)?;
                    out.push(edge(at, EdgeKind::Touching));
                }
                (true, true) => {
                    // Zero-width band touching ±1 from the gap side.
                    out.push(edge(e[j], EdgeKind::Lower));
                    out.push(edge(e[j], EdgeKind::Upper));
                }
            }
        }

        for j in 1..n.saturating_sub(1) {
            let inside = g[j - 1] < -SNAP && g[j] < -SNAP && g[j + 1] < -SNAP;
            let peak = g[j] >= g[j - 1] && g[j] >= g[j + 1] && (g[j] > g[j - 1] || g[j] > g[j + 1]);
            if !(inside && peak) {
                continue;
            }
            let (at, height) = self.refine_extremum(sign, e[j - 1], e[j + 1], tol.root)?;
            if height > SNAP {
                let upper = self.bisect_level(sign, e[j - 1], at, false, tol.root)?;
                let lower = self.bisect_level(sign, at, e[j + 1], true, tol.root)?;
                out.push(edge(upper, EdgeKind::Upper));
                out.push(edge(lower, EdgeKind::Lower));
            } else if height >= -tol.merge {
                out.push(edge(at, EdgeKind::Touching));
            } else {
                out.push(edge(at, EdgeKind::Merged));
            }
        }
        Ok(())
    }

    /// Root of `σ·Re Δ − 1` in `[lo, hi]`; `outside_at_lo` is the sign of the
    /// function at `lo`.
    fn bisect_level(
        &self,
        sign: i8,
        mut lo: f64,
        mut hi: f64,
        outside_at_lo: bool,
        tol_root: f64,
    ) -> Result<f64, Error> {
        while hi - lo > tol_root {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let out = self.outside(sign, mid)? > 0.0;
            if out == outside_at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Maximiser of `σ·Re Δ − 1` on `[lo, hi]` by bisection on the sign of a
    /// central difference; returns the location and the value there.
    fn refine_extremum(
        &self,
        sign: i8,
        mut lo: f64,
        mut hi: f64,
        tol_root: f64,
    ) -> Result<(f64, f64), Error> {
        let step = 1e-5 * f64::max(1.0, lo.abs().max(hi.abs()));
        while hi - lo > tol_root {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let slope = self.outside(sign, mid + step)? - self.outside(sign, mid - step)?;
            if slope > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let at = 0.5 * (lo + hi);
        Ok((at, self.outside(sign, at)?))
    }
}

/// Pairs edges into bands. Bands open at [`EdgeKind::Lower`] edges, close at
/// [`EdgeKind::Upper`] edges, and are split without a gap at touching or
/// merged points. A band still open at either end of the scan is truncated.
pub fn assemble_bands(
    edges: &[BandEdge],
    samples: &[DiscriminantSample],
    merge_tol: f64,
) -> Result<BandStructure, Error> {
    let (Some(first), Some(last)) = (samples.first(), samples.last()) else {
        return Err(Error::InvalidArgument("no samples".into()));
    };
    if edges.windows(2).any(|w| w[0].energy > w[1].energy) {
        return Err(Error::InvalidArgument("edges must be sorted by energy".into()));
    }
    let (e_min, e_max) = (first.energy, last.energy);

    let mut bands = Vec::new();
    let starts_inside = first.delta.re.abs() < 1.0 - SNAP;
    let mut open: Option<(f64, Option<BandEdge>)> = starts_inside.then_some((e_min, None));
    let mut close = |open: &mut Option<(f64, Option<BandEdge>)>, at: BandEdge| {
        let (lower, lower_edge) = open.take().unwrap_or((e_min, None));
        bands.push(Band {
            lower,
            upper: at.energy,
            lower_edge,
            upper_edge: Some(at),
        });
    };
    for &edge in edges {
        match edge.kind {
            EdgeKind::Lower => {
                if open.is_some() {
                    close(&mut open, edge);
                }
                open = Some((edge.energy, Some(edge)));
            }
            EdgeKind::Upper => close(&mut open, edge),
            EdgeKind::Touching | EdgeKind::Merged => {
                close(&mut open, edge);
                open = Some((edge.energy, Some(edge)));
            }
        }
    }
    if let Some((lower, lower_edge)) = open {
        bands.push(Band {
            lower,
            upper: e_max,
            lower_edge,
            upper_edge: None,
        });
    }

    let gaps = bands
        .windows(2)
        .map(|w| {
            let width = (w[1].lower - w[0].upper).max(0.0);
            Gap {
                lower: w[0].upper,
                upper: w[1].lower,
                width,
                coalesced: width <= merge_tol,
                exceptional: w[0].upper_edge.is_some_and(|e| e.kind == EdgeKind::Merged),
            }
        })
        .collect();
    Ok(BandStructure {
        bands,
        gaps,
        e_min,
        e_max,
    })
}

/// Scan, edges and assembled bands for one energy window.
#[derive(Debug, Clone)]
pub struct BandAnalysis {
    pub samples: Vec<DiscriminantSample>,
    pub edges: Vec<BandEdge>,
    pub structure: BandStructure,
}

impl FloquetSolver {
    pub fn analyze_bands(
        &self,
        e_min: f64,
        e_max: f64,
        n: usize,
        tol: &Tolerances,
    ) -> Result<BandAnalysis, Error> {
        let samples = self.scan(e_min, e_max, n)?;
        self.analyze_samples(samples, tol)
    }

    /// Edges and bands for an already computed scan.
    pub fn analyze_samples(
        &self,
        samples: Vec<DiscriminantSample>,
        tol: &Tolerances,
    ) -> Result<BandAnalysis, Error> {
        let edges = self.band_edges(&samples, tol)?;
        let structure = assemble_bands(&edges, &samples, tol.merge)?;
        Ok(BandAnalysis {
            samples,
            edges,
            structure,
        })
    }
}
