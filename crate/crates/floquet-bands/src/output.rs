//! CSV and JSON writers. Numbers use Rust's shortest round-trip formatting so
//! identical runs give identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use floquet_core::{BandStructure, DiscriminantSample, EdgeKind, ValidationTable};
use serde::Serialize;

use crate::config::OutputFormat;
use crate::error::CliError;

pub const SCAN_HEADER: &str = "E,re_delta,im_delta,re_k,im_k,conj_residual,wronskian_drift";
pub const BAND_HEADER: &str = "band,lower,upper,gap_above,coalesced";
pub const HILL_HEADER: &str = "k,band,floquet_energy,hill_re,hill_im,abs_error";

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

/// `dir/stem_suffix.ext` next to `path`.
pub fn sibling(path: &Path, suffix: &str, format: OutputFormat) -> PathBuf {
    let stem = path.file_stem().map_or_else(|| "out".into(), |s| s.to_string_lossy());
    path.with_file_name(format!("{stem}_{suffix}.{}", format.extension()))
}

/// Shortest round-trip text, switching to exponent form for very small or
/// very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, num)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ScanRow {
    #[serde(rename = "E")]
    energy: f64,
    re_delta: f64,
    im_delta: f64,
    re_k: f64,
    im_k: f64,
    conj_residual: f64,
    wronskian_drift: f64,
}

impl From<&DiscriminantSample> for ScanRow {
    fn from(s: &DiscriminantSample) -> Self {
        ScanRow {
            energy: s.energy,
            re_delta: s.delta.re,
            im_delta: s.delta.im,
            re_k: s.k.re,
            im_k: s.k.im,
            conj_residual: s.residuals.conj_residual,
            wronskian_drift: s.wronskian_drift,
        }
    }
}

pub fn scan_table(samples: &[DiscriminantSample], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = format!("{SCAN_HEADER}\n");
            for s in samples {
                let r = ScanRow::from(s);
                let cols = [r.energy, r.re_delta, r.im_delta, r.re_k, r.im_k, r.conj_residual, r.wronskian_drift];
                let _ = writeln!(out, "{}", cols.map(num).join(","));
            }
            out
        }
        OutputFormat::Json => to_json(&samples.iter().map(ScanRow::from).collect::<Vec<_>>()),
    }
}

#[derive(Serialize)]
struct BandRow {
    band: usize,
    lower: f64,
    upper: f64,
    gap_above: Option<f64>,
    coalesced: Option<bool>,
    exceptional: Option<bool>,
    truncated: bool,
}

#[derive(Serialize)]
struct BandReport<'a> {
    potential: &'a str,
    e_min: f64,
    e_max: f64,
    bands: Vec<BandRow>,
    edges: Vec<EdgeRow>,
}

#[derive(Serialize)]
struct EdgeRow {
    energy: f64,
    sign: i8,
    kind: &'static str,
}

fn kind_name(k: EdgeKind) -> &'static str {
    match k {
        EdgeKind::Lower => "lower",
        EdgeKind::Upper => "upper",
        EdgeKind::Touching => "touching",
        EdgeKind::Merged => "merged",
    }
}

fn band_rows(b: &BandStructure) -> Vec<BandRow> {
    b.bands
        .iter()
        .enumerate()
        .map(|(i, band)| {
            let gap = b.gaps.get(i);
            BandRow {
                band: i + 1,
                lower: band.lower,
                upper: band.upper,
                gap_above: gap.map(|g| g.width),
                coalesced: gap.map(|g| g.coalesced),
                exceptional: gap.map(|g| g.exceptional),
                truncated: band.truncated(),
            }
        })
        .collect()
}

/// Band table. The CSV leaves `gap_above` and `coalesced` empty for the top
/// band.
pub fn band_table(potential: &str, b: &BandStructure, format: OutputFormat) -> String {
    let rows = band_rows(b);
    match format {
        OutputFormat::Csv => {
            let mut out = format!("{BAND_HEADER}\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.band,
                    num(r.lower),
                    num(r.upper),
                    opt(r.gap_above),
                    r.coalesced.map_or_else(String::new, |c| c.to_string())
                );
            }
            out
        }
        OutputFormat::Json => {
            let edges = b
                .bands
                .iter()
                .flat_map(|band| [band.lower_edge, band.upper_edge])
                .flatten()
                .fold(Vec::<EdgeRow>::new(), |mut acc, e| {
                    if acc.last().map_or(true, |l| l.energy != e.energy) {
                        acc.push(EdgeRow {
                            energy: e.energy,
                            sign: e.sign,
                            kind: kind_name(e.kind),
                        });
                    }
                    acc
                });
            to_json(&BandReport {
                potential,
                e_min: b.e_min,
                e_max: b.e_max,
                bands: rows,
                edges,
            })
        }
    }
}

#[derive(Serialize)]
struct HillRow {
    k: f64,
    band: usize,
    floquet_energy: Option<f64>,
    hill_re: f64,
    hill_im: f64,
    abs_error: Option<f64>,
}

#[derive(Serialize)]
struct HillReport<'a> {
    potential: &'a str,
    max_error: Option<f64>,
    max_error_per_band: &'a [Option<f64>],
    hill_real: bool,
    rows: Vec<HillRow>,
}

pub fn hill_table(potential: &str, t: &ValidationTable, format: OutputFormat) -> String {
    let rows: Vec<HillRow> = t
        .rows
        .iter()
        .map(|r| HillRow {
            k: r.k,
            band: r.band + 1,
            floquet_energy: r.floquet_energy,
            hill_re: r.hill_energy.re,
            hill_im: r.hill_energy.im,
            abs_error: r.abs_error,
        })
        .collect();
    match format {
        OutputFormat::Csv => {
            let mut out = format!("{HILL_HEADER}\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    num(r.k),
                    r.band,
                    opt(r.floquet_energy),
                    num(r.hill_re),
                    num(r.hill_im),
                    opt(r.abs_error)
                );
            }
            out
        }
        OutputFormat::Json => to_json(&HillReport {
            potential,
            max_error: t.overall_max_error(),
            max_error_per_band: &t.max_error,
            hill_real: t.hill_real,
            rows,
        }),
    }
}

/// Identity report: one row per energy and a final `max` row.
pub fn verify_table(
    potential: &str,
    samples: &[DiscriminantSample],
    tol: f64,
    passed: bool,
    format: OutputFormat,
) -> String {
    let names: Vec<&str> = floquet_core::IdentityResiduals::default()
        .named()
        .iter()
        .map(|(n, _)| *n)
        .collect();
    let mut max = vec![0.0f64; names.len()];
    let mut max_im = 0.0f64;
    let mut max_drift = 0.0f64;
    for s in samples {
        for (m, (_, v)) in max.iter_mut().zip(s.residuals.named()) {
            *m = if v.is_nan() { v } else { m.max(v) };
        }
        max_im = max_im.max(s.delta.im.abs());
        max_drift = max_drift.max(s.wronskian_drift);
    }
    match format {
        OutputFormat::Csv => {
            let mut out = format!("E,re_delta,im_delta,{},wronskian_drift\n", names.join(","));
            for s in samples {
                let _ = write!(out, "{},{},{}", num(s.energy), num(s.delta.re), num(s.delta.im));
                for (_, v) in s.residuals.named() {
                    let _ = write!(out, ",{}", num(v));
                }
                let _ = writeln!(out, ",{}", num(s.wronskian_drift));
            }
            let _ = write!(out, "max,,{}", num(max_im));
            for &v in &max {
                let _ = write!(out, ",{}", num(v));
            }
            let _ = writeln!(out, ",{}", num(max_drift));
            out
        }
        OutputFormat::Json => {
            let residual_map = |vals: &mut dyn Iterator<Item = f64>| -> serde_json::Map<String, serde_json::Value> {
                names
                    .iter()
                    .zip(vals)
                    .map(|(n, v)| (n.to_string(), serde_json::json!(v)))
                    .collect()
            };
            let rows: Vec<serde_json::Value> = samples
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "E": s.energy,
                        "re_delta": s.delta.re,
                        "im_delta": s.delta.im,
                        "residuals": residual_map(&mut s.residuals.named().iter().map(|(_, v)| *v)),
                        "wronskian_drift": s.wronskian_drift,
                    })
                })
                .collect();
            to_json(&serde_json::json!({
                "potential": potential,
                "tol_identity": tol,
                "passed": passed,
                "rows": rows,
                "max": {
                    "im_delta": max_im,
                    "residuals": residual_map(&mut max.iter().copied()),
                    "wronskian_drift": max_drift,
                },
            }))
        }
    }
}
