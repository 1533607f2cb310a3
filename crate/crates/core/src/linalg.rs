//! Small dense complex matrices and a nonsymmetric eigenvalue routine:
//! diagonal balancing, Householder reduction to upper Hessenberg form, then
//! single-shift QR sweeps with Wilkinson shifts and deflation.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, other.n);
        ComplexMatrix::from_fn(self.n, |i, j| (0..self.n).map(|k| self[(i, k)] * other[(k, j)]).sum())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Scales rows and columns by powers of two so that their off-diagonal norms
/// are comparable. A similarity transform; eigenvalues are unchanged.
fn balance(a: &mut ComplexMatrix) {
    let n = a.n;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                c += abs1(a[(j, i)]);
                r += abs1(a[(i, j)]);
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c >= g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            return;
        }
    }
}

/// Splits off eigenvalues exposed by permutations: an index whose row or
/// column has no off-diagonal entries inside the active set contributes its
/// diagonal entry exactly. Returns those and the remaining principal block.
fn isolate(a: &ComplexMatrix) -> (Vec<Complex64>, ComplexMatrix) {
    let mut active: Vec<usize> = (0..a.n).collect();
    let mut isolated = Vec::new();
    'search: loop {
        for (pos, &i) in active.iter().enumerate() {
            let row_zero = active.iter().all(|&j| j == i || a[(i, j)] == ZERO);
            let col_zero = active.iter().all(|&j| j == i || a[(j, i)] == ZERO);
            if row_zero || col_zero {
                isolated.push(a[(i, i)]);
                active.remove(pos);
                continue 'search;
            }
        }
        break;
    }
    let block = ComplexMatrix::from_fn(active.len(), |r, c| a[(active[r], active[c])]);
    (isolated, block)
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.n;
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let norm = ((k + 1)..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + e^{iθ}‖x‖ e1, so (I − 2vv*/v*v) x = −e^{iθ}‖x‖ e1.
        for i in (k + 1)..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] += phase * norm;
        let vnorm2: f64 = ((k + 1)..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let scale = 2.0 / vnorm2;
        // Left: A ← A − scale·v (v* A), rows k+1.., columns k..
        for j in k..n {
            let dot: Complex64 = ((k + 1)..n).map(|i| v[i].conj() * a[(i, j)]).sum();
            let dot = dot * scale;
            for i in (k + 1)..n {
                a[(i, j)] -= v[i] * dot;
            }
        }
        // Right: A ← A − scale·(A v) v*, all rows, columns k+1..
        for i in 0..n {
            let dot: Complex64 = ((k + 1)..n).map(|j| a[(i, j)] * v[j]).sum();
            let dot = dot * scale;
            for j in (k + 1)..n {
                a[(i, j)] -= dot * v[j].conj();
            }
        }
        for i in (k + 2)..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Iteration cap per eigenvalue.
const MAX_SWEEPS: usize = 120;

/// All eigenvalues of a dense complex matrix, in deflation order.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>, Error> {
    let (mut out, mut h) = isolate(a);
    let n = h.n;
    if n == 0 {
        return Ok(out);
    }
    balance(&mut h);
    hessenberg(&mut h);
    let frobenius = h.frobenius_norm();
    let isolated = out.len();
    out.resize(isolated + n, ZERO);
    let out_block = &mut out[isolated..];
    let mut hi = n - 1;
    let mut sweeps = 0;
    let mut total = 0;
    loop {
        if hi == 0 {
            out_block[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = abs1(h[(l, l - 1)]);
            let mut diag = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if diag == 0.0 {
                diag = frobenius;
            }
            if sub <= f64::EPSILON * diag {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            out_block[hi] = h[(hi, hi)];
            hi -= 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        total += 1;
        if sweeps > MAX_SWEEPS {
            return Err(Error::NoConvergence {
                dimension: n,
                iterations: total,
                frobenius,
                subdiagonal: h[(hi, hi - 1)].norm(),
            });
        }
        let mu = if sweeps % 10 == 0 {
            // Ad hoc exceptional shift to break cycles.
            h[(hi, hi)] + abs1(h[(hi, hi - 1)]) * 0.75
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, l, hi, mu);
    }
    Ok(out)
}

/// One explicitly shifted QR step `H − μI = QR, H ← RQ + μI` on the active
/// block `lo..=hi` using Givens rotations.
fn qr_sweep(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for j in lo..hi {
        let a = h[(j, j)];
        let b = h[(j + 1, j)];
        let r = a.norm().hypot(b.norm());
        let (g, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), ZERO)
        } else {
            (a / r, b / r)
        };
        for col in j..=hi {
            let x = h[(j, col)];
            let y = h[(j + 1, col)];
            h[(j, col)] = g.conj() * x + s.conj() * y;
            h[(j + 1, col)] = -s * x + g * y;
        }
        rotations.push((g, s));
    }
    for (offset, &(g, s)) in rotations.iter().enumerate() {
        let j = lo + offset;
        for row in lo..=(j + 2).min(hi) {
            let x = h[(row, j)];
            let y = h[(row, j + 1)];
            h[(row, j)] = x * g + y * s;
            h[(row, j + 1)] = -x * s.conj() + y * g.conj();
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}
