//! Jacobi kernels for small dense complex matrices. All matrices are row-major
//! slices; sizes here never exceed a few hundred, so cyclic Jacobi is fast
//! enough and keeps small eigen/singular values accurate.

use crate::math::sqrt;
use crate::C64;
use alloc::vec::Vec;

const MAX_SWEEPS: usize = 80;

/// Rotation `J = [[c, s], [-s u*, c u*]]` acting on coordinates `(p, q)` that
/// diagonalizes the Hermitian block `[[app, apq], [apq*, aqq]]` via `J† A J`.
#[derive(Clone, Copy)]
struct Rotation {
    c: f64,
    s: f64,
    u: C64,
}

impl Rotation {
    fn annihilating(app: f64, aqq: f64, apq: C64) -> Option<Self> {
        let mag = apq.norm();
        if mag == 0.0 {
            return None;
        }
        let u = apq / mag;
        let theta = (aqq - app) / (2.0 * mag);
        let t = if theta >= 0.0 {
            1.0 / (theta + sqrt(theta * theta + 1.0))
        } else {
            -1.0 / (-theta + sqrt(theta * theta + 1.0))
        };
        let c = 1.0 / sqrt(t * t + 1.0);
        Some(Rotation { c, s: t * c, u })
    }

    /// `X <- X J` on columns `p`, `q` of an `rows x n` matrix.
    fn apply_right(&self, x: &mut [C64], rows: usize, n: usize, p: usize, q: usize) {
        let su = self.u.conj() * self.s;
        let cu = self.u.conj() * self.c;
        for k in 0..rows {
            let xp = x[k * n + p];
            let xq = x[k * n + q];
            x[k * n + p] = xp * self.c - xq * su;
            x[k * n + q] = xp * self.s + xq * cu;
        }
    }

    /// `X <- J† X` on rows `p`, `q` of an `m x cols` matrix.
    fn apply_left_adjoint(&self, x: &mut [C64], cols: usize, p: usize, q: usize) {
        let su = self.u * self.s;
        let cu = self.u * self.c;
        for k in 0..cols {
            let xp = x[p * cols + k];
            let xq = x[q * cols + k];
            x[p * cols + k] = xp * self.c - xq * su;
            x[q * cols + k] = xp * self.s + xq * cu;
        }
    }
}

/// Cyclic Jacobi diagonalization of the Hermitian `n x n` matrix `a`.
///
/// On return the real parts of the diagonal of `a` are the eigenvalues (in no
/// particular order) and, if `vecs` was supplied, it holds the matching
/// eigenvectors as columns. `vecs` must be initialised to the identity.
pub(crate) fn jacobi_hermitian(a: &mut [C64], n: usize, mut vecs: Option<&mut [C64]>) {
    debug_assert_eq!(a.len(), n * n);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        let mut total = 0.0;
        for p in 0..n {
            total += a[p * n + p].norm_sqr();
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        total += 2.0 * off;
        if off <= 1e-32 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Entry already negligible relative to its diagonal pair.
                if apq.norm() <= 1e-18 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    continue;
                }
                let Some(rot) = Rotation::annihilating(app, aqq, apq) else {
                    continue;
                };
                rot.apply_right(a, n, n, p, q);
                rot.apply_left_adjoint(a, n, p, q);
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                if let Some(v) = vecs.as_deref_mut() {
                    rot.apply_right(v, n, n, p, q);
                }
            }
        }
    }
}

/// Singular values of the `rows x cols` matrix `m` by one-sided Jacobi on its
/// rows, unsorted. Expects `rows <= cols` for efficiency (any shape works).
/// `m` is overwritten.
pub(crate) fn singular_values_rows(m: &mut [C64], rows: usize, cols: usize) -> Vec<f64> {
    debug_assert_eq!(m.len(), rows * cols);
    let row_dot = |m: &[C64], i: usize, j: usize| -> C64 {
        // G_ij = sum_k m_ik conj(m_jk)
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..cols {
            acc += m[i * cols + k] * m[j * cols + k].conj();
        }
        acc
    };
    let row_norm_sqr =
        |m: &[C64], i: usize| -> f64 { m[i * cols..(i + 1) * cols].iter().map(|z| z.norm_sqr()).sum() };

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..rows {
            for q in (p + 1)..rows {
                let gpp = row_norm_sqr(m, p);
                let gqq = row_norm_sqr(m, q);
                let gpq = row_dot(m, p, q);
                if gpq.norm() <= 1e-15 * sqrt(gpp * gqq) {
                    continue;
                }
                let Some(rot) = Rotation::annihilating(gpp, gqq, gpq) else {
                    continue;
                };
                rot.apply_left_adjoint(m, cols, p, q);
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }
    (0..rows).map(|i| sqrt(row_norm_sqr(m, i))).collect()
}

/// Modified Gram-Schmidt (two passes) on the columns of a `rows x cols`
/// matrix. Returns `false` if the columns are numerically dependent.
pub(crate) fn orthonormalize_columns(v: &mut [C64], rows: usize, cols: usize) -> bool {
    for j in 0..cols {
        for _pass in 0..2 {
            for i in 0..j {
                let mut proj = C64::new(0.0, 0.0);
                for k in 0..rows {
                    proj += v[k * cols + i].conj() * v[k * cols + j];
                }
                for k in 0..rows {
                    let vi = v[k * cols + i];
                    v[k * cols + j] -= vi * proj;
                }
            }
        }
        let norm = sqrt((0..rows).map(|k| v[k * cols + j].norm_sqr()).sum::<f64>());
        if norm < 1e-12 {
            return false;
        }
        for k in 0..rows {
            v[k * cols + j] /= norm;
        }
    }
    true
}
