//! Dense complex linear algebra over multi-qudit Hilbert spaces.
//!
//! Subsystem 0 is the leftmost tensor factor: the amplitude of the product
//! basis ket `|i_0 i_1 ... i_{k-1}>` sits at the row-major index of the digits
//! `(i_0, ..., i_{k-1})`. A [`Bipartition`] lists the subsystems on each side;
//! reshaping permutes subsystems into `side_a ++ side_b` order first.

mod linalg;

pub(crate) use linalg::{orthonormalize_columns, singular_values_rows};

use crate::math::sqrt;
use crate::{tol, Error, Result, C64};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { C64::new(diag[r], 0.0) } else { ZERO })
    }

    /// `|v><w|`
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        Self::from_fn(v.len(), w.len(), |r, c| v[r] * w[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * factor).collect() }
    }

    /// Largest `|m_ij - conj(m_ji)|`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// Largest entrywise `|a_ij - b_ij|`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Sum of squared moduli; equals `Tr(M M†)`.
    pub fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.data[k * rhs.cols + c];
                }
            }
        }
        out
    }
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::Shape("a state needs at least one subsystem".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::Shape(format!("subsystem dimension {d} < 2")));
    }
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or_else(|| Error::Shape("dimension overflow".into()))
}

fn norm(v: &[C64]) -> f64 {
    sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Normalized state vector on `dims`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Requires the amplitude vector to be normalized within `1e-10`.
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_tolerance(dims, amplitudes, tol::STRUCTURAL)
    }

    /// Accepts vectors off-norm by up to `1e-6` and rescales them to unit norm.
    pub fn renormalized(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_tolerance(dims, amplitudes, tol::RENORMALIZE)
    }

    /// Normalizes any nonzero vector.
    pub fn from_unnormalized(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_tolerance(dims, amplitudes, f64::INFINITY)
    }

    fn with_tolerance(dims: Vec<usize>, mut amplitudes: Vec<C64>, tolerance: f64) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::Shape(format!(
                "{} amplitudes for total dimension {total}",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = norm(&amplitudes);
        if n == 0.0 || (n - 1.0).abs() > tolerance {
            return Err(Error::Normalization { norm: n });
        }
        if n != 1.0 {
            amplitudes.iter_mut().for_each(|z| *z /= n);
        }
        Ok(Self { dims, amplitudes })
    }

    /// Product basis ket with the given local indices.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let total = check_dims(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(i, d)| i >= d) {
            return Err(Error::Shape(format!("basis label {digits:?} does not fit dims {dims:?}")));
        }
        let mut amplitudes = vec![ZERO; total];
        amplitudes[flat_index(&dims, digits)] = ONE;
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Amplitudes reshaped into a `dim(side_a) x dim(side_b)` matrix.
    pub fn amplitude_matrix(&self, part: &Bipartition) -> Result<ComplexMatrix> {
        part.check_parties(self.parties())?;
        let layout = Layout::new(&self.dims, &part.side_a, &part.side_b);
        Ok(layout.reshape(&self.amplitudes))
    }

    /// Reduced density matrix on `keep` (sorted into ascending party order).
    pub fn reduced(&self, keep: &[usize]) -> Result<MixedState> {
        let (keep, rest) = keep_and_rest(self.parties(), keep)?;
        let layout = Layout::new(&self.dims, &keep, &rest);
        let m = layout.reshape(&self.amplitudes);
        let reduced = &m * &m.adjoint();
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Ok(MixedState { dims, matrix: reduced })
    }

    /// Reorders subsystems: party `k` of the result is party `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<PureState> {
        let n = self.parties();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || core::mem::replace(&mut seen[i], true)) {
            return Err(Error::Partition(format!("{order:?} is not a permutation of 0..{n}")));
        }
        let layout = Layout::new(&self.dims, order, &[]);
        let dims = order.iter().map(|&i| self.dims[i]).collect();
        Ok(PureState { dims, amplitudes: layout.reshape(&self.amplitudes).into_vec() })
    }
}

/// Density matrix on `dims`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl MixedState {
    /// Validates Hermiticity and unit trace (`1e-10`) and positivity
    /// (smallest eigenvalue `>= -1e-9`).
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let total = check_dims(&dims)?;
        if matrix.rows() != total || matrix.cols() != total {
            return Err(Error::Shape(format!(
                "{}x{} matrix for total dimension {total}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > tol::STRUCTURAL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol::STRUCTURAL || trace.im.abs() > tol::STRUCTURAL {
            return Err(Error::Trace { trace: trace.re });
        }
        let smallest = hermitian_eigenvalues(&matrix)?.last().copied().unwrap_or(0.0);
        if smallest < -tol::EIGEN_CLIP {
            return Err(Error::NegativeEigenvalue { value: smallest });
        }
        Ok(Self { dims, matrix })
    }

    /// `|psi><psi|`
    pub fn from_pure(psi: &PureState) -> Self {
        Self { dims: psi.dims.clone(), matrix: ComplexMatrix::outer(&psi.amplitudes, &psi.amplitudes) }
    }

    pub(crate) fn from_trusted(dims: Vec<usize>, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), dims.iter().product::<usize>());
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Tr(rho^2)`
    pub fn purity(&self) -> f64 {
        self.matrix.frobenius_sqr()
    }

    /// Eigenvalues (descending) with negatives in `[-1e-9, 0)` clipped to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev = hermitian_eigenvalues(&self.matrix).expect("density matrix is Hermitian");
        ev.iter_mut().for_each(|x| *x = x.max(0.0));
        ev
    }

    /// Number of eigenvalues above the support threshold `1e-12`.
    pub fn rank(&self) -> usize {
        self.spectrum().iter().filter(|&&x| x > tol::RANK).count()
    }

    /// The pure state spanning the support when the rank is one.
    pub fn as_pure(&self) -> Option<PureState> {
        let eig = hermitian_eig(&self.matrix).ok()?;
        if eig.values.iter().skip(1).any(|&x| x > tol::RANK) {
            return None;
        }
        let v = eig.vectors.transpose().as_slice()[..self.dimension()].to_vec();
        PureState::from_unnormalized(self.dims.clone(), v).ok()
    }
}

/// Split of subsystem indices `0..k` into two nonempty ordered groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(side_a: Vec<usize>, side_b: Vec<usize>) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::Partition("both sides must be nonempty".into()));
        }
        let k = side_a.len() + side_b.len();
        let mut seen = vec![false; k];
        for &i in side_a.iter().chain(&side_b) {
            if i >= k {
                return Err(Error::Partition(format!("index {i} out of range for {k} subsystems")));
            }
            if core::mem::replace(&mut seen[i], true) {
                return Err(Error::Partition(format!("index {i} appears twice")));
            }
        }
        Ok(Self { side_a, side_b })
    }

    /// `side_a | complement`, complement in ascending order.
    pub fn split(side_a: &[usize], parties: usize) -> Result<Self> {
        let side_b = (0..parties).filter(|i| !side_a.contains(i)).collect();
        Self::new(side_a.to_vec(), side_b)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn parties(&self) -> usize {
        self.side_a.len() + self.side_b.len()
    }

    pub(crate) fn check_parties(&self, parties: usize) -> Result<()> {
        if self.parties() != parties {
            return Err(Error::Partition(format!(
                "bipartition covers {} subsystems, state has {parties}",
                self.parties()
            )));
        }
        Ok(())
    }
}

fn keep_and_rest(parties: usize, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::Partition("nothing to keep".into()));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    if let Some(&bad) = sorted.iter().find(|&&i| i >= parties) {
        return Err(Error::Partition(format!("index {bad} out of range for {parties} subsystems")));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Partition(format!("repeated index in {keep:?}")));
    }
    let rest = (0..parties).filter(|i| !sorted.contains(i)).collect();
    Ok((sorted, rest))
}

fn flat_index(dims: &[usize], digits: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

/// Index bookkeeping for regrouping subsystems as `side_a ++ side_b`.
/// Subsystems in neither side are not allowed; callers pass full covers.
pub(crate) struct Layout {
    pub d_a: usize,
    pub d_b: usize,
    /// `join[ia * d_b + ib]` is the flat index in the original ordering.
    join: Vec<usize>,
}

impl Layout {
    pub fn new(dims: &[usize], side_a: &[usize], side_b: &[usize]) -> Self {
        let d_a: usize = side_a.iter().map(|&i| dims[i]).product();
        let d_b: usize = side_b.iter().map(|&i| dims[i]).product();
        let total: usize = dims.iter().product();
        debug_assert_eq!(d_a * d_b, total);
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let mut join = vec![0usize; total];
        for flat in 0..total {
            let digit = |k: usize| (flat / strides[k]) % dims[k];
            let ia = side_a.iter().fold(0, |acc, &k| acc * dims[k] + digit(k));
            let ib = side_b.iter().fold(0, |acc, &k| acc * dims[k] + digit(k));
            join[ia * d_b + ib] = flat;
        }
        Self { d_a, d_b, join }
    }

    pub fn flat(&self, ia: usize, ib: usize) -> usize {
        self.join[ia * self.d_b + ib]
    }

    pub fn reshape(&self, v: &[C64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.d_a, self.d_b, |ia, ib| v[self.flat(ia, ib)])
    }

    /// Like [`Layout::reshape`] but writes into `out`, optionally transposed
    /// (`d_b x d_a`).
    pub fn reshape_into(&self, v: &[C64], out: &mut [C64], transposed: bool) {
        for ia in 0..self.d_a {
            for ib in 0..self.d_b {
                let z = v[self.join[ia * self.d_b + ib]];
                if transposed {
                    out[ib * self.d_a + ia] = z;
                } else {
                    out[ia * self.d_b + ib] = z;
                }
            }
        }
    }
}

/// `|psi><psi|`
pub fn pure_to_mixed(psi: &PureState) -> MixedState {
    MixedState::from_pure(psi)
}

/// Traces out every subsystem not in `keep`; kept subsystems stay in their
/// original relative order.
pub fn partial_trace(rho: &MixedState, keep: &[usize]) -> Result<MixedState> {
    let (keep, rest) = keep_and_rest(rho.parties(), keep)?;
    if rest.is_empty() {
        return Ok(rho.clone());
    }
    let layout = Layout::new(&rho.dims, &keep, &rest);
    let m = &rho.matrix;
    let reduced = ComplexMatrix::from_fn(layout.d_a, layout.d_a, |i, j| {
        (0..layout.d_b).map(|r| m[(layout.flat(i, r), layout.flat(j, r))]).sum()
    });
    let dims = keep.iter().map(|&k| rho.dims[k]).collect();
    Ok(MixedState { dims, matrix: reduced })
}

/// Transposes the `side_a` composite index: `<a b|rho^T_A|a' b'> = <a' b|rho|a b'>`.
pub fn partial_transpose(rho: &MixedState, part: &Bipartition) -> Result<ComplexMatrix> {
    part.check_parties(rho.parties())?;
    let layout = Layout::new(&rho.dims, &part.side_a, &part.side_b);
    let mut out = ComplexMatrix::zeros(rho.dimension(), rho.dimension());
    for ia in 0..layout.d_a {
        for ib in 0..layout.d_b {
            let row = layout.flat(ia, ib);
            for ja in 0..layout.d_a {
                for jb in 0..layout.d_b {
                    out[(row, layout.flat(ja, jb))] = rho.matrix[(layout.flat(ja, ib), layout.flat(ia, jb))];
                }
            }
        }
    }
    Ok(out)
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s = if m.rows() <= m.cols() {
        let mut data = m.as_slice().to_vec();
        singular_values_rows(&mut data, m.rows(), m.cols())
    } else {
        let mut data = m.adjoint().into_vec();
        singular_values_rows(&mut data, m.cols(), m.rows())
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Sum of singular values. Hermitian input goes through the eigensolver.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Shape(format!("trace norm of a non-square {}x{} matrix", m.rows(), m.cols())));
    }
    let scale = m.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if m.hermitian_deviation() <= 1e-14 * scale {
        Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
    } else {
        Ok(singular_values(m).iter().sum())
    }
}

/// Squared Schmidt coefficients `lambda_i` across `part`, descending; there are
/// `min(dim A, dim B)` of them.
pub fn schmidt_coefficients(psi: &PureState, part: &Bipartition) -> Result<Vec<f64>> {
    let m = psi.amplitude_matrix(part)?;
    Ok(singular_values(&m).into_iter().map(|s| s * s).collect())
}

/// Eigenvalues (descending) and orthonormal eigenvectors (columns, same order).
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Column `k` of [`HermitianEigen::vectors`].
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows()).map(|r| self.vectors[(r, k)]).collect()
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Shape(format!("eigendecomposition of a {}x{} matrix", m.rows(), m.cols())));
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol::SPECTRAL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    let mut v = ComplexMatrix::identity(n).into_vec();
    linalg::jacobi_hermitian(&mut a, n, Some(&mut v));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    linalg::jacobi_hermitian(&mut a, n, None);
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}
