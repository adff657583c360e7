//! Constructors for the state families used by the monogamy checks, and seeded
//! random states.
//!
//! Family parameters that are off-norm by at most `1e-6` are renormalized;
//! anything further off is rejected.

use crate::math::sqrt;
use crate::tensor::{ComplexMatrix, MixedState, PureState};
use crate::{tol, Error, Result, C64};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const ZERO: C64 = C64::new(0.0, 0.0);

fn check_norm(values: &[C64]) -> Result<()> {
    let n = sqrt(values.iter().map(|z| z.norm_sqr()).sum());
    if (n - 1.0).abs() > tol::RENORMALIZE {
        return Err(Error::Normalization { norm: n });
    }
    Ok(())
}

fn check_parties(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Parameter(format!("need at least 2 parties, got {n}")));
    }
    Ok(())
}

/// `a |0...0> + b |1...1>` on `n` qubits.
pub fn ghz(n: usize, a: C64, b: C64) -> Result<PureState> {
    check_parties(n)?;
    check_norm(&[a, b])?;
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = a;
    amps[(1 << n) - 1] = b;
    PureState::renormalized(vec![2; n], amps)
}

/// Uniform superposition of the `n` single-excitation kets.
pub fn w_state(n: usize) -> Result<PureState> {
    check_parties(n)?;
    let amp = C64::new(1.0 / sqrt(n as f64), 0.0);
    let mut amps = vec![ZERO; 1 << n];
    for s in 0..n {
        amps[1 << (n - 1 - s)] = amp;
    }
    PureState::renormalized(vec![2; n], amps)
}

/// Totally antisymmetric state of three qutrits,
/// `(|012> - |021> + |120> - |102> + |201> - |210>)/sqrt(6)`
/// (labels 1, 2, 3 of the usual presentation map to local indices 0, 1, 2).
pub fn antisymmetric_333() -> PureState {
    let amp = 1.0 / sqrt(6.0);
    let mut amps = vec![ZERO; 27];
    for (digits, sign) in [([0, 1, 2], 1.0), ([0, 2, 1], -1.0), ([1, 2, 0], 1.0), ([1, 0, 2], -1.0), ([2, 0, 1], 1.0), ([2, 1, 0], -1.0)] {
        amps[digits[0] * 9 + digits[1] * 3 + digits[2]] = C64::new(sign * amp, 0.0);
    }
    PureState::renormalized(vec![3, 3, 3], amps).expect("antisymmetric state is normalized")
}

/// Coefficients `a_{s i}` of an `n`-qudit generalized W-class state, party
/// `s` in `0..n`, excitation level `i` in `1..d`.
#[derive(Clone, Debug, PartialEq)]
pub struct WClassCoefficients {
    n: usize,
    d: usize,
    a: Vec<C64>,
}

impl WClassCoefficients {
    /// `rows[s][i - 1] = a_{s i}`; requires `sum |a_{s i}|^2 = 1` within `1e-10`.
    pub fn new(rows: Vec<Vec<C64>>) -> Result<Self> {
        Self::build(rows, tol::STRUCTURAL)
    }

    /// As [`WClassCoefficients::new`] but rescales sets off-norm by up to `1e-6`.
    pub fn renormalized(rows: Vec<Vec<C64>>) -> Result<Self> {
        Self::build(rows, tol::RENORMALIZE)
    }

    fn build(rows: Vec<Vec<C64>>, tolerance: f64) -> Result<Self> {
        let n = rows.len();
        check_parties(n)?;
        let levels = rows[0].len();
        if levels == 0 || rows.iter().any(|r| r.len() != levels) {
            return Err(Error::Shape("every party needs the same number (d - 1 >= 1) of coefficients".into()));
        }
        let mut a: Vec<C64> = rows.into_iter().flatten().collect();
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = sqrt(a.iter().map(|z| z.norm_sqr()).sum());
        if (norm - 1.0).abs() > tolerance {
            return Err(Error::Normalization { norm });
        }
        a.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { n, d: levels + 1, a })
    }

    /// All `a_{s i} = 1 / sqrt(n (d - 1))`.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Parameter(format!("local dimension {d} < 2")));
        }
        let amp = C64::new(1.0 / sqrt((n * (d - 1)) as f64), 0.0);
        Self::new(vec![vec![amp; d - 1]; n])
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    /// `a_{s i}` for party `s` (0-based) and level `i` in `1..d`.
    pub fn coefficient(&self, s: usize, i: usize) -> C64 {
        self.a[s * (self.d - 1) + (i - 1)]
    }

    /// Excitation weight of party `s`: `sum_i |a_{s i}|^2`.
    pub fn weight(&self, s: usize) -> f64 {
        (1..self.d).map(|i| self.coefficient(s, i).norm_sqr()).sum()
    }
}

fn w_class_amplitudes(c: &WClassCoefficients) -> Vec<C64> {
    let (n, d) = (c.n, c.d);
    let total = d.pow(n as u32);
    let mut amps = vec![ZERO; total];
    for s in 0..n {
        let stride = d.pow((n - 1 - s) as u32);
        for i in 1..d {
            amps[i * stride] += c.coefficient(s, i);
        }
    }
    amps
}

/// `sum_{s,i} a_{s i} |0..i..0>` with the excitation `i` in slot `s`.
pub fn generalized_w_class(c: &WClassCoefficients) -> Result<PureState> {
    PureState::renormalized(vec![c.d; c.n], w_class_amplitudes(c))
}

/// `sqrt(p) |W> + sqrt(1 - p) |0...0>`.
pub fn w_vacuum_superposition(p: f64, c: &WClassCoefficients) -> Result<PureState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("superposition weight p = {p} outside [0, 1]")));
    }
    let mut amps = w_class_amplitudes(c);
    let sp = sqrt(p);
    amps.iter_mut().for_each(|z| *z *= sp);
    amps[0] += C64::new(sqrt(1.0 - p), 0.0);
    PureState::renormalized(vec![c.d; c.n], amps)
}

fn qubit_superposition(n: usize, terms: &[(usize, C64)]) -> Result<PureState> {
    check_norm(&terms.iter().map(|t| t.1).collect::<Vec<_>>())?;
    let mut amps = vec![ZERO; 1 << n];
    for &(index, amp) in terms {
        amps[index] += amp;
    }
    PureState::renormalized(vec![2; n], amps)
}

/// `a |010> + b |100>`.
pub fn theorem1_saturating(a: C64, b: C64) -> Result<PureState> {
    qubit_superposition(3, &[(0b010, a), (0b100, b)])
}

/// `a |0100> + b |0010> + c |0001>`.
pub fn theorem2_saturating(a: C64, b: C64, c: C64) -> Result<PureState> {
    qubit_superposition(4, &[(0b0100, a), (0b0010, b), (0b0001, c)])
}

/// `a |1000> + b |0010> + c |0001>`.
pub fn theorem3_saturating(a: C64, b: C64, c: C64) -> Result<PureState> {
    qubit_superposition(4, &[(0b1000, a), (0b0010, b), (0b0001, c)])
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Isotropically distributed pure state (normalized complex Gaussian vector).
pub fn random_pure(dims: &[usize], seed: u64) -> Result<PureState> {
    let total: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..total).map(|_| gaussian(&mut rng)).collect();
    PureState::from_unnormalized(dims.to_vec(), amps)
}

/// `V V† / Tr(V V†)` for a Gaussian `D x rank` matrix `V`.
pub fn random_mixed(dims: &[usize], rank: usize, seed: u64) -> Result<MixedState> {
    let total: usize = dims.iter().product();
    if rank == 0 || rank > total {
        return Err(Error::Parameter(format!("rank {rank} outside 1..={total}")));
    }
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::Shape(format!("invalid dims {dims:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<C64> = (0..total * rank).map(|_| gaussian(&mut rng)).collect();
    let v = ComplexMatrix::new(total, rank, v)?;
    let gram = &v * &v.adjoint();
    let trace = gram.trace().re;
    Ok(MixedState::from_trusted(dims.to_vec(), gram.scaled(1.0 / trace)))
}
