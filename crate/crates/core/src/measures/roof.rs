//! Convex-roof search over pure-state decompositions.
//!
//! Every `m`-member decomposition of a rank-`r` state comes from an `m x r`
//! isometry `V` applied to the subnormalized eigenvectors `f_l = sqrt(mu_l) e_l`:
//! `psi_h = sum_l V_hl f_l`. The search applies random two-row rotations to `V`
//! and keeps those that improve the ensemble average.

use super::{Bound, Decomposition, MeasureValue, Objective, PureMeasure, RoofConfig};
use crate::math::{sin_cos, sqrt};
use crate::tensor::{hermitian_eig, orthonormalize_columns, singular_values_rows, Bipartition, ComplexMatrix, Layout, MixedState, PureState};
use crate::{tol, Error, Result, C64};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

const ZERO: C64 = C64::new(0.0, 0.0);
/// Consecutive non-improving proposals that end a restart.
const STALL_LIMIT: usize = 50;
const INITIAL_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-9;
/// Members lighter than this are dropped from witnesses.
const WEIGHT_FLOOR: f64 = 1e-15;

impl Objective {
    /// Improvement of `new` over `old`; positive is better.
    fn gain(self, old: f64, new: f64) -> f64 {
        match self {
            Objective::Min => old - new,
            Objective::Max => new - old,
        }
    }
}

/// `sqrt(mu_l) e_l` for the eigenvalues above the rank threshold.
fn support(rho: &MixedState) -> Result<Vec<Vec<C64>>> {
    let eig = hermitian_eig(rho.matrix())?;
    Ok(eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > tol::RANK)
        .map(|(k, &mu)| eig.vector(k).into_iter().map(|z| z * sqrt(mu)).collect())
        .collect())
}

fn build_decomposition(dims: &[usize], factors: &[Vec<C64>], v: &[C64], m: usize) -> Result<Decomposition> {
    let r = factors.len();
    let d = factors[0].len();
    let mut weights = Vec::with_capacity(m);
    let mut members = Vec::with_capacity(m);
    for h in 0..m {
        let mut psi = vec![ZERO; d];
        for (l, f) in factors.iter().enumerate() {
            let coef = v[h * r + l];
            psi.iter_mut().zip(f).for_each(|(x, y)| *x += coef * y);
        }
        let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if p > WEIGHT_FLOOR {
            weights.push(p);
            members.push(PureState::from_unnormalized(dims.to_vec(), psi)?);
        }
    }
    Decomposition::new(weights, members)
}

/// Decomposition of `rho` induced by an `m x rank` isometry (`V† V = I` within `1e-8`).
pub fn hjw_decomposition(rho: &MixedState, isometry: &ComplexMatrix) -> Result<Decomposition> {
    let factors = support(rho)?;
    let r = factors.len();
    if isometry.cols() != r || isometry.rows() < r {
        return Err(Error::Shape(format!(
            "isometry is {}x{}, rank is {r}",
            isometry.rows(),
            isometry.cols()
        )));
    }
    let gram = &isometry.adjoint() * isometry;
    let deviation = gram.max_abs_diff(&ComplexMatrix::identity(r));
    if deviation > tol::SPECTRAL {
        return Err(Error::Parameter(format!("matrix is not an isometry (deviation {deviation:.3e})")));
    }
    build_decomposition(rho.dims(), &factors, isometry.as_slice(), isometry.rows())
}

struct Problem {
    /// Member matrices are stored `rows x cols` with `rows <= cols`.
    rows: usize,
    cols: usize,
    m: usize,
    r: usize,
    factors: Vec<Vec<C64>>,
    measure: PureMeasure,
    objective: Objective,
}

struct Run {
    value: f64,
    v: Vec<C64>,
    evaluations: u64,
}

impl Problem {
    fn new(dims: &[usize], part: &Bipartition, factors: &[Vec<C64>], measure: PureMeasure, objective: Objective, m: usize) -> Self {
        let layout = Layout::new(dims, part.side_a(), part.side_b());
        let transposed = layout.d_a > layout.d_b;
        let (rows, cols) = if transposed { (layout.d_b, layout.d_a) } else { (layout.d_a, layout.d_b) };
        let factors: Vec<Vec<C64>> = factors
            .iter()
            .map(|f| {
                let mut out = vec![ZERO; f.len()];
                layout.reshape_into(f, &mut out, transposed);
                out
            })
            .collect();
        Self { rows, cols, m, r: factors.len(), factors, measure, objective }
    }

    fn len(&self) -> usize {
        self.rows * self.cols
    }

    /// `p E(psi / sqrt(p))` for a subnormalized member with `p = ||psi||^2`.
    fn score(&self, mat: &[C64], scratch: &mut [C64]) -> f64 {
        let (rows, cols) = (self.rows, self.cols);
        if rows == 2 {
            // rank <= 2: concurrence and negativity both equal 2 sqrt(det G)
            let (top, bottom) = mat.split_at(cols);
            let g00: f64 = top.iter().map(|z| z.norm_sqr()).sum();
            let g11: f64 = bottom.iter().map(|z| z.norm_sqr()).sum();
            let g01: C64 = top.iter().zip(bottom).map(|(x, y)| x * y.conj()).sum();
            return 2.0 * sqrt((g00 * g11 - g01.norm_sqr()).max(0.0));
        }
        match self.measure {
            PureMeasure::Concurrence => {
                let mut p = 0.0;
                let mut purity = 0.0;
                for i in 0..rows {
                    for j in i..rows {
                        let g: C64 = (0..cols).map(|k| mat[i * cols + k] * mat[j * cols + k].conj()).sum();
                        if i == j {
                            p += g.re;
                            purity += g.re * g.re;
                        } else {
                            purity += 2.0 * g.norm_sqr();
                        }
                    }
                }
                sqrt((2.0 * (p * p - purity)).max(0.0))
            }
            PureMeasure::Negativity => {
                let p: f64 = mat.iter().map(|z| z.norm_sqr()).sum();
                scratch.copy_from_slice(mat);
                let s: f64 = singular_values_rows(scratch, rows, cols).iter().sum();
                (s * s - p).max(0.0)
            }
        }
    }

    fn fill_members(&self, v: &[C64], members: &mut [C64]) {
        let len = self.len();
        for h in 0..self.m {
            let out = &mut members[h * len..(h + 1) * len];
            out.fill(ZERO);
            for (l, f) in self.factors.iter().enumerate() {
                let coef = v[h * self.r + l];
                out.iter_mut().zip(f).for_each(|(x, y)| *x += coef * y);
            }
        }
    }

    fn refresh(&self, v: &mut [C64], members: &mut [C64], scores: &mut [f64], scratch: &mut [C64]) {
        orthonormalize_columns(v, self.m, self.r);
        self.fill_members(v, members);
        let len = self.len();
        for (h, s) in scores.iter_mut().enumerate() {
            *s = self.score(&members[h * len..(h + 1) * len], scratch);
        }
    }

    fn run(&self, cfg: &RoofConfig, index: usize) -> Run {
        let (m, r, len) = (self.m, self.r, self.len());
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(index as u64);
        let mut v = vec![ZERO; m * r];
        loop {
            v.iter_mut().for_each(|z| *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
            if orthonormalize_columns(&mut v, m, r) {
                break;
            }
        }
        let mut members = vec![ZERO; m * len];
        let mut scratch = vec![ZERO; len];
        let mut scores = vec![0.0; m];
        self.refresh(&mut v, &mut members, &mut scores, &mut scratch);
        let mut evaluations = m as u64;

        let mut new_h = vec![ZERO; len];
        let mut new_k = vec![ZERO; len];
        let mut step = INITIAL_STEP;
        let mut stalled = 0;
        'sweeps: for _ in 0..cfg.iterations {
            for h in 0..m {
                for k in h + 1..m {
                    // [[c, -s e], [s conj(e), c]] on rows h, k
                    let theta = step * rng.sample::<f64, _>(StandardNormal);
                    let beta = rng.random::<f64>() * TAU;
                    let (s, c) = sin_cos(theta);
                    let (sb, cb) = sin_cos(beta);
                    let a = C64::new(cb, sb) * (-s);
                    let b = C64::new(cb, -sb) * s;
                    for i in 0..len {
                        let x = members[h * len + i];
                        let y = members[k * len + i];
                        new_h[i] = x * c + y * a;
                        new_k[i] = x * b + y * c;
                    }
                    let sh = self.score(&new_h, &mut scratch);
                    let sk = self.score(&new_k, &mut scratch);
                    evaluations += 2;
                    let gain = self.objective.gain(scores[h] + scores[k], sh + sk);
                    if gain > 0.0 {
                        members[h * len..(h + 1) * len].copy_from_slice(&new_h);
                        members[k * len..(k + 1) * len].copy_from_slice(&new_k);
                        for l in 0..r {
                            let x = v[h * r + l];
                            let y = v[k * r + l];
                            v[h * r + l] = x * c + y * a;
                            v[k * r + l] = x * b + y * c;
                        }
                        scores[h] = sh;
                        scores[k] = sk;
                        step = (step * 1.5).min(FRAC_PI_2);
                    } else {
                        step = (step * 0.9).max(MIN_STEP);
                    }
                    if gain < cfg.tolerance {
                        stalled += 1;
                        if stalled >= STALL_LIMIT {
                            break 'sweeps;
                        }
                    } else {
                        stalled = 0;
                    }
                }
            }
            self.refresh(&mut v, &mut members, &mut scores, &mut scratch);
            evaluations += m as u64;
        }
        self.refresh(&mut v, &mut members, &mut scores, &mut scratch);
        evaluations += m as u64;
        Run { value: scores.iter().sum(), v, evaluations }
    }
}

/// Best ensemble average of `measure` over decompositions of `rho`.
///
/// Minimizing roofs come back as upper bounds and maximizing roofs as lower
/// bounds, each with the witness decomposition; rank-one input is evaluated
/// exactly. Restart `i` draws from stream `i` of a generator seeded with
/// `cfg.seed`, and restarts are combined in index order, so the result does
/// not depend on how restarts are scheduled.
pub fn optimize_roof(rho: &MixedState, part: &Bipartition, measure: PureMeasure, objective: Objective, cfg: &RoofConfig) -> Result<MeasureValue> {
    cfg.validate()?;
    part.check_parties(rho.parties())?;
    let factors = support(rho)?;
    let r = factors.len();
    if r == 1 {
        let psi = PureState::from_unnormalized(rho.dims().to_vec(), factors[0].clone())?;
        let value = measure.evaluate(&psi, part)?;
        let witness = Decomposition::new(vec![1.0], vec![psi])?;
        return Ok(MeasureValue { value, bound: Bound::Exact, witness: Some(witness), evaluations: 1 });
    }
    let m = cfg.ensemble_size(r);
    if m < r {
        return Err(Error::Parameter(format!("ensemble size {m} is below the rank {r}")));
    }
    let problem = Problem::new(rho.dims(), part, &factors, measure, objective, m);

    #[cfg(feature = "parallel")]
    let runs: Vec<Run> = (0..cfg.restarts).into_par_iter().map(|i| problem.run(cfg, i)).collect();
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Run> = (0..cfg.restarts).map(|i| problem.run(cfg, i)).collect();

    let mut best = &runs[0];
    for run in &runs[1..] {
        if objective.gain(best.value, run.value) > 0.0 {
            best = run;
        }
    }
    let witness = build_decomposition(rho.dims(), &factors, &best.v, m)?;
    let value = witness.average(measure, part)?;
    let bound = match objective {
        Objective::Min => Bound::Upper,
        Objective::Max => Bound::Lower,
    };
    Ok(MeasureValue {
        value,
        bound,
        witness: Some(witness),
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
    })
}
