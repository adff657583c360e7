//! Concurrence, negativity and their convex roofs.
//!
//! Every function returns unsquared values; callers square at the point of
//! use. Roof values carry a [`Bound`] telling which side of the true roof a
//! sampled decomposition lands on: a minimizing roof can only be bounded from
//! above by any particular decomposition, a maximizing one from below.

mod roof;
mod two_qubit;


pub use roof::{hjw_decomposition, optimize_roof};
pub use two_qubit::{coa_closed_form, wootters_concurrence};

use crate::math::sqrt;
use crate::tensor::{partial_transpose, schmidt_coefficients, singular_values, trace_norm, Bipartition, ComplexMatrix, MixedState, PureState};
use crate::{tol, Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// How a reported number relates to the quantity it estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Exact,
    /// True value is at least the reported one.
    Lower,
    /// True value is at most the reported one.
    Upper,
    /// Point estimate with no certified direction (mixed sums and differences).
    Estimate,
}

impl Bound {
    pub fn as_str(self) -> &'static str {
        match self {
            Bound::Exact => "exact",
            Bound::Lower => "lower",
            Bound::Upper => "upper",
            Bound::Estimate => "estimate",
        }
    }

    /// Direction after multiplying by a negative number.
    pub fn negated(self) -> Bound {
        match self {
            Bound::Lower => Bound::Upper,
            Bound::Upper => Bound::Lower,
            b => b,
        }
    }

    /// Direction of a sum of two bounded terms.
    pub fn plus(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Exact, b) | (b, Bound::Exact) => b,
            (a, b) if a == b => a,
            _ => Bound::Estimate,
        }
    }

    pub fn is_exact(self) -> bool {
        self == Bound::Exact
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Pure-state ensemble `{p_i, |psi_i>}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    weights: Vec<f64>,
    members: Vec<PureState>,
}

impl Decomposition {
    /// Weights must be positive and sum to one within `1e-10`; members must
    /// share their dims.
    pub fn new(weights: Vec<f64>, members: Vec<PureState>) -> Result<Self> {
        if weights.is_empty() || weights.len() != members.len() {
            return Err(Error::Shape(format!("{} weights for {} members", weights.len(), members.len())));
        }
        if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::Parameter("decomposition weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::Trace { trace: total });
        }
        if members.iter().any(|m| m.dims() != members[0].dims()) {
            return Err(Error::Shape("decomposition members have different dims".into()));
        }
        Ok(Self { weights, members })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn members(&self) -> &[PureState] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `sum_i p_i |psi_i><psi_i|`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.members[0].dimension();
        let mut out = ComplexMatrix::zeros(d, d);
        for (w, psi) in self.weights.iter().zip(&self.members) {
            let a = psi.amplitudes();
            for r in 0..d {
                let ar = a[r] * *w;
                for c in 0..d {
                    out[(r, c)] += ar * a[c].conj();
                }
            }
        }
        out
    }

    /// Largest entrywise deviation of the reconstruction from `rho`.
    pub fn residual(&self, rho: &MixedState) -> f64 {
        self.reconstruct().max_abs_diff(rho.matrix())
    }

    /// `sum_i p_i E(psi_i)`
    pub fn average(&self, measure: PureMeasure, part: &Bipartition) -> Result<f64> {
        let mut total = 0.0;
        for (w, psi) in self.weights.iter().zip(&self.members) {
            total += w * measure.evaluate(psi, part)?;
        }
        Ok(total)
    }
}

/// A computed entanglement value with its bound direction.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub bound: Bound,
    /// Decomposition achieving `value` for sampled roofs.
    pub witness: Option<Decomposition>,
    /// Pure-state measure evaluations spent.
    pub evaluations: u64,
}

impl MeasureValue {
    pub fn exact(value: f64) -> Self {
        Self { value, bound: Bound::Exact, witness: None, evaluations: 0 }
    }

    pub fn squared(&self) -> f64 {
        self.value * self.value
    }
}

/// Pure-state functional a roof is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PureMeasure {
    Concurrence,
    Negativity,
}

impl PureMeasure {
    pub fn evaluate(self, psi: &PureState, part: &Bipartition) -> Result<f64> {
        match self {
            PureMeasure::Concurrence => concurrence_value(psi, part),
            PureMeasure::Negativity => negativity_value(psi, part),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Min,
    Max,
}

/// How roofs of two-qubit states are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TwoQubitRoute {
    /// Spin-flip closed forms, exact.
    #[default]
    ClosedForm,
    /// Run the optimizer and report the closed form as exact only when the two
    /// agree within `1e-6`; otherwise keep the optimizer's bound.
    CrossCheck,
    /// Optimizer only.
    Optimizer,
}

/// Settings of the convex-roof search.
#[derive(Clone, Debug, PartialEq)]
pub struct RoofConfig {
    pub restarts: usize,
    /// Sweeps per restart; a sweep proposes one rotation per pair of ensemble members.
    pub iterations: usize,
    /// Ensemble size `m`; `None` means `min(2r, r^2)` for rank `r`.
    pub ensemble: Option<usize>,
    /// A restart stops after 50 consecutive proposals improving by less than this.
    pub tolerance: f64,
    pub seed: u64,
    pub two_qubit: TwoQubitRoute,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self { restarts: 64, iterations: 500, ensemble: None, tolerance: 1e-7, seed: 0, two_qubit: TwoQubitRoute::ClosedForm }
    }
}

impl RoofConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.iterations == 0 {
            return Err(Error::Parameter("restarts and iterations must be positive".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(Error::Parameter(format!("invalid tolerance {}", self.tolerance)));
        }
        if self.ensemble == Some(0) {
            return Err(Error::Parameter("ensemble size must be positive".into()));
        }
        Ok(())
    }

    /// Ensemble size used for a state of rank `r`.
    pub fn ensemble_size(&self, rank: usize) -> usize {
        self.ensemble.unwrap_or((2 * rank).min(rank * rank))
    }
}

fn concurrence_value(psi: &PureState, part: &Bipartition) -> Result<f64> {
    let purity: f64 = schmidt_coefficients(psi, part)?.iter().map(|l| l * l).sum();
    Ok(sqrt((2.0 * (1.0 - purity)).max(0.0)))
}

fn negativity_value(psi: &PureState, part: &Bipartition) -> Result<f64> {
    let m = psi.amplitude_matrix(part)?;
    let s: f64 = singular_values(&m).iter().sum();
    Ok((s * s - 1.0).max(0.0))
}

/// `sqrt(2 (1 - Tr rho_A^2))`
pub fn concurrence_pure(psi: &PureState, part: &Bipartition) -> Result<MeasureValue> {
    Ok(MeasureValue::exact(concurrence_value(psi, part)?))
}

/// `(sum_i sqrt(lambda_i))^2 - 1` over the Schmidt coefficients.
pub fn negativity_pure(psi: &PureState, part: &Bipartition) -> Result<MeasureValue> {
    Ok(MeasureValue::exact(negativity_value(psi, part)?))
}

/// `||rho^{T_A}||_1 - 1`, clipped at zero.
pub fn negativity_mixed(rho: &MixedState, part: &Bipartition) -> Result<MeasureValue> {
    let pt = partial_transpose(rho, part)?;
    Ok(MeasureValue::exact((trace_norm(&pt)? - 1.0).max(0.0)))
}

/// `1 - Tr rho^2`
pub fn linear_entropy(rho: &MixedState) -> f64 {
    (1.0 - rho.purity()).max(0.0)
}

fn is_two_qubit(rho: &MixedState) -> bool {
    rho.dims() == [2, 2]
}

fn closed_form(rho: &MixedState, objective: Objective) -> Result<MeasureValue> {
    match objective {
        Objective::Min => wootters_concurrence(rho),
        Objective::Max => coa_closed_form(rho),
    }
}

fn roof(rho: &MixedState, part: &Bipartition, measure: PureMeasure, objective: Objective, cfg: &RoofConfig) -> Result<MeasureValue> {
    cfg.validate()?;
    // concurrence and negativity coincide on two-qubit pure states, so both
    // roofs share the spin-flip closed forms
    if !is_two_qubit(rho) || rho.rank() == 1 {
        return optimize_roof(rho, part, measure, objective, cfg);
    }
    match cfg.two_qubit {
        TwoQubitRoute::ClosedForm => closed_form(rho, objective),
        TwoQubitRoute::Optimizer => optimize_roof(rho, part, measure, objective, cfg),
        TwoQubitRoute::CrossCheck => {
            let sampled = optimize_roof(rho, part, measure, objective, cfg)?;
            let exact = closed_form(rho, objective)?;
            if (sampled.value - exact.value).abs() <= 1e-6 {
                Ok(MeasureValue { value: exact.value, bound: Bound::Exact, witness: sampled.witness, evaluations: sampled.evaluations })
            } else {
                Ok(sampled)
            }
        }
    }
}

/// Convex-roof extended negativity (minimizing roof of pure negativity).
pub fn cren(rho: &MixedState, part: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    roof(rho, part, PureMeasure::Negativity, Objective::Min, cfg)
}

/// Maximizing roof of pure negativity.
pub fn crenoa(rho: &MixedState, part: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    roof(rho, part, PureMeasure::Negativity, Objective::Max, cfg)
}

/// Minimizing roof of pure concurrence.
pub fn mixed_concurrence(rho: &MixedState, part: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    roof(rho, part, PureMeasure::Concurrence, Objective::Min, cfg)
}

/// Concurrence of assistance (maximizing roof of pure concurrence).
pub fn coa(rho: &MixedState, part: &Bipartition, cfg: &RoofConfig) -> Result<MeasureValue> {
    roof(rho, part, PureMeasure::Concurrence, Objective::Max, cfg)
}

/// `C^2(A|BC) - C^2(rho_AB) - C^2(rho_AC)` for a pure state on `2 x 2 x m`.
/// With `m > 2` the `AC` roof is sampled and the result is a lower bound.
pub fn tangle_three(psi: &PureState, cfg: &RoofConfig) -> Result<MeasureValue> {
    if psi.parties() != 3 || psi.dims()[0] != 2 || psi.dims()[1] != 2 {
        return Err(Error::Shape(format!("three-tangle needs dims [2, 2, m], got {:?}", psi.dims())));
    }
    let whole = concurrence_pure(psi, &Bipartition::new(vec![0], vec![1, 2])?)?;
    let pair = Bipartition::new(vec![0], vec![1])?;
    let ab = mixed_concurrence(&psi.reduced(&[0, 1])?, &pair, cfg)?;
    let ac = mixed_concurrence(&psi.reduced(&[0, 2])?, &pair, cfg)?;
    Ok(MeasureValue {
        value: whole.squared() - ab.squared() - ac.squared(),
        bound: ab.bound.negated().plus(ac.bound.negated()),
        witness: None,
        evaluations: ab.evaluations + ac.evaluations,
    })
}
