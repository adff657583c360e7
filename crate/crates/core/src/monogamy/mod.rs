//! Monogamy and polygamy inequalities evaluated on concrete states.
//!
//! Each inequality is split into a smaller and a larger side. A verdict is
//! only `Verified` when the bound directions make the computed slack a
//! certificate: the smaller side must be exact or an upper bound, the larger
//! side exact or a lower bound. `Violated` needs the reverse certification.
//! Point estimates that satisfy the inequality without a certificate are
//! `Consistent`; anything else is `Inconclusive`.

mod checks;
mod suite;

#[cfg(test)]
mod tests;

pub use checks::{
    ckw_check, coa_dual_check, corollary1_check, cren_monogamy_check, crenoa_dual_check, decomposition_identity_check,
    entropy_subadditivity_check, theorem1_check, theorem2_check, theorem3_check,
};
pub use suite::{closed_form_suite, CoefficientSet, ComparisonRow, Flag, Provenance, SuiteCase, SuiteParams, SuiteResult};

use crate::measures::{Bound, MeasureValue};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Tolerance when every term is exact.
pub const EXACT_TOLERANCE: f64 = 1e-6;
/// Tolerance once a sampled roof participates.
pub const SAMPLED_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Verified,
    Consistent,
    Inconclusive,
    Violated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Consistent => "consistent",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Violated => "violated",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `lhs <= rhs`, `lhs >= rhs` or `lhs = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    AtMost,
    AtLeast,
    Equal,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Equal => "=",
        }
    }
}

/// One summand: `weight * value` or `weight * value^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub label: String,
    /// The measure as computed (unsquared).
    pub value: f64,
    pub squared: bool,
    pub weight: f64,
    pub bound: Bound,
    pub evaluations: u64,
}

impl Term {
    pub fn squared(label: impl Into<String>, m: &MeasureValue, weight: f64) -> Self {
        Self { label: label.into(), value: m.value, squared: true, weight, bound: m.bound, evaluations: m.evaluations }
    }

    pub fn plain(label: impl Into<String>, value: f64, bound: Bound) -> Self {
        Self { label: label.into(), value, squared: false, weight: 1.0, bound, evaluations: 0 }
    }

    pub fn contribution(&self) -> f64 {
        let v = if self.squared { self.value * self.value } else { self.value };
        self.weight * v
    }

    /// Bound direction of [`Term::contribution`].
    pub fn contribution_bound(&self) -> Bound {
        if self.weight < 0.0 {
            self.bound.negated()
        } else {
            self.bound
        }
    }
}

/// A sum of terms, optionally wrapped in an absolute value.
#[derive(Clone, Debug, PartialEq)]
pub struct Side {
    pub terms: Vec<Term>,
    pub absolute: bool,
}

impl Side {
    pub fn sum(terms: Vec<Term>) -> Self {
        Self { terms, absolute: false }
    }

    pub fn abs(terms: Vec<Term>) -> Self {
        Self { terms, absolute: true }
    }

    fn raw(&self) -> f64 {
        self.terms.iter().map(Term::contribution).sum()
    }

    pub fn value(&self) -> f64 {
        if self.absolute {
            self.raw().abs()
        } else {
            self.raw()
        }
    }

    pub fn bound(&self) -> Bound {
        let inner = self.terms.iter().map(Term::contribution_bound).fold(Bound::Exact, Bound::plus);
        if !self.absolute {
            return inner;
        }
        // |x| stays a lower bound when the true value lies on the same side of
        // zero as the estimate and farther out
        let raw = self.raw();
        match inner {
            Bound::Exact => Bound::Exact,
            Bound::Lower if raw >= 0.0 => Bound::Lower,
            Bound::Upper if raw <= 0.0 => Bound::Lower,
            _ => Bound::Estimate,
        }
    }

    fn all_exact(&self) -> bool {
        self.terms.iter().all(|t| t.bound.is_exact())
    }
}

/// One evaluated relation with its certified verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub relation: Relation,
    pub lhs: Side,
    pub rhs: Side,
    /// Larger side minus smaller side; `lhs - rhs` for equalities.
    pub slack: f64,
    pub slack_bound: Bound,
    pub verdict: Verdict,
    pub tolerance: f64,
}

impl InequalityReport {
    /// Uses `1e-6` when all terms are exact and `1e-3` otherwise.
    pub fn new(name: impl Into<String>, relation: Relation, lhs: Side, rhs: Side) -> Self {
        let tolerance = if lhs.all_exact() && rhs.all_exact() { EXACT_TOLERANCE } else { SAMPLED_TOLERANCE };
        Self::with_tolerance(name, relation, lhs, rhs, tolerance)
    }

    pub fn with_tolerance(name: impl Into<String>, relation: Relation, lhs: Side, rhs: Side, tolerance: f64) -> Self {
        let all_exact = lhs.all_exact() && rhs.all_exact();
        let (small, large) = match relation {
            Relation::AtMost | Relation::Equal => (&lhs, &rhs),
            Relation::AtLeast => (&rhs, &lhs),
        };
        let (small_bound, large_bound) = (small.bound(), large.bound());
        let (slack, slack_bound) = match relation {
            Relation::Equal => (lhs.value() - rhs.value(), lhs.bound().plus(rhs.bound().negated())),
            _ => (large.value() - small.value(), large_bound.plus(small_bound.negated())),
        };
        let verdict = match relation {
            Relation::Equal => match (slack.abs() <= tolerance, all_exact) {
                (true, true) => Verdict::Verified,
                (true, false) => Verdict::Consistent,
                (false, true) => Verdict::Violated,
                (false, false) => Verdict::Inconclusive,
            },
            _ => {
                let holds = slack >= -tolerance;
                let certified = matches!(small_bound, Bound::Exact | Bound::Upper) && matches!(large_bound, Bound::Exact | Bound::Lower);
                let refuted = matches!(small_bound, Bound::Exact | Bound::Lower) && matches!(large_bound, Bound::Exact | Bound::Upper);
                match (holds, certified, refuted) {
                    (true, true, _) => Verdict::Verified,
                    (true, false, _) => Verdict::Consistent,
                    (false, _, true) => Verdict::Violated,
                    (false, _, false) => Verdict::Inconclusive,
                }
            }
        };
        Self { name: name.into(), relation, lhs, rhs, slack, slack_bound, verdict, tolerance }
    }
}

/// Everything one checker evaluated; most checkers produce a single relation.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub inequalities: Vec<InequalityReport>,
}

impl CheckReport {
    pub fn single(report: InequalityReport) -> Self {
        Self { name: report.name.clone(), inequalities: alloc::vec![report] }
    }

    /// Worst verdict across the relations.
    pub fn verdict(&self) -> Verdict {
        self.inequalities.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Inconclusive)
    }
}
