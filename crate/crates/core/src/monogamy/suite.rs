//! Worked examples: closed-form predictions next to direct computation.
//!
//! Each row pairs a computed quantity with a reference value. References
//! tagged [`Provenance::PaperFormula`] are the printed analytic expressions of
//! the example; [`Provenance::DerivedOracle`] marks values we derived
//! independently where a printed form is missing or disagrees. Rows never
//! assert; a mismatch is surfaced as [`Flag::Discrepancy`].

use super::checks::{corollary1_check, crenoa_dual_check, theorem1_check, theorem2_check, theorem3_check};
use super::{CheckReport, InequalityReport, Verdict};
use crate::measures::{cren, crenoa, negativity_pure, Bound, MeasureValue, RoofConfig, TwoQubitRoute};
use crate::states::{antisymmetric_333, ghz, w_state, w_vacuum_superposition, WClassCoefficients};
use crate::tensor::{Bipartition, MixedState, PureState};
use crate::{math, Error, Result, C64};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

const EXACT_ROW: f64 = 1e-9;
const ROOF_ROW: f64 = 1e-3;
const SLACK_ROW: f64 = 2e-3;
const COARSE_ROW: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    PaperFormula,
    DerivedOracle,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::PaperFormula => "paper-formula",
            Provenance::DerivedOracle => "derived-oracle",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flag {
    Ok,
    Discrepancy,
    Unreferenced,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::Discrepancy => "discrepancy",
            Flag::Unreferenced => "unreferenced",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub quantity: String,
    pub reference: Option<f64>,
    pub computed: f64,
    pub bound: Bound,
    pub provenance: Provenance,
    pub tolerance: f64,
}

impl ComparisonRow {
    pub fn abs_diff(&self) -> Option<f64> {
        self.reference.map(|r| (r - self.computed).abs())
    }

    pub fn flag(&self) -> Flag {
        match self.abs_diff() {
            None => Flag::Unreferenced,
            Some(d) if d <= self.tolerance => Flag::Ok,
            Some(_) => Flag::Discrepancy,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteCase {
    pub example: u8,
    pub label: String,
    pub rows: Vec<ComparisonRow>,
    pub reports: Vec<CheckReport>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteResult {
    pub cases: Vec<SuiteCase>,
}

impl SuiteResult {
    pub fn extend(&mut self, other: SuiteResult) {
        self.cases.extend(other.cases);
    }

    pub fn rows(&self) -> impl Iterator<Item = (&SuiteCase, &ComparisonRow)> {
        self.cases.iter().flat_map(|c| c.rows.iter().map(move |r| (c, r)))
    }

    /// Worst verdict over every report; `Verified` for a suite with no reports.
    pub fn verdict(&self) -> Verdict {
        self.cases.iter().flat_map(|c| c.reports.iter().map(CheckReport::verdict)).max().unwrap_or(Verdict::Verified)
    }

    pub fn violations(&self) -> usize {
        self.cases
            .iter()
            .flat_map(|c| c.reports.iter().flat_map(|r| r.inequalities.iter()))
            .filter(|r| r.verdict == Verdict::Violated)
            .count()
    }

    pub fn discrepancies(&self) -> usize {
        self.rows().filter(|(_, r)| r.flag() == Flag::Discrepancy).count()
    }
}

/// Raw (possibly unnormalized) real coefficients `a_si`, one row per party.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pub label: String,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteParams {
    pub ghz_parties: Vec<usize>,
    /// Amplitude `a` of `|0..0>`; `b = sqrt(1 - a^2)`.
    pub ghz_amplitudes: Vec<f64>,
    pub w_parties: Vec<usize>,
    /// Weight `p` of the W-class component in the vacuum superposition.
    pub vacuum_weights: Vec<f64>,
    pub coefficient_sets: Vec<CoefficientSet>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        let u = 1.0 / math::sqrt(6.0);
        Self {
            ghz_parties: vec![3, 4],
            ghz_amplitudes: vec![0.6, core::f64::consts::FRAC_1_SQRT_2],
            w_parties: vec![3, 4, 5],
            vacuum_weights: vec![0.3, 0.7, 1.0],
            coefficient_sets: vec![
                CoefficientSet { label: "uniform".into(), rows: vec![vec![u; 2]; 3] },
                CoefficientSet { label: "skewed".into(), rows: vec![vec![0.7, 0.2], vec![0.4, 0.3], vec![0.3, 0.2]] },
            ],
        }
    }
}

impl SuiteParams {
    pub fn validate(&self) -> Result<()> {
        if self.ghz_parties.iter().chain(&self.w_parties).any(|&n| !(3..=12).contains(&n)) {
            return Err(Error::Parameter("example party counts must lie in 3..=12".into()));
        }
        if self.ghz_amplitudes.iter().any(|a| !(a.is_finite() && (0.0..=1.0).contains(a))) {
            return Err(Error::Parameter("GHZ amplitudes must lie in [0, 1]".into()));
        }
        if self.vacuum_weights.iter().any(|p| !(p.is_finite() && (0.0..=1.0).contains(p))) {
            return Err(Error::Parameter("vacuum weights must lie in [0, 1]".into()));
        }
        for set in &self.coefficient_sets {
            coefficients(set)?;
        }
        Ok(())
    }
}

fn coefficients(set: &CoefficientSet) -> Result<WClassCoefficients> {
    if set.rows.len() < 3 {
        return Err(Error::Parameter(format!("coefficient set {:?} needs at least 3 parties", set.label)));
    }
    let norm = math::sqrt(set.rows.iter().flatten().map(|x| x * x).sum());
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Parameter(format!("coefficient set {:?} has no finite nonzero norm", set.label)));
    }
    let rows = set.rows.iter().map(|r| r.iter().map(|&x| C64::new(x / norm, 0.0)).collect()).collect();
    WClassCoefficients::renormalized(rows)
}

/// Runs one example (1 to 4) over its parameter grid.
pub fn closed_form_suite(example: u8, params: &SuiteParams, cfg: &RoofConfig) -> Result<SuiteResult> {
    params.validate()?;
    cfg.validate()?;
    let mut cases = Vec::new();
    match example {
        1 => {
            for &n in &params.ghz_parties {
                for &a in &params.ghz_amplitudes {
                    cases.push(ghz_case(n, a, cfg)?);
                }
            }
        }
        2 => {
            for &n in &params.w_parties {
                cases.push(w_case(n, cfg)?);
            }
        }
        3 => cases.push(antisymmetric_case(cfg)?),
        4 => {
            for set in &params.coefficient_sets {
                let c = coefficients(set)?;
                for &p in &params.vacuum_weights {
                    cases.push(vacuum_case(&set.label, &c, p, cfg)?);
                }
            }
        }
        _ => return Err(Error::Parameter(format!("unknown example {example}; expected 1 to 4"))),
    }
    Ok(SuiteResult { cases })
}

struct Rows(Vec<ComparisonRow>);

impl Rows {
    fn push(&mut self, quantity: &str, reference: Option<f64>, computed: f64, bound: Bound, provenance: Provenance, tolerance: f64) {
        self.0.push(ComparisonRow { quantity: quantity.to_string(), reference, computed, bound, provenance, tolerance });
    }

    fn paper(&mut self, quantity: &str, reference: f64, computed: f64, bound: Bound, tolerance: f64) {
        self.push(quantity, Some(reference), computed, bound, Provenance::PaperFormula, tolerance);
    }

    fn derived(&mut self, quantity: &str, reference: f64, computed: f64, bound: Bound, tolerance: f64) {
        self.push(quantity, Some(reference), computed, bound, Provenance::DerivedOracle, tolerance);
    }
}

fn cut_squared(psi: &PureState, side_a: &[usize]) -> Result<f64> {
    Ok(negativity_pure(psi, &Bipartition::split(side_a, psi.parties())?)?.squared())
}

/// Sum of squared contributions of a slice of terms with its bound.
fn partial(r: &InequalityReport, lhs: bool, range: core::ops::Range<usize>) -> (f64, Bound) {
    let side = if lhs { &r.lhs } else { &r.rhs };
    side.terms[range].iter().fold((0.0, Bound::Exact), |(v, b), t| (v + t.contribution(), b.plus(t.contribution_bound())))
}

/// Pieces of a pair of theorem-2/theorem-3 reports on an n-party state.
struct TheoremParts {
    pair: (f64, Bound),
    a_side: (f64, Bound),
    b_side: (f64, Bound),
    block: f64,
    t2: InequalityReport,
    t3: InequalityReport,
}

fn theorem_parts(psi: &PureState, cfg: &RoofConfig) -> Result<(TheoremParts, CheckReport, CheckReport)> {
    let n = psi.parties();
    let t2 = theorem2_check(psi, cfg)?;
    let t3 = theorem3_check(psi, cfg)?;
    let r2 = t2.inequalities[0].clone();
    let r3 = t3.inequalities[0].clone();
    let (pair_weighted, pair_bound) = partial(&r2, true, 0..1);
    let parts = TheoremParts {
        pair: (pair_weighted / 2.0, pair_bound),
        a_side: partial(&r2, true, 1..n - 1),
        b_side: partial(&r2, true, n - 1..2 * n - 3),
        block: r2.rhs.value(),
        t2: r2,
        t3: r3,
    };
    Ok((parts, t2, t3))
}

fn single_cut_sum(report: &CheckReport) -> (f64, Bound) {
    let r = &report.inequalities[0];
    (r.rhs.value(), r.rhs.bound())
}

fn ghz_case(n: usize, a: f64, cfg: &RoofConfig) -> Result<SuiteCase> {
    let b = math::sqrt((1.0 - a * a).max(0.0));
    let psi = ghz(n, C64::new(a, 0.0), C64::new(b, 0.0))?;
    let q = 4.0 * a * a * b * b;
    let nf = (n - 1) as f64;
    let mut rows = Rows(Vec::new());
    rows.paper("N^2(0|rest)", q, cut_squared(&psi, &[0])?, Bound::Exact, EXACT_ROW);

    let cor = corollary1_check(&MixedState::from_pure(&psi), cfg)?;
    let (singles, singles_bound) = single_cut_sum(&cor);
    rows.paper("sum_i N_a^2(i|rest)", nf * q, singles, singles_bound, EXACT_ROW);

    let (parts, t2, t3) = theorem_parts(&psi, cfg)?;
    rows.paper("N_a^2(rho_01) printed", 4.0 * a * b, parts.pair.0, parts.pair.1, ROOF_ROW);
    rows.derived("N_a^2(rho_01)", q, parts.pair.0, parts.pair.1, ROOF_ROW);
    rows.paper("N^2(0,1|rest)", q, parts.block, Bound::Exact, EXACT_ROW);
    rows.paper("theorem2 lhs", 2.0 * nf * q, parts.t2.lhs.value(), parts.t2.lhs.bound(), ROOF_ROW);
    rows.paper("theorem2 slack", 2.0 * nf * q - q, parts.t2.slack, parts.t2.slack_bound, ROOF_ROW);
    rows.paper("theorem3 rhs", 0.0, parts.t3.rhs.value(), parts.t3.rhs.bound(), ROOF_ROW);

    Ok(SuiteCase { example: 1, label: format!("n={n},a={a}"), rows: rows.0, reports: vec![cor, t2, t3] })
}

fn w_case(n: usize, cfg: &RoofConfig) -> Result<SuiteCase> {
    let psi = w_state(n)?;
    let nf = n as f64;
    let n2 = nf * nf;
    let mut rows = Rows(Vec::new());
    rows.paper("N^2(0|rest)", 4.0 * (nf - 1.0) / n2, cut_squared(&psi, &[0])?, Bound::Exact, EXACT_ROW);

    let cor = corollary1_check(&MixedState::from_pure(&psi), cfg)?;
    let (singles, singles_bound) = single_cut_sum(&cor);
    rows.paper("sum_i N_a^2(i|rest)", 4.0 * (nf - 1.0) * (nf - 1.0) / n2, singles, singles_bound, EXACT_ROW);

    let (parts, t2, t3) = theorem_parts(&psi, cfg)?;
    rows.paper("N_a^2(rho_01)", 4.0 / n2, parts.pair.0, parts.pair.1, ROOF_ROW);
    let mut sampled = cfg.clone();
    sampled.two_qubit = TwoQubitRoute::Optimizer;
    let pair = crenoa(&psi.reduced(&[0, 1])?, &Bipartition::new(vec![0], vec![1])?, &sampled)?;
    rows.paper("N_a(rho_01) optimizer", 2.0 / nf, pair.value, pair.bound, ROOF_ROW);
    rows.paper("N^2(0,1|rest)", 8.0 * (nf - 2.0) / n2, parts.block, Bound::Exact, EXACT_ROW);
    rows.paper("theorem2 lhs", 8.0 * (nf - 1.0) / n2, parts.t2.lhs.value(), parts.t2.lhs.bound(), ROOF_ROW);
    rows.paper("theorem2 slack", 8.0 / n2, parts.t2.slack, parts.t2.slack_bound, SLACK_ROW);
    rows.paper("theorem3 rhs", 0.0, parts.t3.rhs.value(), parts.t3.rhs.bound(), ROOF_ROW);

    let dual = crenoa_dual_check(&psi, cfg)?;
    Ok(SuiteCase { example: 2, label: format!("n={n}"), rows: rows.0, reports: vec![cor, dual, t2, t3] })
}

fn antisymmetric_case(cfg: &RoofConfig) -> Result<SuiteCase> {
    let psi = antisymmetric_333();
    let mut rows = Rows(Vec::new());
    rows.paper("N^2(0|1,2)", 4.0, cut_squared(&psi, &[0])?, Bound::Exact, EXACT_ROW);

    let t1 = theorem1_check(&MixedState::from_pure(&psi), cfg)?;
    let r1 = &t1.inequalities[0];
    let cuts = [&r1.lhs.terms[0], &r1.rhs.terms[0], &r1.rhs.terms[1]];
    for (k, t) in cuts.iter().enumerate() {
        let rest: Vec<String> = (0..3).filter(|&j| j != k).map(|j| j.to_string()).collect();
        rows.paper(&format!("N_a^2({k}|{})", rest.join(",")), 4.0, t.contribution(), t.bound, EXACT_ROW);
    }

    let (parts, t2, t3) = theorem_parts(&psi, cfg)?;
    rows.paper("N_a^2(rho_01)", 1.0, parts.pair.0, parts.pair.1, COARSE_ROW);
    rows.paper("N_a^2(rho_02)", 1.0, parts.a_side.0, parts.a_side.1, COARSE_ROW);
    rows.paper("N_a^2(rho_12)", 1.0, parts.b_side.0, parts.b_side.1, COARSE_ROW);
    rows.paper("N^2(0,1|2)", 4.0, parts.block, Bound::Exact, EXACT_ROW);
    rows.paper("theorem2 lhs", 4.0, parts.t2.lhs.value(), parts.t2.lhs.bound(), COARSE_ROW);
    rows.paper("theorem3 rhs", 0.0, parts.t3.rhs.value(), parts.t3.rhs.bound(), COARSE_ROW);

    Ok(SuiteCase { example: 3, label: "antisymmetric".into(), rows: rows.0, reports: vec![t1, t2, t3] })
}

fn vacuum_case(set: &str, c: &WClassCoefficients, p: f64, cfg: &RoofConfig) -> Result<SuiteCase> {
    let psi = w_vacuum_superposition(p, c)?;
    let (a, b) = (c.weight(0), c.weight(1));
    let rest = 1.0 - a - b;
    let omega = 1.0 - a;
    let p2 = p * p;
    let mut rows = Rows(Vec::new());

    rows.paper("N^2(0|rest)", 4.0 * p2 * (1.0 - omega) * omega, cut_squared(&psi, &[0])?, Bound::Exact, EXACT_ROW);
    rows.paper("N_a^2(1|rest)", 4.0 * p2 * (1.0 - a) * a, cut_squared(&psi, &[1])?, Bound::Exact, EXACT_ROW);
    rows.derived("N_a^2(1|rest)", 4.0 * p2 * (1.0 - b) * b, cut_squared(&psi, &[1])?, Bound::Exact, EXACT_ROW);

    let pair01 = psi.reduced(&[0, 1])?;
    let pair_cut = Bipartition::new(vec![0], vec![1])?;
    let min_roof: MeasureValue = cren(&pair01, &pair_cut, cfg)?;
    rows.paper("N_c^2(rho_01)", 4.0 * p2 * (1.0 - omega) * b, min_roof.squared(), min_roof.bound, COARSE_ROW);

    let block = cut_squared(&psi, &[0, 1])?;
    rows.paper("N^2(0,1|rest) linear in p", 4.0 * p * rest * (1.0 - rest), block, Bound::Exact, EXACT_ROW);
    rows.paper("N^2(0,1|rest) quadratic in p", 4.0 * p2 * (1.0 - (a + b)) * (a + b), block, Bound::Exact, EXACT_ROW);

    let (parts, t2, t3) = theorem_parts(&psi, cfg)?;
    rows.derived("N_a^2(rho_01)", 4.0 * p2 * a * b, parts.pair.0, parts.pair.1, COARSE_ROW);
    let (pa, pb) = (parts.pair.0 + parts.a_side.0, parts.pair.1.plus(parts.a_side.1));
    rows.paper("N_a^2(rho_01) + sum_c N_a^2(rho_0c)", 4.0 * p2 * (1.0 - a) * a, pa, pb, COARSE_ROW);
    rows.paper("sum_c N_a^2(rho_0c)", 4.0 * p2 * a * rest, parts.a_side.0, parts.a_side.1, COARSE_ROW);
    rows.paper("sum_c N_a^2(rho_1c)", 4.0 * p2 * (1.0 - b) * b, parts.b_side.0, parts.b_side.1, COARSE_ROW);
    rows.derived("sum_c N_a^2(rho_1c)", 4.0 * p2 * b * rest, parts.b_side.0, parts.b_side.1, COARSE_ROW);

    let lhs = (parts.t2.lhs.value(), parts.t2.lhs.bound());
    let printed_lhs = 4.0 * p2 * ((1.0 - a) * a + (1.0 - b) * b + a * b);
    rows.paper("theorem2 lhs", printed_lhs, lhs.0, lhs.1, COARSE_ROW);
    rows.derived("theorem2 lhs", 4.0 * p2 * (2.0 * a * b + a * rest + b * rest), lhs.0, lhs.1, COARSE_ROW);
    rows.paper("theorem2 slack", 12.0 * p2 * a * b, parts.t2.slack, parts.t2.slack_bound, SLACK_ROW);
    rows.derived("theorem2 slack", 8.0 * p2 * a * b, parts.t2.slack, parts.t2.slack_bound, SLACK_ROW);
    rows.paper("theorem3 slack", 4.0 * p2 * b * (2.0 - 2.0 * b - a), parts.t3.slack, parts.t3.slack_bound, SLACK_ROW);
    rows.derived("theorem3 slack", 8.0 * p2 * rest * a.min(b), parts.t3.slack, parts.t3.slack_bound, SLACK_ROW);

    Ok(SuiteCase { example: 4, label: format!("{set},p={p}"), rows: rows.0, reports: vec![t2, t3] })
}
