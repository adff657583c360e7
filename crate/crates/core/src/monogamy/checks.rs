//! The individual inequality checkers.
//!
//! Pairwise roofs of qubit pairs use the two-qubit route configured in the
//! [`RoofConfig`] (closed forms by default); larger pairs go through the
//! optimizer. In the two-qubit-block relations `A` and `B` are parties 0 and 1;
//! permute the state first to test other pairs.

use super::{CheckReport, InequalityReport, Relation, Side, Term};
use crate::measures::{
    coa, concurrence_pure, cren, crenoa, linear_entropy, mixed_concurrence, negativity_pure, Bound, MeasureValue, RoofConfig,
};
use crate::tensor::{partial_trace, Bipartition, MixedState, PureState};
use crate::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

type Roof = fn(&MixedState, &Bipartition, &RoofConfig) -> Result<MeasureValue>;
type PureFn = fn(&PureState, &Bipartition) -> Result<MeasureValue>;

fn list(parties: &[usize]) -> String {
    parties.iter().map(|p| format!("{p}")).collect::<Vec<_>>().join(",")
}

fn cut_label(part: &Bipartition) -> String {
    format!("{}|{}", list(part.side_a()), list(part.side_b()))
}

fn require_qubits(dims: &[usize], min_parties: usize, check: &str) -> Result<()> {
    if dims.len() < min_parties {
        return Err(Error::Shape(format!("{check} needs at least {min_parties} parties, got {}", dims.len())));
    }
    if dims.iter().any(|&d| d != 2) {
        return Err(Error::Shape(format!("{check} needs qubits, got dims {dims:?}")));
    }
    Ok(())
}

fn require_parties(dims: &[usize], min_parties: usize, check: &str) -> Result<()> {
    if dims.len() < min_parties {
        return Err(Error::Shape(format!("{check} needs at least {min_parties} parties, got {}", dims.len())));
    }
    Ok(())
}

/// Roof of the two-party marginal on parties `i` and `j`.
fn pair_roof(psi: &PureState, i: usize, j: usize, roof: Roof, cfg: &RoofConfig) -> Result<MeasureValue> {
    let rho = psi.reduced(&[i, j])?;
    roof(&rho, &Bipartition::new(vec![0], vec![1])?, cfg)
}

fn pair_term(symbol: &str, psi: &PureState, i: usize, j: usize, roof: Roof, cfg: &RoofConfig, weight: f64) -> Result<Term> {
    let m = pair_roof(psi, i, j, roof, cfg)?;
    Ok(Term::squared(format!("{symbol}^2(rho_{i}{j})"), &m, weight))
}

fn one_vs_rest(psi: &PureState, measure: fn(&PureState, &Bipartition) -> Result<MeasureValue>, symbol: &str) -> Result<Term> {
    let part = Bipartition::split(&[0], psi.parties())?;
    let m = measure(psi, &part)?;
    Ok(Term::squared(format!("{symbol}^2({})", cut_label(&part)), &m, 1.0))
}

fn first_party_pairs(psi: &PureState, symbol: &str, roof: Roof, cfg: &RoofConfig) -> Result<Vec<Term>> {
    (1..psi.parties()).map(|j| pair_term(symbol, psi, 0, j, roof, cfg, 1.0)).collect()
}

/// `C^2(0|rest) >= sum_j C^2(rho_0j)` for an n-qubit pure state.
pub fn ckw_check(psi: &PureState, cfg: &RoofConfig) -> Result<CheckReport> {
    require_qubits(psi.dims(), 3, "ckw")?;
    let lhs = one_vs_rest(psi, concurrence_pure, "C")?;
    let rhs = first_party_pairs(psi, "C", mixed_concurrence, cfg)?;
    Ok(CheckReport::single(InequalityReport::new("ckw", Relation::AtLeast, Side::sum(vec![lhs]), Side::sum(rhs))))
}

/// `C^2(0|rest) <= sum_j C_a^2(rho_0j)` for an n-qubit pure state.
pub fn coa_dual_check(psi: &PureState, cfg: &RoofConfig) -> Result<CheckReport> {
    require_qubits(psi.dims(), 3, "coa-dual")?;
    let lhs = one_vs_rest(psi, concurrence_pure, "C")?;
    let rhs = first_party_pairs(psi, "C_a", coa, cfg)?;
    Ok(CheckReport::single(InequalityReport::new("coa-dual", Relation::AtMost, Side::sum(vec![lhs]), Side::sum(rhs))))
}

/// `N^2(0|rest) >= sum_j N_c^2(rho_0j)` for an n-qubit pure state.
pub fn cren_monogamy_check(psi: &PureState, cfg: &RoofConfig) -> Result<CheckReport> {
    require_qubits(psi.dims(), 3, "cren")?;
    let lhs = one_vs_rest(psi, negativity_pure, "N")?;
    let rhs = first_party_pairs(psi, "N_c", cren, cfg)?;
    Ok(CheckReport::single(InequalityReport::new("cren", Relation::AtLeast, Side::sum(vec![lhs]), Side::sum(rhs))))
}

/// `N^2(0|rest) <= sum_j N_a^2(rho_0j)` for an n-qubit pure state.
pub fn crenoa_dual_check(psi: &PureState, cfg: &RoofConfig) -> Result<CheckReport> {
    require_qubits(psi.dims(), 3, "crenoa-dual")?;
    let lhs = one_vs_rest(psi, negativity_pure, "N")?;
    let rhs = first_party_pairs(psi, "N_a", crenoa, cfg)?;
    Ok(CheckReport::single(InequalityReport::new("crenoa-dual", Relation::AtMost, Side::sum(vec![lhs]), Side::sum(rhs))))
}

fn single_cut_assistance(rho: &MixedState, k: usize, cfg: &RoofConfig) -> Result<Term> {
    let part = Bipartition::split(&[k], rho.parties())?;
    let m = crenoa(rho, &part, cfg)?;
    Ok(Term::squared(format!("N_a^2({})", cut_label(&part)), &m, 1.0))
}

/// `N_a^2(0|1,2) <= N_a^2(1|0,2) + N_a^2(2|0,1)` for a tripartite state.
///
/// Mixed input makes every term a sampled maximizing roof, which can at best
/// earn a `Consistent` verdict.
pub fn theorem1_check(rho: &MixedState, cfg: &RoofConfig) -> Result<CheckReport> {
    if rho.parties() != 3 {
        return Err(Error::Shape(format!("theorem1 needs three parties, got dims {:?}", rho.dims())));
    }
    let lhs = single_cut_assistance(rho, 0, cfg)?;
    let rhs = vec![single_cut_assistance(rho, 1, cfg)?, single_cut_assistance(rho, 2, cfg)?];
    Ok(CheckReport::single(InequalityReport::new("theorem1", Relation::AtMost, Side::sum(vec![lhs]), Side::sum(rhs))))
}

/// Two-stage chain for an n-qubit state:
/// `N_a^2(0|rest) <= sum_{i>0} N_a^2(i|rest) <= sum_{i>0} sum_{j!=i} N_a^2(rho_ij)`.
pub fn corollary1_check(rho: &MixedState, cfg: &RoofConfig) -> Result<CheckReport> {
    require_qubits(rho.dims(), 2, "corollary1")?;
    let n = rho.parties();
    let first = single_cut_assistance(rho, 0, cfg)?;
    let singles: Vec<Term> = (1..n).map(|i| single_cut_assistance(rho, i, cfg)).collect::<Result<_>>()?;
    let pair = Bipartition::new(vec![0], vec![1])?;
    let mut pairs = Vec::new();
    for i in 1..n {
        for j in (0..n).filter(|&j| j != i) {
            let m = crenoa(&partial_trace(rho, &[i, j])?, &pair, cfg)?;
            pairs.push(Term::squared(format!("N_a^2(rho_{i}{j})"), &m, 1.0));
        }
    }
    Ok(CheckReport {
        name: "corollary1".into(),
        inequalities: vec![
            InequalityReport::new("corollary1.single-cuts", Relation::AtMost, Side::sum(vec![first]), Side::sum(singles.clone())),
            InequalityReport::new("corollary1.pairs", Relation::AtMost, Side::sum(singles), Side::sum(pairs)),
        ],
    })
}

fn block_term(psi: &PureState) -> Result<Term> {
    let part = Bipartition::split(&[0, 1], psi.parties())?;
    Ok(Term::squared(format!("N^2({})", cut_label(&part)), &negativity_pure(psi, &part)?, 1.0))
}

/// `2 N_a^2(rho_01) + sum_c N_a^2(rho_0c) + sum_c N_a^2(rho_1c) >= N^2(0,1|rest)`.
pub fn theorem2_check(psi: &PureState, cfg: &RoofConfig) -> Result<CheckReport> {
    require_parties(psi.dims(), 3, "theorem2")?;
    let n = psi.parties();
    let mut lhs = vec![pair_term("N_a", psi, 0, 1, crenoa, cfg, 2.0)?];
    for side in [0, 1] {
        for c in 2..n {
            lhs.push(pair_term("N_a", psi, side, c, crenoa, cfg, 1.0)?);
        }
    }
    let rhs = block_term(psi)?;
    Ok(CheckReport::single(InequalityReport::new("theorem2", Relation::AtLeast, Side::sum(lhs), Side::sum(vec![rhs]))))
}

/// `N^2(0,1|rest) >= |sum_c N_a^2(rho_0c) - sum_c N_a^2(rho_1c)|`.
pub fn theorem3_check(psi: &PureState, cfg: &RoofConfig) -> Result<CheckReport> {
    require_parties(psi.dims(), 3, "theorem3")?;
    let n = psi.parties();
    let lhs = block_term(psi)?;
    let mut rhs = Vec::new();
    for (side, weight) in [(0, 1.0), (1, -1.0)] {
        for c in 2..n {
            rhs.push(pair_term("N_a", psi, side, c, crenoa, cfg, weight)?);
        }
    }
    Ok(CheckReport::single(InequalityReport::new("theorem3", Relation::AtLeast, Side::sum(vec![lhs]), Side::abs(rhs))))
}

/// `C^2(0|rest) = C_a^2(rho_01) + C^2(rho_{0|2..})` and the same with
/// negativity, its maximizing roof on `rho_01` and its minimizing roof on the
/// marginal without party 1. Parties 0 and 1 must be qubits.
pub fn decomposition_identity_check(psi: &PureState, cfg: &RoofConfig) -> Result<CheckReport> {
    let dims = psi.dims();
    if dims.len() < 3 || dims[0] != 2 || dims[1] != 2 {
        return Err(Error::Shape(format!("identity17 needs qubits at parties 0 and 1 and at least 3 parties, got {dims:?}")));
    }
    let n = psi.parties();
    let rest: Vec<usize> = (2..n).collect();
    let mut keep = vec![0];
    keep.extend(&rest);
    let without_b = psi.reduced(&keep)?;
    let inner = Bipartition::split(&[0], without_b.parties())?;
    let rest_label = format!("0|{}", list(&rest));

    let mut reports = Vec::new();
    let variants: [(&str, &str, PureFn, Roof, Roof, &str); 2] = [
        ("identity17.concurrence", "C", concurrence_pure, coa, mixed_concurrence, "C"),
        ("identity17.negativity", "N", negativity_pure, crenoa, cren, "N_c"),
    ];
    for (name, symbol, pure, max_roof, min_roof, min_symbol) in variants {
        let lhs = one_vs_rest(psi, pure, symbol)?;
        let assisted = pair_term(&format!("{symbol}_a"), psi, 0, 1, max_roof, cfg, 1.0)?;
        let residual = min_roof(&without_b, &inner, cfg)?;
        let residual = Term::squared(format!("{min_symbol}^2(rho_{{{rest_label}}})"), &residual, 1.0);
        reports.push(InequalityReport::new(name, Relation::Equal, Side::sum(vec![lhs]), Side::sum(vec![assisted, residual])));
    }
    Ok(CheckReport { name: "identity17".into(), inequalities: reports })
}

/// `T(rho_A) + T(rho_B) >= T(rho_AB) >= |T(rho_A) - T(rho_B)|` for the linear
/// entropy, within `1e-9`.
pub fn entropy_subadditivity_check(rho: &MixedState, part: &Bipartition) -> Result<CheckReport> {
    part.check_parties(rho.parties())?;
    let t_a = linear_entropy(&partial_trace(rho, part.side_a())?);
    let t_b = linear_entropy(&partial_trace(rho, part.side_b())?);
    let t_ab = linear_entropy(rho);
    let a = format!("T(rho_{})", list(part.side_a()));
    let b = format!("T(rho_{})", list(part.side_b()));
    let whole = Term::plain("T(rho)", t_ab, Bound::Exact);
    let upper = InequalityReport::with_tolerance(
        "entropy.subadditivity",
        Relation::AtLeast,
        Side::sum(vec![Term::plain(a.clone(), t_a, Bound::Exact), Term::plain(b.clone(), t_b, Bound::Exact)]),
        Side::sum(vec![whole.clone()]),
        1e-9,
    );
    let mut minus_b = Term::plain(b, t_b, Bound::Exact);
    minus_b.weight = -1.0;
    let lower = InequalityReport::with_tolerance(
        "entropy.triangle",
        Relation::AtLeast,
        Side::sum(vec![whole]),
        Side::abs(vec![Term::plain(a, t_a, Bound::Exact), minus_b]),
        1e-9,
    );
    Ok(CheckReport { name: "entropy".into(), inequalities: vec![upper, lower] })
}
