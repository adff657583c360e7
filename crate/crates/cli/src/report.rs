//! Rendering of results as tables, JSON and CSV.
//!
//! Machine formats round every float to 12 significant digits so that output
//! is stable across platforms; tables use 6. Every float in JSON is an object
//! `{"value": x, "bound": "exact" | "lower" | "upper" | "estimate"}`.

use qmono_core::measures::{Bound, MeasureValue};
use qmono_core::monogamy::{CheckReport, InequalityReport, Side, SuiteResult, Term};
use serde::Serialize;
use std::fmt::Write as _;

pub const SCHEMA: u32 = 1;
const MACHINE_DIGITS: usize = 12;
const TABLE_DIGITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn render(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e12).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn machine(x: f64) -> String {
    render(round_sig(x, MACHINE_DIGITS))
}

fn human(x: f64) -> String {
    render(round_sig(x, TABLE_DIGITS))
}

#[derive(Serialize)]
struct Num {
    value: f64,
    bound: &'static str,
}

impl Num {
    fn new(value: f64, bound: Bound) -> Self {
        Self { value: round_sig(value, MACHINE_DIGITS), bound: bound.as_str() }
    }

    fn exact(value: f64) -> Self {
        Self::new(value, Bound::Exact)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(&r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
}

/// Squared value shares the bound direction of a nonnegative value.
pub struct Computed<'a> {
    pub measure: &'a str,
    pub partition: String,
    pub dims: Vec<usize>,
    pub value: MeasureValue,
}

#[derive(Serialize)]
struct ComputeJson<'a> {
    schema: u32,
    command: &'static str,
    measure: &'a str,
    partition: &'a str,
    dims: &'a [usize],
    value: Num,
    squared: Num,
    evaluations: u64,
}

pub fn render_compute(c: &Computed, format: Format) -> String {
    let v = &c.value;
    match format {
        Format::Json => to_json(&ComputeJson {
            schema: SCHEMA,
            command: "compute",
            measure: c.measure,
            partition: &c.partition,
            dims: &c.dims,
            value: Num::new(v.value, v.bound),
            squared: Num::new(v.squared(), v.bound),
            evaluations: v.evaluations,
        }),
        Format::Csv => csv_string(
            &["measure", "partition", "value", "squared", "bound", "evaluations"],
            vec![vec![
                c.measure.into(),
                c.partition.clone(),
                machine(v.value),
                machine(v.squared()),
                v.bound.as_str().into(),
                v.evaluations.to_string(),
            ]],
        ),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "measure      {}", c.measure);
            let _ = writeln!(s, "partition    {}", c.partition);
            let _ = writeln!(s, "value        {}", human(v.value));
            let _ = writeln!(s, "squared      {}", human(v.squared()));
            let _ = writeln!(s, "bound        {}", v.bound);
            let _ = writeln!(s, "evaluations  {}", v.evaluations);
            s
        }
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    label: &'a str,
    value: Num,
    squared: bool,
    weight: Num,
    contribution: Num,
    evaluations: u64,
}

#[derive(Serialize)]
struct SideJson<'a> {
    absolute: bool,
    value: Num,
    terms: Vec<TermJson<'a>>,
}

#[derive(Serialize)]
struct InequalityJson<'a> {
    name: &'a str,
    relation: &'static str,
    lhs: SideJson<'a>,
    rhs: SideJson<'a>,
    slack: Num,
    tolerance: Num,
    verdict: &'static str,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    schema: u32,
    command: &'static str,
    check: &'a str,
    verdict: &'static str,
    inequalities: Vec<InequalityJson<'a>>,
}

fn term_json(t: &Term) -> TermJson<'_> {
    TermJson {
        label: &t.label,
        value: Num::new(t.value, t.bound),
        squared: t.squared,
        weight: Num::exact(t.weight),
        contribution: Num::new(t.contribution(), t.contribution_bound()),
        evaluations: t.evaluations,
    }
}

fn side_json(s: &Side) -> SideJson<'_> {
    SideJson { absolute: s.absolute, value: Num::new(s.value(), s.bound()), terms: s.terms.iter().map(term_json).collect() }
}

fn inequality_json(r: &InequalityReport) -> InequalityJson<'_> {
    InequalityJson {
        name: &r.name,
        relation: r.relation.symbol(),
        lhs: side_json(&r.lhs),
        rhs: side_json(&r.rhs),
        slack: Num::new(r.slack, r.slack_bound),
        tolerance: Num::exact(r.tolerance),
        verdict: r.verdict.as_str(),
    }
}

fn term_line(t: &Term) -> String {
    let weight = if t.weight == 1.0 { String::new() } else { format!("{} x ", human(t.weight)) };
    let shown = if t.squared { t.value * t.value } else { t.value };
    format!("{weight}{:<28} {:>14}  {}", t.label, human(shown), t.bound)
}

fn side_table(s: &mut String, tag: &str, side: &Side) {
    let abs = if side.absolute { " (absolute value)" } else { "" };
    let _ = writeln!(s, "  {tag} = {} [{}]{abs}", human(side.value()), side.bound());
    for t in &side.terms {
        let _ = writeln!(s, "      {}", term_line(t));
    }
}

fn inequality_table(s: &mut String, r: &InequalityReport) {
    let _ = writeln!(s, "{}: lhs {} rhs  -> {}", r.name, r.relation.symbol(), r.verdict);
    side_table(s, "lhs", &r.lhs);
    side_table(s, "rhs", &r.rhs);
    let _ = writeln!(s, "  slack {} [{}], tolerance {}", human(r.slack), r.slack_bound, human(r.tolerance));
}

const CHECK_HEADER: [&str; 11] =
    ["check", "inequality", "relation", "lhs", "lhs_bound", "rhs", "rhs_bound", "slack", "slack_bound", "tolerance", "verdict"];

fn check_csv_row(check: &str, r: &InequalityReport) -> Vec<String> {
    vec![
        check.into(),
        r.name.clone(),
        r.relation.symbol().into(),
        machine(r.lhs.value()),
        r.lhs.bound().as_str().into(),
        machine(r.rhs.value()),
        r.rhs.bound().as_str().into(),
        machine(r.slack),
        r.slack_bound.as_str().into(),
        machine(r.tolerance),
        r.verdict.as_str().into(),
    ]
}

pub fn render_check(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Json => to_json(&CheckJson {
            schema: SCHEMA,
            command: "check",
            check: &report.name,
            verdict: report.verdict().as_str(),
            inequalities: report.inequalities.iter().map(inequality_json).collect(),
        }),
        Format::Csv => csv_string(&CHECK_HEADER, report.inequalities.iter().map(|r| check_csv_row(&report.name, r)).collect()),
        Format::Table => {
            let mut s = String::new();
            for r in &report.inequalities {
                inequality_table(&mut s, r);
            }
            let _ = writeln!(s, "verdict: {}", report.verdict());
            s
        }
    }
}

#[derive(Serialize)]
struct RowJson<'a> {
    quantity: &'a str,
    paper_value: Option<Num>,
    computed_value: Num,
    abs_diff: Option<Num>,
    tolerance: Num,
    provenance: &'static str,
    flag: &'static str,
}

#[derive(Serialize)]
struct CaseJson<'a> {
    suite_id: u8,
    case: &'a str,
    rows: Vec<RowJson<'a>>,
    checks: Vec<CheckJson<'a>>,
}

#[derive(Serialize)]
struct SummaryJson {
    cases: usize,
    rows: usize,
    discrepancies: usize,
    violations: usize,
    verdict: &'static str,
}

#[derive(Serialize)]
struct SuiteJson<'a> {
    schema: u32,
    command: &'static str,
    suites: &'a [u8],
    cases: Vec<CaseJson<'a>>,
    summary: SummaryJson,
}

/// The reference of a row is exact; the difference is exact only when the
/// computed value is.
fn diff_bound(b: Bound) -> Bound {
    if b.is_exact() {
        Bound::Exact
    } else {
        Bound::Estimate
    }
}

pub fn render_suite(ids: &[u8], result: &SuiteResult, format: Format) -> String {
    let summary = SummaryJson {
        cases: result.cases.len(),
        rows: result.rows().count(),
        discrepancies: result.discrepancies(),
        violations: result.violations(),
        verdict: result.verdict().as_str(),
    };
    match format {
        Format::Json => {
            let cases = result
                .cases
                .iter()
                .map(|c| CaseJson {
                    suite_id: c.example,
                    case: &c.label,
                    rows: c
                        .rows
                        .iter()
                        .map(|r| RowJson {
                            quantity: &r.quantity,
                            paper_value: r.reference.map(Num::exact),
                            computed_value: Num::new(r.computed, r.bound),
                            abs_diff: r.abs_diff().map(|d| Num::new(d, diff_bound(r.bound))),
                            tolerance: Num::exact(r.tolerance),
                            provenance: r.provenance.as_str(),
                            flag: r.flag().as_str(),
                        })
                        .collect(),
                    checks: c
                        .reports
                        .iter()
                        .map(|rep| CheckJson {
                            schema: SCHEMA,
                            command: "check",
                            check: &rep.name,
                            verdict: rep.verdict().as_str(),
                            inequalities: rep.inequalities.iter().map(inequality_json).collect(),
                        })
                        .collect(),
                })
                .collect();
            to_json(&SuiteJson { schema: SCHEMA, command: "suite", suites: ids, cases, summary })
        }
        Format::Csv => {
            let header = ["suite_id", "case", "quantity", "paper_value", "computed_value", "abs_diff", "bound", "provenance", "flag"];
            let rows = result
                .rows()
                .map(|(c, r)| {
                    vec![
                        c.example.to_string(),
                        c.label.clone(),
                        r.quantity.clone(),
                        r.reference.map(machine).unwrap_or_default(),
                        machine(r.computed),
                        r.abs_diff().map(machine).unwrap_or_default(),
                        r.bound.as_str().into(),
                        r.provenance.as_str().into(),
                        r.flag().as_str().into(),
                    ]
                })
                .collect();
            csv_string(&header, rows)
        }
        Format::Table => {
            let mut s = String::new();
            for c in &result.cases {
                let _ = writeln!(s, "example {}  {}", c.example, c.label);
                let _ = writeln!(
                    s,
                    "  {:<36} {:>12} {:>12} {:>10}  {:<8} {:<14} flag",
                    "quantity", "paper", "computed", "|diff|", "bound", "provenance"
                );
                for r in &c.rows {
                    let _ = writeln!(
                        s,
                        "  {:<36} {:>12} {:>12} {:>10}  {:<8} {:<14} {}",
                        r.quantity,
                        r.reference.map(human).unwrap_or_else(|| "-".into()),
                        human(r.computed),
                        r.abs_diff().map(human).unwrap_or_else(|| "-".into()),
                        r.bound.as_str(),
                        r.provenance.as_str(),
                        r.flag().as_str()
                    );
                }
                for rep in &c.reports {
                    for r in &rep.inequalities {
                        let _ = writeln!(s, "  {:<36} slack {} [{}] -> {}", r.name, human(r.slack), r.slack_bound, r.verdict);
                    }
                }
                s.push('\n');
            }
            let _ = writeln!(
                s,
                "{} cases, {} rows, {} discrepancies, {} violated inequalities, overall {}",
                summary.cases, summary.rows, summary.discrepancies, summary.violations, summary.verdict
            );
            s
        }
    }
}
