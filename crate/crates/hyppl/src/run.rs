//! Dispatch of a [`RunConfig`] to the library and assembly of the report.

use crate::config::{Command, RunConfig};
use hyppl_core::geometry::{casimir_apply, casimir_apply_fd, CoordinatePoint, HyperboloidFunction};
use hyppl_core::identities::identity_suite;
use hyppl_core::jacobi::{fj_spectrum, ForwardRule, KTypeJacobiSlot};
use hyppl_core::plancherel::{continuous_part, verify_plancherel, InversionEngine, PlancherelOptions};
use hyppl_core::{NumericsError, C64};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    CheckFailure,
    NumericalFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::CheckFailure => 1,
            Status::NumericalFailure => 3,
        }
    }
}

/// `value ≤ tolerance` is a pass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

/// Plot-ready rows; the CSV export writes exactly this.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Command,
    pub config: RunConfig,
    pub status: Status,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub result: Value,
    pub table: Table,
}

struct Outcome {
    checks: Vec<Check>,
    result: Value,
    table: Table,
}

type Res<T> = Result<T, NumericsError>;

fn function(cfg: &RunConfig) -> Res<HyperboloidFunction> {
    HyperboloidFunction::new(cfg.epsilon, C64::new(0.0, cfg.lambda_imag), cfg.ktypes.clone())
}

fn options(cfg: &RunConfig) -> PlancherelOptions {
    PlancherelOptions {
        convention: cfg.convention,
        include_discrete: !cfg.ablate_discrete,
        ..PlancherelOptions::default()
    }
}

fn points(cfg: &RunConfig) -> Res<Vec<CoordinatePoint>> {
    cfg.points.iter().map(|p| CoordinatePoint::new(p[0], p[1])).collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialise")
}

fn plancherel(cfg: &RunConfig) -> Res<Outcome> {
    let f = function(cfg)?;
    let r = verify_plancherel(&f, &cfg.grid, &options(cfg))?;
    let mut table = Table::new(&["m", "continuous", "discrete"]);
    for (&m, &(c, d)) in &r.per_ktype {
        table.rows.push(vec![Cell::Int(m as i64), Cell::Num(c), Cell::Num(d)]);
    }
    Ok(Outcome {
        checks: vec![Check::at_most("plancherel_ratio", (r.ratio - 1.0).abs(), cfg.tol)],
        result: to_value(&r),
        table,
    })
}

fn inversion(cfg: &RunConfig) -> Res<Outcome> {
    let f = function(cfg)?;
    let engine = InversionEngine::new(&f, &cfg.grid, &options(cfg))?;
    let results = points(cfg)?.into_iter().map(|p| engine.invert(p)).collect::<Res<Vec<_>>>()?;
    let err = results.iter().map(|r| r.error).fold(0.0, f64::max);
    let sup = results.iter().map(|r| r.exact.norm()).fold(0.0, f64::max);
    let rel = if sup > 0.0 { err / sup } else { err };
    let mut table = Table::new(&[
        "theta",
        "u",
        "exact_re",
        "exact_im",
        "reconstructed_re",
        "reconstructed_im",
        "error",
    ]);
    for r in &results {
        table.rows.push(
            [
                r.point.theta,
                r.point.u,
                r.exact.re,
                r.exact.im,
                r.reconstructed.re,
                r.reconstructed.im,
                r.error,
            ]
            .map(Cell::Num)
            .to_vec(),
        );
    }
    Ok(Outcome {
        checks: vec![Check::at_most("inversion_relative_sup_error", rel, cfg.tol)],
        result: json!({ "relative_sup_error": rel, "spectral_nodes": engine.n_nodes(), "points": results }),
        table,
    })
}

fn jacobi_roundtrip(cfg: &RunConfig) -> Res<Outcome> {
    let f = function(cfg)?;
    let mut checks = Vec::new();
    let mut table = Table::new(&["j", "m", "t", "expected", "reconstructed_re", "reconstructed_im"]);
    let mut per_slot = BTreeMap::new();
    // the transform acts on even functions of t; odd parts would leave a kink at 0
    for (m, profiles) in f.by_ktype() {
        let profiles: Vec<_> = profiles.iter().map(|p| p.even_part()).collect();
        let radial = |t: f64| profiles.iter().map(|p| p.eval(t)).sum::<f64>();
        let t_max = profiles.iter().map(|p| p.support_radius()).fold(0.0, f64::max);
        for j in 0..2u8 {
            let slot = KTypeJacobiSlot::new(j, m)?;
            let rule = ForwardRule::new(|t| C64::new(radial(t), 0.0), t_max, slot, cfg.grid.s_max);
            let spec = fj_spectrum(slot, |mu| rule.eval(mu), &cfg.grid, Default::default())?;
            let (mut err, mut sup) = (0.0f64, 0.0f64);
            for k in 1..=15 {
                let t = 0.2 * k as f64;
                let got = spec.invert(t, !cfg.ablate_discrete)?.value;
                let want = if j == 0 { radial(t) } else { t.sinh() * radial(t) };
                err = err.max((got - want).norm());
                sup = sup.max(want.abs());
                table.rows.push(vec![
                    Cell::Int(j as i64),
                    Cell::Int(m as i64),
                    Cell::Num(t),
                    Cell::Num(want),
                    Cell::Num(got.re),
                    Cell::Num(got.im),
                ]);
            }
            let rel = if sup > 0.0 { err / sup } else { err };
            per_slot.insert(
                format!("j={j},m={m}"),
                json!({ "relative_sup_error": rel, "discrete_points": spec.discrete.len() }),
            );
            checks.push(Check::at_most(format!("roundtrip_j{j}_m{m}"), rel, cfg.tol));
        }
    }
    Ok(Outcome {
        checks,
        result: json!({ "slots": per_slot }),
        table,
    })
}

fn identities(cfg: &RunConfig) -> Res<Outcome> {
    let rows = identity_suite()?;
    let mut table = Table::new(&["family", "params", "ratio_re", "ratio_im", "expected_ratio", "deviation", "pass"]);
    let mut families: BTreeMap<&str, (f64, bool, usize)> = BTreeMap::new();
    for r in &rows {
        let pass = r.passes(cfg.identity_tol);
        let e = families.entry(r.family.as_str()).or_insert((0.0, true, 0));
        *e = (e.0.max(r.deviation), e.1 && pass, e.2 + 1);
        table.rows.push(vec![
            Cell::Text(r.family.clone()),
            Cell::Text(r.params.clone()),
            Cell::Num(r.ratio.re),
            Cell::Num(r.ratio.im),
            Cell::Num(r.expected_ratio),
            Cell::Num(r.deviation),
            Cell::Bool(pass),
        ]);
    }
    let checks = families
        .iter()
        .map(|(name, &(worst, pass, _))| Check {
            name: format!("identity_{name}"),
            value: worst,
            tolerance: cfg.identity_tol,
            pass,
        })
        .collect();
    let summary: BTreeMap<_, _> = families
        .iter()
        .map(|(k, v)| (*k, json!({ "rows": v.2, "worst_deviation": v.0 })))
        .collect();
    Ok(Outcome {
        checks,
        result: json!({ "families": summary, "rows": rows.len() }),
        table,
    })
}

fn casimir(cfg: &RunConfig) -> Res<Outcome> {
    let f = function(cfg)?;
    let mut table = Table::new(&[
        "theta",
        "u",
        "analytic_re",
        "analytic_im",
        "finite_difference_re",
        "finite_difference_im",
    ]);
    let (mut err, mut sup) = (0.0f64, 0.0f64);
    for p in points(cfg)? {
        let exact = casimir_apply(&f, p);
        let fd = casimir_apply_fd(f.lambda, |a, b| f.eval_kb(a, b), p.theta, p.u)?;
        err = err.max((exact - fd).norm());
        sup = sup.max(exact.norm());
        table
            .rows
            .push([p.theta, p.u, exact.re, exact.im, fd.re, fd.im].map(Cell::Num).to_vec());
    }
    let rel = if sup > 0.0 { err / sup } else { err };
    Ok(Outcome {
        checks: vec![Check::at_most("casimir_relative_sup_error", rel, cfg.tol)],
        result: json!({ "relative_sup_error": rel, "sup_analytic": sup }),
        table,
    })
}

fn spectral_density(cfg: &RunConfig) -> Res<Outcome> {
    let f = function(cfg)?;
    let c = continuous_part(&f, &cfg.grid, &options(cfg))?;
    let mut table = Table::new(&["s", "integrand"]);
    let mut rows = c.integrand.clone();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    for &(s, v) in &rows {
        table.rows.push(vec![Cell::Num(s), Cell::Num(v)]);
    }
    let rel_tail = c.tail_estimate / c.value.abs().max(f64::MIN_POSITIVE);
    Ok(Outcome {
        checks: vec![Check::at_most("relative_tail_estimate", rel_tail, cfg.tol)],
        result: json!({
            "continuous_part": c.value,
            "per_ktype": c.per_ktype,
            "tail_estimate": c.tail_estimate,
            "warning": c.warning,
        }),
        table,
    })
}

pub fn run(cfg: &RunConfig) -> Report {
    let outcome = match cfg.command {
        Command::VerifyPlancherel => plancherel(cfg),
        Command::VerifyInversion => inversion(cfg),
        Command::JacobiRoundtrip => jacobi_roundtrip(cfg),
        Command::IdentitySuite => identities(cfg),
        Command::CasimirCheck => casimir(cfg),
        Command::SpectralDensity => spectral_density(cfg),
    };
    let (status, checks, error, result, table) = match outcome {
        Ok(o) => {
            let ok = o.checks.iter().all(|c| c.pass);
            let status = if ok { Status::Pass } else { Status::CheckFailure };
            (status, o.checks, None, o.result, o.table)
        }
        Err(e) => (
            Status::NumericalFailure,
            Vec::new(),
            Some(e.to_string()),
            Value::Null,
            Table::default(),
        ),
    };
    Report {
        schema_version: SCHEMA_VERSION,
        command: cfg.command,
        config: cfg.clone(),
        status,
        checks,
        error,
        result,
        table,
    }
}

/// Pretty JSON with object keys in sorted order.
pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&sorted(to_value(report))).expect("report serialises");
    s.push('\n');
    s
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let m: BTreeMap<String, Value> = m.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            Value::Object(m.into_iter().collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        v => v,
    }
}

/// 17 significant digits, so a value survives a text roundtrip unchanged.
pub fn fmt_sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// The report's table as CSV; a failed run exports its checks instead.
pub fn render_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let (columns, rows): (Vec<String>, Vec<Vec<Cell>>) = if report.table.columns.is_empty() {
        let rows = report
            .checks
            .iter()
            .map(|c| {
                vec![
                    Cell::Text(c.name.clone()),
                    Cell::Num(c.value),
                    Cell::Num(c.tolerance),
                    Cell::Bool(c.pass),
                ]
            })
            .collect();
        (["check", "value", "tolerance", "pass"].map(String::from).to_vec(), rows)
    } else {
        (report.table.columns.clone(), report.table.rows.clone())
    };
    w.write_record(&columns).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|c| match c {
            Cell::Num(x) => fmt_sig17(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Bool(b) => b.to_string(),
        }))
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn sig17_roundtrips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = fmt_sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert_eq!(
                s.split('e').next().unwrap().trim_start_matches('-').replace('.', "").len(),
                17,
                "{s}"
            );
        }
    }

    #[test]
    fn json_keys_are_sorted() {
        let v = sorted(json!({ "b": 1, "a": { "d": 2, "c": [ { "z": 0, "y": 1 } ] } }));
        assert_eq!(v.to_string(), r#"{"a":{"c":[{"y":1,"z":0}],"d":2},"b":1}"#);
    }

    #[test]
    fn numerical_failure_is_reported() {
        let mut cfg = parse_config(
            "epsilon = 0\nlambda_imag = 1.0\nktypes = [{ m = 0 }]\n",
            Some(Command::VerifyInversion),
        )
        .unwrap();
        cfg.grid.n_points = 32;
        let r = run(&cfg);
        assert_eq!(r.status, Status::NumericalFailure);
        assert_eq!(r.status.exit_code(), 3);
        assert!(r.error.unwrap().contains("lambda = 0"));
    }
}
