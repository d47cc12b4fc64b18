//! Scenario files: one JSON object per file, dispatched on `"kind"`.

use std::collections::BTreeMap;
use std::str::FromStr;

use ballfix::ballspace::{
    check_c_conditions, check_cu_conditions, check_nest_intersection, check_sc_axioms,
    fixed_points, solve_gfpt2, solve_nfpt1, solve_nfpt2,
};
use ballfix::banach::{solve_banach, verify_banach_sc, AffineMap, Point};
use ballfix::hahn::{HahnSeries, DEFAULT_TRUNCATION};
use ballfix::ordered::{solve_oag, AffineSeriesMap, OagConfig, OagOutcome, OrderedError};
use ballfix::padic::{hensel_lift, Polynomial};
use ballfix::poset::ValuePoset;
use ballfix::topology::{
    check_top3, check_topn_hypotheses, closed_map_witness, solve_top3, solve_topn, ClosedMap,
    FiniteTopology, TopnVerdict,
};
use ballfix::ultrametric::{
    check_axioms, check_sufpt_hypotheses, is_contracting, solve_sufpt, solve_ufpt,
    FiniteUltrametric,
};
use ballfix::{
    BallAssignment, BallSpace, Condition, FiniteBallSpace, FixedPointReport, Outcome, PointSet,
    Rational, SelfMap,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::report::RunReport;
use crate::InputError;

const DEFAULT_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Ballspace,
    Ultrametric,
    Padic,
    Banach,
    Ordered,
    Topo,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Ballspace => "ballspace",
            Kind::Ultrametric => "ultrametric",
            Kind::Padic => "padic",
            Kind::Banach => "banach",
            Kind::Ordered => "ordered",
            Kind::Topo => "topo",
        }
    }
}

#[derive(Deserialize)]
struct Header {
    #[serde(default)]
    kind: Option<Kind>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallspaceScenario {
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub name: Option<String>,
    pub points: Vec<String>,
    pub balls: Vec<Vec<String>>,
    pub map: BTreeMap<String, String>,
    #[serde(default)]
    pub assignment: Option<BTreeMap<String, usize>>,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub expected: Option<Map<String, Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ValuesSpec {
    Tag(String),
    Names(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UltrametricScenario {
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub name: Option<String>,
    pub points: Vec<String>,
    pub distances: Vec<(String, String, String)>,
    pub values: ValuesSpec,
    #[serde(default)]
    pub ranked: Option<Vec<String>>,
    #[serde(default)]
    pub leq: Option<Vec<(String, String)>>,
    #[serde(default)]
    pub bottom: Option<String>,
    pub map: BTreeMap<String, String>,
    #[serde(default)]
    pub start: Option<String>,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub expected: Option<Map<String, Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadicScenario {
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub name: Option<String>,
    pub prime: u64,
    pub precision: u32,
    pub poly: Vec<i64>,
    pub start: i64,
    #[serde(default)]
    pub expected: Option<Map<String, Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BanachScenario {
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub name: Option<String>,
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
    pub c: String,
    pub start: Vec<String>,
    pub eps: String,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub expected: Option<Map<String, Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderedScenario {
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub name: Option<String>,
    pub map: String,
    pub ratio: String,
    pub start: String,
    #[serde(default)]
    pub trunc: Option<i64>,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub expected: Option<Map<String, Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopoScenario {
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub name: Option<String>,
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
    pub map: BTreeMap<String, String>,
    #[serde(default)]
    pub start: Option<String>,
    #[serde(default)]
    pub expected: Option<Map<String, Value>>,
}

fn parse_as<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Parse {
        origin: origin.into(),
        message: e.to_string(),
    })
}

/// Parses and runs a scenario; `origin` names it in the report.
pub fn run_text(text: &str, origin: &str) -> Result<RunReport, InputError> {
    let header: Header = parse_as(text, origin)?;
    let kind = header.kind.unwrap_or(Kind::Ballspace);
    match kind {
        Kind::Ballspace => run_ballspace(&parse_as(text, origin)?, origin),
        Kind::Ultrametric => run_ultrametric(&parse_as(text, origin)?, origin),
        Kind::Padic => run_padic(&parse_as(text, origin)?, origin),
        Kind::Banach => run_banach(&parse_as(text, origin)?, origin),
        Kind::Ordered => run_ordered(&parse_as(text, origin)?, origin),
        Kind::Topo => run_topo(&parse_as(text, origin)?, origin),
    }
}

fn invalid(message: impl Into<String>) -> InputError {
    InputError::Invalid(message.into())
}

fn finish(mut report: RunReport, expected: &Option<Map<String, Value>>) -> RunReport {
    if let Some(expected) = expected {
        report.compare(expected);
    }
    report
}

struct Names<'a>(&'a [String]);

impl Names<'_> {
    fn check_unique(&self) -> Result<(), InputError> {
        if self.0.is_empty() {
            return Err(invalid("\"points\" is empty"));
        }
        for (i, p) in self.0.iter().enumerate() {
            if self.0[..i].contains(p) {
                return Err(invalid(format!("duplicate point \"{p}\"")));
            }
        }
        Ok(())
    }

    fn index(&self, name: &str, field: &str) -> Result<usize, InputError> {
        self.0
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| invalid(format!("unknown point \"{name}\" in \"{field}\"")))
    }

    fn set(&self, members: &[String], field: &str) -> Result<PointSet, InputError> {
        members.iter().map(|m| self.index(m, field)).collect()
    }

    fn map(&self, map: &BTreeMap<String, String>) -> Result<Vec<usize>, InputError> {
        let mut table = vec![None; self.0.len()];
        for (x, y) in map {
            table[self.index(x, "map")?] = Some(self.index(y, "map")?);
        }
        table
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| invalid(format!("\"map\" has no image for \"{}\"", self.0[i])))
            })
            .collect()
    }

    fn show(&self, set: &PointSet) -> Value {
        Value::Array(
            set.iter()
                .map(|i| Value::String(self.0[i].clone()))
                .collect(),
        )
    }
}

/// Records a solver outcome under `key` and returns the fixed point if any.
fn record_solver(
    report: &mut RunReport,
    names: &Names<'_>,
    key: &str,
    run: &FixedPointReport,
    fixed: &[usize],
) -> Option<usize> {
    let value = match &run.outcome {
        Outcome::FixedPoint { point } => json!({ "fixed_point": names.0[*point] }),
        Outcome::HypothesisViolated { condition, witness } => {
            json!({ "violated": condition.to_string(), "witness": witness.to_string() })
        }
        Outcome::BudgetExhausted => json!({ "budget_exhausted": run.iterations }),
    };
    report.output(key, value);
    let point = run.fixed_point()?;
    if !fixed.contains(&point) {
        report.contradiction(format!(
            "{key} returned {} which is not fixed",
            names.0[point]
        ));
    }
    Some(point)
}

fn fixed_output(report: &mut RunReport, names: &Names<'_>, fixed: &[usize]) {
    let list: Vec<Value> = fixed
        .iter()
        .map(|&i| Value::String(names.0[i].clone()))
        .collect();
    report.output("fixed_points", list);
}

pub fn run_ballspace(s: &BallspaceScenario, origin: &str) -> Result<RunReport, InputError> {
    let names = Names(&s.points);
    names.check_unique()?;
    let balls = s
        .balls
        .iter()
        .map(|b| names.set(b, "balls"))
        .collect::<Result<Vec<_>, _>>()?;
    let table = names.map(&s.map)?;
    let fin = FiniteBallSpace::new(s.points.clone(), balls).map_err(|e| invalid(e.to_string()))?;
    let assign = match &s.assignment {
        None => None,
        Some(a) => {
            let mut sets = vec![None; s.points.len()];
            for (x, &k) in a {
                let ball = fin
                    .balls()
                    .get(k)
                    .ok_or_else(|| invalid(format!("assignment index {k} out of range")))?;
                sets[names.index(x, "assignment")?] = Some(ball.clone());
            }
            let sets = sets
                .into_iter()
                .enumerate()
                .map(|(i, b)| {
                    b.ok_or_else(|| invalid(format!("\"assignment\" misses \"{}\"", s.points[i])))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(BallAssignment::from_sets(&fin, &sets).map_err(|e| invalid(e.to_string()))?)
        }
    };
    let budget = s.budget.unwrap_or(DEFAULT_BUDGET);
    let space = BallSpace::Finite(fin);
    let f = SelfMap::Table(table.clone());
    let fixed = fixed_points(&table);
    let mut report = RunReport::new(
        s.name.clone().unwrap_or_else(|| origin.into()),
        Kind::Ballspace.name(),
    );
    fixed_output(&mut report, &names, &fixed);
    let internal = |e: ballfix::BallSpaceError| invalid(e.to_string());

    let c_ok = report.conditions(
        "check_c_conditions",
        &check_c_conditions(&space, &f).map_err(internal)?,
    );
    let cu_ok = report.conditions(
        "check_cu_conditions",
        &check_cu_conditions(&space, &f).map_err(internal)?,
    );
    report.output("c_conditions", c_ok);
    report.output("cu_conditions", cu_ok);

    let r1 = solve_nfpt1(&space, &f, budget).map_err(internal)?;
    let p1 = record_solver(&mut report, &names, "nfpt1", &r1, &fixed);
    if c_ok && p1.is_none() {
        report.contradiction("C1-C3 hold but nfpt1 found no fixed point");
    }
    let r2 = solve_nfpt2(&space, &f, budget).map_err(internal)?;
    let p2 = record_solver(&mut report, &names, "nfpt2", &r2, &fixed);
    if cu_ok && (p2.is_none() || fixed.len() != 1) {
        report.contradiction("CU1-CU3 hold but the fixed point is missing or not unique");
    }
    let mut found = p1.or(p2);

    if let Some(assign) = &assign {
        let sc_ok = report.conditions(
            "check_sc_axioms",
            &check_sc_axioms(&space, &f, assign).map_err(internal)?,
        );
        let nest_ok = report.conditions(
            "check_nest_intersection",
            &check_nest_intersection(&space, &f, assign).map_err(internal)?,
        );
        report.output("sc_axioms", sc_ok);
        let mut runs = Vec::new();
        for start in 0..s.points.len() {
            let run = solve_gfpt2(&space, &f, assign, start, budget).map_err(internal)?;
            let key = format!("gfpt2[{}]", s.points[start]);
            let p = record_solver(&mut report, &names, &key, &run, &fixed);
            if let Some(v) = report.outputs.remove(&key) {
                runs.push(json!({ "start": s.points[start], "result": v }));
            }
            if sc_ok && nest_ok && p.is_none() {
                report.contradiction(format!(
                    "SC1-SC3 hold but gfpt2 from {} found no fixed point",
                    s.points[start]
                ));
            }
            found = found.or(p);
        }
        report.output("gfpt2", runs);
    }
    report.output(
        "fixed_point",
        found.map_or(Value::Null, |p| Value::String(s.points[p].clone())),
    );
    if let Some(nest) = &r1.nest {
        report.output(
            "nfpt1_nest",
            nest.balls()
                .iter()
                .map(|b| names.show(b))
                .collect::<Vec<_>>(),
        );
    }
    Ok(finish(report, &s.expected))
}

fn value_poset(s: &UltrametricScenario) -> Result<ValuePoset, InputError> {
    let poset = match &s.values {
        ValuesSpec::Tag(tag) if tag == "total-chain" => {
            let ranked = s
                .ranked
                .clone()
                .ok_or_else(|| invalid("\"total-chain\" needs \"ranked\" value names"))?;
            ValuePoset::chain_named(ranked)
        }
        ValuesSpec::Tag(tag) => return Err(invalid(format!("unknown value tag \"{tag}\""))),
        ValuesSpec::Names(values) => {
            let bottom = s
                .bottom
                .as_deref()
                .ok_or_else(|| invalid("poset literal needs \"bottom\""))?;
            ValuePoset::from_named(values.clone(), s.leq.as_deref().unwrap_or(&[]), bottom)
        }
    };
    poset.map_err(|e| invalid(e.to_string()))
}

pub fn run_ultrametric(s: &UltrametricScenario, origin: &str) -> Result<RunReport, InputError> {
    let names = Names(&s.points);
    names.check_unique()?;
    let poset = value_poset(s)?;
    let triples = s
        .distances
        .iter()
        .map(|(x, y, v)| {
            let v = poset
                .index_of(v)
                .ok_or_else(|| invalid(format!("unknown value \"{v}\" in \"distances\"")))?;
            Ok((
                names.index(x, "distances")?,
                names.index(y, "distances")?,
                v,
            ))
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    let u = FiniteUltrametric::from_triples(s.points.clone(), poset, &triples)
        .map_err(|e| invalid(e.to_string()))?;
    let f = names.map(&s.map)?;
    let start = match &s.start {
        Some(p) => names.index(p, "start")?,
        None => 0,
    };
    let budget = s.budget.unwrap_or(DEFAULT_BUDGET);
    let fixed = fixed_points(&f);
    let mut report = RunReport::new(
        s.name.clone().unwrap_or_else(|| origin.into()),
        Kind::Ultrametric.name(),
    );
    fixed_output(&mut report, &names, &fixed);
    let internal = |e: ballfix::ultrametric::UltrametricError| invalid(e.to_string());

    report.conditions("check_axioms", &check_axioms(&u));
    let contracting = is_contracting(&u, &f);
    report.condition("is_contracting", Condition::Contracting, contracting);
    let hyps = report.conditions(
        "check_sufpt_hypotheses",
        &check_sufpt_hypotheses(&u, &f).map_err(internal)?,
    );
    report.output("sufpt_hypotheses", hyps);
    let sufpt = solve_sufpt(&u, &f, start, budget).map_err(internal)?;
    let p = record_solver(&mut report, &names, "sufpt", &sufpt, &fixed);
    if hyps && p.is_none() {
        report.contradiction("SUFPT hypotheses hold but no fixed point was found");
    }
    let ufpt = solve_ufpt(&u, &f, start, budget).map_err(internal)?;
    let q = record_solver(&mut report, &names, "ufpt", &ufpt, &fixed);
    report.output(
        "fixed_point",
        p.or(q)
            .map_or(Value::Null, |p| Value::String(s.points[p].clone())),
    );
    Ok(finish(report, &s.expected))
}

pub fn run_padic(s: &PadicScenario, origin: &str) -> Result<RunReport, InputError> {
    let poly = Polynomial::new(s.poly.clone()).map_err(|e| invalid(e.to_string()))?;
    let trace =
        hensel_lift(&poly, s.start, s.prime, s.precision).map_err(|e| invalid(e.to_string()))?;
    let mut report = RunReport::new(
        s.name.clone().unwrap_or_else(|| origin.into()),
        Kind::Padic.name(),
    );
    let p = s.prime as i128;
    let mut previous: Option<(u32, u64)> = None;
    for &(k, r) in &trace.trace {
        let m = p.pow(k);
        let root = poly.eval_int(r as i128).rem_euclid(m) == 0;
        let lifts = previous.is_none_or(|(j, q)| (r as i128 - q as i128).rem_euclid(p.pow(j)) == 0);
        report.verdict(
            "hensel_lift",
            format!("root mod {p}^{k}"),
            root && lifts,
            (!root || !lifts).then(|| r.to_string()),
        );
        if !(root && lifts) {
            report.contradiction(format!("residue {r} at precision {k} is not a lifted root"));
        }
        previous = Some((k, r));
    }
    report.output(
        "trace",
        trace
            .trace
            .iter()
            .map(|&(k, r)| json!([k, r]))
            .collect::<Vec<_>>(),
    );
    report.output(
        "digits",
        trace
            .trace
            .iter()
            .map(|&(_, r)| json!(r))
            .collect::<Vec<_>>(),
    );
    report.output("root", trace.root.residue());
    Ok(finish(report, &s.expected))
}

fn rational(text: &str, field: &str) -> Result<Rational, InputError> {
    Rational::from_str(text.trim())
        .map_err(|_| invalid(format!("\"{field}\": \"{text}\" is not a rational num/den")))
}

fn rationals(items: &[String], field: &str) -> Result<Vec<Rational>, InputError> {
    items.iter().map(|t| rational(t, field)).collect()
}

pub fn run_banach(s: &BanachScenario, origin: &str) -> Result<RunReport, InputError> {
    let a =
        s.a.iter()
            .map(|row| rationals(row, "a"))
            .collect::<Result<Vec<_>, _>>()?;
    let map = AffineMap::new(a, rationals(&s.b, "b")?).map_err(|e| invalid(e.to_string()))?;
    let c = rational(&s.c, "c")?;
    let eps = rational(&s.eps, "eps")?;
    let start = Point::new(rationals(&s.start, "start")?).map_err(|e| invalid(e.to_string()))?;
    if start.dim() != map.dim() {
        return Err(invalid(format!(
            "start has dimension {}, map has {}",
            start.dim(),
            map.dim()
        )));
    }
    let mut report = RunReport::new(
        s.name.clone().unwrap_or_else(|| origin.into()),
        Kind::Banach.name(),
    );
    let lipschitz = map.max_row_sum();
    let contracting = lipschitz <= c;
    report.verdict(
        "max_row_sum",
        Condition::Contracting,
        contracting,
        (!contracting).then(|| format!("row sum {lipschitz} > C = {c}")),
    );
    let spec = map.into_spec(c).map_err(|e| invalid(e.to_string()))?;
    if contracting {
        let sc = verify_banach_sc(&spec, &start, 8).map_err(|e| invalid(e.to_string()))?;
        if !report.conditions("verify_banach_sc", &sc.checks) {
            report.contradiction("a contraction failed an orbit inequality");
        }
    }
    match solve_banach(&spec, &start, &eps, s.budget.unwrap_or(DEFAULT_BUDGET)) {
        Ok(sol) => {
            let coords: Vec<Value> = sol
                .point
                .coords()
                .iter()
                .map(|x| Value::String(x.to_string()))
                .collect();
            report.output("point", coords);
            report.output("radius", sol.certificate.radius.to_string());
            report.output("iterations", sol.iterations);
            if sol.certificate.radius > eps {
                report.contradiction("certificate radius exceeds eps");
            }
        }
        Err(e) => {
            if contracting {
                report.contradiction(format!("contraction did not converge: {e}"));
            }
            report.output("error", e.to_string());
        }
    }
    Ok(finish(report, &s.expected))
}

fn parse_ratio(text: &str) -> Result<(u64, u64), InputError> {
    let bad = || invalid(format!("ratio \"{text}\" is not m/n"));
    let (m, n) = text.split_once('/').ok_or_else(bad)?;
    Ok((
        m.trim().parse().map_err(|_| bad())?,
        n.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn run_ordered(s: &OrderedScenario, origin: &str) -> Result<RunReport, InputError> {
    let trunc = s.trunc.unwrap_or(DEFAULT_TRUNCATION);
    if trunc <= 0 {
        return Err(invalid("\"trunc\" must be positive"));
    }
    let spec = s
        .map
        .strip_prefix("affine:")
        .ok_or_else(|| invalid("\"map\" must be affine:a,b"))?;
    let map = AffineSeriesMap::parse(spec, trunc).map_err(|e| invalid(e.to_string()))?;
    let (m, n) = parse_ratio(&s.ratio)?;
    let x0 = HahnSeries::parse(&s.start, trunc).map_err(|e| invalid(e.to_string()))?;
    let mut cfg = OagConfig::new(m, n, trunc);
    if let Some(b) = s.budget {
        cfg.budget = b;
    }
    let mut report = RunReport::new(
        s.name.clone().unwrap_or_else(|| origin.into()),
        Kind::Ordered.name(),
    );
    match solve_oag(&|x| map.apply(x), &x0, &cfg) {
        Ok(run) => {
            report.condition("solve_oag", Condition::OContracting, true);
            report.condition("solve_oag", Condition::StrictOrbit, true);
            let outcome = match &run.outcome {
                OagOutcome::FixedPoint { .. } => "fixed_point",
                OagOutcome::Certificate { .. } => "certificate",
                OagOutcome::BudgetExhausted { .. } => "budget_exhausted",
            };
            report.output("outcome", outcome);
            if let Some(p) = &run.point {
                report.output("point", p.to_string());
                if matches!(run.outcome, OagOutcome::FixedPoint { .. }) && map.apply(p) != *p {
                    report.contradiction(format!(
                        "{p} is reported fixed but f maps it to {}",
                        map.apply(p)
                    ));
                }
            }
            if let OagOutcome::Certificate { exponent, .. } = run.outcome {
                report.output("certificate_exponent", exponent);
            }
            report.output("restarts", run.restarts);
            report.output("steps", run.steps.len());
            report.output("evaluations", run.evaluations);
        }
        Err(OrderedError::SpecViolation {
            condition,
            step,
            x,
            d,
            d_next,
        }) => {
            report.verdict(
                "solve_oag",
                condition,
                false,
                Some(format!(
                    "step {step}: x = {x}, |x - fx| = {d}, |fx - f^2x| = {d_next}"
                )),
            );
            report.output("outcome", "violated");
        }
        Err(e) => return Err(invalid(e.to_string())),
    }
    Ok(finish(report, &s.expected))
}

pub fn run_topo(s: &TopoScenario, origin: &str) -> Result<RunReport, InputError> {
    let names = Names(&s.points);
    names.check_unique()?;
    let opens = s
        .opens
        .iter()
        .map(|o| names.set(o, "opens"))
        .collect::<Result<Vec<_>, _>>()?;
    let top = FiniteTopology::new(s.points.clone(), &opens).map_err(|e| invalid(e.to_string()))?;
    let table = names.map(&s.map)?;
    let fixed = fixed_points(&table);
    let mut report = RunReport::new(
        s.name.clone().unwrap_or_else(|| origin.into()),
        Kind::Topo.name(),
    );
    fixed_output(&mut report, &names, &fixed);
    report.output("connected", top.is_connected());
    report.output("hausdorff", top.is_hausdorff());
    let witness = closed_map_witness(&top, &table).map_err(|e| invalid(e.to_string()))?;
    report.verdict(
        "is_closed_map",
        Condition::ClosedMap,
        witness.is_none(),
        witness.as_ref().map(|w| format!("{w:?}")),
    );
    report.output("closed_map", witness.is_none());
    if witness.is_some() {
        return Ok(finish(report, &s.expected));
    }
    let f = ClosedMap::new(&top, table).map_err(|e| invalid(e.to_string()))?;

    let topn = check_topn_hypotheses(&top, &f);
    let verdict = match &topn.verdict {
        TopnVerdict::Strong => "strong",
        TopnVerdict::Weak => "weak",
        TopnVerdict::Fails { .. } => "fails",
    };
    let witness = match &topn.verdict {
        TopnVerdict::Fails { witness } => Some(format!("{:?}", names.show(witness))),
        _ => None,
    };
    report.verdict(
        "check_topn_hypotheses",
        Condition::TopnWeak,
        witness.is_none(),
        witness,
    );
    report.output("topn", verdict);
    let run = solve_topn(&top, &f);
    let p = record_solver(&mut report, &names, "solve_topn", &run, &fixed);
    match topn.verdict {
        TopnVerdict::Strong if p.is_none() || fixed.len() != 1 => report.contradiction(
            "strong topn hypotheses hold but the fixed point is missing or not unique",
        ),
        TopnVerdict::Weak if p.is_none() => {
            report.contradiction("weak topn hypotheses hold but no fixed point was found")
        }
        _ => {}
    }

    let top3 = report.conditions("check_top3", &check_top3(&top, &f));
    report.output("top3", top3);
    let start = match &s.start {
        Some(x) => names.index(x, "start")?,
        None => 0,
    };
    let run3 = solve_top3(&top, &f, start);
    let q = record_solver(&mut report, &names, "solve_top3", &run3, &fixed);
    if top3 && q.is_none() {
        report.contradiction("top3 hypotheses hold but gfpt2 found no fixed point");
    }
    report.output(
        "fixed_point",
        p.or(q)
            .map_or(Value::Null, |x| Value::String(s.points[x].clone())),
    );
    Ok(finish(report, &s.expected))
}
