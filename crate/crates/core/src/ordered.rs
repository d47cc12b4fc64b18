//! Ordered abelian groups and fields over truncated Hahn series: the
//! fixed point solver for maps that strictly contract on orbits, order ball
//! nests in archimedean groups, the transfer from ultrametric to order
//! nests, and hybrid ball spaces.
//!
//! Spherical completeness claims are checked on the truncated shadow of the
//! power series field (integer exponents below `T`).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hahn::{um_contains, HahnSeries, NaturalValue, OrderBall, SeriesError};
use crate::report::Condition;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrderedError {
    #[error("ratio must satisfy 0 < m < n, got {m}/{n}")]
    InvalidRatio { m: u64, n: u64 },
    #[error("field constant {0} is not in (0, 1) with 1 - C archimedean equivalent to 1")]
    InvalidFieldConstant(HahnSeries),
    #[error(
        "{condition} fails at orbit step {step}: x = {x}, |x - fx| = {d}, |fx - f^2x| = {d_next}"
    )]
    SpecViolation {
        condition: Condition,
        step: usize,
        x: HahnSeries,
        d: HahnSeries,
        d_next: HahnSeries,
    },
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("ball {index} does not descend strictly")]
    NotStrict { index: usize },
    #[error("ball {index} is not contained in ball {}", index - 1)]
    NotNested { index: usize },
    #[error("ball {index} has center or radius outside the group")]
    NotInGroup { index: usize },
    #[error("ball {index} has a negative radius")]
    NegativeRadius { index: usize },
    #[error("empty nest")]
    EmptyNest,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, OrderedError>;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `x ↦ a·x + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSeriesMap {
    pub a: HahnSeries,
    pub b: HahnSeries,
}

impl AffineSeriesMap {
    pub fn new(a: HahnSeries, b: HahnSeries) -> Self {
        Self { a, b }
    }

    pub fn apply(&self, x: &HahnSeries) -> HahnSeries {
        &(&self.a * x) + &self.b
    }

    /// Parses `"a,b"` with series literals for `a` and `b`.
    pub fn parse(spec: &str, trunc: i64) -> Result<Self> {
        let (a, b) = spec
            .split_once(',')
            .ok_or_else(|| SeriesError::Parse(spec.to_string()))?;
        Ok(Self::new(
            HahnSeries::parse(a, trunc)?,
            HahnSeries::parse(b, trunc)?,
        ))
    }
}

#[derive(Clone, Debug)]
pub struct OagConfig {
    pub m: u64,
    pub n: u64,
    /// Stop with a certificate once the leading exponent of `x − fx`
    /// reaches this value.
    pub target: i64,
    /// Total evaluations of `f`.
    pub budget: usize,
    /// Orbit steps per stage before a restart is attempted.
    pub stage_length: usize,
}

impl OagConfig {
    pub fn new(m: u64, n: u64, trunc: i64) -> Self {
        Self {
            m,
            n,
            target: trunc,
            budget: 10_000,
            stage_length: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OagOutcome {
    FixedPoint {
        point: String,
    },
    /// `v(x − fx)` reached the target exponent.
    Certificate {
        point: String,
        exponent: i64,
    },
    BudgetExhausted {
        residual_exponent: Option<i64>,
    },
}

/// One checked orbit step: `d = |x − fx|`, `d_next = |fx − f²x|`.
#[derive(Clone, Debug, PartialEq)]
pub struct OagStep {
    pub x: HahnSeries,
    pub d: HahnSeries,
    pub d_next: HahnSeries,
}

#[derive(Clone, Debug)]
pub struct OagReport {
    pub outcome: OagOutcome,
    pub point: Option<HahnSeries>,
    pub steps: Vec<OagStep>,
    pub restarts: usize,
    /// Leading exponent of `x − fx` at the start of each stage.
    pub stage_exponents: Vec<Option<i64>>,
    pub evaluations: usize,
}

/// Iterates `f` from `x0`, checking `|fx − f²x| ≤ |x − fx|` and
/// `n|fx − f²x| ≤ m|x − fx|` at every step. After each stage a restart
/// point `z` is proposed by Aitken extrapolation and accepted only if it
/// lies in every ball `B_o(x; |x − fx|/(1−C))` of the stage and
/// `|z − fz| ≪ |x − fx|`.
pub fn solve_oag(
    f: &dyn Fn(&HahnSeries) -> HahnSeries,
    x0: &HahnSeries,
    cfg: &OagConfig,
) -> Result<OagReport> {
    if cfg.m == 0 || cfg.m >= cfg.n {
        return Err(OrderedError::InvalidRatio { m: cfg.m, n: cfg.n });
    }
    if cfg.budget == 0 {
        return Err(OrderedError::ZeroBudget);
    }
    let ratio = rat(cfg.m as i64, cfg.n as i64);
    let c = (&ratio + Rational::one()) / rat(2, 1);
    let widen = (Rational::one() - &c).recip();
    let m = Rational::from_integer(cfg.m.into());
    let n = Rational::from_integer(cfg.n.into());

    let mut report = OagReport {
        outcome: OagOutcome::BudgetExhausted {
            residual_exponent: None,
        },
        point: None,
        steps: Vec::new(),
        restarts: 0,
        stage_exponents: Vec::new(),
        evaluations: 0,
    };
    let mut x = x0.clone();
    let mut cached: Option<HahnSeries> = None;
    let mut stage: Vec<(HahnSeries, HahnSeries)> = Vec::new();
    let eval = |y: &HahnSeries, report: &mut OagReport| {
        report.evaluations += 1;
        f(y)
    };

    loop {
        if report.evaluations >= cfg.budget {
            let residual = cached.as_ref().and_then(|fx| (&x - fx).leading_exponent());
            report.outcome = OagOutcome::BudgetExhausted {
                residual_exponent: residual,
            };
            return Ok(report);
        }
        let fx = match cached.take() {
            Some(v) => v,
            None => eval(&x, &mut report),
        };
        let d = (&x - &fx).abs();
        if stage.is_empty() {
            report.stage_exponents.push(d.leading_exponent());
        }
        if d.is_zero() {
            report.outcome = OagOutcome::FixedPoint {
                point: x.to_string(),
            };
            report.point = Some(x);
            return Ok(report);
        }
        let exponent = d.leading_exponent().unwrap_or(i64::MAX);
        if exponent >= cfg.target {
            report.outcome = OagOutcome::Certificate {
                point: x.to_string(),
                exponent,
            };
            report.point = Some(x);
            return Ok(report);
        }
        let ffx = eval(&fx, &mut report);
        let d_next = (&fx - &ffx).abs();
        let step = report.steps.len();
        let violation = |condition| OrderedError::SpecViolation {
            condition,
            step,
            x: x.clone(),
            d: d.clone(),
            d_next: d_next.clone(),
        };
        if d_next > d {
            return Err(violation(Condition::OContracting));
        }
        if d_next.scale(&n) > d.scale(&m) {
            return Err(violation(Condition::StrictOrbit));
        }
        report.steps.push(OagStep {
            x: x.clone(),
            d: d.clone(),
            d_next: d_next.clone(),
        });
        stage.push((x.clone(), d.scale(&widen)));

        if stage.len() >= cfg.stage_length && report.evaluations < cfg.budget {
            let denom = &(&ffx - &fx.scale(&rat(2, 1))) + &x;
            if !denom.is_zero() {
                let delta = &fx - &x;
                let z = &x - &(&delta * &delta).checked_div(&denom)?;
                let in_nest = stage.iter().all(|(c, r)| {
                    OrderBall {
                        center: c.clone(),
                        radius: r.clone(),
                    }
                    .contains(&z)
                });
                if in_nest {
                    let fz = eval(&z, &mut report);
                    if (&z - &fz).natural_value() < d.natural_value() {
                        report.restarts += 1;
                        stage.clear();
                        x = z;
                        cached = Some(fz);
                        continue;
                    }
                }
            }
            stage.clear();
        }
        x = fx;
        cached = Some(ffx);
    }
}

/// For `C` in the field with `0 < C < 1` and `v(1 − C) = v(1)`, returns a
/// rational `C′` with `C ≤ C′ < 1`.
pub fn reduce_field_ratio(c: &HahnSeries) -> Result<Rational> {
    let one = HahnSeries::constant(Rational::one(), c.truncation());
    let gap = &one - c;
    if c.signum() <= 0 || gap.signum() <= 0 || gap.natural_value() != NaturalValue::Exp(0) {
        return Err(OrderedError::InvalidFieldConstant(c.clone()));
    }
    let standard = c.coefficient(0);
    Ok((standard + Rational::one()) / rat(2, 1))
}

/// Solves with a field contraction constant by first reducing it to a
/// rational one.
pub fn solve_oag_field(
    f: &dyn Fn(&HahnSeries) -> HahnSeries,
    c: &HahnSeries,
    x0: &HahnSeries,
    trunc: i64,
) -> Result<OagReport> {
    let reduced = reduce_field_ratio(c)?;
    let m = reduced
        .numer()
        .try_into()
        .map_err(|_| OrderedError::InvalidFieldConstant(c.clone()))?;
    let n = reduced
        .denom()
        .try_into()
        .map_err(|_| OrderedError::InvalidFieldConstant(c.clone()))?;
    solve_oag(f, x0, &OagConfig::new(m, n, trunc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchGroup {
    Integers,
    Dyadic,
    Rationals,
}

impl ArchGroup {
    pub fn contains(&self, q: &Rational) -> bool {
        match self {
            ArchGroup::Integers => q.is_integer(),
            ArchGroup::Dyadic => {
                let d = q.denom();
                (d & (d - BigInt::one())).is_zero()
            }
            ArchGroup::Rationals => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AscoVerdict {
    /// The nest has a smallest ball, first seen at `depth`.
    Complete {
        depth: usize,
        witness: String,
    },
    Nonempty {
        depth: usize,
        witness: String,
    },
    /// No stabilization within the budget; `[lower, upper]` is the
    /// intersection of the probed balls.
    EmptySoFar {
        depth: usize,
        lower: String,
        upper: String,
        width: String,
    },
}

impl AscoVerdict {
    pub fn is_empty_so_far(&self) -> bool {
        matches!(self, AscoVerdict::EmptySoFar { .. })
    }
}

struct IntervalScan {
    depth: usize,
    last: (Rational, Rational),
    ended: bool,
    stabilized: bool,
    first_of_last: usize,
}

fn scan_intervals(
    group: ArchGroup,
    nest: impl IntoIterator<Item = (Rational, Rational)>,
    budget: usize,
    offset: usize,
) -> Result<IntervalScan> {
    let mut iter = nest.into_iter();
    let mut last: Option<(Rational, Rational)> = None;
    let mut depth = 0;
    let mut first_of_last = 0;
    let mut stabilized = false;
    while depth < budget {
        let Some((c, r)) = iter.next() else { break };
        let index = offset + depth;
        if r.is_negative() {
            return Err(OrderedError::NegativeRadius { index });
        }
        if !group.contains(&c) || !group.contains(&r) {
            return Err(OrderedError::NotInGroup { index });
        }
        if let Some((pc, pr)) = &last {
            let nested = match group {
                ArchGroup::Integers => {
                    let (lo, hi) = int_bounds(&c, &r);
                    let (plo, phi) = int_bounds(pc, pr);
                    lo >= plo && hi <= phi
                }
                _ => (&c - pc).abs() + &r <= *pr,
            };
            if !nested {
                return Err(OrderedError::NotNested { index });
            }
            let same = match group {
                ArchGroup::Integers => int_bounds(&c, &r) == int_bounds(pc, pr),
                _ => c == *pc && r == *pr,
            };
            stabilized = same;
            if !same {
                first_of_last = depth;
            }
        }
        last = Some((c, r));
        depth += 1;
    }
    let ended = depth < budget || iter.next().is_none();
    let last = last.ok_or(OrderedError::EmptyNest)?;
    Ok(IntervalScan {
        depth,
        last,
        ended,
        stabilized,
        first_of_last,
    })
}

fn int_bounds(c: &Rational, r: &Rational) -> (BigInt, BigInt) {
    ((c - r).ceil().to_integer(), (c + r).floor().to_integer())
}

/// Probes a nest of order balls `(center, radius)` in an archimedean group.
pub fn check_asco(
    group: ArchGroup,
    nest: impl IntoIterator<Item = (Rational, Rational)>,
    budget: usize,
) -> Result<AscoVerdict> {
    if budget == 0 {
        return Err(OrderedError::ZeroBudget);
    }
    let scan = scan_intervals(group, nest, budget, 0)?;
    let (c, r) = &scan.last;
    Ok(match group {
        ArchGroup::Integers => {
            let (lo, _) = int_bounds(c, r);
            AscoVerdict::Complete {
                depth: scan.first_of_last,
                witness: lo.to_string(),
            }
        }
        _ if scan.ended || scan.stabilized || r.is_zero() => AscoVerdict::Nonempty {
            depth: scan.depth,
            witness: c.to_string(),
        },
        _ => AscoVerdict::EmptySoFar {
            depth: scan.depth,
            lower: (c - r).to_string(),
            upper: (c + r).to_string(),
            width: (r * rat(2, 1)).to_string(),
        },
    })
}

/// Bisection nest around `√2` starting from `[1, 2]`; every center and
/// radius is dyadic.
pub fn sqrt2_bisection() -> impl Iterator<Item = (Rational, Rational)> {
    let two = rat(2, 1);
    let mut lo = rat(1, 1);
    let mut hi = rat(2, 1);
    std::iter::from_fn(move || {
        let mid = (&lo + &hi) / &two;
        let ball = (mid.clone(), (&hi - &lo) / &two);
        if &mid * &mid < two {
            lo = mid;
        } else {
            hi = mid;
        }
        Some(ball)
    })
}

/// `B_u(x, y) ⊆ B_u(x′, y′)`.
pub fn um_subset(x: &HahnSeries, y: &HahnSeries, x2: &HahnSeries, y2: &HahnSeries) -> bool {
    um_contains(x2, y2, x) && (x - y).natural_value() <= (x2 - y2).natural_value()
}

/// `B_o(g; r) ⊆ B_u(x, y)`: both endpoints lie in the convex coset.
pub fn order_in_um(ball: &OrderBall, x: &HahnSeries, y: &HahnSeries) -> bool {
    um_contains(x, y, &ball.lower()) && um_contains(x, y, &ball.upper())
}

/// `B_u(x, y) ⊆ B_o(g; r)`. The ball is `x + H` with `H` the convex
/// subgroup of values `≤ v(x − y)`; it fits iff `H` fits in `[−δ, δ]` for
/// `δ = r − |x − g|`.
pub fn um_in_order(x: &HahnSeries, y: &HahnSeries, ball: &OrderBall) -> bool {
    let delta = &ball.radius - &(x - &ball.center).abs();
    if delta.signum() < 0 {
        return false;
    }
    if x == y {
        return true;
    }
    !delta.is_zero() && (x - y).natural_value() < delta.natural_value()
}

/// `B_o(g; r) ⊆ B_o(g′; r′)`.
pub fn order_in_order(inner: &OrderBall, outer: &OrderBall) -> bool {
    &(&inner.center - &outer.center).abs() + &inner.radius <= outer.radius
}

#[derive(Clone, Debug)]
pub struct ScoscuReport {
    /// `B^μ = B_o(x_{μ+1}; |x_μ − y_μ|)`.
    pub order_balls: Vec<OrderBall>,
    /// Per `μ`: `B^μ ⊆ B_u(x_μ, y_μ)` and `B_u(x_{μ+1}, y_{μ+1}) ⊆ B^μ`.
    pub containments: Vec<(bool, bool)>,
    pub probes: usize,
    pub probe_mismatches: Vec<HahnSeries>,
    /// Probes lying in every ball.
    pub common: Vec<HahnSeries>,
}

impl ScoscuReport {
    pub fn passed(&self) -> bool {
        self.containments.iter().all(|&(a, b)| a && b) && self.probe_mismatches.is_empty()
    }
}

/// Builds the order nest `B^μ` from a strictly descending ultrametric nest
/// given by generator pairs, checks both containments, and compares the
/// two intersections on the probes. The order side of the comparison is
/// the finite shadow `{B^μ} ∪ {smallest ultrametric ball}`.
pub fn scoscu_transfer(
    nest: &[(HahnSeries, HahnSeries)],
    probes: &[HahnSeries],
) -> Result<ScoscuReport> {
    if nest.is_empty() {
        return Err(OrderedError::EmptyNest);
    }
    for (i, w) in nest.windows(2).enumerate() {
        let (x, y) = &w[0];
        let (x2, y2) = &w[1];
        if (x2 - y2).natural_value() >= (x - y).natural_value() {
            return Err(OrderedError::NotStrict { index: i + 1 });
        }
        if !um_contains(x, y, x2) {
            return Err(OrderedError::NotNested { index: i + 1 });
        }
    }
    let mut order_balls = Vec::new();
    let mut containments = Vec::new();
    for w in nest.windows(2) {
        let (x, y) = &w[0];
        let (x2, y2) = &w[1];
        let ball = OrderBall {
            center: x2.clone(),
            radius: (x - y).abs(),
        };
        containments.push((order_in_um(&ball, x, y), um_in_order(x2, y2, &ball)));
        order_balls.push(ball);
    }
    let (xl, yl) = nest.last().unwrap();
    let mut report = ScoscuReport {
        order_balls,
        containments,
        probes: probes.len(),
        probe_mismatches: Vec::new(),
        common: Vec::new(),
    };
    for z in probes {
        let in_um = nest.iter().all(|(x, y)| um_contains(x, y, z));
        let in_order = report.order_balls.iter().all(|b| b.contains(z)) && um_contains(xl, yl, z);
        if in_um != in_order {
            report.probe_mismatches.push(z.clone());
        } else if in_um {
            report.common.push(z.clone());
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BallTag {
    Ultrametric,
    RationalOrder,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HybridBall {
    Ultrametric { x: HahnSeries, y: HahnSeries },
    RationalOrder { q: Rational, r: Rational },
}

impl HybridBall {
    pub fn tag(&self) -> BallTag {
        match self {
            HybridBall::Ultrametric { .. } => BallTag::Ultrametric,
            HybridBall::RationalOrder { .. } => BallTag::RationalOrder,
        }
    }

    fn as_order(&self, trunc: i64) -> Option<OrderBall> {
        match self {
            HybridBall::RationalOrder { q, r } => Some(OrderBall {
                center: HahnSeries::constant(q.clone(), trunc),
                radius: HahnSeries::constant(r.clone(), trunc),
            }),
            HybridBall::Ultrametric { .. } => None,
        }
    }

    pub fn contains(&self, z: &HahnSeries) -> bool {
        match self {
            HybridBall::Ultrametric { x, y } => um_contains(x, y, z),
            HybridBall::RationalOrder { .. } => self.as_order(z.truncation()).unwrap().contains(z),
        }
    }

    pub fn is_subset(&self, other: &HybridBall, trunc: i64) -> bool {
        match (self, other) {
            (HybridBall::Ultrametric { x, y }, HybridBall::Ultrametric { x: x2, y: y2 }) => {
                um_subset(x, y, x2, y2)
            }
            (HybridBall::Ultrametric { x, y }, HybridBall::RationalOrder { .. }) => {
                um_in_order(x, y, &other.as_order(trunc).unwrap())
            }
            (HybridBall::RationalOrder { .. }, HybridBall::Ultrametric { x, y }) => {
                order_in_um(&self.as_order(trunc).unwrap(), x, y)
            }
            (HybridBall::RationalOrder { .. }, HybridBall::RationalOrder { .. }) => order_in_order(
                &self.as_order(trunc).unwrap(),
                &other.as_order(trunc).unwrap(),
            ),
        }
    }
}

impl fmt::Display for HybridBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HybridBall::Ultrametric { x, y } => write!(f, "B_u({x}, {y})"),
            HybridBall::RationalOrder { q, r } => write!(f, "B_o({q}; {r})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientField {
    Rationals,
    Dyadic,
    /// Real coefficients, represented only symbolically.
    RealSymbolic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HybridVerdict {
    /// Witness lies in every probed ball; ultrametric witnesses hold up to
    /// the truncation bound.
    Nonempty {
        cofinal: BallTag,
        tail_start: usize,
        witness: String,
        truncated: bool,
    },
    EmptySoFar {
        cofinal: BallTag,
        tail_start: usize,
        depth: usize,
        lower: String,
        upper: String,
        width: String,
    },
    /// The rational tail shrinks without stabilizing; with real
    /// coefficients its limit exists but is not representable.
    SymbolicNonempty {
        cofinal: BallTag,
        tail_start: usize,
        lower: String,
        upper: String,
    },
}

/// Locates a cofinal subnest inside one of the two families and applies
/// the matching completeness check.
pub fn check_hybrid(
    field: CoefficientField,
    nest: impl IntoIterator<Item = HybridBall>,
    budget: usize,
    trunc: i64,
) -> Result<HybridVerdict> {
    if budget == 0 {
        return Err(OrderedError::ZeroBudget);
    }
    let balls: Vec<HybridBall> = nest.into_iter().take(budget + 1).collect();
    let exhausted = balls.len() > budget;
    let balls = &balls[..balls.len().min(budget)];
    if balls.is_empty() {
        return Err(OrderedError::EmptyNest);
    }
    for (i, b) in balls.iter().enumerate() {
        if let HybridBall::RationalOrder { q, r } = b {
            if !r.is_positive() {
                return Err(OrderedError::NegativeRadius { index: i });
            }
            if field == CoefficientField::Dyadic
                && !(ArchGroup::Dyadic.contains(q) && ArchGroup::Dyadic.contains(r))
            {
                return Err(OrderedError::NotInGroup { index: i });
            }
        }
        if i > 0 && !b.is_subset(&balls[i - 1], trunc) {
            return Err(OrderedError::NotNested { index: i });
        }
    }
    let cofinal = balls.last().unwrap().tag();
    let tail_start = balls
        .iter()
        .rposition(|b| b.tag() != cofinal)
        .map_or(0, |i| i + 1);
    let verify = |w: &HahnSeries| balls.iter().all(|b| b.contains(w));
    match cofinal {
        BallTag::Ultrametric => {
            let HybridBall::Ultrametric { x, .. } = balls.last().unwrap() else {
                unreachable!()
            };
            let witness = x.with_truncation(trunc);
            debug_assert!(verify(&witness));
            Ok(HybridVerdict::Nonempty {
                cofinal,
                tail_start,
                witness: witness.to_string(),
                truncated: true,
            })
        }
        BallTag::RationalOrder => {
            let group = if field == CoefficientField::Dyadic {
                ArchGroup::Dyadic
            } else {
                ArchGroup::Rationals
            };
            let intervals: Vec<(Rational, Rational)> = balls[tail_start..]
                .iter()
                .map(|b| match b {
                    HybridBall::RationalOrder { q, r } => (q.clone(), r.clone()),
                    HybridBall::Ultrametric { .. } => unreachable!(),
                })
                .collect();
            let len = intervals.len();
            let scan = scan_intervals(group, intervals, len, tail_start)?;
            let (c, r) = &scan.last;
            let ended = !exhausted;
            if ended || scan.stabilized {
                let witness = HahnSeries::constant(c.clone(), trunc);
                debug_assert!(verify(&witness));
                return Ok(HybridVerdict::Nonempty {
                    cofinal,
                    tail_start,
                    witness: witness.to_string(),
                    truncated: false,
                });
            }
            let (lower, upper) = ((c - r).to_string(), (c + r).to_string());
            Ok(match field {
                CoefficientField::RealSymbolic => HybridVerdict::SymbolicNonempty {
                    cofinal,
                    tail_start,
                    lower,
                    upper,
                },
                _ => HybridVerdict::EmptySoFar {
                    cofinal,
                    tail_start,
                    depth: scan.depth + tail_start,
                    lower,
                    upper,
                    width: (r * rat(2, 1)).to_string(),
                },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hahn::DEFAULT_TRUNCATION as T;

    fn s(text: &str) -> HahnSeries {
        HahnSeries::parse(text, T).unwrap()
    }

    #[test]
    fn oag_affine_example() {
        let map = AffineSeriesMap::new(s("1/2"), s("t"));
        let report = solve_oag(
            &|x| map.apply(x),
            &HahnSeries::zero(T),
            &OagConfig::new(1, 2, T),
        )
        .unwrap();
        assert_eq!(report.point, Some(s("2t")));
        assert!(matches!(report.outcome, OagOutcome::FixedPoint { .. }));
        for step in &report.steps {
            assert!(step.d_next <= step.d);
            assert!(step.d_next.scale(&rat(2, 1)) <= step.d);
        }
    }

    #[test]
    fn oag_constant_map() {
        let c = s("5 - t^3");
        let report = solve_oag(&|_| c.clone(), &s("1"), &OagConfig::new(1, 2, T)).unwrap();
        assert_eq!(report.point, Some(c));
        assert_eq!(report.steps.len(), 1);
    }

    #[test]
    fn oag_translation_violates() {
        let err = solve_oag(
            &|x| x + &s("t"),
            &HahnSeries::zero(T),
            &OagConfig::new(1, 2, T),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            OrderedError::SpecViolation {
                condition: Condition::StrictOrbit,
                step: 0,
                ..
            }
        ));
        assert!(matches!(
            solve_oag(
                &|x| x.clone(),
                &HahnSeries::zero(T),
                &OagConfig::new(2, 2, T)
            ),
            Err(OrderedError::InvalidRatio { .. })
        ));
    }

    #[test]
    fn oag_without_restarts_gives_certificate_or_budget() {
        let map = AffineSeriesMap::new(s("t"), s("1"));
        let cfg = OagConfig {
            stage_length: usize::MAX,
            ..OagConfig::new(1, 2, 8)
        };
        let report = solve_oag(&|x| map.apply(x), &HahnSeries::zero(8), &cfg).unwrap();
        // x_k = 1 + t + ... + t^{k-1}; d = t^k reaches the target
        assert!(matches!(
            report.outcome,
            OagOutcome::FixedPoint { .. } | OagOutcome::Certificate { .. }
        ));
    }

    #[test]
    fn field_ratio_reduction() {
        assert_eq!(reduce_field_ratio(&s("1/2 + t")).unwrap(), rat(3, 4));
        assert!(reduce_field_ratio(&s("1 - t")).is_err());
        assert!(reduce_field_ratio(&s("t")).unwrap() < rat(1, 1));
        assert!(reduce_field_ratio(&s("3/2")).is_err());
        let map = AffineSeriesMap::new(s("1/2 + t"), s("1"));
        let report =
            solve_oag_field(&|x| map.apply(x), &s("1/2 + t"), &HahnSeries::zero(T), T).unwrap();
        let z = report.point.unwrap();
        assert_eq!(map.apply(&z), z);
    }

    #[test]
    fn asco_examples() {
        let v = check_asco(
            ArchGroup::Integers,
            [
                (rat(0, 1), rat(5, 1)),
                (rat(1, 1), rat(2, 1)),
                (rat(1, 1), rat(2, 1)),
            ],
            10,
        )
        .unwrap();
        assert_eq!(
            v,
            AscoVerdict::Complete {
                depth: 1,
                witness: "-1".into()
            }
        );

        let v = check_asco(ArchGroup::Rationals, sqrt2_bisection(), 40).unwrap();
        let AscoVerdict::EmptySoFar { depth, width, .. } = v else {
            panic!("{v:?}")
        };
        assert_eq!(depth, 40);
        assert!(
            width.parse::<Rational>().unwrap() < Rational::new(1.into(), BigInt::from(1u64 << 38))
        );

        let v = check_asco(
            ArchGroup::Rationals,
            [(rat(3, 2), rat(1, 1)), (rat(3, 2), rat(0, 1))],
            10,
        )
        .unwrap();
        assert_eq!(
            v,
            AscoVerdict::Nonempty {
                depth: 2,
                witness: "3/2".into()
            }
        );
        assert!(check_asco(ArchGroup::Integers, [(rat(1, 2), rat(1, 1))], 3).is_err());
        assert!(check_asco(
            ArchGroup::Rationals,
            [(rat(0, 1), rat(1, 1)), (rat(1, 1), rat(1, 1))],
            3
        )
        .is_err());
    }

    fn partial_sum(k: i64) -> HahnSeries {
        HahnSeries::from_terms((1..=k).map(|i| (i, rat(1, 1))).collect(), T)
    }

    #[test]
    fn scoscu_partial_sums() {
        let nest: Vec<_> = (1..=6)
            .map(|k| {
                (
                    partial_sum(k),
                    &partial_sum(k) + &HahnSeries::monomial(rat(1, 1), k, T),
                )
            })
            .collect();
        let full = partial_sum(T - 1);
        let probes = vec![
            full.clone(),
            partial_sum(3),
            s("t + t^2 + t^3 + t^4 + t^5 + t^6 + 100t^7"),
            s("1"),
        ];
        let report = scoscu_transfer(&nest, &probes).unwrap();
        assert!(report.passed());
        assert_eq!(report.order_balls.len(), 5);
        assert!(report.common.contains(&full));
        assert!(!report.common.contains(&s("1")));
    }

    #[test]
    fn scoscu_degenerate_cases() {
        let report = scoscu_transfer(&[(s("0"), s("1"))], &[s("t")]).unwrap();
        assert!(report.passed() && report.order_balls.is_empty());
        let err = scoscu_transfer(&[(s("0"), s("t")), (s("0"), s("2t"))], &[]).unwrap_err();
        assert_eq!(err, OrderedError::NotStrict { index: 1 });
    }

    #[test]
    fn hybrid_examples() {
        let um: Vec<_> = (1..=6)
            .map(|k| HybridBall::Ultrametric {
                x: partial_sum(k),
                y: &partial_sum(k) + &HahnSeries::monomial(rat(1, 1), k, T),
            })
            .collect();
        let v = check_hybrid(CoefficientField::Rationals, um, 50, T).unwrap();
        assert!(matches!(
            v,
            HybridVerdict::Nonempty {
                cofinal: BallTag::Ultrametric,
                truncated: true,
                ..
            }
        ));

        let sqrt = sqrt2_bisection().map(|(q, r)| HybridBall::RationalOrder { q, r });
        let v = check_hybrid(CoefficientField::Rationals, sqrt, 40, T).unwrap();
        assert!(matches!(
            v,
            HybridVerdict::EmptySoFar {
                cofinal: BallTag::RationalOrder,
                depth: 40,
                ..
            }
        ));
        let sqrt = sqrt2_bisection().map(|(q, r)| HybridBall::RationalOrder { q, r });
        let v = check_hybrid(CoefficientField::RealSymbolic, sqrt, 40, T).unwrap();
        assert!(matches!(v, HybridVerdict::SymbolicNonempty { .. }));

        assert!(check_hybrid(CoefficientField::Rationals, Vec::new(), 10, T).is_err());
        let mixed = vec![
            HybridBall::Ultrametric {
                x: s("0"),
                y: s("1"),
            },
            HybridBall::RationalOrder {
                q: rat(1, 1),
                r: rat(1, 1),
            },
            HybridBall::RationalOrder {
                q: rat(3, 2),
                r: rat(1, 4),
            },
        ];
        let tail = std::iter::repeat(HybridBall::RationalOrder {
            q: rat(3, 2),
            r: rat(1, 4),
        });
        let v = check_hybrid(
            CoefficientField::Rationals,
            mixed.into_iter().chain(tail),
            20,
            T,
        )
        .unwrap();
        assert_eq!(
            v,
            HybridVerdict::Nonempty {
                cofinal: BallTag::RationalOrder,
                tail_start: 1,
                witness: "3/2".into(),
                truncated: false
            }
        );
    }

    #[test]
    fn hybrid_subset_relations() {
        let u = HybridBall::Ultrametric {
            x: s("0"),
            y: s("t"),
        };
        let o = HybridBall::RationalOrder {
            q: rat(0, 1),
            r: rat(1, 1),
        };
        assert!(u.is_subset(&o, T));
        assert!(!o.is_subset(&u, T));
        let wide = HybridBall::Ultrametric {
            x: s("0"),
            y: s("1"),
        };
        assert!(o.is_subset(&wide, T));
        assert!(!wide.is_subset(&o, T));
    }
}
