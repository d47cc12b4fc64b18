//! Ball spaces, nests, f-contracting balls and the generic fixed point
//! solvers.
//!
//! A ball space is a ground set together with a nonempty collection of
//! nonempty subsets called balls. Finite spaces enumerate their balls
//! explicitly and identify balls extensionally; presented spaces expose a
//! membership oracle over `u64` point and ball identifiers and identify balls
//! by id.
//!
//! The solvers replace the maximality arguments of the existence proofs with
//! deterministic greedy constructions: every choice among candidate balls or
//! points is broken by cardinality and then by the sorted list of point
//! indices, so runs are reproducible.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::pointset::PointSet;
use crate::report::{Condition, ConditionReport, Witness};

/// Largest ground set for which f-nests are enumerated through every
/// f-closed generating set.
pub const EXHAUSTIVE_NEST_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BallSpaceError {
    #[error("ball space has no balls")]
    NoBalls,
    #[error("ball #{0} is empty")]
    EmptyBall(usize),
    #[error("ball #{index} contains point {point}, outside the ground set")]
    PointOutOfRange { index: usize, point: usize },
    #[error("{0:?} is not a ball of the space")]
    InvalidBall(PointSet),
    #[error("operation requires a finite ball space")]
    UnsupportedMode,
    #[error("self-map has {got} entries, expected {expected}")]
    MapLength { got: usize, expected: usize },
    #[error("self-map sends {point} to {image}, outside the ground set")]
    MapOutOfRange { point: usize, image: usize },
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("empty nest")]
    EmptyNest,
    #[error("not a nest: {0:?} and {1:?} are incomparable")]
    NotANest(PointSet, PointSet),
    #[error("balls {0:?} have empty preimage")]
    EmptyPreimage(Vec<PointSet>),
    #[error("chooser returned {0}, which is outside the nest intersection")]
    ContractViolation(u64),
}

pub type Result<T> = std::result::Result<T, BallSpaceError>;

/// A finite ball space with balls stored extensionally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteBallSpace {
    names: Vec<String>,
    balls: Vec<PointSet>,
}

impl FiniteBallSpace {
    /// Validates and deduplicates the ball collection. Ball order is the
    /// order of first occurrence.
    pub fn new(names: Vec<String>, balls: Vec<PointSet>) -> Result<Self> {
        if balls.is_empty() {
            return Err(BallSpaceError::NoBalls);
        }
        let n = names.len();
        let mut seen = HashSet::new();
        let mut unique = Vec::with_capacity(balls.len());
        for (index, ball) in balls.into_iter().enumerate() {
            if ball.is_empty() {
                return Err(BallSpaceError::EmptyBall(index));
            }
            if let Some(point) = ball.iter().find(|&p| p >= n) {
                return Err(BallSpaceError::PointOutOfRange { index, point });
            }
            if seen.insert(ball.clone()) {
                unique.push(ball);
            }
        }
        Ok(Self {
            names,
            balls: unique,
        })
    }

    /// Points named `a, b, c, ..` (then `p26, p27, ..`).
    pub fn with_default_names(n: usize, balls: Vec<PointSet>) -> Result<Self> {
        Self::new(default_names(n), balls)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, point: usize) -> &str {
        &self.names[point]
    }

    pub fn balls(&self) -> &[PointSet] {
        &self.balls
    }

    pub fn ground(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn index_of(&self, ball: &PointSet) -> Option<usize> {
        self.balls.iter().position(|b| b == ball)
    }

    pub fn is_ball(&self, set: &PointSet) -> bool {
        self.index_of(set).is_some()
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Renders a set with point names, e.g. `{b, c}`.
    pub fn show(&self, set: &PointSet) -> String {
        let parts: Vec<&str> = set.iter().map(|p| self.name(p)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("p{i}")
            }
        })
        .collect()
}

/// Membership oracle for a ball space that cannot be enumerated.
pub trait BallOracle: Send + Sync {
    fn contains(&self, ball: u64, point: u64) -> bool;

    /// Enumeration of the ground set; may be infinite.
    fn points(&self) -> Box<dyn Iterator<Item = u64> + '_>;

    /// Enumeration of ball ids; may be infinite.
    fn ball_ids(&self) -> Box<dyn Iterator<Item = u64> + '_>;

    fn describe(&self) -> String {
        "presented ball space".to_string()
    }
}

/// The natural numbers with the tail balls `B_n = { m : m ≥ n }`.
#[derive(Clone, Copy, Debug, Default)]
pub struct TailSegments;

impl BallOracle for TailSegments {
    fn contains(&self, ball: u64, point: u64) -> bool {
        point >= ball
    }

    fn points(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        Box::new(0..)
    }

    fn ball_ids(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        Box::new(0..)
    }

    fn describe(&self) -> String {
        "naturals with tail balls {m : m >= n}".to_string()
    }
}

#[derive(Clone)]
pub enum BallSpace {
    Finite(FiniteBallSpace),
    Presented(Arc<dyn BallOracle>),
}

impl BallSpace {
    pub fn finite(&self) -> Result<&FiniteBallSpace> {
        match self {
            BallSpace::Finite(s) => Ok(s),
            BallSpace::Presented(_) => Err(BallSpaceError::UnsupportedMode),
        }
    }
}

impl fmt::Debug for BallSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallSpace::Finite(s) => s.fmt(f),
            BallSpace::Presented(o) => write!(f, "Presented({})", o.describe()),
        }
    }
}

impl From<FiniteBallSpace> for BallSpace {
    fn from(s: FiniteBallSpace) -> Self {
        BallSpace::Finite(s)
    }
}

pub type PointFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// A total self-map of the ground set.
#[derive(Clone)]
pub enum SelfMap {
    Table(Vec<usize>),
    Oracle(PointFn),
}

impl SelfMap {
    /// Resolves the map to a table on `{0, .., n-1}`, checking totality.
    pub fn table(&self, n: usize) -> Result<Vec<usize>> {
        let table: Vec<usize> = match self {
            SelfMap::Table(t) => {
                if t.len() != n {
                    return Err(BallSpaceError::MapLength {
                        got: t.len(),
                        expected: n,
                    });
                }
                t.clone()
            }
            SelfMap::Oracle(f) => (0..n).map(|i| f(i as u64) as usize).collect(),
        };
        if let Some((point, &image)) = table.iter().enumerate().find(|(_, &y)| y >= n) {
            return Err(BallSpaceError::MapOutOfRange { point, image });
        }
        Ok(table)
    }

    pub fn apply(&self, x: u64) -> u64 {
        match self {
            SelfMap::Table(t) => t[x as usize] as u64,
            SelfMap::Oracle(f) => f(x),
        }
    }
}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelfMap::Table(t) => f.debug_tuple("Table").field(t).finish(),
            SelfMap::Oracle(_) => f.write_str("Oracle(..)"),
        }
    }
}

/// `x ↦ B_x`, as ball indices (finite) or ball ids (presented).
#[derive(Clone)]
pub enum BallAssignment {
    Table(Vec<usize>),
    Oracle(PointFn),
}

impl BallAssignment {
    /// Builds a table assignment from extensional balls.
    pub fn from_sets(space: &FiniteBallSpace, sets: &[PointSet]) -> Result<Self> {
        sets.iter()
            .map(|s| {
                space
                    .index_of(s)
                    .ok_or_else(|| BallSpaceError::InvalidBall(s.clone()))
            })
            .collect::<Result<Vec<_>>>()
            .map(BallAssignment::Table)
    }

    /// Resolves the assignment to the assigned balls of a finite space.
    pub fn sets(&self, space: &FiniteBallSpace) -> Result<Vec<PointSet>> {
        let n = space.len();
        let indices: Vec<usize> = match self {
            BallAssignment::Table(t) => {
                if t.len() != n {
                    return Err(BallSpaceError::InvalidAssignment(format!(
                        "defined on {} points, space has {n}",
                        t.len()
                    )));
                }
                t.clone()
            }
            BallAssignment::Oracle(a) => (0..n).map(|i| a(i as u64) as usize).collect(),
        };
        indices
            .iter()
            .enumerate()
            .map(|(x, &b)| {
                space.balls().get(b).cloned().ok_or_else(|| {
                    BallSpaceError::InvalidAssignment(format!(
                        "point {} assigned to ball #{b}, which does not exist",
                        space.name(x)
                    ))
                })
            })
            .collect()
    }

    pub fn ball_id(&self, x: u64) -> u64 {
        match self {
            BallAssignment::Table(t) => t[x as usize] as u64,
            BallAssignment::Oracle(a) => a(x),
        }
    }
}

impl fmt::Debug for BallAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallAssignment::Table(t) => f.debug_tuple("Table").field(t).finish(),
            BallAssignment::Oracle(_) => f.write_str("Oracle(..)"),
        }
    }
}

/// A nonempty chain of balls, stored largest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nest {
    chain: Vec<PointSet>,
    provenance: String,
}

impl Nest {
    /// Sorts the balls by reverse inclusion and checks that they form a
    /// chain. Duplicates are kept.
    pub fn new(mut balls: Vec<PointSet>) -> Result<Self> {
        if balls.is_empty() {
            return Err(BallSpaceError::EmptyNest);
        }
        balls.sort_by_key(|b| std::cmp::Reverse(b.len()));
        for pair in balls.windows(2) {
            if !pair[1].is_subset(&pair[0]) {
                return Err(BallSpaceError::NotANest(pair[0].clone(), pair[1].clone()));
            }
        }
        Ok(Self {
            chain: balls,
            provenance: String::new(),
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn balls(&self) -> &[PointSet] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn minimum(&self) -> &PointSet {
        self.chain.last().expect("nest is nonempty")
    }

    pub fn intersection(&self) -> PointSet {
        let mut it = self.chain.iter();
        let first = it.next().expect("nest is nonempty").clone();
        it.fold(first, |acc, b| acc.intersection(b))
    }

    pub fn contains_point(&self, point: usize) -> bool {
        self.chain.iter().all(|b| b.contains(point))
    }
}

/// The nest sorted strictly descending with duplicates removed. For a finite
/// nest this is a cofinal well ordered subnest with the same intersection.
pub fn cofinal_subnest(nest: &Nest) -> Nest {
    let mut chain: Vec<PointSet> = Vec::with_capacity(nest.len());
    for ball in nest.balls() {
        if chain.last() != Some(ball) {
            chain.push(ball.clone());
        }
    }
    let out = Nest {
        chain,
        provenance: nest.provenance.clone(),
    };
    assert_eq!(
        out.intersection(),
        nest.intersection(),
        "cofinal subnest changed the intersection"
    );
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Outcome {
    FixedPoint {
        point: usize,
    },
    HypothesisViolated {
        condition: Condition,
        witness: Witness,
    },
    BudgetExhausted,
}

/// Result of a fixed point solver run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub outcome: Outcome,
    /// The terminal nest of the construction, when one was built.
    pub nest: Option<Nest>,
    /// Descent steps (nest solvers) or map evaluations (orbit solvers).
    pub iterations: usize,
}

impl FixedPointReport {
    pub fn fixed_point(&self) -> Option<usize> {
        match self.outcome {
            Outcome::FixedPoint { point } => Some(point),
            _ => None,
        }
    }

    pub fn violated(&self) -> Option<Condition> {
        match &self.outcome {
            Outcome::HypothesisViolated { condition, .. } => Some(*condition),
            _ => None,
        }
    }

    pub(crate) fn found(point: usize, nest: Option<Nest>, iterations: usize) -> Self {
        Self {
            outcome: Outcome::FixedPoint { point },
            nest,
            iterations,
        }
    }

    pub(crate) fn violated_with(
        condition: Condition,
        witness: Witness,
        nest: Option<Nest>,
        iterations: usize,
    ) -> Self {
        Self {
            outcome: Outcome::HypothesisViolated { condition, witness },
            nest,
            iterations,
        }
    }

    pub(crate) fn exhausted(nest: Option<Nest>, iterations: usize) -> Self {
        Self {
            outcome: Outcome::BudgetExhausted,
            nest,
            iterations,
        }
    }
}

/// `true` iff `ball` is a singleton `{x}` with `fx = x`, or `f(ball) ⊊ ball`.
pub fn contracting(ball: &PointSet, f: &[usize]) -> bool {
    if let Some(x) = ball.single() {
        return f[x] == x;
    }
    ball.image(f).is_proper_subset(ball)
}

pub fn is_f_contracting(space: &BallSpace, f: &SelfMap, ball: &PointSet) -> Result<bool> {
    let space = space.finite()?;
    let table = f.table(space.len())?;
    if !space.is_ball(ball) {
        return Err(BallSpaceError::InvalidBall(ball.clone()));
    }
    Ok(contracting(ball, &table))
}

/// Lexicographic comparison key used for all deterministic choices:
/// larger cardinality first, then smaller sorted members.
fn largest_first(a: &PointSet, b: &PointSet) -> std::cmp::Ordering {
    b.len()
        .cmp(&a.len())
        .then_with(|| a.tie_key().1.cmp(&b.tie_key().1))
}

/// All maximal chains of `balls` under inclusion, each largest first.
fn maximal_chains(balls: &[PointSet]) -> Vec<Vec<usize>> {
    let n = balls.len();
    // below[i]: balls immediately below ball i (covers in the Hasse diagram)
    let strictly_below = |i: usize, j: usize| balls[j].is_proper_subset(&balls[i]);
    let mut covers: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if strictly_below(i, j) && !(0..n).any(|k| strictly_below(i, k) && strictly_below(k, j))
            {
                covers[i].push(j);
            }
        }
    }
    let tops: Vec<usize> = (0..n)
        .filter(|&i| !(0..n).any(|k| strictly_below(k, i)))
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = tops.into_iter().map(|t| vec![t]).collect();
    while let Some(path) = stack.pop() {
        let last = *path.last().expect("nonempty path");
        if covers[last].is_empty() {
            out.push(path);
        } else {
            for &c in &covers[last] {
                let mut next = path.clone();
                next.push(c);
                stack.push(next);
            }
        }
    }
    out
}

struct Resolved<'a> {
    space: &'a FiniteBallSpace,
    f: Vec<usize>,
}

fn resolve<'a>(space: &'a BallSpace, f: &SelfMap) -> Result<Resolved<'a>> {
    let space = space.finite()?;
    let f = f.table(space.len())?;
    Ok(Resolved { space, f })
}

/// Checks (C1)–(C3) by exhaustive enumeration.
///
/// (C3) is evaluated on every maximal chain of f-contracting balls; every
/// nest is contained in one, and the intersection only shrinks along it.
pub fn check_c_conditions(space: &BallSpace, f: &SelfMap) -> Result<ConditionReport> {
    let Resolved { space, f } = resolve(space, f)?;
    Ok(c_conditions(space, &f))
}

pub(crate) fn c_conditions(space: &FiniteBallSpace, f: &[usize]) -> ConditionReport {
    let contracting_balls: Vec<PointSet> = space
        .balls()
        .iter()
        .filter(|b| contracting(b, f))
        .cloned()
        .collect();
    let mut report = ConditionReport::new();

    report.record(
        Condition::C1,
        contracting_balls
            .is_empty()
            .then(|| Witness::Message("no ball is f-contracting".to_string())),
    );

    let c2 = contracting_balls.iter().find(|b| {
        let image = b.image(f);
        !contracting_balls.iter().any(|c| c.is_subset(&image))
    });
    report.record(Condition::C2, c2.cloned().map(Witness::Ball));

    let mut c3 = None;
    'chains: for chain in maximal_chains(&contracting_balls) {
        let mut meet = space.ground();
        let mut prefix = Vec::new();
        for &i in &chain {
            meet = meet.intersection(&contracting_balls[i]);
            prefix.push(contracting_balls[i].clone());
            if !contracting_balls.iter().any(|c| c.is_subset(&meet)) {
                c3 = Some(Witness::Nest(prefix));
                break 'chains;
            }
        }
    }
    report.record(Condition::C3, c3);
    report
}

/// Checks (CU1)–(CU3) by exhaustive enumeration.
pub fn check_cu_conditions(space: &BallSpace, f: &SelfMap) -> Result<ConditionReport> {
    let Resolved { space, f } = resolve(space, f)?;
    Ok(cu_conditions(space, &f))
}

pub(crate) fn cu_conditions(space: &FiniteBallSpace, f: &[usize]) -> ConditionReport {
    let ground = space.ground();
    let mut report = ConditionReport::new();
    let cu1 = if !space.is_ball(&ground) {
        Some(Witness::Message("the ground set is not a ball".to_string()))
    } else if !contracting(&ground, f) {
        Some(Witness::Ball(ground.clone()))
    } else {
        None
    };
    report.record(Condition::CU1, cu1);

    let contracting_balls: Vec<PointSet> = space
        .balls()
        .iter()
        .filter(|b| contracting(b, f))
        .cloned()
        .collect();
    let cu2 = contracting_balls.iter().find(|b| {
        let image = b.image(f);
        !(space.is_ball(&image) && contracting(&image, f))
    });
    report.record(Condition::CU2, cu2.cloned().map(Witness::Ball));

    let mut cu3 = None;
    'chains: for chain in maximal_chains(&contracting_balls) {
        let mut meet = ground.clone();
        let mut prefix = Vec::new();
        for &i in &chain {
            meet = meet.intersection(&contracting_balls[i]);
            prefix.push(contracting_balls[i].clone());
            if !(space.is_ball(&meet) && contracting(&meet, f)) {
                cu3 = Some(Witness::Nest(prefix));
                break 'chains;
            }
        }
    }
    report.record(Condition::CU3, cu3);
    report
}

/// Greedy nest construction for the existence theorem under (C1)–(C3).
///
/// Starts from the largest f-contracting ball and repeatedly descends into
/// the largest f-contracting ball contained in the image of the current
/// minimum, until the minimum is a singleton fixed point. In a finite space
/// the intersection of the nest built so far is its minimum, so the (C3)
/// step coincides with the (C2) step.
pub fn solve_nfpt1(space: &BallSpace, f: &SelfMap, budget: usize) -> Result<FixedPointReport> {
    if budget == 0 {
        return Err(BallSpaceError::ZeroBudget);
    }
    let Resolved { space, f } = resolve(space, f)?;
    Ok(nfpt1(space, &f, budget))
}

pub(crate) fn nfpt1(space: &FiniteBallSpace, f: &[usize], budget: usize) -> FixedPointReport {
    let pick = |candidates: Vec<&PointSet>| {
        candidates
            .into_iter()
            .min_by(|a, b| largest_first(a, b))
            .cloned()
    };
    let all: Vec<&PointSet> = space.balls().iter().filter(|b| contracting(b, f)).collect();
    let Some(start) = pick(all) else {
        return FixedPointReport::violated_with(
            Condition::C1,
            Witness::Message("no ball is f-contracting".to_string()),
            None,
            0,
        );
    };
    let mut chain = vec![start];
    let mut steps = 0;
    loop {
        let current = chain.last().expect("chain is nonempty").clone();
        if let Some(x) = current.single() {
            if f[x] == x {
                let nest = Nest::new(chain)
                    .expect("descent keeps a chain")
                    .with_provenance("nfpt1");
                return FixedPointReport::found(x, Some(nest), steps);
            }
        }
        if steps >= budget {
            return FixedPointReport::exhausted(Nest::new(chain).ok(), steps);
        }
        let image = current.image(f);
        let candidates: Vec<&PointSet> = space
            .balls()
            .iter()
            .filter(|b| b.is_subset(&image) && contracting(b, f))
            .collect();
        match pick(candidates) {
            Some(next) => {
                chain.push(next);
                steps += 1;
            }
            None => {
                return FixedPointReport::violated_with(
                    Condition::C2,
                    Witness::Ball(current),
                    Nest::new(chain).ok(),
                    steps,
                )
            }
        }
    }
}

/// The descending iteration `B_0 = X`, `B_{ν+1} = f(B_ν)` for the
/// uniqueness theorem under (CU1)–(CU3).
///
/// Every stage is checked to be an f-contracting ball; a failure reports the
/// violated condition with the offending stage. On success the unique fixed
/// point is confirmed by a scan of all points.
pub fn solve_nfpt2(space: &BallSpace, f: &SelfMap, budget: usize) -> Result<FixedPointReport> {
    if budget == 0 {
        return Err(BallSpaceError::ZeroBudget);
    }
    let Resolved { space, f } = resolve(space, f)?;
    Ok(nfpt2(space, &f, budget))
}

pub(crate) fn nfpt2(space: &FiniteBallSpace, f: &[usize], budget: usize) -> FixedPointReport {
    let mut stage = space.ground();
    let mut chain: Vec<PointSet> = Vec::new();
    let mut steps = 0;
    loop {
        let condition = if steps == 0 {
            Condition::CU1
        } else {
            Condition::CU2
        };
        if !space.is_ball(&stage) || !contracting(&stage, f) {
            let witness = Witness::Message(format!("stage {steps}: {}", space.show(&stage)));
            return FixedPointReport::violated_with(
                condition,
                witness,
                Nest::new(chain).ok(),
                steps,
            );
        }
        chain.push(stage.clone());
        let next = stage.image(f);
        if next == stage {
            let x = stage
                .single()
                .expect("an f-contracting ball with f(B) = B is a singleton");
            let others: Vec<usize> = (0..space.len()).filter(|&y| y != x && f[y] == y).collect();
            assert!(
                others.is_empty(),
                "fixed points {others:?} escaped the descending stages"
            );
            let nest = Nest::new(chain)
                .expect("stages descend")
                .with_provenance("nfpt2");
            return FixedPointReport::found(x, Some(nest), steps);
        }
        if steps >= budget {
            return FixedPointReport::exhausted(Nest::new(chain).ok(), steps);
        }
        stage = next;
        steps += 1;
    }
}

/// Forward orbit closure `{x, fx, f²x, ..}` of every point.
fn orbit_closures(f: &[usize]) -> Vec<PointSet> {
    (0..f.len())
        .map(|x| {
            let mut s = PointSet::new();
            let mut y = x;
            while !s.contains(y) {
                s.insert(y);
                y = f[y];
            }
            s
        })
        .collect()
}

/// Every nonempty f-closed generating set `S` whose assigned balls form a
/// chain, together with that chain (deduplicated, largest first).
///
/// For ground sets above [`EXHAUSTIVE_NEST_LIMIT`] only the single-orbit
/// closures are returned. When `B_{fx} ⊆ B_x` holds these realise every
/// possible intersection of an f-nest: the minimum of any f-nest is `B_w`
/// for some generator `w`, and the orbit closure of `w` has constant ball.
pub(crate) fn f_nests(f: &[usize], assigned: &[PointSet]) -> Vec<(PointSet, Vec<PointSet>)> {
    let closures = orbit_closures(f);
    let generating: Vec<PointSet> = if f.len() <= EXHAUSTIVE_NEST_LIMIT {
        let mut seen: HashSet<PointSet> = HashSet::new();
        let mut frontier = vec![PointSet::new()];
        while let Some(s) = frontier.pop() {
            for (x, cl) in closures.iter().enumerate() {
                if !s.contains(x) {
                    let t = s.union(cl);
                    if seen.insert(t.clone()) {
                        frontier.push(t);
                    }
                }
            }
        }
        seen.into_iter().collect()
    } else {
        let set: HashSet<PointSet> = closures.into_iter().collect();
        set.into_iter().collect()
    };
    let mut out = Vec::new();
    for s in generating {
        let mut balls: Vec<PointSet> = Vec::new();
        for x in s.iter() {
            if !balls.contains(&assigned[x]) {
                balls.push(assigned[x].clone());
            }
        }
        if let Ok(nest) = Nest::new(balls) {
            out.push((s, nest.chain));
        }
    }
    out.sort_by_key(|a| a.0.tie_key());
    out
}

/// Checks (SC1), (SC2), (SC3) for `x ↦ B_x`.
///
/// Finite spaces are checked exhaustively. Presented spaces are handled by
/// [`check_sc_axioms_sampled`].
pub fn check_sc_axioms(
    space: &BallSpace,
    f: &SelfMap,
    assign: &BallAssignment,
) -> Result<ConditionReport> {
    let Resolved { space, f } = resolve(space, f)?;
    let assigned = assign.sets(space)?;
    Ok(sc_axioms(&f, &assigned))
}

pub(crate) fn sc_axioms(f: &[usize], assigned: &[PointSet]) -> ConditionReport {
    let n = f.len();
    let mut report = ConditionReport::new();
    report.record(
        Condition::SC1,
        (0..n)
            .find(|&x| !assigned[x].contains(x))
            .map(Witness::Point),
    );

    let nesting = (0..n).find(|&x| !assigned[f[x]].is_subset(&assigned[x]));
    let sc2 = nesting.map(|x| Witness::Pair(x, f[x])).or_else(|| {
        (0..n)
            .find(|&x| f[x] != x && !strict_descent_on_orbit(x, f, assigned))
            .map(Witness::Point)
    });
    report.record(Condition::SC2, sc2);

    let mut sc3 = None;
    'nests: for (_, chain) in f_nests(f, assigned) {
        let meet = chain.last().expect("nonempty chain").clone();
        for z in meet.iter() {
            if !assigned[z].is_subset(&meet) {
                sc3 = Some(Witness::Message(format!(
                    "z = {z} in intersection of nest {chain:?}"
                )));
                break 'nests;
            }
        }
    }
    report.record(Condition::SC3, sc3);
    report
}

/// Searches `i ≥ 1` with `B_{f^i x} ⊊ B_x` along the orbit up to its first
/// repetition.
fn strict_descent_on_orbit(x: usize, f: &[usize], assigned: &[PointSet]) -> bool {
    let mut seen = PointSet::singleton(x);
    let mut y = f[x];
    loop {
        if assigned[y].is_proper_subset(&assigned[x]) {
            return true;
        }
        if seen.contains(y) {
            return false;
        }
        seen.insert(y);
        y = f[y];
    }
}

/// Checks that every f-nest `N` admits `z ∈ ⋂N` with `B_z ⊆ ⋂N`.
pub fn check_nest_intersection(
    space: &BallSpace,
    f: &SelfMap,
    assign: &BallAssignment,
) -> Result<ConditionReport> {
    let Resolved { space, f } = resolve(space, f)?;
    let assigned = assign.sets(space)?;
    let mut report = ConditionReport::new();
    report.record(
        Condition::NestIntersection,
        nest_intersection_failure(&f, &assigned),
    );
    Ok(report)
}

pub(crate) fn nest_intersection_failure(f: &[usize], assigned: &[PointSet]) -> Option<Witness> {
    f_nests(f, assigned).into_iter().find_map(|(_, chain)| {
        let meet = chain.last().expect("nonempty chain").clone();
        let ok = meet.iter().any(|z| assigned[z].is_subset(&meet));
        (!ok).then(|| Witness::Nest(chain))
    })
}

/// Orbit and restart construction for self-contracting-on-orbits maps
/// (finite spaces).
///
/// Follows the orbit of `start`, accumulating the generating set `S` of the
/// f-nest `{B_y : y ∈ S}`. When the orbit revisits a point without reaching a
/// fixed point, the construction picks `z ∈ ⋂N` with `B_z ⊆ ⋂N` (smallest
/// `B_z`, then smallest `z`) and restarts from `z`.
pub fn solve_gfpt2(
    space: &BallSpace,
    f: &SelfMap,
    assign: &BallAssignment,
    start: usize,
    budget: usize,
) -> Result<FixedPointReport> {
    if budget == 0 {
        return Err(BallSpaceError::ZeroBudget);
    }
    let Resolved { space, f } = resolve(space, f)?;
    let assigned = assign.sets(space)?;
    if start >= space.len() {
        return Err(BallSpaceError::MapOutOfRange {
            point: start,
            image: start,
        });
    }
    Ok(gfpt2(&f, &assigned, start, budget))
}

pub(crate) fn gfpt2(
    f: &[usize],
    assigned: &[PointSet],
    start: usize,
    budget: usize,
) -> FixedPointReport {
    let nest_of = |s: &PointSet, extra: Option<usize>| {
        let mut balls: Vec<PointSet> = s.iter().chain(extra).map(|y| assigned[y].clone()).collect();
        balls.dedup();
        Nest::new(balls)
            .ok()
            .map(|n| cofinal_subnest(&n).with_provenance("gfpt2"))
    };
    let mut generators = PointSet::new();
    let mut x = start;
    let mut steps = 0;
    loop {
        // follow the orbit until it reaches a fixed point or repeats
        loop {
            if f[x] == x {
                return FixedPointReport::found(x, nest_of(&generators, Some(x)), steps);
            }
            if generators.contains(x) {
                break;
            }
            if steps >= budget {
                return FixedPointReport::exhausted(nest_of(&generators, None), steps);
            }
            generators.insert(x);
            x = f[x];
            steps += 1;
        }
        let Some(nest) = nest_of(&generators, None) else {
            return FixedPointReport::violated_with(
                Condition::SC2,
                Witness::Message("orbit balls are not totally ordered by inclusion".to_string()),
                None,
                steps,
            );
        };
        let meet = nest.intersection();
        let z = meet
            .iter()
            .filter(|&z| assigned[z].is_subset(&meet))
            .min_by(|&a, &b| {
                assigned[a]
                    .tie_key()
                    .cmp(&assigned[b].tie_key())
                    .then(a.cmp(&b))
            });
        match z {
            None => {
                return FixedPointReport::violated_with(
                    Condition::NestIntersection,
                    Witness::Nest(nest.balls().to_vec()),
                    Some(nest),
                    steps,
                )
            }
            Some(z) if f[z] == z => {
                return FixedPointReport::found(z, nest_of(&generators, Some(z)), steps)
            }
            Some(z) if generators.contains(z) => {
                // the orbit of z is already part of the nest: no strict descent below B_z
                return FixedPointReport::violated_with(
                    Condition::SC2,
                    Witness::Point(z),
                    Some(nest),
                    steps,
                );
            }
            Some(z) => x = z,
        }
    }
}

/// Caller-supplied choice of `z ∈ ⋂N` for presented spaces. Receives the
/// generating set of the current f-nest (orbit order) and returns `z`, or
/// `None` when no valid `z` exists.
pub type Chooser<'a> = dyn FnMut(&[u64]) -> Option<u64> + 'a;

/// Iteration limits for [`solve_gfpt2_presented`].
#[derive(Clone, Copy, Debug)]
pub struct PresentedBudget {
    /// Total number of map evaluations.
    pub steps: usize,
    /// Orbit length after which the chooser is consulted (a finite stand-in
    /// for a limit stage).
    pub stage_length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentedReport {
    pub fixed_point: Option<u64>,
    pub outcome: String,
    pub restarts: usize,
    pub steps: usize,
}

/// Orbit and restart construction over a membership oracle.
///
/// The chooser's answer is checked against every ball of the current nest;
/// answers outside the intersection are a contract violation.
pub fn solve_gfpt2_presented(
    oracle: &dyn BallOracle,
    f: &SelfMap,
    assign: &BallAssignment,
    start: u64,
    chooser: &mut Chooser<'_>,
    budget: PresentedBudget,
) -> Result<PresentedReport> {
    if budget.steps == 0 || budget.stage_length == 0 {
        return Err(BallSpaceError::ZeroBudget);
    }
    let mut generators: Vec<u64> = Vec::new();
    let mut visited: HashSet<u64> = HashSet::new();
    let mut x = start;
    let mut steps = 0;
    let mut restarts = 0;
    let done = |fixed: Option<u64>, outcome: &str, restarts, steps| PresentedReport {
        fixed_point: fixed,
        outcome: outcome.to_string(),
        restarts,
        steps,
    };
    loop {
        let mut stage = 0;
        loop {
            let fx = f.apply(x);
            if fx == x {
                return Ok(done(Some(x), "fixed-point-found", restarts, steps));
            }
            if visited.contains(&x) || stage >= budget.stage_length {
                break;
            }
            if steps >= budget.steps {
                return Ok(done(None, "budget-exhausted", restarts, steps));
            }
            visited.insert(x);
            generators.push(x);
            x = fx;
            steps += 1;
            stage += 1;
        }
        let Some(z) = chooser(&generators) else {
            return Ok(done(
                None,
                "hypothesis-violated: no z with B_z inside the nest intersection",
                restarts,
                steps,
            ));
        };
        if let Some(&y) = generators
            .iter()
            .find(|&&y| !oracle.contains(assign.ball_id(y), z))
        {
            let _ = y;
            return Err(BallSpaceError::ContractViolation(z));
        }
        restarts += 1;
        x = z;
    }
}

/// Sampled (SC1)/(SC2) checks over a membership oracle.
///
/// Along each probed orbit of length `orbit_len`, checks `x ∈ B_x`, that
/// every later orbit point stays in `B_x` (a consequence of SC1 and SC2), and
/// that some `B_{f^i x}` excludes `x` (which witnesses `B_{f^i x} ⊊ B_x`).
/// (SC3) is not decidable from membership queries and is left out.
pub fn check_sc_axioms_sampled(
    oracle: &dyn BallOracle,
    f: &SelfMap,
    assign: &BallAssignment,
    starts: &[u64],
    orbit_len: usize,
) -> ConditionReport {
    let mut report = ConditionReport {
        sampled: true,
        ..Default::default()
    };
    let mut sc1 = None;
    let mut sc2 = None;
    for &s in starts {
        let orbit: Vec<u64> = std::iter::successors(Some(s), |&y| Some(f.apply(y)))
            .take(orbit_len + 1)
            .collect();
        for (k, &x) in orbit.iter().enumerate() {
            let bx = assign.ball_id(x);
            if sc1.is_none() && !oracle.contains(bx, x) {
                sc1 = Some(Witness::Message(format!("{x} not in B_{x}")));
            }
            if sc2.is_some() || k + 1 >= orbit.len() {
                continue;
            }
            if let Some(&y) = orbit[k + 1..].iter().find(|&&y| !oracle.contains(bx, y)) {
                sc2 = Some(Witness::Message(format!("orbit point {y} leaves B_{x}")));
            } else if f.apply(x) != x
                && orbit[k + 1..]
                    .iter()
                    .all(|&y| oracle.contains(assign.ball_id(y), x))
            {
                sc2 = Some(Witness::Message(format!(
                    "no strict descent below B_{x} within the probed orbit"
                )));
            }
        }
    }
    report.record(Condition::SC1, sc1);
    report.record(Condition::SC2, sc2);
    report
}

/// A nest in a presented space, given by the ball id at each depth
/// (`None` ends a finite nest).
pub struct PresentedNest {
    pub label: String,
    pub ball: Box<dyn Fn(usize) -> Option<u64> + Send + Sync>,
}

/// Probing limits for presented nests.
#[derive(Clone, Copy, Debug)]
pub struct ProbeBudget {
    pub depth: usize,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Completeness {
    /// Finite, well-formed space: every nest contains its minimum.
    Complete,
    /// Every probed nest had a point surviving all probed depths.
    NoCounterexample { probed: usize },
    /// Every probed point is excluded by some ball of the named nest.
    Incomplete {
        nest: String,
        depth: usize,
        points: usize,
    },
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        !matches!(self, Completeness::Incomplete { .. })
    }
}

/// Spherical completeness: decided for finite spaces, probed nest by nest
/// for presented ones.
pub fn is_spherically_complete(
    space: &BallSpace,
    nests: &[PresentedNest],
    budget: ProbeBudget,
) -> Completeness {
    match space {
        BallSpace::Finite(s) => {
            // nonempty balls are enforced at construction; any finite nest
            // contains its minimum
            debug_assert!(s.balls().iter().all(|b| !b.is_empty()));
            Completeness::Complete
        }
        BallSpace::Presented(oracle) => {
            for nest in nests {
                let depth = (0..budget.depth)
                    .take_while(|&k| (nest.ball)(k).is_some())
                    .count();
                let survivor = oracle.points().take(budget.points).find(|&p| {
                    (0..depth).all(|k| oracle.contains((nest.ball)(k).expect("within depth"), p))
                });
                if survivor.is_none() {
                    return Completeness::Incomplete {
                        nest: nest.label.clone(),
                        depth,
                        points: budget.points,
                    };
                }
            }
            Completeness::NoCounterexample {
                probed: nests.len(),
            }
        }
    }
}

/// The ball space on `X1` whose balls are the preimages of the balls of
/// `target` under `map: X1 → X2`.
pub fn preimage_space(
    map: &[usize],
    names: Vec<String>,
    target: &FiniteBallSpace,
) -> Result<FiniteBallSpace> {
    if map.len() != names.len() {
        return Err(BallSpaceError::MapLength {
            got: map.len(),
            expected: names.len(),
        });
    }
    if let Some((point, &image)) = map.iter().enumerate().find(|(_, &y)| y >= target.len()) {
        return Err(BallSpaceError::MapOutOfRange { point, image });
    }
    let preimages: Vec<PointSet> = target.balls().iter().map(|b| b.preimage(map)).collect();
    let empty: Vec<PointSet> = target
        .balls()
        .iter()
        .zip(&preimages)
        .filter(|(_, p)| p.is_empty())
        .map(|(b, _)| b.clone())
        .collect();
    if !empty.is_empty() {
        return Err(BallSpaceError::EmptyPreimage(empty));
    }
    FiniteBallSpace::new(names, preimages)
}

/// Pulls a nest of the target space back along `map`.
pub fn preimage_nest(map: &[usize], nest: &Nest) -> Result<Nest> {
    let balls: Vec<PointSet> = nest.balls().iter().map(|b| b.preimage(map)).collect();
    if let Some(b) = nest.balls().iter().zip(&balls).find(|(_, p)| p.is_empty()) {
        return Err(BallSpaceError::EmptyPreimage(vec![b.0.clone()]));
    }
    Nest::new(balls).map(|n| n.with_provenance(format!("preimage of {}", nest.provenance())))
}

/// Completeness transfer along `map`: a point in the intersection of the
/// pulled-back nest maps into the intersection of the original nest.
/// Returns the pair `(x1, map(x1))`, or `None` if the preimage nest has
/// empty intersection.
pub fn transfer_intersection(map: &[usize], nest: &Nest) -> Result<Option<(usize, usize)>> {
    let pulled = preimage_nest(map, nest)?;
    Ok(pulled.intersection().iter().next().map(|x| {
        let y = map[x];
        debug_assert!(nest.contains_point(y));
        (x, y)
    }))
}

/// Canonical relabeling key of a ball collection on `n` points: the
/// lexicographically smallest sorted list of bitmasks over all permutations.
pub fn canonical_collection(n: usize, balls: &[u64]) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for perm in permutations(n) {
        let mut relabeled: Vec<u64> = balls
            .iter()
            .map(|&m| {
                (0..n)
                    .filter(|&i| m & (1 << i) != 0)
                    .fold(0u64, |acc, i| acc | 1 << perm[i])
            })
            .collect();
        relabeled.sort_unstable();
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled);
        }
    }
    best.unwrap_or_default()
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut perm, &mut out);
    out
}

fn heap_permute(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(perm.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, perm, out);
        if k.is_multiple_of(2) {
            perm.swap(i, k - 1);
        } else {
            perm.swap(0, k - 1);
        }
    }
}

/// All points fixed by `f`, for brute-force cross-checks.
pub fn fixed_points(f: &[usize]) -> Vec<usize> {
    (0..f.len()).filter(|&x| f[x] == x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(points: &[usize]) -> PointSet {
        points.iter().copied().collect()
    }

    /// X = {a, b, c}, balls {X, {b, c}, {c}}, f: a→b, b→c, c→c.
    fn three_point() -> (BallSpace, SelfMap) {
        let space =
            FiniteBallSpace::with_default_names(3, vec![set(&[0, 1, 2]), set(&[1, 2]), set(&[2])])
                .unwrap();
        (space.into(), SelfMap::Table(vec![1, 2, 2]))
    }

    fn space(n: usize, balls: &[&[usize]]) -> BallSpace {
        FiniteBallSpace::with_default_names(n, balls.iter().map(|b| set(b)).collect())
            .unwrap()
            .into()
    }

    #[test]
    fn construction_rejects_malformed_spaces() {
        let names = default_names(2);
        assert_eq!(
            FiniteBallSpace::new(names.clone(), vec![]),
            Err(BallSpaceError::NoBalls)
        );
        assert_eq!(
            FiniteBallSpace::new(names.clone(), vec![PointSet::new()]),
            Err(BallSpaceError::EmptyBall(0))
        );
        assert_eq!(
            FiniteBallSpace::new(names.clone(), vec![set(&[0, 5])]),
            Err(BallSpaceError::PointOutOfRange { index: 0, point: 5 })
        );
        let dedup = FiniteBallSpace::new(names, vec![set(&[0]), set(&[0]), set(&[0, 1])]).unwrap();
        assert_eq!(dedup.balls().len(), 2);
    }

    #[test]
    fn f_contracting_examples() {
        let sp = space(1, &[&[0]]);
        assert!(is_f_contracting(&sp, &SelfMap::Table(vec![0]), &set(&[0])).unwrap());
        let sp = space(2, &[&[0, 1]]);
        assert!(is_f_contracting(&sp, &SelfMap::Table(vec![1, 1]), &set(&[0, 1])).unwrap());
        assert!(!is_f_contracting(&sp, &SelfMap::Table(vec![1, 0]), &set(&[0, 1])).unwrap());
        assert_eq!(
            is_f_contracting(&sp, &SelfMap::Table(vec![1, 0]), &set(&[0])),
            Err(BallSpaceError::InvalidBall(set(&[0])))
        );
    }

    #[test]
    fn presented_space_is_unsupported_for_exhaustive_checks() {
        let sp = BallSpace::Presented(Arc::new(TailSegments));
        let f = SelfMap::Oracle(Arc::new(|x| x));
        assert_eq!(
            check_c_conditions(&sp, &f),
            Err(BallSpaceError::UnsupportedMode)
        );
        assert_eq!(
            solve_nfpt2(&sp, &f, 10).unwrap_err(),
            BallSpaceError::UnsupportedMode
        );
    }

    #[test]
    fn c_conditions_examples() {
        let (sp, f) = three_point();
        assert!(check_c_conditions(&sp, &f).unwrap().all_passed());

        let swap = check_c_conditions(&space(2, &[&[0, 1]]), &SelfMap::Table(vec![1, 0])).unwrap();
        assert!(!swap.passed(Condition::C1));

        let single = check_c_conditions(&space(1, &[&[0]]), &SelfMap::Table(vec![0])).unwrap();
        assert!(single.all_passed());
    }

    #[test]
    fn cu_conditions_examples() {
        let (sp, f) = three_point();
        assert!(check_cu_conditions(&sp, &f).unwrap().all_passed());

        let with_a =
            check_cu_conditions(&space(2, &[&[0, 1], &[0]]), &SelfMap::Table(vec![0, 0])).unwrap();
        assert!(with_a.all_passed());

        let without =
            check_cu_conditions(&space(2, &[&[0, 1]]), &SelfMap::Table(vec![0, 0])).unwrap();
        assert!(without.passed(Condition::CU1));
        assert!(!without.passed(Condition::CU2));
    }

    #[test]
    fn nfpt1_examples() {
        let (sp, f) = three_point();
        let report = solve_nfpt1(&sp, &f, 100).unwrap();
        assert_eq!(report.fixed_point(), Some(2));
        let nest = report.nest.unwrap();
        assert_eq!(nest.balls(), &[set(&[0, 1, 2]), set(&[1, 2]), set(&[2])]);

        let singles = space(3, &[&[1], &[0], &[2]]);
        let id = SelfMap::Table(vec![0, 1, 2]);
        assert_eq!(
            solve_nfpt1(&singles, &id, 10).unwrap().fixed_point(),
            Some(0)
        );

        let swap = solve_nfpt1(&space(2, &[&[0, 1]]), &SelfMap::Table(vec![1, 0]), 10).unwrap();
        assert_eq!(swap.violated(), Some(Condition::C1));

        assert_eq!(
            solve_nfpt1(&sp, &f, 0).unwrap_err(),
            BallSpaceError::ZeroBudget
        );
    }

    #[test]
    fn nfpt2_examples() {
        let (sp, f) = three_point();
        let report = solve_nfpt2(&sp, &f, 100).unwrap();
        assert_eq!(report.fixed_point(), Some(2));
        assert_eq!(report.iterations, 2);

        let single = solve_nfpt2(&space(1, &[&[0]]), &SelfMap::Table(vec![0]), 1).unwrap();
        assert_eq!((single.fixed_point(), single.iterations), (Some(0), 0));

        let id = solve_nfpt2(
            &space(2, &[&[0, 1], &[0], &[1]]),
            &SelfMap::Table(vec![0, 1]),
            10,
        )
        .unwrap();
        assert_eq!(id.violated(), Some(Condition::CU1));
    }

    #[test]
    fn sc_axiom_examples() {
        let (sp, f) = three_point();
        let assign = BallAssignment::Table(vec![0, 1, 2]);
        assert!(check_sc_axioms(&sp, &f, &assign).unwrap().all_passed());

        // constant assignment B_x = X with a 2-cycle
        let sp2 = space(2, &[&[0, 1]]);
        let report = check_sc_axioms(
            &sp2,
            &SelfMap::Table(vec![1, 0]),
            &BallAssignment::Table(vec![0, 0]),
        )
        .unwrap();
        assert!(report.passed(Condition::SC1));
        assert!(!report.passed(Condition::SC2));

        let singles = space(3, &[&[0], &[1], &[2]]);
        let report = check_sc_axioms(
            &singles,
            &SelfMap::Table(vec![0, 1, 2]),
            &BallAssignment::Table(vec![0, 1, 2]),
        )
        .unwrap();
        assert!(report.all_passed());

        let bad = check_sc_axioms(&sp, &f, &BallAssignment::Table(vec![0, 1]));
        assert!(matches!(bad, Err(BallSpaceError::InvalidAssignment(_))));
    }

    #[test]
    fn gfpt2_examples() {
        let (sp, f) = three_point();
        let assign = BallAssignment::Table(vec![0, 1, 2]);
        let report = solve_gfpt2(&sp, &f, &assign, 0, 100).unwrap();
        assert_eq!(report.fixed_point(), Some(2));
        assert_eq!(report.nest.unwrap().balls().len(), 3);

        let at_fixed = solve_gfpt2(&sp, &f, &assign, 2, 100).unwrap();
        assert_eq!((at_fixed.fixed_point(), at_fixed.iterations), (Some(2), 0));

        let sp2 = space(2, &[&[0, 1]]);
        let cyc = solve_gfpt2(
            &sp2,
            &SelfMap::Table(vec![1, 0]),
            &BallAssignment::Table(vec![0, 0]),
            0,
            100,
        )
        .unwrap();
        assert!(cyc.violated().is_some());
    }

    #[test]
    fn gfpt2_presented_with_chooser() {
        // naturals, f(m) = max(m - 1, 0) style descent toward 0 would not be
        // self-contracting for tail balls; use f(m) = m + 1 capped at 10.
        let f = SelfMap::Oracle(Arc::new(|m| (m + 1).min(10)));
        let assign = BallAssignment::Oracle(Arc::new(|m| m));
        let mut chooser = |gens: &[u64]| gens.iter().max().map(|&m| m + 1);
        let budget = PresentedBudget {
            steps: 100,
            stage_length: 3,
        };
        let report =
            solve_gfpt2_presented(&TailSegments, &f, &assign, 0, &mut chooser, budget).unwrap();
        assert_eq!(report.fixed_point, Some(10));
        assert!(report.restarts >= 1);

        let mut liar = |_: &[u64]| Some(0);
        let err =
            solve_gfpt2_presented(&TailSegments, &f, &assign, 2, &mut liar, budget).unwrap_err();
        assert_eq!(err, BallSpaceError::ContractViolation(0));
    }

    #[test]
    fn sampled_sc_checks_on_tail_segments() {
        let f = SelfMap::Oracle(Arc::new(|m| (m + 1).min(10)));
        let assign = BallAssignment::Oracle(Arc::new(|m| m));
        let report = check_sc_axioms_sampled(&TailSegments, &f, &assign, &[0, 4, 10], 12);
        assert!(report.sampled);
        assert!(report.all_passed(), "{report}");

        let stuck = BallAssignment::Oracle(Arc::new(|_| 0));
        let report = check_sc_axioms_sampled(&TailSegments, &f, &stuck, &[0], 12);
        assert!(!report.passed(Condition::SC2));
    }

    #[test]
    fn spherical_completeness() {
        let (sp, _) = three_point();
        assert_eq!(
            is_spherically_complete(
                &sp,
                &[],
                ProbeBudget {
                    depth: 1,
                    points: 1
                }
            ),
            Completeness::Complete
        );

        let tails = BallSpace::Presented(Arc::new(TailSegments));
        let nest = PresentedNest {
            label: "B_n".into(),
            ball: Box::new(|n| Some(n as u64)),
        };
        let verdict = is_spherically_complete(
            &tails,
            &[nest],
            ProbeBudget {
                depth: 200,
                points: 100,
            },
        );
        assert!(matches!(verdict, Completeness::Incomplete { .. }));

        let finite_nest = PresentedNest {
            label: "B_0..B_5".into(),
            ball: Box::new(|n| (n < 6).then_some(n as u64)),
        };
        let verdict = is_spherically_complete(
            &tails,
            &[finite_nest],
            ProbeBudget {
                depth: 200,
                points: 100,
            },
        );
        assert!(verdict.is_complete());
    }

    #[test]
    fn preimage_examples() {
        let target = FiniteBallSpace::with_default_names(2, vec![set(&[0]), set(&[0, 1])]).unwrap();
        let map = [0, 0, 1, 1];
        let names: Vec<String> = ["1", "2", "3", "4"].iter().map(|s| s.to_string()).collect();
        let pre = preimage_space(&map, names.clone(), &target).unwrap();
        assert_eq!(pre.balls(), &[set(&[0, 1]), set(&[0, 1, 2, 3])]);

        let nest = Nest::new(vec![set(&[0]), set(&[0, 1])]).unwrap();
        let pulled = preimage_nest(&map, &nest).unwrap();
        assert_eq!(pulled.balls(), &[set(&[0, 1, 2, 3]), set(&[0, 1])]);
        assert_eq!(transfer_intersection(&map, &nest).unwrap(), Some((0, 0)));

        let only_b = FiniteBallSpace::with_default_names(2, vec![set(&[1])]).unwrap();
        assert_eq!(
            preimage_space(&[0, 0], default_names(2), &only_b),
            Err(BallSpaceError::EmptyPreimage(vec![set(&[1])]))
        );
    }

    #[test]
    fn cofinal_subnest_examples() {
        let nest = Nest::new(vec![set(&[2]), set(&[0, 1, 2]), set(&[1, 2]), set(&[1, 2])]).unwrap();
        let sub = cofinal_subnest(&nest);
        assert_eq!(sub.balls(), &[set(&[0, 1, 2]), set(&[1, 2]), set(&[2])]);
        assert_eq!(sub.intersection(), nest.intersection());

        let single = Nest::new(vec![set(&[3])]).unwrap();
        assert_eq!(cofinal_subnest(&single), single);

        assert!(matches!(
            Nest::new(vec![set(&[0]), set(&[1])]),
            Err(BallSpaceError::NotANest(..))
        ));
        assert_eq!(Nest::new(vec![]), Err(BallSpaceError::EmptyNest));
    }

    #[test]
    fn canonical_collection_identifies_relabelings() {
        // {a} and {b} on two points are the same up to relabeling
        assert_eq!(
            canonical_collection(2, &[0b01]),
            canonical_collection(2, &[0b10])
        );
        assert_ne!(
            canonical_collection(3, &[0b011]),
            canonical_collection(3, &[0b001])
        );
        assert_eq!(permutations(4).len(), 24);
    }
}
