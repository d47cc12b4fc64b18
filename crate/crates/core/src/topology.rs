//! Finite topological spaces with closed self-maps, and the fixed point
//! theorems over the ball space of nonempty closed sets.
//!
//! Every finite space is compact, so the closed-set ball space is always
//! spherically complete. Sets are `u64` masks internally; spaces have at
//! most 64 points.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::ballspace::{
    canonical_collection, default_names, fixed_points, gfpt2, nfpt1, nfpt2, sc_axioms,
    FiniteBallSpace, FixedPointReport,
};
use crate::report::{Condition, ConditionReport, Witness};
use crate::PointSet;

pub const MAX_POINTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("spaces need between 1 and {MAX_POINTS} points, got {0}")]
    Size(usize),
    #[error("open set {0:?} mentions a point outside the space")]
    OutOfRange(PointSet),
    #[error("the empty set and the whole space must be open")]
    MissingTrivialOpens,
    #[error("union of open sets {0:?} and {1:?} is not open")]
    NotUnionClosed(PointSet, PointSet),
    #[error("intersection of open sets {0:?} and {1:?} is not open")]
    NotIntersectionClosed(PointSet, PointSet),
    #[error("map has length {got}, expected {expected}")]
    MapLength { got: usize, expected: usize },
    #[error("map sends {0} outside the space")]
    MapOutOfRange(usize),
    #[error("map is not closed: the image of closed set {0:?} is not closed")]
    NotClosed(PointSet),
    #[error("preconditions fail: {0:?}")]
    Precondition(Vec<Condition>),
}

pub type Result<T> = std::result::Result<T, TopologyError>;

fn mask(s: &PointSet) -> u64 {
    s.iter().fold(0, |acc, i| acc | 1 << i)
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn image(m: u64, f: &[usize]) -> u64 {
    let mut out = 0;
    let mut bits = m;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        out |= 1 << f[i];
        bits &= bits - 1;
    }
    out
}

fn by_size(a: &u64, b: &u64) -> std::cmp::Ordering {
    (a.count_ones(), a.reverse_bits()).cmp(&(b.count_ones(), b.reverse_bits()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    names: Vec<String>,
    /// Sorted by size, then members.
    opens: Vec<u64>,
    closed: Vec<u64>,
}

impl FiniteTopology {
    pub fn new(names: Vec<String>, opens: &[PointSet]) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_POINTS {
            return Err(TopologyError::Size(n));
        }
        let mut masks = BTreeSet::new();
        for o in opens {
            if o.iter().any(|i| i >= n) {
                return Err(TopologyError::OutOfRange(o.clone()));
            }
            masks.insert(mask(o));
        }
        Self::from_masks(names, masks.into_iter().collect())
    }

    fn from_masks(names: Vec<String>, mut opens: Vec<u64>) -> Result<Self> {
        let n = names.len();
        opens.sort_by(by_size);
        opens.dedup();
        let set: BTreeSet<u64> = opens.iter().copied().collect();
        if !set.contains(&0) || !set.contains(&full(n)) {
            return Err(TopologyError::MissingTrivialOpens);
        }
        for &a in &opens {
            for &b in &opens {
                if !set.contains(&(a | b)) {
                    return Err(TopologyError::NotUnionClosed(
                        PointSet::from_mask(a),
                        PointSet::from_mask(b),
                    ));
                }
                if !set.contains(&(a & b)) {
                    return Err(TopologyError::NotIntersectionClosed(
                        PointSet::from_mask(a),
                        PointSet::from_mask(b),
                    ));
                }
            }
        }
        let mut closed: Vec<u64> = opens.iter().map(|&o| !o & full(n)).collect();
        closed.sort_by(by_size);
        Ok(Self {
            names,
            opens,
            closed,
        })
    }

    pub fn with_default_names(n: usize, opens: &[PointSet]) -> Result<Self> {
        Self::new(default_names(n), opens)
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_masks(default_names(n), (0..=full(n)).collect())
            .expect("power set is a topology")
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::from_masks(default_names(n), vec![0, full(n)]).expect("trivial topology")
    }

    /// Points `o` (open) and `c` (closed).
    pub fn sierpinski() -> Self {
        Self::from_masks(vec!["o".into(), "c".into()], vec![0, 1, 3]).expect("Sierpinski topology")
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

    pub fn opens(&self) -> Vec<PointSet> {
        self.opens.iter().map(|&m| PointSet::from_mask(m)).collect()
    }

    /// Closed sets, smallest first.
    pub fn closed_sets(&self) -> Vec<PointSet> {
        self.closed
            .iter()
            .map(|&m| PointSet::from_mask(m))
            .collect()
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        self.opens
            .binary_search_by(|o| by_size(o, &mask(s)))
            .is_ok()
    }

    pub fn is_closed(&self, s: &PointSet) -> bool {
        self.is_closed_mask(mask(s))
    }

    fn is_closed_mask(&self, m: u64) -> bool {
        self.closed.binary_search_by(|c| by_size(c, &m)).is_ok()
    }

    fn closure_mask(&self, m: u64) -> u64 {
        self.closed
            .iter()
            .copied()
            .find(|&c| c & m == m)
            .expect("the whole space is closed")
    }

    /// Smallest closed superset.
    pub fn closure(&self, s: &PointSet) -> PointSet {
        PointSet::from_mask(self.closure_mask(mask(s)))
    }

    /// Nonempty closed sets as a ball space.
    pub fn closed_ball_space(&self) -> FiniteBallSpace {
        let balls = self
            .closed
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| PointSet::from_mask(c))
            .collect();
        FiniteBallSpace::new(self.names.clone(), balls)
            .expect("nonempty closed sets form a ball space")
    }

    /// No proper nonempty clopen set.
    pub fn is_connected(&self) -> bool {
        let all = full(self.len());
        !self
            .opens
            .iter()
            .any(|&o| o != 0 && o != all && self.is_closed_mask(o))
    }

    pub fn is_hausdorff(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).filter(|&y| y != x).all(|y| {
                self.opens.iter().any(|&u| {
                    u >> x & 1 == 1 && self.opens.iter().any(|&v| v >> y & 1 == 1 && u & v == 0)
                })
            })
        })
    }

    /// Subspace topology on `b`, with points relabeled in increasing order.
    pub fn subspace(&self, b: &PointSet) -> (FiniteTopology, Vec<usize>) {
        let points: Vec<usize> = b.iter().collect();
        let relabel = |m: u64| {
            points
                .iter()
                .enumerate()
                .filter(|(_, &p)| m >> p & 1 == 1)
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        };
        let opens: Vec<u64> = self.opens.iter().map(|&o| relabel(o)).collect();
        let names = points.iter().map(|&p| self.names[p].clone()).collect();
        (
            Self::from_masks(names, opens).expect("subspace topology"),
            points,
        )
    }

    /// Canonical key up to relabeling of points.
    pub fn canonical_key(&self) -> Vec<u64> {
        canonical_collection(self.len(), &self.opens)
    }

    fn check_map(&self, f: &[usize]) -> Result<()> {
        if f.len() != self.len() {
            return Err(TopologyError::MapLength {
                got: f.len(),
                expected: self.len(),
            });
        }
        if let Some(x) = (0..f.len()).find(|&x| f[x] >= self.len()) {
            return Err(TopologyError::MapOutOfRange(x));
        }
        Ok(())
    }
}

/// First closed set (smallest first) whose image is not closed.
pub fn closed_map_witness(top: &FiniteTopology, f: &[usize]) -> Result<Option<PointSet>> {
    top.check_map(f)?;
    Ok(top
        .closed
        .iter()
        .find(|&&c| !top.is_closed_mask(image(c, f)))
        .map(|&c| PointSet::from_mask(c)))
}

pub fn is_closed_map(top: &FiniteTopology, f: &[usize]) -> Result<bool> {
    Ok(closed_map_witness(top, f)?.is_none())
}

/// A self-map verified to send closed sets to closed sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedMap {
    table: Vec<usize>,
}

impl ClosedMap {
    pub fn new(top: &FiniteTopology, f: Vec<usize>) -> Result<Self> {
        match closed_map_witness(top, &f)? {
            Some(b) => Err(TopologyError::NotClosed(b)),
            None => Ok(Self { table: f }),
        }
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

fn contracting_mask(m: u64, f: &[usize]) -> bool {
    let img = image(m, f);
    if m.count_ones() == 1 {
        img == m
    } else {
        img & m == img && img != m
    }
}

fn invariant_closed(top: &FiniteTopology, f: &[usize]) -> Vec<u64> {
    top.closed
        .iter()
        .copied()
        .filter(|&c| c != 0 && image(c, f) & c == image(c, f))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TopnVerdict {
    /// Every invariant nonempty closed set is f-contracting.
    Strong,
    /// Every invariant nonempty closed set contains a closed f-contracting
    /// subset.
    Weak,
    Fails {
        witness: PointSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopnReport {
    pub verdict: TopnVerdict,
    /// Nonempty closed sets `B` with `f(B) ⊆ B`, smallest first.
    pub invariant: Vec<PointSet>,
}

pub fn check_topn_hypotheses(top: &FiniteTopology, f: &ClosedMap) -> TopnReport {
    let f = f.table();
    let inv = invariant_closed(top, f);
    let invariant = inv.iter().map(|&m| PointSet::from_mask(m)).collect();
    let verdict = if inv.iter().all(|&b| contracting_mask(b, f)) {
        TopnVerdict::Strong
    } else {
        let contracting: Vec<u64> = top
            .closed
            .iter()
            .copied()
            .filter(|&c| c != 0 && contracting_mask(c, f))
            .collect();
        match inv
            .iter()
            .find(|&&b| !contracting.iter().any(|&c| c & !b == 0))
        {
            None => TopnVerdict::Weak,
            Some(&b) => TopnVerdict::Fails {
                witness: PointSet::from_mask(b),
            },
        }
    };
    TopnReport { verdict, invariant }
}

/// Runs the nest solver matching the hypothesis verdict over the
/// closed-set ball space.
pub fn solve_topn(top: &FiniteTopology, f: &ClosedMap) -> FixedPointReport {
    let report = check_topn_hypotheses(top, f);
    let space = top.closed_ball_space();
    let table = f.table();
    let budget = top.len() + 1;
    let out = match &report.verdict {
        TopnVerdict::Strong => {
            let out = nfpt2(&space, table, budget);
            if let Some(x) = out.fixed_point() {
                assert_eq!(
                    fixed_points(table),
                    vec![x],
                    "uniqueness under the strong hypothesis"
                );
            }
            out
        }
        TopnVerdict::Weak => nfpt1(&space, table, budget),
        TopnVerdict::Fails { witness } => {
            return FixedPointReport::violated_with(
                Condition::TopnWeak,
                Witness::Ball(witness.clone()),
                None,
                0,
            )
        }
    };
    if let Some(x) = out.fixed_point() {
        assert_eq!(table[x], x, "solver returned a non-fixed point");
    }
    out
}

/// `B_x`: the intersection of all closed `B ∋ x` with `f(B) ⊆ B`.
pub fn smallest_invariant_closed(top: &FiniteTopology, f: &ClosedMap, x: usize) -> PointSet {
    let inv = invariant_closed(top, f.table());
    let family: Vec<u64> = inv.into_iter().filter(|&b| b >> x & 1 == 1).collect();
    let meet = family.iter().fold(full(top.len()), |acc, &b| acc & b);
    assert!(
        family.contains(&meet),
        "the intersection is itself a member"
    );
    PointSet::from_mask(meet)
}

/// Non-fixed `x` for which no closed `B` has `x ∈ B`, `x ∉ f(B) ⊆ B`.
pub fn top3_violation(top: &FiniteTopology, f: &ClosedMap) -> Option<usize> {
    let t = f.table();
    (0..top.len()).filter(|&x| t[x] != x).find(|&x| {
        !top.closed.iter().any(|&b| {
            let img = image(b, t);
            b >> x & 1 == 1 && img >> x & 1 == 0 && img & b == img
        })
    })
}

pub fn top3_assignment(top: &FiniteTopology, f: &ClosedMap) -> Vec<PointSet> {
    (0..top.len())
        .map(|x| smallest_invariant_closed(top, f, x))
        .collect()
}

/// The top3 hypothesis, followed by (SC1)–(SC3) for `x ↦ B_x` when it
/// holds.
pub fn check_top3(top: &FiniteTopology, f: &ClosedMap) -> ConditionReport {
    let mut report = ConditionReport::new();
    match top3_violation(top, f) {
        Some(x) => report.fail(Condition::Top3, Witness::Point(x)),
        None => {
            report.pass(Condition::Top3);
            let sc = sc_axioms(f.table(), &top3_assignment(top, f));
            report.checks.extend(sc.checks);
        }
    }
    report
}

/// Orbit solver over the assignment `x ↦ B_x`.
pub fn solve_top3(top: &FiniteTopology, f: &ClosedMap, start: usize) -> FixedPointReport {
    if let Some(x) = top3_violation(top, f) {
        return FixedPointReport::violated_with(Condition::Top3, Witness::Point(x), None, 0);
    }
    gfpt2(
        f.table(),
        &top3_assignment(top, f),
        start,
        4 * top.len() * top.len() + 4,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum JVerdict {
    Holds {
        covers: usize,
    },
    Fails {
        cover: Vec<PointSet>,
    },
    /// More nonempty opens than the cap; only covers drawn from the
    /// first `cap` opens were examined.
    Partial {
        covers: usize,
        opens: usize,
        cap: usize,
    },
}

impl JVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, JVerdict::Holds { .. })
    }
}

fn subsets(items: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    (1u64..1 << items.len()).map(move |sel| {
        (0..items.len())
            .filter(|&i| sel >> i & 1 == 1)
            .map(|i| items[i])
            .collect()
    })
}

fn is_antichain(sets: &[u64]) -> bool {
    sets.iter()
        .all(|&a| sets.iter().all(|&b| a == b || a & b != a))
}

fn j_contractive(top: &FiniteTopology, f: &[usize], cover: &[u64]) -> bool {
    cover.iter().all(|&v| {
        let img = image(top.closure_mask(v), f);
        cover.iter().any(|&w| img & w == img)
    })
}

/// Every open cover (antichain of nonempty opens with union `X`) has a
/// J-contractive open refinement.
pub fn check_j_contraction(top: &FiniteTopology, f: &[usize], cap: usize) -> Result<JVerdict> {
    top.check_map(f)?;
    let all = full(top.len());
    let nonempty: Vec<u64> = top.opens.iter().copied().filter(|&o| o != 0).collect();
    let pool: Vec<u64> = if nonempty.len() > cap {
        let mut p: Vec<u64> = nonempty
            .iter()
            .copied()
            .take(cap.saturating_sub(1))
            .collect();
        p.push(all);
        p
    } else {
        nonempty.clone()
    };
    let mut covers = 0;
    for cover in subsets(&pool) {
        if cover.iter().fold(0, |a, &b| a | b) != all || !is_antichain(&cover) {
            continue;
        }
        covers += 1;
        let candidates: Vec<u64> = nonempty
            .iter()
            .copied()
            .filter(|&v| cover.iter().any(|&u| v & u == v))
            .collect();
        let refined = if candidates.len() > cap {
            false
        } else {
            subsets(&candidates)
                .any(|r| r.iter().fold(0, |a, &b| a | b) == all && j_contractive(top, f, &r))
        };
        if !refined && candidates.len() <= cap {
            return Ok(JVerdict::Fails {
                cover: cover.iter().map(|&m| PointSet::from_mask(m)).collect(),
            });
        }
    }
    Ok(if nonempty.len() > cap {
        JVerdict::Partial {
            covers,
            opens: nonempty.len(),
            cap,
        }
    } else {
        JVerdict::Holds { covers }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JLemmaReport {
    pub checks: ConditionReport,
    /// Connected Hausdorff finite spaces are singletons.
    pub degenerate: bool,
    pub note: String,
}

/// Checks (J1) on every invariant closed set and (J2), then confirms the
/// strong topn hypothesis they imply.
pub fn check_j_lemmas(top: &FiniteTopology, f: &[usize], cap: usize) -> Result<JLemmaReport> {
    top.check_map(f)?;
    let mut failed = Vec::new();
    if !top.is_connected() {
        failed.push(Condition::Connected);
    }
    if !top.is_hausdorff() {
        failed.push(Condition::Hausdorff);
    }
    if !check_j_contraction(top, f, cap)?.holds() {
        failed.push(Condition::JContraction);
    }
    if !failed.is_empty() {
        return Err(TopologyError::Precondition(failed));
    }
    let mut checks = ConditionReport::new();
    checks.pass(Condition::Connected);
    checks.pass(Condition::Hausdorff);
    checks.pass(Condition::JContraction);
    let closed = ClosedMap::new(top, f.to_vec())?;

    let j1 = invariant_closed(top, f).into_iter().find(|&b| {
        let set = PointSet::from_mask(b);
        let (sub, points) = top.subspace(&set);
        let restricted: Vec<usize> = points
            .iter()
            .map(|&p| points.binary_search(&f[p]).expect("invariant"))
            .collect();
        !check_j_contraction(&sub, &restricted, cap)
            .map(|v| v.holds())
            .unwrap_or(false)
    });
    checks.record(
        Condition::J1,
        j1.map(|b| Witness::Ball(PointSet::from_mask(b))),
    );

    let onto = image(full(top.len()), f) == full(top.len());
    let j2 = onto && top.len() != 1;
    checks.record(
        Condition::J2,
        j2.then(|| Witness::Message("onto map on more than one point".into())),
    );

    let strong = check_topn_hypotheses(top, &closed).verdict == TopnVerdict::Strong;
    checks.record(
        Condition::TopnStrong,
        (!strong).then(|| Witness::Message("strong hypothesis fails".into())),
    );
    Ok(JLemmaReport {
        checks,
        degenerate: top.len() == 1,
        note: "a finite connected Hausdorff space has one point; only the derivation chain is exercised".into(),
    })
}

/// All topologies on `n` points, one per relabeling class, with the
/// canonical key used for deduplication.
pub fn enumerate_topologies(n: usize) -> Vec<FiniteTopology> {
    assert!((1..=4).contains(&n), "enumeration supports 1 to 4 points");
    let all = full(n);
    let middle: Vec<u64> = (1..all).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for sel in 0u64..1 << middle.len() {
        let mut opens: Vec<u64> = vec![0, all];
        opens.extend(
            (0..middle.len())
                .filter(|&i| sel >> i & 1 == 1)
                .map(|i| middle[i]),
        );
        let set: BTreeSet<u64> = opens.iter().copied().collect();
        let closed = opens.iter().all(|&a| {
            opens
                .iter()
                .all(|&b| set.contains(&(a | b)) && set.contains(&(a & b)))
        });
        if !closed {
            continue;
        }
        let key = canonical_collection(n, &opens);
        if seen.insert(key) {
            out.push(FiniteTopology::from_masks(default_names(n), opens).expect("checked above"));
        }
    }
    out
}

/// All self-maps of an `n`-point set, as tables.
pub fn all_maps(n: usize) -> Vec<Vec<usize>> {
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = code % n;
                    code /= n;
                    v
                })
                .collect()
        })
        .collect()
}

/// Closed self-maps of a topology.
pub fn closed_maps(top: &FiniteTopology) -> Vec<ClosedMap> {
    all_maps(top.len())
        .into_iter()
        .filter_map(|f| ClosedMap::new(top, f).ok())
        .collect()
}
