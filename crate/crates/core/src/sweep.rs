//! Exhaustive small-instance sweeps that cross-check the solvers against
//! brute force. Any counterexample is an implementation bug.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ballspace::{
    c_conditions, canonical_collection, cu_conditions, fixed_points, gfpt2,
    is_spherically_complete, nest_intersection_failure, nfpt1, nfpt2, sc_axioms, BallSpace,
    FiniteBallSpace, ProbeBudget,
};
use crate::topology::{
    all_maps, check_top3, check_topn_hypotheses, closed_maps, enumerate_topologies, solve_top3,
    solve_topn, top3_violation, TopnVerdict,
};
use crate::PointSet;

pub const NFPT_MAX_POINTS: usize = 4;
pub const NFPT_MAX_BALLS: usize = 6;
pub const GFPT_MAX_POINTS: usize = 3;
pub const TOPO_MAX_POINTS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SweepError {
    #[error("{what} = {got} exceeds the cap {cap}")]
    BoundTooLarge {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("{what} must be positive")]
    ZeroBound { what: &'static str },
}

fn bound(what: &'static str, got: usize, cap: usize) -> Result<(), SweepError> {
    if got == 0 {
        return Err(SweepError::ZeroBound { what });
    }
    if got > cap {
        return Err(SweepError::BoundTooLarge { what, got, cap });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub points: usize,
    pub map: Vec<usize>,
    pub sets: Vec<PointSet>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NfptSummary {
    pub spaces: usize,
    pub instances: usize,
    pub c_passed: usize,
    pub c_solved: usize,
    pub cu_passed: usize,
    pub cu_unique: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl NfptSummary {
    fn merge(mut self, other: Self) -> Self {
        self.spaces += other.spaces;
        self.instances += other.instances;
        self.c_passed += other.c_passed;
        self.c_solved += other.c_solved;
        self.cu_passed += other.cu_passed;
        self.cu_unique += other.cu_unique;
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

fn combinations(
    items: &[u64],
    k: usize,
    start: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for i in start..items.len() {
        current.push(items[i]);
        combinations(items, k, i + 1, current, out);
        current.pop();
    }
}

/// Ball collections on `n` points with at most `max_balls` nonempty balls,
/// one per relabeling class, in a deterministic order.
pub fn ball_collections(n: usize, max_balls: usize) -> Vec<Vec<u64>> {
    let nonempty: Vec<u64> = (1..1u64 << n).collect();
    let mut all = Vec::new();
    for k in 1..=max_balls.min(nonempty.len()) {
        combinations(&nonempty, k, 0, &mut Vec::new(), &mut all);
    }
    let mut seen = HashSet::new();
    let mut out: Vec<Vec<u64>> = all
        .into_iter()
        .map(|c| canonical_collection(n, &c))
        .filter(|key| seen.insert(key.clone()))
        .collect();
    out.sort();
    out
}

fn sets_of(masks: &[u64]) -> Vec<PointSet> {
    masks.iter().map(|&m| PointSet::from_mask(m)).collect()
}

/// Every ball space with `|X| ≤ max_points` and at most `max_balls` balls
/// (up to relabeling), with every self-map.
pub fn nfpt_sweep(max_points: usize, max_balls: usize) -> Result<NfptSummary, SweepError> {
    bound("max_points", max_points, NFPT_MAX_POINTS)?;
    bound("max_balls", max_balls, NFPT_MAX_BALLS)?;
    let mut jobs = Vec::new();
    for n in 1..=max_points {
        jobs.extend(ball_collections(n, max_balls).into_iter().map(|c| (n, c)));
    }
    let summaries: Vec<NfptSummary> = jobs
        .par_iter()
        .map(|(n, masks)| {
            let balls = sets_of(masks);
            let space =
                FiniteBallSpace::with_default_names(*n, balls.clone()).expect("nonempty balls");
            let mut s = NfptSummary {
                spaces: 1,
                ..Default::default()
            };
            for f in all_maps(*n) {
                s.instances += 1;
                let fail = |detail: String| Counterexample {
                    points: *n,
                    map: f.clone(),
                    sets: balls.clone(),
                    detail,
                };
                let brute = fixed_points(&f);
                if c_conditions(&space, &f).all_passed() {
                    s.c_passed += 1;
                    match nfpt1(&space, &f, balls.len() + 1).fixed_point() {
                        Some(x) if f[x] == x && !brute.is_empty() => s.c_solved += 1,
                        other => s
                            .counterexamples
                            .push(fail(format!("C1-C3 hold but nfpt1 returned {other:?}"))),
                    }
                }
                if cu_conditions(&space, &f).all_passed() {
                    s.cu_passed += 1;
                    match nfpt2(&space, &f, balls.len() + 1).fixed_point() {
                        Some(x) if brute == vec![x] => s.cu_unique += 1,
                        other => s.counterexamples.push(fail(format!(
                            "CU1-CU3 hold but nfpt2 returned {other:?}, fixed points {brute:?}"
                        ))),
                    }
                }
            }
            s
        })
        .collect();
    Ok(summaries
        .into_iter()
        .fold(NfptSummary::default(), NfptSummary::merge))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GfptSummary {
    pub instances: usize,
    pub sc_passed: usize,
    /// SC1–SC3 and the nest intersection condition.
    pub gfpt2_hypotheses: usize,
    /// Runs from every start point that ended at a fixed point.
    pub solved_runs: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl GfptSummary {
    fn merge(mut self, other: Self) -> Self {
        self.instances += other.instances;
        self.sc_passed += other.sc_passed;
        self.gfpt2_hypotheses += other.gfpt2_hypotheses;
        self.solved_runs += other.solved_runs;
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

/// Every self-map and every assignment `x ↦ B_x` of nonempty subsets on
/// `|X| ≤ max_points`. A finite ball space is spherically complete, so
/// (SC1)–(SC3) alone must already yield a fixed point from every start.
pub fn gfpt_sweep(max_points: usize) -> Result<GfptSummary, SweepError> {
    bound("max_points", max_points, GFPT_MAX_POINTS)?;
    let mut jobs = Vec::new();
    for n in 1..=max_points {
        let subsets = (1u64 << n) - 1;
        let total = (subsets as usize).pow(n as u32);
        jobs.extend((0..total).map(|code| (n, code)));
    }
    let summaries: Vec<GfptSummary> = jobs
        .par_iter()
        .map(|&(n, mut code)| {
            let subsets = (1usize << n) - 1;
            let assigned: Vec<PointSet> = (0..n)
                .map(|_| {
                    let m = code % subsets + 1;
                    code /= subsets;
                    PointSet::from_mask(m as u64)
                })
                .collect();
            let mut s = GfptSummary::default();
            for f in all_maps(n) {
                s.instances += 1;
                if !sc_axioms(&f, &assigned).all_passed() {
                    continue;
                }
                s.sc_passed += 1;
                let fail = |detail: String| Counterexample {
                    points: n,
                    map: f.clone(),
                    sets: assigned.clone(),
                    detail,
                };
                if nest_intersection_failure(&f, &assigned).is_none() {
                    s.gfpt2_hypotheses += 1;
                } else {
                    s.counterexamples
                        .push(fail("SC3 holds but an f-nest has no admissible z".into()));
                }
                for start in 0..n {
                    match gfpt2(&f, &assigned, start, 4 * n * n + 4).fixed_point() {
                        Some(x) if f[x] == x => s.solved_runs += 1,
                        other => s
                            .counterexamples
                            .push(fail(format!("start {start}: gfpt2 returned {other:?}"))),
                    }
                }
            }
            s
        })
        .collect();
    Ok(summaries
        .into_iter()
        .fold(GfptSummary::default(), GfptSummary::merge))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TopoSummary {
    pub topologies: usize,
    pub closed_maps: usize,
    pub complete_spaces: usize,
    pub strong: usize,
    pub weak: usize,
    pub fails: usize,
    pub fixed_points_confirmed: usize,
    pub top3_instances: usize,
    pub top3_sc_passed: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl TopoSummary {
    fn merge(mut self, other: Self) -> Self {
        self.topologies += other.topologies;
        self.closed_maps += other.closed_maps;
        self.complete_spaces += other.complete_spaces;
        self.strong += other.strong;
        self.weak += other.weak;
        self.fails += other.fails;
        self.fixed_points_confirmed += other.fixed_points_confirmed;
        self.top3_instances += other.top3_instances;
        self.top3_sc_passed += other.top3_sc_passed;
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

/// Every topology on `≤ max_points` points (up to relabeling) with every
/// closed self-map.
pub fn topo_sweep(max_points: usize) -> Result<TopoSummary, SweepError> {
    bound("max_points", max_points, TOPO_MAX_POINTS)?;
    let tops: Vec<_> = (1..=max_points).flat_map(enumerate_topologies).collect();
    let summaries: Vec<TopoSummary> =
        tops.par_iter()
            .map(|top| {
                let n = top.len();
                let mut s = TopoSummary {
                    topologies: 1,
                    ..Default::default()
                };
                let space = BallSpace::Finite(top.closed_ball_space());
                let budget = ProbeBudget {
                    depth: 0,
                    points: 0,
                };
                let complete = is_spherically_complete(&space, &[], budget).is_complete();
                let space = space.finite().expect("finite");
                let chains_ok = space.balls().iter().all(|a| {
                    space.balls().iter().all(|b| {
                        !(a.is_subset(b) || b.is_subset(a)) || !a.intersection(b).is_empty()
                    })
                });
                let closed = top.closed_sets();
                if complete && chains_ok {
                    s.complete_spaces += 1;
                } else {
                    s.counterexamples.push(Counterexample {
                        points: n,
                        map: vec![],
                        sets: closed.clone(),
                        detail: "closed sets not spherically complete".into(),
                    });
                }
                for f in closed_maps(top) {
                    s.closed_maps += 1;
                    let table = f.table().to_vec();
                    let fail = |detail: String| Counterexample {
                        points: n,
                        map: table.clone(),
                        sets: closed.clone(),
                        detail,
                    };
                    let brute = fixed_points(&table);
                    let verdict = check_topn_hypotheses(top, &f).verdict;
                    match verdict {
                        TopnVerdict::Fails { .. } => s.fails += 1,
                        TopnVerdict::Strong => s.strong += 1,
                        TopnVerdict::Weak => s.weak += 1,
                    }
                    if !matches!(verdict, TopnVerdict::Fails { .. }) {
                        let found = solve_topn(top, &f).fixed_point();
                        let ok = match (found, &verdict) {
                            (Some(x), TopnVerdict::Strong) => brute == vec![x],
                            (Some(x), _) => table[x] == x,
                            (None, _) => false,
                        };
                        if ok {
                            s.fixed_points_confirmed += 1;
                        } else {
                            s.counterexamples.push(fail(format!(
                                "{verdict:?} but solver returned {found:?}, fixed points {brute:?}"
                            )));
                        }
                    }
                    if top3_violation(top, &f).is_none() {
                        s.top3_instances += 1;
                        let sc_ok = check_top3(top, &f).all_passed();
                        let solved = (0..n).all(|x| {
                            solve_top3(top, &f, x)
                                .fixed_point()
                                .is_some_and(|z| table[z] == z)
                        });
                        if sc_ok && solved {
                            s.top3_sc_passed += 1;
                        } else {
                            s.counterexamples.push(fail(format!(
                                "top3 holds but SC axioms {sc_ok}, solver {solved}"
                            )));
                        }
                    }
                }
                s
            })
            .collect();
    Ok(summaries
        .into_iter()
        .fold(TopoSummary::default(), TopoSummary::merge))
}
