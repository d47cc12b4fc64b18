//! Ultrametric spaces with values in a (possibly partially) ordered set,
//! their ball spaces, the ultrametric fixed point theorems and the
//! attractor theorem.
//!
//! Points are indices `0..len`. Distances come from a full table
//! ([`FiniteUltrametric`]) or are computed on demand (p-adic residues, see
//! [`crate::padic::PAdicSpace`]).

use thiserror::Error;

use crate::ballspace::{self, BallAssignment, FiniteBallSpace, FixedPointReport, Outcome};
use crate::pointset::PointSet;
use crate::poset::ValueOrder;
use crate::report::{Condition, ConditionReport, Witness};

pub type Value<U> = <<U as Ultrametric>::Order as ValueOrder>::Value;

/// A finite ultrametric space.
pub trait Ultrametric {
    type Order: ValueOrder;

    fn order(&self) -> &Self::Order;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn dist(&self, x: usize, y: usize) -> Value<Self>;

    fn point_name(&self, x: usize) -> String {
        x.to_string()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UltrametricError {
    #[error("distance table is not {0} x {0}")]
    Shape(usize),
    #[error("no distance given for ({0}, {1})")]
    MissingDistance(String, String),
    #[error("conflicting distances given for ({0}, {1})")]
    ConflictingDistance(String, String),
    #[error("axiom {condition} fails: {witness}")]
    Axiom {
        condition: Condition,
        witness: Witness,
    },
    #[error("map is not total on {0} points")]
    MapLength(usize),
    #[error("point {0} out of range")]
    PointOutOfRange(usize),
    #[error("chooser response for x = {x} (y = {y}) violates {condition}: {witness}")]
    ContractViolation {
        condition: Condition,
        x: usize,
        y: usize,
        witness: Witness,
    },
    #[error("the derivation fails at {condition}: {witness}")]
    InternalContradiction {
        condition: Condition,
        witness: Witness,
    },
}

/// Ultrametric space with a stored symmetric distance table.
#[derive(Clone, Debug)]
pub struct FiniteUltrametric<O: ValueOrder> {
    names: Vec<String>,
    order: O,
    dist: Vec<Vec<O::Value>>,
}

impl<O: ValueOrder> FiniteUltrametric<O> {
    /// Validates (U1), (U2), (U3), and (UT) for totally ordered values.
    pub fn new(
        names: Vec<String>,
        order: O,
        dist: Vec<Vec<O::Value>>,
    ) -> Result<Self, UltrametricError> {
        let n = names.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(UltrametricError::Shape(n));
        }
        let space = Self { names, order, dist };
        let report = check_axioms(&space);
        if let Some(c) = report.first_failure() {
            return Err(UltrametricError::Axiom {
                condition: c.condition,
                witness: c.witness.clone().expect("failed check has a witness"),
            });
        }
        Ok(space)
    }

    /// Builds the table from `(x, y, d(x, y))` triples; the diagonal is `0`
    /// and symmetry fills the rest.
    pub fn from_triples(
        names: Vec<String>,
        order: O,
        triples: &[(usize, usize, O::Value)],
    ) -> Result<Self, UltrametricError> {
        let n = names.len();
        let mut table: Vec<Vec<Option<O::Value>>> = vec![vec![None; n]; n];
        for (x, row) in table.iter_mut().enumerate() {
            row[x] = Some(order.zero());
        }
        for (x, y, v) in triples {
            let (x, y) = (*x, *y);
            if x >= n || y >= n {
                return Err(UltrametricError::PointOutOfRange(x.max(y)));
            }
            for (a, b) in [(x, y), (y, x)] {
                match &table[a][b] {
                    Some(old) if old != v => {
                        return Err(UltrametricError::ConflictingDistance(
                            names[x].clone(),
                            names[y].clone(),
                        ))
                    }
                    _ => table[a][b] = Some(v.clone()),
                }
            }
        }
        let mut dist = Vec::with_capacity(n);
        for (x, row) in table.into_iter().enumerate() {
            let row = row
                .into_iter()
                .enumerate()
                .map(|(y, v)| {
                    v.ok_or_else(|| {
                        UltrametricError::MissingDistance(names[x].clone(), names[y].clone())
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            dist.push(row);
        }
        Self::new(names, order, dist)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

impl<O: ValueOrder> Ultrametric for FiniteUltrametric<O> {
    type Order = O;

    fn order(&self) -> &O {
        &self.order
    }

    fn len(&self) -> usize {
        self.names.len()
    }

    fn dist(&self, x: usize, y: usize) -> O::Value {
        self.dist[x][y].clone()
    }

    fn point_name(&self, x: usize) -> String {
        self.names[x].clone()
    }
}

/// Exhaustive check of (U1)–(U3); (UT) is added when the values are
/// totally ordered. (U2) is checked against every value `γ`.
pub fn check_axioms<U: Ultrametric + ?Sized>(u: &U) -> ConditionReport {
    let n = u.len();
    let ord = u.order();
    let zero = ord.zero();
    let gammas = ord.values();
    let name = |x| u.point_name(x);
    let mut report = ConditionReport::new();

    let u1 = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| (u.dist(x, y) == zero) != (x == y))
        .map(|(x, y)| Witness::Message(format!("d({}, {})", name(x), name(y))));
    report.record(Condition::U1, u1);

    let mut u2 = None;
    'u2: for x in 0..n {
        for y in 0..n {
            let dxy = u.dist(x, y);
            for z in 0..n {
                let (dyz, dxz) = (u.dist(y, z), u.dist(x, z));
                if let Some(g) = gammas
                    .iter()
                    .find(|g| ord.leq(&dxy, g) && ord.leq(&dyz, g) && !ord.leq(&dxz, g))
                {
                    u2 = Some(Witness::Message(format!(
                        "x={}, y={}, z={}, gamma={}",
                        name(x),
                        name(y),
                        name(z),
                        ord.show(g)
                    )));
                    break 'u2;
                }
            }
        }
    }
    report.record(Condition::U2, u2);

    let u3 = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| u.dist(x, y) != u.dist(y, x))
        .map(|(x, y)| Witness::Message(format!("d({}, {}) != d({1}, {0})", name(x), name(y))));
    report.record(Condition::U3, u3);

    if ord.is_total() {
        let mut ut = None;
        'ut: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let m = ord
                        .max_of(&u.dist(x, y), &u.dist(y, z))
                        .expect("total order");
                    if !ord.leq(&u.dist(x, z), &m) {
                        ut = Some(Witness::Message(format!(
                            "x={}, y={}, z={}",
                            name(x),
                            name(y),
                            name(z)
                        )));
                        break 'ut;
                    }
                }
            }
        }
        report.record(Condition::UT, ut);
    }
    report
}

/// `z ∈ B(x, y)`, i.e. `d(x, z) ≤ d(x, y)`.
pub fn um_ball_contains<U: Ultrametric + ?Sized>(u: &U, x: usize, y: usize, z: usize) -> bool {
    u.order().leq(&u.dist(x, z), &u.dist(x, y))
}

/// The ball `B(x, y)` as a point set.
pub fn um_ball<U: Ultrametric + ?Sized>(u: &U, x: usize, y: usize) -> PointSet {
    (0..u.len())
        .filter(|&z| um_ball_contains(u, x, y, z))
        .collect()
}

/// `B(t, z) ⊆ B(x, y)` decided by the criterion
/// `t ∈ B(x, y)` and `d(t, z) ≤ d(x, y)`.
pub fn um_ball_leq<U: Ultrametric + ?Sized>(
    u: &U,
    (t, z): (usize, usize),
    (x, y): (usize, usize),
) -> bool {
    um_ball_contains(u, x, y, t) && u.order().leq(&u.dist(t, z), &u.dist(x, y))
}

/// The ball space of all `B(x, y)`.
pub fn ball_space<U: Ultrametric + ?Sized>(u: &U) -> FiniteBallSpace {
    let n = u.len();
    let balls: Vec<PointSet> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| um_ball(u, x, y))
        .collect();
    let names = (0..n).map(|x| u.point_name(x)).collect();
    FiniteBallSpace::new(names, balls).expect("ultrametric balls are nonempty")
}

fn check_map<U: Ultrametric + ?Sized>(u: &U, f: &[usize]) -> Result<(), UltrametricError> {
    if f.len() != u.len() {
        return Err(UltrametricError::MapLength(u.len()));
    }
    match f.iter().find(|&&y| y >= u.len()) {
        Some(&y) => Err(UltrametricError::PointOutOfRange(y)),
        None => Ok(()),
    }
}

/// A pair `(x, y)` with `d(fx, fy) ≰ d(x, y)`, if any.
pub fn contracting_witness<U: Ultrametric + ?Sized>(u: &U, f: &[usize]) -> Option<(usize, usize)> {
    let n = u.len();
    (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .find(|&(x, y)| !u.order().leq(&u.dist(f[x], f[y]), &u.dist(x, y)))
}

pub fn is_contracting<U: Ultrametric + ?Sized>(u: &U, f: &[usize]) -> bool {
    contracting_witness(u, f).is_none()
}

/// The assignment `x ↦ B(x, fx)` on the ball space of `u`.
pub fn sufpt_assignment<U: Ultrametric + ?Sized>(
    u: &U,
    f: &[usize],
) -> (FiniteBallSpace, BallAssignment) {
    let space = ball_space(u);
    let sets: Vec<PointSet> = (0..u.len()).map(|x| um_ball(u, x, f[x])).collect();
    let assign = BallAssignment::from_sets(&space, &sets).expect("every B(x, fx) is a ball");
    (space, assign)
}

/// Checks (scoo) `x ≠ fx ⇒ ∃ i ≥ 1: d(f^i x, f^{i+1} x) < d(x, fx)` along
/// each orbit up to its first repetition, and the condition
/// `d(z, fx) ≤ d(fx, f²x) ⇒ d(z, fz) ≤ d(x, fx)` over all pairs.
pub fn check_sufpt_hypotheses<U: Ultrametric + ?Sized>(
    u: &U,
    f: &[usize],
) -> Result<ConditionReport, UltrametricError> {
    check_map(u, f)?;
    let n = u.len();
    let ord = u.order();
    let mut report = ConditionReport::new();
    report.record(Condition::Scoo, scoo_failure(u, f).map(Witness::Point));

    let mut c5 = None;
    'pairs: for x in 0..n {
        let (fx, dxfx) = (f[x], u.dist(x, f[x]));
        let r = u.dist(fx, f[fx]);
        for z in 0..n {
            if ord.leq(&u.dist(z, fx), &r) && !ord.leq(&u.dist(z, f[z]), &dxfx) {
                c5 = Some(Witness::Pair(x, z));
                break 'pairs;
            }
        }
    }
    report.record(Condition::SufptC, c5);
    Ok(report)
}

fn scoo_failure<U: Ultrametric + ?Sized>(u: &U, f: &[usize]) -> Option<usize> {
    let ord = u.order();
    (0..u.len()).find(|&x| {
        if f[x] == x {
            return false;
        }
        let d0 = u.dist(x, f[x]);
        let mut seen = PointSet::singleton(x);
        let mut y = f[x];
        while !seen.contains(y) {
            if ord.lt(&u.dist(y, f[y]), &d0) {
                return false;
            }
            seen.insert(y);
            y = f[y];
        }
        true
    })
}

/// Solver for the strong ultrametric fixed point theorem.
///
/// Returns a hypothesis violation report when (scoo) or the pair condition
/// fails. Otherwise the derived (SC1)–(SC3) are re-checked on the
/// assignment `x ↦ B(x, fx)`; a failure there is an internal contradiction.
/// The fixed point is found by the core orbit and restart solver.
pub fn solve_sufpt<U: Ultrametric + ?Sized>(
    u: &U,
    f: &[usize],
    start: usize,
    budget: usize,
) -> Result<FixedPointReport, UltrametricError> {
    let hyps = check_sufpt_hypotheses(u, f)?;
    if start >= u.len() {
        return Err(UltrametricError::PointOutOfRange(start));
    }
    if let Some(c) = hyps.first_failure() {
        return Ok(FixedPointReport {
            outcome: Outcome::HypothesisViolated {
                condition: c.condition,
                witness: c.witness.clone().expect("failed check has a witness"),
            },
            nest: None,
            iterations: 0,
        });
    }
    solve_self_contractive(u, f, start, budget)
}

fn solve_self_contractive<U: Ultrametric + ?Sized>(
    u: &U,
    f: &[usize],
    start: usize,
    budget: usize,
) -> Result<FixedPointReport, UltrametricError> {
    let assigned: Vec<PointSet> = (0..u.len()).map(|x| um_ball(u, x, f[x])).collect();
    let derived = ballspace::sc_axioms(f, &assigned);
    if let Some(c) = derived.first_failure() {
        return Err(UltrametricError::InternalContradiction {
            condition: c.condition,
            witness: c.witness.clone().expect("failed check has a witness"),
        });
    }
    let report = ballspace::gfpt2(f, &assigned, start, budget.max(1));
    match report.outcome {
        Outcome::FixedPoint { point } => {
            assert_eq!(f[point], point, "solver returned a non-fixed point");
            Ok(report)
        }
        Outcome::HypothesisViolated { condition, witness } => {
            Err(UltrametricError::InternalContradiction { condition, witness })
        }
        Outcome::BudgetExhausted => Ok(report),
    }
}

/// Conclusions of the lemma for contracting maps: `B_z ⊆ B_x` for
/// `z ∈ B_x`, `f(B_x) ⊆ B_x`, `B_{fx} ⊆ B_x`, and (SC3) over all f-nests.
/// A non-contracting map yields a report with only the failed
/// `Contracting` precondition.
pub fn check_csco<U: Ultrametric + ?Sized>(
    u: &U,
    f: &[usize],
) -> Result<ConditionReport, UltrametricError> {
    check_map(u, f)?;
    let mut report = ConditionReport::new();
    if let Some((x, y)) = contracting_witness(u, f) {
        report.fail(Condition::Contracting, Witness::Pair(x, y));
        return Ok(report);
    }
    report.pass(Condition::Contracting);
    let n = u.len();
    let assigned: Vec<PointSet> = (0..n).map(|x| um_ball(u, x, f[x])).collect();
    let zin = (0..n).find_map(|x| {
        assigned[x]
            .iter()
            .find(|&z| !assigned[z].is_subset(&assigned[x]))
            .map(|z| (x, z))
    });
    report.record(Condition::ZinBx, zin.map(|(x, z)| Witness::Pair(x, z)));
    let inv = (0..n).find(|&x| !assigned[x].image(f).is_subset(&assigned[x]));
    report.record(Condition::Invariant, inv.map(Witness::Point));
    let nest = (0..n).find(|&x| !assigned[f[x]].is_subset(&assigned[x]));
    report.record(Condition::Nesting, nest.map(Witness::Point));
    let sc = ballspace::sc_axioms(f, &assigned);
    let sc3 = sc.get(Condition::SC3).expect("SC3 evaluated");
    report.checks.push(sc3.clone());
    Ok(report)
}

/// Fixed point solver for contracting maps satisfying (scoo), via the
/// lemma above instead of the pair condition.
pub fn solve_ufpt<U: Ultrametric + ?Sized>(
    u: &U,
    f: &[usize],
    start: usize,
    budget: usize,
) -> Result<FixedPointReport, UltrametricError> {
    let csco = check_csco(u, f)?;
    let scoo = scoo_failure(u, f);
    if let Some(c) = csco.first_failure() {
        return Ok(FixedPointReport {
            outcome: Outcome::HypothesisViolated {
                condition: c.condition,
                witness: c.witness.clone().expect("failed check has a witness"),
            },
            nest: None,
            iterations: 0,
        });
    }
    if let Some(x) = scoo {
        return Ok(FixedPointReport {
            outcome: Outcome::HypothesisViolated {
                condition: Condition::Scoo,
                witness: Witness::Point(x),
            },
            nest: None,
            iterations: 0,
        });
    }
    solve_self_contractive(u, f, start, budget)
}

/// Outcome of the attractor solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractorReport {
    /// `x` with `φ(x) = z′`.
    pub preimage: usize,
    /// The orbit `x_0, f x_0, ..` built from the chooser responses.
    pub orbit: Vec<usize>,
    /// (UAT1)–(UAT3) and the derived strict descent of `B_x`, one entry
    /// per condition, aggregated over all steps.
    pub checks: ConditionReport,
}

/// Attractor solver: constructs `f` from the chooser (`fx = x` when
/// `φx = z′`, else `fx = chooser(x)`), validates (UAT1)–(UAT3) for each
/// response and follows the orbit until `φx = z′`.
///
/// (UAT3) is checked against every `t` of the domain. Since (UAT1) makes
/// `d′(φx, z′)` strictly decrease along the orbit and the value set is
/// finite, no restart stage is ever needed. The derived strict inclusion
/// `B_{fx} ⊊ B_x` is re-checked at every step.
pub fn solve_attractor<D, C>(
    domain: &D,
    codomain: &C,
    phi: &dyn Fn(usize) -> usize,
    z_prime: usize,
    start: usize,
    chooser: &mut dyn FnMut(usize) -> usize,
    budget: usize,
) -> Result<Option<AttractorReport>, UltrametricError>
where
    D: Ultrametric + ?Sized,
    C: Ultrametric + ?Sized,
{
    if start >= domain.len() {
        return Err(UltrametricError::PointOutOfRange(start));
    }
    if z_prime >= codomain.len() {
        return Err(UltrametricError::PointOutOfRange(z_prime));
    }
    let (dord, cord) = (domain.order(), codomain.order());
    let dz = |x: usize| codomain.dist(phi(x), z_prime);
    // φ(B(x, y)) ⊆ B(φx, z′)
    let maps_into = |x: usize, y: usize| {
        let r = dz(x);
        (0..domain.len())
            .filter(|&w| um_ball_contains(domain, x, y, w))
            .all(|w| cord.leq(&codomain.dist(phi(x), phi(w)), &r))
    };
    let mut orbit = vec![start];
    let mut x = start;
    let mut prev_ball: Option<PointSet> = None;
    for _ in 0..budget {
        if phi(x) == z_prime {
            let mut checks = ConditionReport::new();
            for c in [
                Condition::UAT1,
                Condition::UAT2,
                Condition::UAT3,
                Condition::SC2,
            ] {
                checks.pass(c);
            }
            return Ok(Some(AttractorReport {
                preimage: x,
                orbit,
                checks,
            }));
        }
        let y = chooser(x);
        if y >= domain.len() {
            return Err(UltrametricError::PointOutOfRange(y));
        }
        let violation = |condition, witness| UltrametricError::ContractViolation {
            condition,
            x,
            y,
            witness,
        };
        if !cord.lt(&dz(y), &dz(x)) {
            return Err(violation(
                Condition::UAT1,
                Witness::Message(format!(
                    "d'(phi y, z') = {} is not below d'(phi x, z') = {}",
                    cord.show(&dz(y)),
                    cord.show(&dz(x))
                )),
            ));
        }
        if !maps_into(x, y) {
            return Err(violation(Condition::UAT2, Witness::Pair(x, y)));
        }
        let dxy = domain.dist(x, y);
        let bad_t = (0..domain.len()).find(|&t| {
            cord.lt(&dz(x), &dz(t)) && maps_into(t, x) && !dord.comparable(&domain.dist(t, x), &dxy)
        });
        if let Some(t) = bad_t {
            return Err(violation(Condition::UAT3, Witness::Point(t)));
        }
        let ball = um_ball(domain, x, y);
        if let Some(prev) = &prev_ball {
            if !ball.is_proper_subset(prev) {
                return Err(UltrametricError::InternalContradiction {
                    condition: Condition::SC2,
                    witness: Witness::Message(format!(
                        "B({x}, {y}) is not strictly inside the previous orbit ball"
                    )),
                });
            }
        }
        prev_ball = Some(ball);
        orbit.push(y);
        x = y;
    }
    Ok(None)
}

/// The alternative condition (UAT3′) for a given `f`, in two columns:
/// the strict form `d(z, fz) < d(x, fx)` and the weaker comparability form.
pub fn check_uat3_prime<D, C>(
    domain: &D,
    codomain: &C,
    f: &[usize],
    phi: &dyn Fn(usize) -> usize,
    z_prime: usize,
) -> Result<ConditionReport, UltrametricError>
where
    D: Ultrametric + ?Sized,
    C: Ultrametric + ?Sized,
{
    check_map(domain, f)?;
    let n = domain.len();
    let (dord, cord) = (domain.order(), codomain.order());
    let balls: Vec<PointSet> = (0..n).map(|x| um_ball(domain, x, f[x])).collect();
    let premise = |x: usize, z: usize| {
        cord.lt(
            &codomain.dist(phi(z), z_prime),
            &codomain.dist(phi(x), z_prime),
        ) && balls[z].intersects(&balls[x])
    };
    let mut strict = None;
    let mut comparable = None;
    for x in 0..n {
        for z in 0..n {
            if !premise(x, z) {
                continue;
            }
            let (dz, dx) = (domain.dist(z, f[z]), domain.dist(x, f[x]));
            if strict.is_none() && !dord.lt(&dz, &dx) {
                strict = Some(Witness::Pair(x, z));
            }
            if comparable.is_none() && !dord.comparable(&dz, &dx) {
                comparable = Some(Witness::Pair(x, z));
            }
        }
    }
    let mut report = ConditionReport::new();
    report.record(Condition::UAT3Prime, strict);
    report.record(Condition::UAT3PrimeComparable, comparable);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballspace::default_names;
    use crate::poset::{product_poset, ValuePoset};

    /// d(a,b)=1, d(a,c)=2, d(b,c)=2 over the chain 0<1<2.
    fn three_point() -> FiniteUltrametric<ValuePoset> {
        FiniteUltrametric::from_triples(
            default_names(3),
            ValuePoset::chain(3),
            &[(0, 1, 1), (0, 2, 2), (1, 2, 2)],
        )
        .unwrap()
    }

    /// d(a,b)=2, d(b,c)=1, d(a,c)=2 over the chain 0<1<2.
    fn sufpt_space() -> FiniteUltrametric<ValuePoset> {
        FiniteUltrametric::from_triples(
            default_names(3),
            ValuePoset::chain(3),
            &[(0, 1, 2), (1, 2, 1), (0, 2, 2)],
        )
        .unwrap()
    }

    #[test]
    fn axioms_are_enforced() {
        let bad = FiniteUltrametric::from_triples(
            default_names(3),
            ValuePoset::chain(3),
            &[(0, 1, 1), (1, 2, 1), (0, 2, 2)],
        );
        assert!(matches!(
            bad,
            Err(UltrametricError::Axiom {
                condition: Condition::U2,
                ..
            })
        ));
        let zero =
            FiniteUltrametric::from_triples(default_names(2), ValuePoset::chain(2), &[(0, 1, 0)]);
        assert!(matches!(
            zero,
            Err(UltrametricError::Axiom {
                condition: Condition::U1,
                ..
            })
        ));
        let missing = FiniteUltrametric::from_triples(default_names(2), ValuePoset::chain(2), &[]);
        assert!(matches!(
            missing,
            Err(UltrametricError::MissingDistance(..))
        ));
        let report = check_axioms(&three_point());
        assert!(report.all_passed());
        assert!(report.passed(Condition::UT));
    }

    #[test]
    fn ball_membership() {
        let u = three_point();
        assert!(um_ball_contains(&u, 0, 1, 0));
        assert!(um_ball_contains(&u, 0, 1, 1));
        assert!(!um_ball_contains(&u, 0, 1, 2));
        assert_eq!(um_ball(&u, 0, 1), um_ball(&u, 1, 0));
    }

    #[test]
    fn ball_inclusion_criterion() {
        let u = three_point();
        for (t, z, x, y) in itertools(3) {
            assert_eq!(
                um_ball_leq(&u, (t, z), (x, y)),
                um_ball(&u, t, z).is_subset(&um_ball(&u, x, y))
            );
        }
        // d(b,a) = 1 < d(c,b) = 2
        assert!(um_ball(&u, 1, 0).is_proper_subset(&um_ball(&u, 2, 1)));
    }

    fn itertools(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        (0..n.pow(4)).map(move |k| (k % n, k / n % n, k / n / n % n, k / n / n / n))
    }

    #[test]
    fn contracting_examples() {
        let u = three_point();
        assert!(is_contracting(&u, &[0, 1, 2]));
        assert!(is_contracting(&u, &[2, 2, 2]));
        // a,b at distance 1 are sent to a,c at distance 2
        assert_eq!(contracting_witness(&u, &[0, 2, 2]), Some((0, 1)));
    }

    #[test]
    fn assignment_examples() {
        let u = sufpt_space();
        let f = [1, 2, 2];
        let (space, assign) = sufpt_assignment(&u, &f);
        let sets = assign.sets(&space).unwrap();
        assert_eq!(sets[2], PointSet::singleton(2));
        assert_eq!(sets[0], um_ball(&u, 0, 1));
        assert_eq!(sets[1], um_ball(&u, 1, 2));
    }

    #[test]
    fn sufpt_examples() {
        let u = sufpt_space();
        let f = [1, 2, 2];
        assert!(check_sufpt_hypotheses(&u, &f).unwrap().all_passed());
        assert_eq!(solve_sufpt(&u, &f, 0, 100).unwrap().fixed_point(), Some(2));
        assert_eq!(solve_sufpt(&u, &f, 2, 100).unwrap().iterations, 0);

        let cycle = [1, 0, 2];
        let report = check_sufpt_hypotheses(&u, &cycle).unwrap();
        assert!(!report.passed(Condition::Scoo));
        assert_eq!(
            solve_sufpt(&u, &cycle, 0, 100).unwrap().violated(),
            Some(Condition::Scoo)
        );

        assert!(check_sufpt_hypotheses(&u, &[0, 1, 2]).unwrap().all_passed());
    }

    #[test]
    fn csco_examples() {
        let u = sufpt_space();
        assert!(check_csco(&u, &[2, 2, 2]).unwrap().all_passed());
        assert!(check_csco(&u, &[1, 2, 2]).unwrap().all_passed());
        let bad = check_csco(&three_point(), &[0, 2, 2]).unwrap();
        assert!(!bad.passed(Condition::Contracting));
        assert_eq!(bad.checks.len(), 1);
        assert_eq!(
            solve_ufpt(&u, &[1, 2, 2], 0, 10).unwrap().fixed_point(),
            Some(2)
        );
    }

    /// Diamond-valued domain where UAT3 fails for the chooser y = 3 at x = 1.
    fn diamond_setup() -> (
        FiniteUltrametric<ValuePoset>,
        FiniteUltrametric<ValuePoset>,
        Vec<usize>,
    ) {
        let two = ValuePoset::chain(2);
        let d = product_poset(&two, &two);
        let (alpha, beta, one) = (
            d.index_of("(1,0)").unwrap(),
            d.index_of("(0,1)").unwrap(),
            d.index_of("(1,1)").unwrap(),
        );
        let domain = FiniteUltrametric::from_triples(
            default_names(4),
            d,
            &[
                (0, 1, alpha),
                (1, 3, beta),
                (0, 3, one),
                (0, 2, one),
                (1, 2, one),
                (2, 3, one),
            ],
        )
        .unwrap();
        let codomain = FiniteUltrametric::from_triples(
            vec!["w0".into(), "w1".into(), "w2".into()],
            ValuePoset::chain(3),
            &[(0, 1, 1), (0, 2, 2), (1, 2, 2)],
        )
        .unwrap();
        (domain, codomain, vec![2, 1, 1, 0])
    }

    #[test]
    fn attractor_identity_and_uat3_violation() {
        let u = three_point();
        let id = |x: usize| x;
        let mut never = |_: usize| -> usize { panic!("chooser must not be consulted") };
        let report = solve_attractor(&u, &u, &id, 1, 1, &mut never, 10)
            .unwrap()
            .unwrap();
        assert_eq!(report.preimage, 1);

        let (domain, codomain, phi) = diamond_setup();
        let phi_fn = |x: usize| phi[x];
        let mut chooser = |_: usize| 3;
        let err = solve_attractor(&domain, &codomain, &phi_fn, 0, 1, &mut chooser, 10).unwrap_err();
        assert!(matches!(
            err,
            UltrametricError::ContractViolation {
                condition: Condition::UAT3,
                x: 1,
                y: 3,
                ..
            }
        ));
    }

    #[test]
    fn uat3_prime_examples() {
        let u = three_point();
        let id = |x: usize| x;
        assert!(check_uat3_prime(&u, &u, &[0, 1, 2], &id, 0)
            .unwrap()
            .all_passed());

        let (domain, codomain, phi) = diamond_setup();
        let phi_fn = |x: usize| phi[x];
        let report = check_uat3_prime(&domain, &codomain, &[1, 3, 2, 3], &phi_fn, 0).unwrap();
        assert!(!report.passed(Condition::UAT3Prime));
        assert!(!report.passed(Condition::UAT3PrimeComparable));
    }
}
