//! Condition tags, witnesses and pass/fail reports shared by every checker.

use std::fmt;

use serde::Serialize;

use crate::pointset::PointSet;

/// Named hypothesis or axiom that a checker evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Condition {
    C1,
    C2,
    C3,
    CU1,
    CU2,
    CU3,
    SC1,
    SC2,
    SC3,
    /// Every f-nest admits `z ∈ ⋂N` with `B_z ⊆ ⋂N`.
    NestIntersection,
    U1,
    U2,
    U3,
    UT,
    Contracting,
    /// `x ≠ fx ⇒ ∃ i ≥ 1: d(f^i x, f^{i+1} x) < d(x, fx)`.
    Scoo,
    /// `d(z, fx) ≤ d(fx, f²x) ⇒ d(z, fz) ≤ d(x, fx)`.
    SufptC,
    /// `B_z ⊆ B_x` for all `z ∈ B_x`.
    ZinBx,
    /// `f(B_x) ⊆ B_x`.
    Invariant,
    /// `B_{fx} ⊆ B_x`.
    Nesting,
    UAT1,
    UAT2,
    UAT3,
    UAT3Prime,
    UAT3PrimeComparable,
    VF1,
    VF2,
    VF3,
    /// `v(f^j x − f^{j+1} x) ≤ v(x − fx)²` for some `j`.
    QuadraticDrop,
    /// Nonempty intersection of a distinguished nest.
    Distinguished,
    OContracting,
    StrictOrbit,
    /// Geometric-series orbit bound `d(x, f^i x) ≤ d(x, fx)/(1 − C)`.
    GeometricBound,
    /// The estimate `d(z, fz) ≤ C^{i−1}(C+1)/(1−C) · d(x, fx)`.
    Sc3Estimate,
    ClosedMap,
    TopnWeak,
    TopnStrong,
    Top3,
    J1,
    J2,
    JContraction,
    Connected,
    Hausdorff,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::UAT3Prime => "UAT3'",
            Condition::UAT3PrimeComparable => "UAT3'-comparable",
            other => return write!(f, "{other:?}"),
        };
        f.write_str(s)
    }
}

/// Evidence attached to a failed (or sometimes passed) check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Ball(PointSet),
    Nest(Vec<PointSet>),
    Point(usize),
    Pair(usize, usize),
    Message(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Ball(b) => write!(f, "ball {b:?}"),
            Witness::Nest(n) => write!(f, "nest {n:?}"),
            Witness::Point(p) => write!(f, "point {p}"),
            Witness::Pair(a, b) => write!(f, "pair ({a}, {b})"),
            Witness::Message(m) => f.write_str(m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub condition: Condition,
    pub passed: bool,
    pub witness: Option<Witness>,
}

/// Outcome of a hypothesis checker: one entry per evaluated condition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub checks: Vec<Check>,
    /// Set when the verdicts come from sampled orbits rather than exhaustive
    /// enumeration.
    pub sampled: bool,
}

impl ConditionReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, condition: Condition) {
        self.checks.push(Check {
            condition,
            passed: true,
            witness: None,
        });
    }

    pub fn fail(&mut self, condition: Condition, witness: Witness) {
        self.checks.push(Check {
            condition,
            passed: false,
            witness: Some(witness),
        });
    }

    pub fn record(&mut self, condition: Condition, failure: Option<Witness>) {
        match failure {
            None => self.pass(condition),
            Some(w) => self.fail(condition, w),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, condition: Condition) -> Option<&Check> {
        self.checks.iter().find(|c| c.condition == condition)
    }

    /// `true` iff the condition was evaluated and passed.
    pub fn passed(&self, condition: Condition) -> bool {
        self.get(condition).is_some_and(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            write!(f, "{:>18}: {verdict}", c.condition.to_string())?;
            if let Some(w) = &c.witness {
                write!(f, " ({w})")?;
            }
            writeln!(f)?;
        }
        if self.sampled {
            writeln!(f, "(sampled: verdicts cover the probed orbits only)")?;
        }
        Ok(())
    }
}
