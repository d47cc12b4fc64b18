//! Contractions on `Tⁿ` with the maximum-coordinate metric, for an exact
//! ordered field `T` (in practice [`crate::Rational`]).
//!
//! The orbit balls `B_x = { y : d(x, y) ≤ d(x, fx)/(1 − C) }` are checked
//! against (SC1)–(SC3) with exact arithmetic, and the iteration solver
//! returns a certificate ball that contains the true fixed point.

use std::fmt;
use std::sync::Arc;

use num_traits::{Num, Signed};
use thiserror::Error;

use crate::report::{Condition, ConditionReport, Witness};

/// Exact ordered field used for coordinates.
pub trait Scalar:
    Clone + Num + Signed + PartialOrd + fmt::Debug + fmt::Display + Send + Sync
{
}

impl<T> Scalar for T where
    T: Clone + Num + Signed + PartialOrd + fmt::Debug + fmt::Display + Send + Sync
{
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BanachError {
    #[error("contraction constant {0} is not in (0, 1)")]
    InvalidConstant(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("orbit step {step}: d(fx, f^2 x) = {observed} exceeds C d(x, fx) = {bound}")]
    SpecViolation {
        step: usize,
        observed: String,
        bound: String,
    },
    #[error("budget exhausted after {iterations} iterations, d(x, fx) = {residual}")]
    BudgetExhausted { iterations: usize, residual: String },
    #[error("tolerance must be positive")]
    NonPositiveEpsilon,
    #[error("orbit length must be at least 2")]
    OrbitTooShort,
    #[error("uniqueness needs a strictly contracting map")]
    NotStrict,
    #[error("{0} is not a fixed point")]
    NotAFixedPoint(String),
    #[error("empty point")]
    EmptyPoint,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point<T>(pub Vec<T>);

impl<T: Scalar> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self, BanachError> {
        if coords.is_empty() {
            return Err(BanachError::EmptyPoint);
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }
}

impl<T: fmt::Display> fmt::Debug for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `max_i |a_i − b_i|`.
pub fn dist<T: Scalar>(a: &Point<T>, b: &Point<T>) -> T {
    assert_eq!(a.dim(), b.dim(), "points of different dimension");
    a.0.iter()
        .zip(&b.0)
        .map(|(x, y)| (x.clone() - y.clone()).abs())
        .fold(T::zero(), |m, d| if d > m { d } else { m })
}

/// Closed ball of the maximum metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricBall<T: Scalar> {
    pub center: Point<T>,
    pub radius: T,
}

impl<T: Scalar> MetricBall<T> {
    pub fn contains(&self, p: &Point<T>) -> bool {
        dist(&self.center, p) <= self.radius
    }

    /// Exact inclusion test: balls of the maximum metric are cubes, and a
    /// cube lies in another iff `d(c, c′) + r ≤ r′`.
    pub fn is_subset(&self, other: &MetricBall<T>) -> bool {
        dist(&self.center, &other.center) + self.radius.clone() <= other.radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionMode {
    /// `d(fx, fy) ≤ C d(x, y)` for all `x, y`.
    Strict,
    /// Contracting, and `d(fx, f²x) ≤ C d(x, fx)` along orbits.
    OrbitStrict,
}

pub type MapFn<T> = Arc<dyn Fn(&Point<T>) -> Point<T> + Send + Sync>;

/// A self-map of `Tⁿ` with its claimed contraction constant.
#[derive(Clone)]
pub struct ContractionSpec<T> {
    f: MapFn<T>,
    c: T,
    mode: ContractionMode,
}

impl<T: Scalar> ContractionSpec<T> {
    pub fn new(f: MapFn<T>, c: T, mode: ContractionMode) -> Result<Self, BanachError> {
        if c <= T::zero() || c >= T::one() {
            return Err(BanachError::InvalidConstant(c.to_string()));
        }
        Ok(Self { f, c, mode })
    }

    pub fn apply(&self, x: &Point<T>) -> Point<T> {
        (self.f)(x)
    }

    pub fn constant(&self) -> &T {
        &self.c
    }

    pub fn mode(&self) -> ContractionMode {
        self.mode
    }

    fn one_minus_c(&self) -> T {
        T::one() - self.c.clone()
    }
}

impl<T> fmt::Debug for ContractionSpec<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContractionSpec")
            .field("c", &self.c)
            .field("mode", &self.mode)
            .finish_non_exhaustive()
    }
}

/// `v ↦ A v + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
}

impl<T: Scalar + 'static> AffineMap<T> {
    pub fn new(a: Vec<Vec<T>>, b: Vec<T>) -> Result<Self, BanachError> {
        let n = b.len();
        if n == 0 {
            return Err(BanachError::EmptyPoint);
        }
        if a.len() != n {
            return Err(BanachError::DimensionMismatch {
                expected: n,
                got: a.len(),
            });
        }
        if let Some(row) = a.iter().find(|r| r.len() != n) {
            return Err(BanachError::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn apply(&self, v: &Point<T>) -> Point<T> {
        Point(
            self.a
                .iter()
                .zip(&self.b)
                .map(|(row, bi)| {
                    row.iter()
                        .zip(&v.0)
                        .fold(bi.clone(), |acc, (aij, vj)| acc + aij.clone() * vj.clone())
                })
                .collect(),
        )
    }

    /// `max_i Σ_j |a_ij|`, the Lipschitz constant for the maximum metric.
    pub fn max_row_sum(&self) -> T {
        self.a
            .iter()
            .map(|row| row.iter().fold(T::zero(), |s, x| s + x.abs()))
            .fold(T::zero(), |m, s| if s > m { s } else { m })
    }

    pub fn into_spec(self, c: T) -> Result<ContractionSpec<T>, BanachError> {
        let map = Arc::new(self);
        ContractionSpec::new(
            Arc::new(move |v: &Point<T>| map.apply(v)),
            c,
            ContractionMode::Strict,
        )
    }
}

/// `B_x` with radius `d(x, fx)/(1 − C)`.
pub fn orbit_ball<T: Scalar>(spec: &ContractionSpec<T>, x: &Point<T>) -> MetricBall<T> {
    let r = dist(x, &spec.apply(x)) / spec.one_minus_c();
    MetricBall {
        center: x.clone(),
        radius: r,
    }
}

/// Smallest `i ≥ 1` with `C^i/(1 − C) < 1/2`.
pub fn strict_drop_index<T: Scalar>(c: &T) -> u32 {
    let half = T::one() / (T::one() + T::one());
    let denom = T::one() - c.clone();
    let mut power = c.clone();
    let mut i = 1;
    while power.clone() / denom.clone() >= half {
        power = power * c.clone();
        i += 1;
    }
    i
}

/// Result of [`verify_banach_sc`].
#[derive(Clone, Debug)]
pub struct BanachScReport<T: Scalar> {
    pub checks: ConditionReport,
    pub strict_drop_index: u32,
    pub orbit: Vec<Point<T>>,
    pub balls: Vec<MetricBall<T>>,
}

/// Checks, along `x_0, .., x_L`:
/// - the contraction ratio `d(x_{k+1}, x_{k+2}) ≤ C d(x_k, x_{k+1})`
///   (a violation is an error, not a failed check);
/// - (SC1) `x_k ∈ B_{x_k}`;
/// - nesting `d(x_k, x_{k+1}) + r_{k+1} ≤ r_k`;
/// - with the strict-drop index `i`: `x_k` and `x_{k+1}` are not both in
///   `B_{x_{k+i}}`, whenever `x_k` is not fixed;
/// - the geometric bound `d(x_0, x_k) ≤ d(x_0, x_1)/(1 − C)`;
/// - for `z = x_L`: `d(z, fz) ≤ C^{i−1}(C + 1)/(1 − C) · d(x_k, x_{k+1})`
///   for every `k` and `1 ≤ i ≤ L − k`, and `B_z ⊆ B_{x_k}`.
pub fn verify_banach_sc<T: Scalar>(
    spec: &ContractionSpec<T>,
    x0: &Point<T>,
    len: usize,
) -> Result<BanachScReport<T>, BanachError> {
    if len < 2 {
        return Err(BanachError::OrbitTooShort);
    }
    let c = spec.constant().clone();
    let omc = spec.one_minus_c();
    let mut orbit = vec![x0.clone()];
    for _ in 0..=len {
        let next = spec.apply(orbit.last().expect("nonempty orbit"));
        if next.dim() != x0.dim() {
            return Err(BanachError::DimensionMismatch {
                expected: x0.dim(),
                got: next.dim(),
            });
        }
        orbit.push(next);
    }
    // d[k] = d(x_k, x_{k+1}) for k = 0..=len
    let d: Vec<T> = orbit.windows(2).map(|w| dist(&w[0], &w[1])).collect();
    for k in 0..len {
        let bound = c.clone() * d[k].clone();
        if d[k + 1] > bound {
            return Err(BanachError::SpecViolation {
                step: k,
                observed: d[k + 1].to_string(),
                bound: bound.to_string(),
            });
        }
    }
    let balls: Vec<MetricBall<T>> = (0..=len)
        .map(|k| MetricBall {
            center: orbit[k].clone(),
            radius: d[k].clone() / omc.clone(),
        })
        .collect();
    let mut report = ConditionReport::new();

    report.record(
        Condition::SC1,
        (0..=len)
            .find(|&k| !balls[k].contains(&orbit[k]))
            .map(Witness::Point),
    );

    let nesting = (0..len).find(|&k| d[k].clone() + balls[k + 1].radius.clone() > balls[k].radius);
    report.record(Condition::Nesting, nesting.map(Witness::Point));

    let i = strict_drop_index(&c) as usize;
    let strict = (0..=len)
        .filter(|&k| k + i <= len && !d[k].is_zero())
        .find(|&k| {
            let b = &balls[k + i];
            b.contains(&orbit[k]) && b.contains(&orbit[k + 1])
        });
    report.record(Condition::SC2, strict.map(Witness::Point));

    let bound0 = d[0].clone() / omc.clone();
    let geometric = (0..=len + 1).find(|&k| dist(x0, &orbit[k]) > bound0);
    report.record(Condition::GeometricBound, geometric.map(Witness::Point));

    let z = len;
    let dz = d[z].clone();
    let coef = |i: usize| {
        let mut p = T::one();
        for _ in 0..i - 1 {
            p = p * c.clone();
        }
        p * (c.clone() + T::one()) / omc.clone()
    };
    let estimate = (0..z)
        .flat_map(|k| (1..=z - k).map(move |i| (k, i)))
        .find(|&(k, i)| dz > coef(i) * d[k].clone())
        .map(|(k, i)| Witness::Message(format!("x = x_{k}, i = {i}")));
    report.record(Condition::Sc3Estimate, estimate);

    let sc3 = (0..z).find(|&k| !balls[z].is_subset(&balls[k]));
    report.record(Condition::SC3, sc3.map(Witness::Point));

    orbit.truncate(len + 1);
    Ok(BanachScReport {
        checks: report,
        strict_drop_index: i as u32,
        orbit,
        balls,
    })
}

/// Approximate fixed point with a certificate ball of radius `≤ ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BanachSolution<T: Scalar> {
    pub point: Point<T>,
    pub certificate: MetricBall<T>,
    pub iterations: usize,
}

/// Iterates until `d(x, fx) ≤ ε(1 − C)`; the certificate `B_x` then has
/// radius `≤ ε` and contains the limit of the orbit.
pub fn solve_banach<T: Scalar>(
    spec: &ContractionSpec<T>,
    x0: &Point<T>,
    eps: &T,
    budget: usize,
) -> Result<BanachSolution<T>, BanachError> {
    if *eps <= T::zero() {
        return Err(BanachError::NonPositiveEpsilon);
    }
    let target = eps.clone() * spec.one_minus_c();
    let mut x = x0.clone();
    for iterations in 0..=budget {
        let fx = spec.apply(&x);
        if fx.dim() != x.dim() {
            return Err(BanachError::DimensionMismatch {
                expected: x.dim(),
                got: fx.dim(),
            });
        }
        let d = dist(&x, &fx);
        if d <= target {
            let certificate = MetricBall {
                center: x.clone(),
                radius: d / spec.one_minus_c(),
            };
            return Ok(BanachSolution {
                point: x,
                certificate,
                iterations,
            });
        }
        if iterations == budget {
            return Err(BanachError::BudgetExhausted {
                iterations,
                residual: d.to_string(),
            });
        }
        x = fx;
    }
    unreachable!("loop returns on its last iteration")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Uniqueness<T> {
    /// Both candidates are the same fixed point.
    Unique,
    /// Two distinct fixed points would give `d(x, y) = d(fx, fy) ≤ C d(x, y)
    /// < d(x, y)`.
    Impossible { distance: T },
}

pub fn check_uniqueness<T: Scalar>(
    spec: &ContractionSpec<T>,
    a: &Point<T>,
    b: &Point<T>,
) -> Result<Uniqueness<T>, BanachError> {
    if spec.mode() != ContractionMode::Strict {
        return Err(BanachError::NotStrict);
    }
    for p in [a, b] {
        if spec.apply(p) != *p {
            return Err(BanachError::NotAFixedPoint(p.to_string()));
        }
    }
    if a == b {
        return Ok(Uniqueness::Unique);
    }
    let d = dist(a, b);
    debug_assert!(dist(&spec.apply(a), &spec.apply(b)) > spec.constant().clone() * d.clone());
    Ok(Uniqueness::Impossible { distance: d })
}
