//! p-adic integers at finite precision, the valuation in multiplicative
//! notation, Newton maps and Hensel lifting, distinguished nests.
//!
//! An element of `ℤ/p^Nℤ` stands for the p-adic integers it approximates.
//! The value of zero (and of anything divisible by `p^N`) is "below
//! resolution" and plays the role of `0 = v(0)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::ballspace::{BallAssignment, FiniteBallSpace};
use crate::pointset::PointSet;
use crate::poset::ValueOrder;
use crate::report::{Condition, ConditionReport, Witness};
use crate::ultrametric::{self, Ultrametric};

/// Largest supported modulus `p^N` (products stay below `2^124`).
pub const MODULUS_CAP: u64 = 1 << 62;
/// Largest modulus for exhaustive pair checks.
pub const EXHAUSTIVE_CAP: u64 = 10_000;
pub const DEGREE_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PAdicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("{p}^{n} exceeds the supported modulus")]
    ModulusTooLarge { p: u64, n: u32 },
    #[error("operands live in different residue rings")]
    DomainMismatch,
    #[error("derivative at {0} is not a unit")]
    NonUnitDerivative(u64),
    #[error("{x} is not a root of the polynomial mod {p}")]
    NotARoot { x: i64, p: u64 },
    #[error("degree {0} exceeds the cap of 16")]
    DegreeTooLarge(usize),
    #[error("map sends {x} to {image}, outside the valuation ideal")]
    LeavesIdeal { x: u64, image: u64 },
    #[error("{0} is outside the valuation ideal")]
    NotInIdeal(u64),
    #[error("modulus {0} is too large for exhaustive checking")]
    TooLargeForExhaustive(u64),
    #[error("no nests given")]
    EmptyInput,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    (2..)
        .take_while(|d| d * d <= p)
        .all(|d| !p.is_multiple_of(d))
}

fn modulus(p: u64, n: u32) -> Result<u64, PAdicError> {
    if !is_prime(p) {
        return Err(PAdicError::NotPrime(p));
    }
    if n == 0 {
        return Err(PAdicError::ZeroPrecision);
    }
    let mut m: u64 = 1;
    for _ in 0..n {
        m = m
            .checked_mul(p)
            .filter(|&m| m < MODULUS_CAP)
            .ok_or(PAdicError::ModulusTooLarge { p, n })?;
    }
    Ok(m)
}

/// A residue modulo `p^N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PAdicInt {
    p: u64,
    n: u32,
    modulus: u64,
    residue: u64,
}

impl PAdicInt {
    pub fn new(p: u64, n: u32, value: i128) -> Result<Self, PAdicError> {
        let modulus = modulus(p, n)?;
        Ok(Self {
            p,
            n,
            modulus,
            residue: value.rem_euclid(modulus as i128) as u64,
        })
    }

    /// Same ring as `self`, different residue.
    pub fn with(&self, value: i128) -> Self {
        Self {
            residue: value.rem_euclid(self.modulus as i128) as u64,
            ..*self
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.residue.is_multiple_of(self.p)
    }

    /// Member of the valuation ideal: divisible by `p`.
    pub fn in_ideal(&self) -> bool {
        !self.is_unit()
    }

    pub fn valuation(&self) -> PAdicValue {
        let mut e = 0;
        let mut r = self.residue;
        while r != 0 && r.is_multiple_of(self.p) && e < self.n {
            r /= self.p;
            e += 1;
        }
        if r == 0 {
            e = self.n;
        }
        PAdicValue {
            exponent: e,
            precision: self.n,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let g = (self.residue as i128).extended_gcd(&(self.modulus as i128));
        debug_assert_eq!(g.gcd, 1);
        Some(self.with(g.x))
    }

    /// The same number read modulo `p^k` (`k ≤ N`) or lifted by its
    /// canonical representative (`k > N`).
    pub fn at_precision(&self, k: u32) -> Result<Self, PAdicError> {
        PAdicInt::new(self.p, k, self.residue as i128)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(self.with(1), |acc, _| acc * *self)
    }

    fn same_ring(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }

    fn check(&self, other: &Self) {
        assert!(
            self.same_ring(other),
            "p-adic operands from different residue rings"
        );
    }
}

impl fmt::Debug for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.p, self.n)
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Add for PAdicInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        self.with(self.residue as i128 + rhs.residue as i128)
    }
}

impl Sub for PAdicInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        self.with(self.residue as i128 - rhs.residue as i128)
    }
}

impl Mul for PAdicInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        let prod = (self.residue as u128 * rhs.residue as u128) % self.modulus as u128;
        Self {
            residue: prod as u64,
            ..self
        }
    }
}

impl Neg for PAdicInt {
    type Output = Self;
    fn neg(self) -> Self {
        self.with(-(self.residue as i128))
    }
}

/// `v(x) = |p|^e`, multiplicative notation. `e = N` is the value `0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PAdicValue {
    exponent: u32,
    precision: u32,
}

impl PAdicValue {
    pub fn new(exponent: u32, precision: u32) -> Self {
        Self {
            exponent: exponent.min(precision),
            precision,
        }
    }

    pub fn zero(precision: u32) -> Self {
        Self {
            exponent: precision,
            precision,
        }
    }

    pub fn one(precision: u32) -> Self {
        Self {
            exponent: 0,
            precision,
        }
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Below resolution, i.e. the value `0`.
    pub fn is_zero(&self) -> bool {
        self.exponent >= self.precision
    }

    /// `v(x)v(y)`: exponents add, capped at `N`.
    pub fn times(&self, other: &Self) -> Self {
        Self::new(self.exponent + other.exponent, self.precision)
    }

    pub fn square(&self) -> Self {
        self.times(self)
    }
}

impl PartialOrd for PAdicValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PAdicValue {
    /// Larger exponent means smaller value.
    fn cmp(&self, other: &Self) -> Ordering {
        other.exponent.cmp(&self.exponent)
    }
}

impl fmt::Debug for PAdicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "|p|^{}", self.exponent)
        }
    }
}

/// `d(a, b) = v(a − b)`.
pub fn padic_dist(a: &PAdicInt, b: &PAdicInt) -> Result<PAdicValue, PAdicError> {
    if !a.same_ring(b) {
        return Err(PAdicError::DomainMismatch);
    }
    Ok((*a - *b).valuation())
}

/// The totally ordered value set `{0} ∪ {|p|^e : 0 ≤ e < N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PAdicValues {
    pub precision: u32,
}

impl ValueOrder for PAdicValues {
    type Value = PAdicValue;

    fn leq(&self, a: &PAdicValue, b: &PAdicValue) -> bool {
        a <= b
    }

    fn zero(&self) -> PAdicValue {
        PAdicValue::zero(self.precision)
    }

    fn values(&self) -> Vec<PAdicValue> {
        (0..=self.precision)
            .map(|e| PAdicValue::new(e, self.precision))
            .collect()
    }

    fn is_total(&self) -> bool {
        true
    }
}

/// Residues mod `p^N` as an ultrametric space: either all of them, or the
/// valuation ideal (multiples of `p`), indexed by `residue / p`.
#[derive(Clone, Copy, Debug)]
pub struct PAdicSpace {
    p: u64,
    n: u32,
    ideal: bool,
    order: PAdicValues,
}

impl PAdicSpace {
    pub fn full(p: u64, n: u32) -> Result<Self, PAdicError> {
        modulus(p, n)?;
        Ok(Self {
            p,
            n,
            ideal: false,
            order: PAdicValues { precision: n },
        })
    }

    pub fn ideal(p: u64, n: u32) -> Result<Self, PAdicError> {
        modulus(p, n)?;
        Ok(Self {
            p,
            n,
            ideal: true,
            order: PAdicValues { precision: n },
        })
    }

    pub fn element(&self, index: usize) -> PAdicInt {
        let step = if self.ideal { self.p } else { 1 };
        PAdicInt::new(self.p, self.n, index as i128 * step as i128)
            .expect("validated at construction")
    }

    pub fn index_of(&self, x: &PAdicInt) -> Result<usize, PAdicError> {
        if x.p != self.p || x.n != self.n {
            return Err(PAdicError::DomainMismatch);
        }
        if self.ideal {
            if !x.in_ideal() {
                return Err(PAdicError::NotInIdeal(x.residue));
            }
            Ok((x.residue / self.p) as usize)
        } else {
            Ok(x.residue as usize)
        }
    }

    /// Tabulates a map on the space's elements.
    pub fn table(&self, f: &dyn Fn(&PAdicInt) -> PAdicInt) -> Result<Vec<usize>, PAdicError> {
        (0..self.len())
            .map(|i| {
                let x = self.element(i);
                let fx = f(&x);
                self.index_of(&fx).map_err(|e| match e {
                    PAdicError::NotInIdeal(image) => PAdicError::LeavesIdeal {
                        x: x.residue,
                        image,
                    },
                    other => other,
                })
            })
            .collect()
    }
}

impl Ultrametric for PAdicSpace {
    type Order = PAdicValues;

    fn order(&self) -> &PAdicValues {
        &self.order
    }

    fn len(&self) -> usize {
        let m = modulus(self.p, self.n).expect("validated at construction");
        (if self.ideal { m / self.p } else { m }) as usize
    }

    fn dist(&self, x: usize, y: usize) -> PAdicValue {
        (self.element(x) - self.element(y)).valuation()
    }

    fn point_name(&self, x: usize) -> String {
        self.element(x).residue.to_string()
    }
}

/// A polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<i64>,
}

impl Polynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self, PAdicError> {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        if coeffs.len() - 1 > DEGREE_CAP {
            return Err(PAdicError::DegreeTooLarge(coeffs.len() - 1));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs: Vec<i64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as i64)
            .collect();
        Polynomial::new(coeffs).expect("derivative lowers the degree")
    }

    /// Horner evaluation in the ring of `x`.
    pub fn eval(&self, x: &PAdicInt) -> PAdicInt {
        self.coeffs
            .iter()
            .rev()
            .fold(x.with(0), |acc, &c| acc * *x + x.with(c as i128))
    }

    pub fn eval_int(&self, x: i128) -> i128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * x + c as i128)
    }
}

/// `x − P(x)/P′(x)` modulo `p^N`.
pub fn newton_map(poly: &Polynomial, x: &PAdicInt) -> Result<PAdicInt, PAdicError> {
    let inv = poly
        .derivative()
        .eval(x)
        .inverse()
        .ok_or(PAdicError::NonUnitDerivative(x.residue))?;
    Ok(*x - poly.eval(x) * inv)
}

/// The first `j ≥ 1` with `v(f^j x − f^{j+1} x) ≤ v(x − fx)²`, searched up
/// to the first repetition of the orbit. `Some(0)` for fixed points.
pub fn quadratic_drop_index(f: &dyn Fn(&PAdicInt) -> PAdicInt, x: &PAdicInt) -> Option<usize> {
    let fx = f(x);
    if fx == *x {
        return Some(0);
    }
    let target = (*x - fx).valuation().square();
    let mut seen = std::collections::HashSet::from([*x]);
    let mut y = fx;
    let mut j = 1;
    loop {
        let fy = f(&y);
        if (y - fy).valuation() <= target {
            return Some(j);
        }
        if !seen.insert(y) {
            return None;
        }
        y = fy;
        j += 1;
    }
}

/// Hypotheses of the fixed point theorem for fields complete by stages,
/// checked exhaustively on the valuation ideal: `f` is contracting, and
/// every `x` admits `j` with `v(f^j x − f^{j+1} x) ≤ v(x − fx)²`.
pub fn check_fptcbs_hypotheses(
    f: &dyn Fn(&PAdicInt) -> PAdicInt,
    p: u64,
    n: u32,
) -> Result<ConditionReport, PAdicError> {
    let m = modulus(p, n)?;
    if m > EXHAUSTIVE_CAP {
        return Err(PAdicError::TooLargeForExhaustive(m));
    }
    let space = PAdicSpace::ideal(p, n)?;
    let table = space.table(f)?;
    let mut report = ConditionReport::new();
    let contracting = ultrametric::contracting_witness(&space, &table);
    report.record(
        Condition::Contracting,
        contracting.map(|(x, y)| {
            Witness::Message(format!(
                "x = {}, y = {}",
                space.point_name(x),
                space.point_name(y)
            ))
        }),
    );
    let drop = (0..space.len())
        .map(|i| space.element(i))
        .find(|x| quadratic_drop_index(f, x).is_none());
    report.record(
        Condition::QuadraticDrop,
        drop.map(|x| Witness::Message(format!("x = {}", x.residue))),
    );
    Ok(report)
}

/// The ball space `B(x, y)` on the valuation ideal together with the
/// tabulated map and the assignment `x ↦ B(x, fx)`.
pub fn fptcbs_ball_space(
    f: &dyn Fn(&PAdicInt) -> PAdicInt,
    p: u64,
    n: u32,
) -> Result<(PAdicSpace, FiniteBallSpace, Vec<usize>, BallAssignment), PAdicError> {
    let space = PAdicSpace::ideal(p, n)?;
    let table = space.table(f)?;
    let (balls, assign) = ultrametric::sufpt_assignment(&space, &table);
    Ok((space, balls, table, assign))
}

/// Result of a Hensel lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HenselTrace {
    pub root: PAdicInt,
    /// `(precision k, root mod p^k)` for `k = 1, 2, 4, .., N`.
    pub trace: Vec<(u32, u64)>,
}

/// Lifts a simple root `x0` of `P` modulo `p` to a root modulo `p^N`,
/// doubling the working precision at each Newton step.
pub fn hensel_lift(poly: &Polynomial, x0: i64, p: u64, n: u32) -> Result<HenselTrace, PAdicError> {
    let mut x = PAdicInt::new(p, 1, x0 as i128)?;
    modulus(p, n)?;
    if !poly.eval(&x).is_zero() {
        return Err(PAdicError::NotARoot { x: x0, p });
    }
    if !poly.derivative().eval(&x).is_unit() {
        return Err(PAdicError::NonUnitDerivative(x.residue));
    }
    let mut trace = vec![(1, x.residue)];
    let mut k = 1;
    while k < n {
        k = (2 * k).min(n);
        x = newton_map(poly, &x.at_precision(k)?)?;
        trace.push((k, x.residue));
    }
    assert!(
        poly.eval(&x).is_zero(),
        "lifted value is not a root mod p^N"
    );
    Ok(HenselTrace { root: x, trace })
}

/// A ball `B(x, y)` in `ℤ/p^Nℤ`: the residue class of `x` modulo
/// `p^{e}` with `|p|^e = v(x − y)`.
fn class_of(x: &PAdicInt, y: &PAdicInt) -> (u32, u64) {
    let e = (*x - *y).valuation().exponent();
    let m = x.p.pow(e);
    (e, x.residue % m)
}

/// Every generator pair `(x, y)` has a partner `(x′, y′)` in the nest with
/// `v(x′ − y′) ≤ v(x − y)²`.
pub fn is_distinguished_nest(balls: &[(PAdicInt, PAdicInt)]) -> Result<bool, PAdicError> {
    for (x, y) in balls {
        if !x.same_ring(y) {
            return Err(PAdicError::DomainMismatch);
        }
        for z in [x, y] {
            if !z.in_ideal() {
                return Err(PAdicError::NotInIdeal(z.residue));
            }
        }
    }
    Ok(balls.iter().all(|(x, y)| {
        let target = (*x - *y).valuation().square();
        balls.iter().any(|(a, b)| (*a - *b).valuation() <= target)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CbsEntry {
    pub distinguished: bool,
    /// The intersection as a residue class `(representative, exponent)`,
    /// i.e. all `z ≡ representative mod p^exponent`.
    pub intersection: Option<(u64, u32)>,
}

/// Finite precision shadow of completeness by stages: every sample nest is
/// classified and its intersection computed from the residue classes.
pub fn check_cbs_equivalence(
    nests: &[Vec<(PAdicInt, PAdicInt)>],
) -> Result<Vec<CbsEntry>, PAdicError> {
    if nests.is_empty() {
        return Err(PAdicError::EmptyInput);
    }
    nests
        .iter()
        .map(|nest| {
            let distinguished = is_distinguished_nest(nest)?;
            let classes: Vec<(u32, u64)> = nest.iter().map(|(x, y)| class_of(x, y)).collect();
            let intersection = classes.iter().max_by_key(|c| c.0).and_then(|&(e, r)| {
                let p = nest[0].0.p;
                classes
                    .iter()
                    .all(|&(e2, r2)| r % p.pow(e2) == r2)
                    .then_some((r, e))
            });
            Ok(CbsEntry {
                distinguished,
                intersection,
            })
        })
        .collect()
}

/// The residues of the valuation ideal contained in the intersection
/// returned by [`check_cbs_equivalence`].
pub fn class_members(p: u64, n: u32, class: (u64, u32)) -> PointSet {
    let space = PAdicSpace::ideal(p, n).expect("valid ring");
    let m = p.pow(class.1);
    (0..space.len())
        .filter(|&i| space.element(i).residue % m == class.0)
        .collect()
}
