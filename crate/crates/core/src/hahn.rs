//! Truncated Hahn series `Σ c_k t^k` with rational coefficients and integer
//! exponents below a truncation bound `T`.
//!
//! `t` is a positive infinitesimal, so the sign of a series is the sign of
//! its leading (smallest exponent) coefficient, and the natural valuation
//! of a nonzero series is its leading exponent: a larger exponent means an
//! infinitesimally smaller absolute value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rational;

pub const DEFAULT_TRUNCATION: i64 = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("cannot parse series term {0:?}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Clone)]
pub struct HahnSeries {
    /// `(exponent, coefficient)`, exponents strictly increasing, all below
    /// `trunc`, coefficients nonzero.
    terms: Vec<(i64, Rational)>,
    trunc: i64,
}

impl HahnSeries {
    pub fn zero(trunc: i64) -> Self {
        Self {
            terms: Vec::new(),
            trunc,
        }
    }

    pub fn constant(c: Rational, trunc: i64) -> Self {
        Self::from_terms(vec![(0, c)], trunc)
    }

    /// `c t^k`.
    pub fn monomial(c: Rational, k: i64, trunc: i64) -> Self {
        Self::from_terms(vec![(k, c)], trunc)
    }

    /// `t`.
    pub fn t(trunc: i64) -> Self {
        Self::monomial(Rational::one(), 1, trunc)
    }

    /// Sums like exponents, drops zero coefficients and exponents `≥ trunc`.
    pub fn from_terms(mut terms: Vec<(i64, Rational)>, trunc: i64) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(i64, Rational)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if e >= trunc {
                continue;
            }
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { terms: out, trunc }
    }

    pub fn terms(&self) -> &[(i64, Rational)] {
        &self.terms
    }

    pub fn truncation(&self) -> i64 {
        self.trunc
    }

    pub fn with_truncation(&self, trunc: i64) -> Self {
        Self::from_terms(self.terms.clone(), trunc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(i64, Rational)> {
        self.terms.first()
    }

    pub fn leading_exponent(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    /// Coefficient of `t^k`.
    pub fn coefficient(&self, k: i64) -> Rational {
        self.terms
            .iter()
            .find(|t| t.0 == k)
            .map(|t| t.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `-1`, `0` or `1`.
    pub fn signum(&self) -> i32 {
        match self.leading() {
            None => 0,
            Some((_, c)) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
            self.trunc,
        )
    }

    pub fn natural_value(&self) -> NaturalValue {
        match self.leading_exponent() {
            None => NaturalValue::Zero,
            Some(e) => NaturalValue::Exp(e),
        }
    }

    /// Multiplicative inverse, correct for all exponents below the
    /// truncation bound.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let (e, c) = self.leading().cloned().ok_or(SeriesError::DivisionByZero)?;
        // self = c t^e (1 + u), u with positive exponents
        let cinv = c.recip();
        let wide = self.trunc - e;
        let u = HahnSeries::from_terms(
            self.terms[1..]
                .iter()
                .map(|(k, x)| (k - e, x * &cinv))
                .collect(),
            wide,
        );
        let neg_u = -u;
        let mut sum = HahnSeries::constant(Rational::one(), wide);
        let mut power = sum.clone();
        loop {
            power = &power * &neg_u;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(HahnSeries::from_terms(
            sum.terms
                .into_iter()
                .map(|(k, x)| (k - e, x * &cinv))
                .collect(),
            self.trunc,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self * &other.inverse()?)
    }
}

impl PartialEq for HahnSeries {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for HahnSeries {}

impl PartialOrd for HahnSeries {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HahnSeries {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a HahnSeries> for &'a HahnSeries {
    type Output = HahnSeries;
    fn add(self, rhs: &HahnSeries) -> HahnSeries {
        let terms = self.terms.iter().chain(&rhs.terms).cloned().collect();
        HahnSeries::from_terms(terms, self.trunc.min(rhs.trunc))
    }
}

impl<'a> Sub<&'a HahnSeries> for &'a HahnSeries {
    type Output = HahnSeries;
    fn sub(self, rhs: &HahnSeries) -> HahnSeries {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a HahnSeries> for &'a HahnSeries {
    type Output = HahnSeries;
    fn mul(self, rhs: &HahnSeries) -> HahnSeries {
        let trunc = self.trunc.min(rhs.trunc);
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                if e1 + e2 < trunc {
                    terms.push((e1 + e2, c1 * c2));
                }
            }
        }
        HahnSeries::from_terms(terms, trunc)
    }
}

impl Add for HahnSeries {
    type Output = HahnSeries;
    fn add(self, rhs: HahnSeries) -> HahnSeries {
        &self + &rhs
    }
}

impl Sub for HahnSeries {
    type Output = HahnSeries;
    fn sub(self, rhs: HahnSeries) -> HahnSeries {
        &self - &rhs
    }
}

impl Mul for HahnSeries {
    type Output = HahnSeries;
    fn mul(self, rhs: HahnSeries) -> HahnSeries {
        &self * &rhs
    }
}

impl Neg for HahnSeries {
    type Output = HahnSeries;
    fn neg(mut self) -> HahnSeries {
        for (_, c) in &mut self.terms {
            *c = -c.clone();
        }
        self
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *e == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                write!(f, "t^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl HahnSeries {
    /// Parses `"3/2 + 2t^1 - 1/4t^3"`; `t` alone means `t^1`.
    pub fn parse(s: &str, trunc: i64) -> Result<Self, SeriesError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(SeriesError::Parse(s.to_string()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..=bytes.len() {
            let boundary = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^');
            if boundary {
                terms.push(parse_term(&compact[start..i])?);
                start = i;
            }
        }
        Ok(Self::from_terms(terms, trunc))
    }
}

fn parse_term(raw: &str) -> Result<(i64, Rational), SeriesError> {
    let err = || SeriesError::Parse(raw.to_string());
    let (sign, body) = match raw.as_bytes().first() {
        Some(b'-') => (-1, &raw[1..]),
        Some(b'+') => (1, &raw[1..]),
        _ => (1, raw),
    };
    let (coef, exp) = match body.find('t') {
        None => (body, 0),
        Some(pos) => {
            let rest = &body[pos + 1..];
            let exp = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .ok_or_else(err)?
                    .parse::<i64>()
                    .map_err(|_| err())?
            };
            (&body[..pos], exp)
        }
    };
    let c = if coef.is_empty() {
        if exp == 0 {
            return Err(err());
        }
        Rational::one()
    } else {
        Rational::from_str(coef).map_err(|_| err())?
    };
    Ok((exp, if sign < 0 { -c } else { c }))
}

/// Archimedean class of an element: `Zero` for `0`, otherwise the leading
/// exponent. `Zero` is the least value; a smaller exponent is a larger
/// value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NaturalValue {
    Zero,
    Exp(i64),
}

impl NaturalValue {
    /// `va · vb = v(ab)`.
    pub fn times(&self, other: &Self) -> Self {
        match (self, other) {
            (NaturalValue::Exp(a), NaturalValue::Exp(b)) => NaturalValue::Exp(a + b),
            _ => NaturalValue::Zero,
        }
    }
}

impl PartialOrd for NaturalValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NaturalValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NaturalValue::Zero, NaturalValue::Zero) => Ordering::Equal,
            (NaturalValue::Zero, _) => Ordering::Less,
            (_, NaturalValue::Zero) => Ordering::Greater,
            (NaturalValue::Exp(a), NaturalValue::Exp(b)) => b.cmp(a),
        }
    }
}

pub fn natural_valuation(a: &HahnSeries) -> NaturalValue {
    a.natural_value()
}

/// `n|a| ≥ |b|` and `n|b| ≥ |a|` for some `n`; both nonzero.
pub fn archimedean_equivalent(a: &HahnSeries, b: &HahnSeries) -> bool {
    !a.is_zero() && a.natural_value() == b.natural_value()
}

/// `|a| ≪ |b|`: `n|a| < |b|` for every `n`.
pub fn infinitesimally_smaller(a: &HahnSeries, b: &HahnSeries) -> bool {
    a.natural_value() < b.natural_value()
}

/// `B_o(g; r) = { z : |g − z| ≤ r }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderBall {
    pub center: HahnSeries,
    pub radius: HahnSeries,
}

impl OrderBall {
    pub fn new(center: HahnSeries, radius: HahnSeries) -> Option<Self> {
        (radius.signum() >= 0).then_some(Self { center, radius })
    }

    pub fn contains(&self, z: &HahnSeries) -> bool {
        (&self.center - z).abs() <= self.radius
    }

    pub fn lower(&self) -> HahnSeries {
        &self.center - &self.radius
    }

    pub fn upper(&self) -> HahnSeries {
        &self.center + &self.radius
    }
}

/// `z ∈ B_u(x, y)`, i.e. `v(x − z) ≤ v(x − y)`.
pub fn um_contains(x: &HahnSeries, y: &HahnSeries, z: &HahnSeries) -> bool {
    (x - z).natural_value() <= (x - y).natural_value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    const T: i64 = DEFAULT_TRUNCATION;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn s(text: &str) -> HahnSeries {
        HahnSeries::parse(text, T).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let a = s("3/2 + 2t^1 - 1/4t^3");
        assert_eq!(a.terms(), &[(0, q(3, 2)), (1, q(2, 1)), (3, q(-1, 4))]);
        assert_eq!(a.to_string(), "3/2 + 2t^1 - 1/4t^3");
        assert_eq!(s(&a.to_string()), a);
        assert_eq!(s("t"), HahnSeries::t(T));
        assert_eq!(s("-t^2 + t^2"), HahnSeries::zero(T));
        assert_eq!(s("0").to_string(), "0");
        assert!(HahnSeries::parse("3x", T).is_err());
        assert!(HahnSeries::parse("", T).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(natural_valuation(&HahnSeries::zero(T)), NaturalValue::Zero);
        assert_eq!(natural_valuation(&s("3 + 2t")), NaturalValue::Exp(0));
        assert_eq!(natural_valuation(&s("t^2 - 5t^3")), NaturalValue::Exp(2));
        assert!(natural_valuation(&s("t^2")) < natural_valuation(&s("t")));
        // n t^2 < t for all n: check some large n
        assert!(s("1000000t^2") < s("t"));
    }

    #[test]
    fn archimedean_relations() {
        assert!(archimedean_equivalent(&s("5"), &s("7")));
        assert!(infinitesimally_smaller(&s("t"), &s("1")));
        assert!(archimedean_equivalent(&s("t + t^2"), &s("t")));
        assert!(!archimedean_equivalent(
            &HahnSeries::zero(T),
            &HahnSeries::zero(T)
        ));
    }

    #[test]
    fn order_ball_examples() {
        let g = HahnSeries::zero(T);
        let ball = OrderBall::new(g.clone(), s("t")).unwrap();
        assert!(ball.contains(&g));
        assert!(ball.contains(&s("t^2")));
        assert!(!ball.contains(&s("1")));
        assert!(OrderBall::new(g, s("-t")).is_none());
    }

    #[test]
    fn inverse_examples() {
        let a = s("1 - t");
        let inv = a.inverse().unwrap();
        // 1/(1 - t) = 1 + t + t^2 + ...
        assert_eq!(inv.terms().len(), T as usize);
        assert!(inv.terms().iter().all(|(_, c)| *c == q(1, 1)));
        assert_eq!(&a * &inv, HahnSeries::constant(q(1, 1), T));

        let b = s("2t^3 + t^5");
        let prod = &b * &b.inverse().unwrap();
        assert_eq!(prod.leading(), Some(&(0, q(1, 1))));
        assert_eq!(
            HahnSeries::zero(T).inverse(),
            Err(SeriesError::DivisionByZero)
        );
    }

    fn series() -> impl Strategy<Value = HahnSeries> {
        proptest::collection::vec((0i64..8, -5i64..6, 1i64..4), 0..5).prop_map(|terms| {
            HahnSeries::from_terms(terms.into_iter().map(|(e, n, d)| (e, q(n, d))).collect(), T)
        })
    }

    proptest! {
        #[test]
        fn valuation_laws(a in series(), b in series()) {
            prop_assert_eq!(a.natural_value() == NaturalValue::Zero, a.is_zero());
            prop_assert!((&a - &b).natural_value() <= a.natural_value().max(b.natural_value()));
            prop_assert_eq!((&a * &b).natural_value(), a.natural_value().times(&b.natural_value()));
        }

        #[test]
        fn order_laws(a in series(), b in series(), c in series()) {
            let rels = [a < b, a == b, a > b];
            prop_assert_eq!(rels.iter().filter(|&&r| r).count(), 1);
            if a <= b { prop_assert!(&a + &c <= &b + &c); }
        }

        #[test]
        fn ultrametric_balls_are_cosets(x in series(), y in series(), z in series(), w in series()) {
            let r = (&x - &y).natural_value();
            // z ∈ B_u(x, y) iff v(x − z) ≤ v(x − y), and adding w with v(w) ≤ r keeps membership
            if um_contains(&x, &y, &z) && w.natural_value() <= r {
                prop_assert!(um_contains(&x, &y, &(&z + &w)));
            }
        }
    }
}
