//! Finite partially ordered value sets with a least element.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("value set is empty")]
    Empty,
    #[error("unknown value {0:?}")]
    UnknownValue(String),
    #[error("relation is not antisymmetric: {0} <= {1} and {1} <= {0}")]
    NotAntisymmetric(String, String),
    #[error("relation is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(String, String, String),
    #[error("bottom {bottom} is not below {value}")]
    BottomNotLeast { bottom: String, value: String },
    #[error("values belong to different posets")]
    DomainMismatch,
}

/// Order queries shared by every value set an ultrametric can take values
/// in. Value sets are finite so that axioms can be checked exhaustively.
pub trait ValueOrder {
    type Value: Clone + PartialEq + fmt::Debug;

    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool;

    /// The least element `0`.
    fn zero(&self) -> Self::Value;

    /// Every element of the value set.
    fn values(&self) -> Vec<Self::Value>;

    fn is_total(&self) -> bool;

    fn show(&self, v: &Self::Value) -> String {
        format!("{v:?}")
    }

    fn lt(&self, a: &Self::Value, b: &Self::Value) -> bool {
        a != b && self.leq(a, b)
    }

    fn comparable(&self, a: &Self::Value, b: &Self::Value) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `max{a, b}` when the two values are comparable.
    fn max_of(&self, a: &Self::Value, b: &Self::Value) -> Option<Self::Value> {
        if self.leq(a, b) {
            Some(b.clone())
        } else if self.leq(b, a) {
            Some(a.clone())
        } else {
            None
        }
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A finite poset `Γ` with least element, values addressed by index.
#[derive(Clone, PartialEq, Eq)]
pub struct ValuePoset {
    id: u64,
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    bottom: usize,
}

/// A value tagged with the poset it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PosetValue {
    poset: u64,
    index: usize,
}

impl PosetValue {
    pub fn index(&self) -> usize {
        self.index
    }
}

impl ValuePoset {
    /// Builds a poset from a relation given as `(a, b)` pairs meaning
    /// `a <= b`. Reflexive pairs are added; the relation must already be
    /// transitive and antisymmetric.
    pub fn new(
        names: Vec<String>,
        pairs: &[(usize, usize)],
        bottom: usize,
    ) -> Result<Self, PosetError> {
        let leq = Self::relation(&names, pairs, bottom)?;
        Self::validate(names, leq, bottom)
    }

    /// Like [`ValuePoset::new`], but takes the transitive closure of the
    /// given pairs first.
    pub fn from_generators(
        names: Vec<String>,
        pairs: &[(usize, usize)],
        bottom: usize,
    ) -> Result<Self, PosetError> {
        let mut leq = Self::relation(&names, pairs, bottom)?;
        let n = names.len();
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::validate(names, leq, bottom)
    }

    /// Same as [`ValuePoset::from_generators`] with values referenced by
    /// name.
    pub fn from_named(
        names: Vec<String>,
        pairs: &[(String, String)],
        bottom: &str,
    ) -> Result<Self, PosetError> {
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| PosetError::UnknownValue(s.to_string()))
        };
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, PosetError>>()?;
        let bottom = idx(bottom)?;
        Self::from_generators(names, &pairs, bottom)
    }

    fn relation(
        names: &[String],
        pairs: &[(usize, usize)],
        bottom: usize,
    ) -> Result<Vec<Vec<bool>>, PosetError> {
        let n = names.len();
        if n == 0 {
            return Err(PosetError::Empty);
        }
        if bottom >= n {
            return Err(PosetError::UnknownValue(format!("#{bottom}")));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(PosetError::UnknownValue(format!("#{}", a.max(b))));
            }
            leq[a][b] = true;
        }
        Ok(leq)
    }

    fn validate(
        names: Vec<String>,
        leq: Vec<Vec<bool>>,
        bottom: usize,
    ) -> Result<Self, PosetError> {
        let n = names.len();
        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(PosetError::NotAntisymmetric(
                        names[a].clone(),
                        names[b].clone(),
                    ));
                }
                if !leq[a][b] {
                    continue;
                }
                if let Some(c) = (0..n).find(|&c| leq[b][c] && !leq[a][c]) {
                    return Err(PosetError::NotTransitive(
                        names[a].clone(),
                        names[b].clone(),
                        names[c].clone(),
                    ));
                }
            }
        }
        if let Some(v) = (0..n).find(|&v| !leq[bottom][v]) {
            return Err(PosetError::BottomNotLeast {
                bottom: names[bottom].clone(),
                value: names[v].clone(),
            });
        }
        Ok(Self {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            names,
            leq,
            bottom,
        })
    }

    /// The chain `0 < 1 < .. < n-1`, values named by their rank.
    pub fn chain(n: usize) -> Self {
        Self::chain_named((0..n).map(|i| i.to_string()).collect()).expect("chain is a valid poset")
    }

    /// A chain with the given names in increasing order.
    pub fn chain_named(names: Vec<String>) -> Result<Self, PosetError> {
        let pairs: Vec<(usize, usize)> = (0..names.len())
            .flat_map(|i| (i..names.len()).map(move |j| (i, j)))
            .collect();
        Self::new(names, &pairs, 0)
    }

    /// `0` below `k` pairwise incomparable atoms.
    pub fn antichain_with_bottom(k: usize) -> Self {
        let mut names = vec!["0".to_string()];
        names.extend((1..=k).map(|i| format!("a{i}")));
        let pairs: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
        Self::new(names, &pairs, 0).expect("antichain with bottom is a valid poset")
    }

    /// The trivial poset `{0}`.
    pub fn trivial() -> Self {
        Self::chain(1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn value(&self, index: usize) -> PosetValue {
        assert!(index < self.len(), "value index {index} out of range");
        PosetValue {
            poset: self.id,
            index,
        }
    }

    pub fn value_named(&self, name: &str) -> Result<PosetValue, PosetError> {
        self.index_of(name)
            .map(|i| self.value(i))
            .ok_or_else(|| PosetError::UnknownValue(name.to_string()))
    }

    fn own(&self, v: PosetValue) -> Result<usize, PosetError> {
        if v.poset == self.id {
            Ok(v.index)
        } else {
            Err(PosetError::DomainMismatch)
        }
    }

    pub fn leq_values(&self, a: PosetValue, b: PosetValue) -> Result<bool, PosetError> {
        Ok(self.leq[self.own(a)?][self.own(b)?])
    }

    pub fn comparable_values(&self, a: PosetValue, b: PosetValue) -> Result<bool, PosetError> {
        Ok(self.leq_values(a, b)? || self.leq_values(b, a)?)
    }

    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Maximal elements, in index order.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| !(0..self.len()).any(|b| a != b && self.leq[a][b]))
            .collect()
    }

    /// All `(a, b)` with `a <= b`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| (0..self.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| self.leq[a][b])
            .collect()
    }
}

/// Componentwise order on pairs; the pair `(i, j)` has index
/// `i * q.len() + j` and name `(p_i,q_j)`.
pub fn product_poset(p: &ValuePoset, q: &ValuePoset) -> ValuePoset {
    let m = q.len();
    let names: Vec<String> = (0..p.len())
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| format!("({},{})", p.name(i), q.name(j)))
        .collect();
    let mut pairs = Vec::new();
    for (a1, b1) in p.pairs() {
        for (a2, b2) in q.pairs() {
            pairs.push((a1 * m + a2, b1 * m + b2));
        }
    }
    ValuePoset::new(names, &pairs, p.bottom() * m + q.bottom())
        .expect("product of posets is a poset")
}

impl ValueOrder for ValuePoset {
    type Value = usize;

    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.leq[*a][*b]
    }

    fn zero(&self) -> usize {
        self.bottom
    }

    fn values(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    fn is_total(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.leq[a][b] || self.leq[b][a]))
    }

    fn show(&self, v: &usize) -> String {
        self.names[*v].clone()
    }
}

impl fmt::Debug for ValuePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .pairs()
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| format!("{}<={}", self.names[a], self.names[b]))
            .collect();
        write!(f, "ValuePoset {{ {} }}", pairs.join(", "))
    }
}
