//! Fixed point theorems on ball spaces, made executable.
//!
//! The crate provides finite and presented ball spaces with checkers for the
//! hypotheses of the generic fixed point theorems and constructive solvers
//! that return either a fixed point or a witness of the violated hypothesis.
//! Specialisations cover ultrametric spaces over partially ordered value
//! sets, p-adic Hensel lifting, contractions on rational Banach spaces,
//! ordered abelian groups and fields, and finite topological spaces.

pub mod ballspace;
pub mod banach;
pub mod hahn;
pub mod ordered;
pub mod padic;
pub mod pointset;
pub mod poset;
pub mod report;
pub mod sweep;
pub mod topology;
pub mod ultrametric;

pub use ballspace::{
    BallAssignment, BallSpace, BallSpaceError, FiniteBallSpace, FixedPointReport, Nest, Outcome,
    SelfMap,
};
pub use pointset::PointSet;
pub use report::{Check, Condition, ConditionReport, Witness};

/// Exact rationals used for Banach iteration and Hahn series coefficients.
pub type Rational = num_rational::BigRational;
pub type RationalPoint = banach::Point<Rational>;
pub type RationalBall = banach::MetricBall<Rational>;
