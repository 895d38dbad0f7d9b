//! Exact scalars, weighted polynomial rings and the symmetric-function bridge.

pub mod newton;
pub mod poly;
pub mod scalar;

use std::fmt;

use thiserror::Error;

pub use newton::{newton_convert, NewtonDirection};
pub use poly::{Basis, Family, Generator, GeneratorTable, GradedPolynomial, Monomial, PolyRing};
pub use scalar::{int, ratio, scalar_arith, two_adic_valuation, GaussianRational, Rational, ScalarOp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial rings differ (generator table or weight bound)")]
    RingMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("replacement for `{name}` must be homogeneous of weight {expected}")]
    WeightMismatch { name: String, expected: u32 },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("invalid generator table: {0}")]
    InvalidTable(String),
    #[error("cannot parse `{0}` as a Gaussian rational")]
    Parse(String),
}

/// A commutative coefficient ring usable inside truncated series.
///
/// Elements carry their ring as a value (`Ring`), so that an empty series still
/// knows where its zero lives.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Ring: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn ring(&self) -> Self::Ring;
    fn zero_in(ring: &Self::Ring) -> Self;
    fn one_in(ring: &Self::Ring) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, c: &GaussianRational) -> Self;
    fn inverse(&self) -> Option<Self>;

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.add_ref(rhs);
    }
}

/// The (only) ring of Gaussian rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Scalars;

impl Coefficient for GaussianRational {
    type Ring = Scalars;

    fn ring(&self) -> Scalars {
        Scalars
    }
    fn zero_in(_: &Scalars) -> Self {
        GaussianRational::zero()
    }
    fn one_in(_: &Scalars) -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self * c
    }
    fn inverse(&self) -> Option<Self> {
        GaussianRational::inverse(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
}

impl Coefficient for GradedPolynomial {
    type Ring = PolyRing;

    fn ring(&self) -> PolyRing {
        GradedPolynomial::ring(self).clone()
    }
    fn zero_in(ring: &PolyRing) -> Self {
        GradedPolynomial::zero(ring)
    }
    fn one_in(ring: &PolyRing) -> Self {
        GradedPolynomial::one(ring)
    }
    fn is_zero(&self) -> bool {
        GradedPolynomial::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        GradedPolynomial::scale(self, c)
    }
    fn inverse(&self) -> Option<Self> {
        GradedPolynomial::inverse(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        self.add_assign_poly(rhs);
    }
}
