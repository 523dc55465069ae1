//! Exact arithmetic: rationals, finite groups, the group ring `QG`,
//! cyclotomic fields and characters.

mod character;
mod cyclotomic;
mod group;
mod group_ring;

pub use character::Character;
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicNumber, IntPoly};
pub use group::{AbelianGroup, Elem, FiniteGroup, GroupHom, PermutationGroup};
pub use group_ring::GroupRingElement;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational numbers, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Renders `n` or `n/d`.
pub fn render_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("cyclic order at position {position} is zero")]
    ZeroOrder { position: usize },
    #[error("group is too large to tabulate")]
    GroupTooLarge,
    #[error("expected {expected} components, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operands live over different groups")]
    GroupMismatch,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("conductors {0} and {1} differ")]
    ConductorMismatch(usize, usize),
    #[error("conductor must be positive")]
    ZeroConductor,
}
