//! Exact computations with finite groupoids, G-spans and their matrices over
//! the rational group ring of a finite abelian group.

pub mod algebra;
pub mod groupoid;
pub mod constructions;
pub mod gspan;
pub mod examples;
pub mod random;
