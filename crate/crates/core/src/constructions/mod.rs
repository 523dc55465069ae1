//! Building groupoids: deloopings, discrete and coset groupoids, homotopy
//! pullbacks and fibres, two-sided pullbacks and Grothendieck constructions.

mod fibre;
mod functor;
mod grothendieck;
mod pullback;

pub use fibre::{left_fibre, left_fibre_with, right_fibre, right_fibre_with, two_sided_fibre, Fibre};
pub use functor::{Functor, FunctorError, FunctorRepr, EXHAUSTIVE_PAIR_LIMIT};
pub use grothendieck::{Grothendieck, SetFunctorError, SetFunctorRepr, SetValuedFunctor};
pub use pullback::{
    homotopy_pullback, homotopy_pullback_with, iterated_pullback, pullback_euler_check, HomotopyPullback, Pullback,
    TwoSidedPullback,
};

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AbelianGroup, Elem, FiniteGroup};
use crate::groupoid::{ActionGroupoid, FullSubgroupoid, Groupoid, GroupoidError, Mor, UnitSubgroupoid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    SetFunctor(#[from] SetFunctorError),
    #[error("shape mismatch: {0}")]
    Mismatch(String),
}

/// `BG` for an abelian group; morphism indices are group elements.
pub fn delooping(group: &AbelianGroup) -> Groupoid {
    ActionGroupoid::delooping(group).into_groupoid()
}

/// `BG` for any finite group.
pub fn delooping_of(group: Arc<dyn FiniteGroup>) -> Groupoid {
    ActionGroupoid::delooping_of(group).into_groupoid()
}

pub fn discrete_groupoid(n: usize) -> Groupoid {
    ActionGroupoid::discrete(n).into_groupoid()
}

/// `H\G`, with `hom(H+g1, H+g2) = g1 - g2 + H`.
pub fn coset_groupoid(group: &AbelianGroup, subgroup: &[Elem]) -> Result<Groupoid, ConstructionError> {
    Ok(ActionGroupoid::coset(group, subgroup)?.into_groupoid())
}

/// `T{A}` with its inclusion into `T`.
pub fn full_subgroupoid(g: &Groupoid, objects: &[usize]) -> Result<(Groupoid, Functor), ConstructionError> {
    let sub = Arc::new(FullSubgroupoid::new(g, objects)?);
    let groupoid = Groupoid::from_arc(sub.clone());
    let (s1, s2) = (sub.clone(), sub);
    let incl = Functor::from_fn_unchecked(&groupoid, g, move |a| s1.parent_object(a), move |m| s2.to_parent(m));
    Ok((groupoid, incl))
}

/// The inclusion `1{d} → T`.
pub fn unit_inclusion(g: &Groupoid, d: usize) -> Result<Functor, ConstructionError> {
    let unit = UnitSubgroupoid::new(g, d)?.into_groupoid();
    let id = g.identity(d);
    Ok(Functor::from_fn_unchecked(&unit, g, move |_| d, move |_| id))
}

/// The functor `X//G → BG` recording the group element of each morphism.
pub fn action_to_delooping(action: &ActionGroupoid, bg: &Groupoid) -> Result<Functor, ConstructionError> {
    let source = action.clone().into_groupoid();
    Ok(Functor::to_delooping(&source, bg, |m: Mor| Elem(m.index as usize))?)
}
