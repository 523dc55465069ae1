use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AbelianGroup, Elem};
use crate::groupoid::{Groupoid, Mor};

/// Below this many composable pairs, functoriality is checked on all of
/// them; above it, on (every morphism × every generator), which is equally
/// complete because generators and their inverses generate.
pub const EXHAUSTIVE_PAIR_LIMIT: u128 = 200_000;

pub trait FunctorRepr: Send + Sync + fmt::Debug {
    fn on_object(&self, a: usize) -> usize;
    fn on_morphism(&self, m: Mor) -> Mor;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("object {object} is sent to {image}, outside the target")]
    ObjectOutOfRange { object: String, image: usize },
    #[error("morphism {morphism}: {reason}")]
    NotFunctorial { morphism: String, reason: String },
    #[error("composite of {first} then {second} is not preserved")]
    CompositionNotPreserved { first: String, second: String },
    #[error("target groupoid is not a delooping BG")]
    NotDelooping,
    #[error("functors differ: {0}")]
    NotEqual(String),
    #[error("functors are not composable: {0}")]
    ShapeMismatch(String),
}

/// A functor between finite groupoids.
#[derive(Clone)]
pub struct Functor {
    source: Groupoid,
    target: Groupoid,
    repr: Arc<dyn FunctorRepr>,
}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Functor").field("repr", &self.repr).finish()
    }
}

struct FnRepr<O, M> {
    obj: O,
    mor: M,
}

impl<O, M> fmt::Debug for FnRepr<O, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnFunctor")
    }
}

impl<O, M> FunctorRepr for FnRepr<O, M>
where
    O: Fn(usize) -> usize + Send + Sync,
    M: Fn(Mor) -> Mor + Send + Sync,
{
    fn on_object(&self, a: usize) -> usize {
        (self.obj)(a)
    }
    fn on_morphism(&self, m: Mor) -> Mor {
        (self.mor)(m)
    }
}

#[derive(Debug)]
struct TableRepr {
    objects: Vec<usize>,
    morphisms: HashMap<Mor, Mor>,
}

impl FunctorRepr for TableRepr {
    fn on_object(&self, a: usize) -> usize {
        self.objects[a]
    }
    fn on_morphism(&self, m: Mor) -> Mor {
        self.morphisms[&m]
    }
}

#[derive(Debug)]
struct IdentityRepr;

impl FunctorRepr for IdentityRepr {
    fn on_object(&self, a: usize) -> usize {
        a
    }
    fn on_morphism(&self, m: Mor) -> Mor {
        m
    }
}

#[derive(Debug)]
struct CompositeRepr {
    first: Arc<dyn FunctorRepr>,
    second: Arc<dyn FunctorRepr>,
}

impl FunctorRepr for CompositeRepr {
    fn on_object(&self, a: usize) -> usize {
        self.second.on_object(self.first.on_object(a))
    }
    fn on_morphism(&self, m: Mor) -> Mor {
        self.second.on_morphism(self.first.on_morphism(m))
    }
}

impl Functor {
    /// Wraps `repr` and verifies functoriality.
    pub fn new(source: &Groupoid, target: &Groupoid, repr: Arc<dyn FunctorRepr>) -> Result<Self, FunctorError> {
        let f = Self::new_unchecked(source, target, repr);
        f.verify()?;
        Ok(f)
    }

    /// Wraps `repr` without verification; for functors that are correct by
    /// construction.
    pub fn new_unchecked(source: &Groupoid, target: &Groupoid, repr: Arc<dyn FunctorRepr>) -> Self {
        Functor {
            source: source.clone(),
            target: target.clone(),
            repr,
        }
    }

    pub fn from_fn(
        source: &Groupoid,
        target: &Groupoid,
        obj: impl Fn(usize) -> usize + Send + Sync + 'static,
        mor: impl Fn(Mor) -> Mor + Send + Sync + 'static,
    ) -> Result<Self, FunctorError> {
        Self::new(source, target, Arc::new(FnRepr { obj, mor }))
    }

    pub(crate) fn from_fn_unchecked(
        source: &Groupoid,
        target: &Groupoid,
        obj: impl Fn(usize) -> usize + Send + Sync + 'static,
        mor: impl Fn(Mor) -> Mor + Send + Sync + 'static,
    ) -> Self {
        Self::new_unchecked(source, target, Arc::new(FnRepr { obj, mor }))
    }

    /// A functor from explicit object and morphism tables.
    pub fn from_tables(
        source: &Groupoid,
        target: &Groupoid,
        objects: Vec<usize>,
        morphisms: HashMap<Mor, Mor>,
    ) -> Result<Self, FunctorError> {
        if objects.len() != source.object_count() {
            return Err(FunctorError::ShapeMismatch(format!(
                "{} object images for {} objects",
                objects.len(),
                source.object_count()
            )));
        }
        if let Some(m) = source.morphisms().find(|m| !morphisms.contains_key(m)) {
            return Err(FunctorError::NotFunctorial {
                morphism: source.morphism_name(m),
                reason: "no image given".into(),
            });
        }
        Self::new(source, target, Arc::new(TableRepr { objects, morphisms }))
    }

    pub fn identity(g: &Groupoid) -> Self {
        Self::new_unchecked(g, g, Arc::new(IdentityRepr))
    }

    /// A functor into `BG` given by the group element of each morphism.
    pub fn to_delooping(
        source: &Groupoid,
        bg: &Groupoid,
        value: impl Fn(Mor) -> Elem + Send + Sync + 'static,
    ) -> Result<Self, FunctorError> {
        if bg.as_delooping().is_none() {
            return Err(FunctorError::NotDelooping);
        }
        Self::from_fn(source, bg, |_| 0, move |m| Mor::new(0, value(m).0 as u64))
    }

    /// The functor sending every morphism to the neutral element.
    pub fn trivial_to_delooping(source: &Groupoid, bg: &Groupoid) -> Result<Self, FunctorError> {
        let group = bg.as_delooping().ok_or(FunctorError::NotDelooping)?;
        let zero = group.zero();
        Ok(Self::from_fn_unchecked(source, bg, |_| 0, move |_| Mor::new(0, zero.0 as u64)))
    }

    pub fn source(&self) -> &Groupoid {
        &self.source
    }

    pub fn target(&self) -> &Groupoid {
        &self.target
    }

    pub fn repr(&self) -> &Arc<dyn FunctorRepr> {
        &self.repr
    }

    pub fn on_object(&self, a: usize) -> usize {
        self.repr.on_object(a)
    }

    pub fn on_morphism(&self, m: Mor) -> Mor {
        self.repr.on_morphism(m)
    }

    /// For a functor into `BG`: the group element of `F(m)`.
    pub fn value(&self, m: Mor) -> Elem {
        Elem(self.repr.on_morphism(m).index as usize)
    }

    /// For a functor into `BG`: the group `G`.
    pub fn delooping_group(&self) -> Option<&AbelianGroup> {
        self.target.as_delooping()
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &Functor) -> Result<Functor, FunctorError> {
        if !self.target.same_structure(&after.source) {
            return Err(FunctorError::ShapeMismatch(
                "target of the first functor is not the source of the second".into(),
            ));
        }
        Ok(Self::new_unchecked(
            &self.source,
            &after.target,
            Arc::new(CompositeRepr {
                first: self.repr.clone(),
                second: after.repr.clone(),
            }),
        ))
    }

    /// Checks that objects and morphisms land in the target, that sources,
    /// targets and identities are preserved, and that composition is.
    pub fn verify(&self) -> Result<(), FunctorError> {
        let (s, t) = (&self.source, &self.target);
        for a in s.objects() {
            let fa = self.on_object(a);
            if fa >= t.object_count() {
                return Err(FunctorError::ObjectOutOfRange {
                    object: s.object_name(a),
                    image: fa,
                });
            }
        }
        for m in s.morphisms() {
            let fm = self.on_morphism(m);
            let fa = self.on_object(m.source);
            let reason = if fm.source != fa || fm.index >= t.out_degree(fa) {
                Some("image does not start at the image of its source")
            } else if t.target(fm) != self.on_object(s.target(m)) {
                Some("image does not end at the image of its target")
            } else {
                None
            };
            if let Some(r) = reason {
                return Err(FunctorError::NotFunctorial {
                    morphism: s.morphism_name(m),
                    reason: r.into(),
                });
            }
        }
        for a in s.objects() {
            if self.on_morphism(s.identity(a)) != t.identity(self.on_object(a)) {
                return Err(FunctorError::NotFunctorial {
                    morphism: s.morphism_name(s.identity(a)),
                    reason: "identity is not preserved".into(),
                });
            }
        }
        let pairs: u128 = s.morphisms().map(|m| s.out_degree(s.target(m)) as u128).sum();
        let exhaustive = pairs <= EXHAUSTIVE_PAIR_LIMIT;
        for m in s.morphisms() {
            let b = s.target(m);
            let seconds: Vec<Mor> = if exhaustive {
                s.out_morphisms(b).collect()
            } else {
                s.generators(b)
            };
            let fm = self.on_morphism(m);
            for g in seconds {
                if self.on_morphism(s.compose(m, g)) != t.compose(fm, self.on_morphism(g)) {
                    return Err(FunctorError::CompositionNotPreserved {
                        first: s.morphism_name(m),
                        second: s.morphism_name(g),
                    });
                }
            }
        }
        Ok(())
    }

    /// Extensional equality: same source and target structure, same values
    /// on every object and morphism.
    pub fn agrees_with(&self, other: &Functor) -> Result<(), FunctorError> {
        if !self.source.same_structure(&other.source) {
            return Err(FunctorError::NotEqual("sources differ".into()));
        }
        if !self.target.same_structure(&other.target) {
            return Err(FunctorError::NotEqual("targets differ".into()));
        }
        if Arc::ptr_eq(&self.repr, &other.repr) {
            return Ok(());
        }
        for a in self.source.objects() {
            if self.on_object(a) != other.on_object(a) {
                return Err(FunctorError::NotEqual(format!(
                    "object {}",
                    self.source.object_name(a)
                )));
            }
        }
        for m in self.source.morphisms() {
            if self.on_morphism(m) != other.on_morphism(m) {
                return Err(FunctorError::NotEqual(format!(
                    "morphism {}",
                    self.source.morphism_name(m)
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::ActionGroupoid;

    fn bz(n: usize) -> Groupoid {
        ActionGroupoid::delooping(&AbelianGroup::cyclic(n).unwrap()).into_groupoid()
    }

    #[test]
    fn homomorphisms_give_functors() {
        let (b2, b4) = (bz(2), bz(4));
        // Z2 -> Z4, 1 -> 2
        let f = Functor::to_delooping(&b2, &b4, |m| Elem(2 * m.index as usize)).unwrap();
        assert_eq!(f.value(Mor::new(0, 1)), Elem(2));
        // Z4 -> Z4, 1 -> 1 shifted: not a homomorphism
        let bad = Functor::to_delooping(&b4, &b4, |m| Elem((m.index as usize + 1) % 4));
        assert!(bad.is_err());
    }

    #[test]
    fn identity_preservation_is_checked() {
        let b3 = bz(3);
        let g = ActionGroupoid::discrete(1).into_groupoid();
        let res = Functor::from_fn(&g, &b3, |_| 0, |_| Mor::new(0, 1));
        assert!(matches!(res, Err(FunctorError::NotFunctorial { .. })));
    }

    #[test]
    fn extensional_equality() {
        let b2 = bz(2);
        let id = Functor::identity(&b2);
        let same = Functor::to_delooping(&b2, &bz(2), |m| Elem(m.index as usize)).unwrap();
        assert!(id.agrees_with(&same).is_ok());
        let triv = Functor::trivial_to_delooping(&b2, &b2).unwrap();
        assert!(id.agrees_with(&triv).is_err());
        assert!(id.then(&triv).unwrap().agrees_with(&triv).is_ok());
    }
}
