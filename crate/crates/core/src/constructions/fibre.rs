use std::collections::HashMap;

use super::{ConstructionError, Functor};
use crate::groupoid::{Groupoid, GroupoidError, GroupoidRepr, Limits, Mor};

/// A one- or two-sided homotopy fibre, built directly.
///
/// With a left end `(L: M → S, c)` and a right end `(R: M → T, d)` the
/// objects are `(s, a, t)` with `s: c → L a` and `t: R a → d`; either end
/// may be absent. Morphisms out of `(s, a, t)` are the morphisms `m` out of
/// `a` in `M`, landing at `(L(m) ∘ s, a', t ∘ R(m)⁻¹)`.
#[derive(Debug)]
pub struct Fibre {
    apex: Groupoid,
    left: Option<(Functor, usize)>,
    right: Option<(Functor, usize)>,
    objects: Vec<(Option<Mor>, usize, Option<Mor>)>,
    lookup: HashMap<(Option<Mor>, usize, Option<Mor>), usize>,
}

fn check_end(f: &Functor, at: usize) -> Result<(), ConstructionError> {
    if at >= f.target().object_count() {
        return Err(GroupoidError::ObjectOutOfRange {
            object: at,
            count: f.target().object_count(),
        }
        .into());
    }
    Ok(())
}

/// Morphisms out of `c`, grouped by target.
fn out_by_target(g: &Groupoid, c: usize) -> HashMap<usize, Vec<Mor>> {
    let mut map: HashMap<usize, Vec<Mor>> = HashMap::new();
    for m in g.out_morphisms(c) {
        map.entry(g.target(m)).or_default().push(m);
    }
    map
}

impl Fibre {
    pub fn new(
        apex: &Groupoid,
        left: Option<(&Functor, usize)>,
        right: Option<(&Functor, usize)>,
        limits: &Limits,
    ) -> Result<Self, ConstructionError> {
        for (f, at) in left.iter().chain(right.iter()) {
            check_end(f, *at)?;
            if !f.source().same_structure(apex) {
                return Err(ConstructionError::Mismatch("fibre functor has a different source".into()));
            }
        }
        let from_c = left.map(|(l, c)| out_by_target(l.target(), c));
        // T(x, d) is the set of inverses of T(d, x).
        let from_d = right.map(|(r, d)| out_by_target(r.target(), d));
        let empty = Vec::new();
        let lefts = |a: usize| -> Vec<Option<Mor>> {
            match (&left, &from_c) {
                (Some((l, _)), Some(map)) => map.get(&l.on_object(a)).unwrap_or(&empty).iter().map(|&m| Some(m)).collect(),
                _ => vec![None],
            }
        };
        let rights = |a: usize| -> Vec<Option<Mor>> {
            match (&right, &from_d) {
                (Some((r, _)), Some(map)) => {
                    let t = r.target();
                    map.get(&r.on_object(a))
                        .unwrap_or(&empty)
                        .iter()
                        .map(|&m| Some(t.inverse(m)))
                        .collect()
                }
                _ => vec![None],
            }
        };
        let needed: u128 = apex
            .objects()
            .map(|a| lefts(a).len() as u128 * rights(a).len() as u128)
            .sum();
        limits.check_objects(needed)?;
        let mut objects = Vec::with_capacity(needed as usize);
        for a in apex.objects() {
            let rs = rights(a);
            for s in lefts(a) {
                for &t in &rs {
                    objects.push((s, a, t));
                }
            }
        }
        let lookup = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        Ok(Fibre {
            apex: apex.clone(),
            left: left.map(|(f, c)| (f.clone(), c)),
            right: right.map(|(f, d)| (f.clone(), d)),
            objects,
            lookup,
        })
    }

    pub fn into_groupoid(self) -> Groupoid {
        Groupoid::new(self)
    }

    /// `(s, a, t)`.
    pub fn decode(&self, object: usize) -> (Option<Mor>, usize, Option<Mor>) {
        self.objects[object]
    }

    pub fn find(&self, s: Option<Mor>, a: usize, t: Option<Mor>) -> Option<usize> {
        self.lookup.get(&(s, a, t)).copied()
    }

    pub fn apex(&self) -> &Groupoid {
        &self.apex
    }

    /// The morphism of `M` underlying a fibre morphism.
    pub fn apex_morphism(&self, m: Mor) -> Mor {
        Mor::new(self.objects[m.source].1, m.index)
    }

    fn lift(&self, object: usize, m: Mor) -> Mor {
        Mor::new(object, m.index)
    }
}

impl GroupoidRepr for Fibre {
    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn out_degree(&self, object: usize) -> u64 {
        self.apex.out_degree(self.objects[object].1)
    }
    fn target(&self, m: Mor) -> usize {
        let (s, a, t) = self.objects[m.source];
        let am = Mor::new(a, m.index);
        let s2 = s.map(|s| {
            let (l, _) = self.left.as_ref().expect("left end present");
            l.target().compose(s, l.on_morphism(am))
        });
        let t2 = t.map(|t| {
            let (r, _) = self.right.as_ref().expect("right end present");
            let tg = r.target();
            tg.compose(tg.inverse(r.on_morphism(am)), t)
        });
        self.lookup[&(s2, self.apex.target(am), t2)]
    }
    fn identity(&self, object: usize) -> Mor {
        self.lift(object, self.apex.identity(self.objects[object].1))
    }
    fn compose(&self, first: Mor, second: Mor) -> Mor {
        let c = self.apex.compose(self.apex_morphism(first), self.apex_morphism(second));
        self.lift(first.source, c)
    }
    fn inverse(&self, m: Mor) -> Mor {
        let inv = self.apex.inverse(self.apex_morphism(m));
        self.lift(self.target(m), inv)
    }
    fn generators(&self, object: usize) -> Vec<Mor> {
        self.apex
            .generators(self.objects[object].1)
            .into_iter()
            .map(|g| self.lift(object, g))
            .collect()
    }
    fn object_name(&self, object: usize) -> String {
        let (s, a, t) = self.objects[object];
        let mut parts = Vec::new();
        if let (Some(s), Some((l, _))) = (s, &self.left) {
            parts.push(l.target().morphism_name(s));
        }
        parts.push(self.apex.object_name(a));
        if let (Some(t), Some((r, _))) = (t, &self.right) {
            parts.push(r.target().morphism_name(t));
        }
        format!("({})", parts.join(","))
    }
}

/// `c\M` for `L: M → S`.
pub fn left_fibre(l: &Functor, c: usize) -> Result<Groupoid, ConstructionError> {
    left_fibre_with(l, c, &Limits::from_env())
}

pub fn left_fibre_with(l: &Functor, c: usize, limits: &Limits) -> Result<Groupoid, ConstructionError> {
    Ok(Fibre::new(l.source(), Some((l, c)), None, limits)?.into_groupoid())
}

/// `M/d` for `R: M → T`.
pub fn right_fibre(r: &Functor, d: usize) -> Result<Groupoid, ConstructionError> {
    right_fibre_with(r, d, &Limits::from_env())
}

pub fn right_fibre_with(r: &Functor, d: usize, limits: &Limits) -> Result<Groupoid, ConstructionError> {
    Ok(Fibre::new(r.source(), None, Some((r, d)), limits)?.into_groupoid())
}

/// `c\M/d`.
pub fn two_sided_fibre(l: &Functor, r: &Functor, c: usize, d: usize) -> Result<Groupoid, ConstructionError> {
    Ok(Fibre::new(l.source(), Some((l, c)), Some((r, d)), &Limits::from_env())?.into_groupoid())
}
