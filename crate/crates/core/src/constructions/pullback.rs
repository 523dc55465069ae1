use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use super::{fibre, ConstructionError, Functor, FunctorRepr};
use crate::algebra::Rational;
use crate::groupoid::{Groupoid, GroupoidRepr, Limits, Mor};

/// Objects of `M` grouped by their image under `F: M → T`.
fn preimages(f: &Functor) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); f.target().object_count()];
    for a in f.source().objects() {
        out[f.on_object(a)].push(a);
    }
    out
}

fn check_cospan(r1: &Functor, l2: &Functor) -> Result<(), ConstructionError> {
    if !r1.target().same_structure(l2.target()) {
        return Err(ConstructionError::Mismatch(
            "the two functors have different targets".into(),
        ));
    }
    Ok(())
}

/// The homotopy pullback `M1 ×_T M2` of `R1: M1 → T` and `L2: M2 → T`.
///
/// Objects are triples `(a1, t, a2)` with `t: R1(a1) → L2(a2)`, interned in
/// the order `a1`, then `t`, then `a2`. A morphism `(m1, m2)` out of
/// `(a1, t, a2)` has index `i1 · deg(a2) + i2` and lands at
/// `(a1', L2(m2) ∘ t ∘ R1(m1)⁻¹, a2')`.
#[derive(Debug)]
pub struct HomotopyPullback {
    r1: Functor,
    l2: Functor,
    objects: Vec<(usize, Mor, usize)>,
    lookup: HashMap<(usize, Mor, usize), usize>,
}

impl HomotopyPullback {
    pub fn new(r1: &Functor, l2: &Functor, limits: &Limits) -> Result<Self, ConstructionError> {
        check_cospan(r1, l2)?;
        let t = r1.target();
        let over = preimages(l2);
        let needed: u128 = r1
            .source()
            .objects()
            .flat_map(|a1| t.out_morphisms(r1.on_object(a1)))
            .map(|m| over[t.target(m)].len() as u128)
            .sum();
        limits.check_objects(needed)?;
        let mut objects = Vec::with_capacity(needed as usize);
        for a1 in r1.source().objects() {
            for tm in t.out_morphisms(r1.on_object(a1)) {
                for &a2 in &over[t.target(tm)] {
                    objects.push((a1, tm, a2));
                }
            }
        }
        let lookup = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        Ok(HomotopyPullback {
            r1: r1.clone(),
            l2: l2.clone(),
            objects,
            lookup,
        })
    }

    pub fn left(&self) -> &Functor {
        &self.r1
    }

    pub fn right(&self) -> &Functor {
        &self.l2
    }

    pub fn decode(&self, object: usize) -> (usize, Mor, usize) {
        self.objects[object]
    }

    pub fn find(&self, a1: usize, t: Mor, a2: usize) -> Option<usize> {
        self.lookup.get(&(a1, t, a2)).copied()
    }

    /// `(m1, m2)` for a morphism of the pullback.
    pub fn decode_morphism(&self, m: Mor) -> (Mor, Mor) {
        let (a1, _, a2) = self.objects[m.source];
        let d2 = self.l2.source().out_degree(a2);
        (Mor::new(a1, m.index / d2), Mor::new(a2, m.index % d2))
    }

    /// The morphism `(m1, m2)` out of `object`.
    pub fn encode_morphism(&self, object: usize, m1: Mor, m2: Mor) -> Mor {
        let (a1, _, a2) = self.objects[object];
        debug_assert!(m1.source == a1 && m2.source == a2);
        let d2 = self.l2.source().out_degree(a2);
        Mor::new(object, m1.index * d2 + m2.index)
    }

    fn t(&self) -> &Groupoid {
        self.r1.target()
    }
}

impl GroupoidRepr for HomotopyPullback {
    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn out_degree(&self, object: usize) -> u64 {
        let (a1, _, a2) = self.objects[object];
        self.r1.source().out_degree(a1) * self.l2.source().out_degree(a2)
    }
    fn target(&self, m: Mor) -> usize {
        let (_, t, _) = self.objects[m.source];
        let (m1, m2) = self.decode_morphism(m);
        let tg = self.t();
        let back = tg.inverse(self.r1.on_morphism(m1));
        let u = tg.compose(tg.compose(back, t), self.l2.on_morphism(m2));
        let b1 = self.r1.source().target(m1);
        let b2 = self.l2.source().target(m2);
        self.lookup[&(b1, u, b2)]
    }
    fn identity(&self, object: usize) -> Mor {
        let (a1, _, a2) = self.objects[object];
        let i1 = self.r1.source().identity(a1);
        let i2 = self.l2.source().identity(a2);
        self.encode_morphism(object, i1, i2)
    }
    fn compose(&self, first: Mor, second: Mor) -> Mor {
        let (f1, f2) = self.decode_morphism(first);
        let (g1, g2) = self.decode_morphism(second);
        let c1 = self.r1.source().compose(f1, g1);
        let c2 = self.l2.source().compose(f2, g2);
        self.encode_morphism(first.source, c1, c2)
    }
    fn inverse(&self, m: Mor) -> Mor {
        let (m1, m2) = self.decode_morphism(m);
        let i1 = self.r1.source().inverse(m1);
        let i2 = self.l2.source().inverse(m2);
        self.encode_morphism(self.target(m), i1, i2)
    }
    fn generators(&self, object: usize) -> Vec<Mor> {
        let (a1, _, a2) = self.objects[object];
        let (m1, m2) = (self.r1.source(), self.l2.source());
        let mut gens: Vec<Mor> = m1
            .generators(a1)
            .into_iter()
            .map(|g| self.encode_morphism(object, g, m2.identity(a2)))
            .collect();
        gens.extend(
            m2.generators(a2)
                .into_iter()
                .map(|g| self.encode_morphism(object, m1.identity(a1), g)),
        );
        gens
    }
    fn object_name(&self, object: usize) -> String {
        let (a1, t, a2) = self.objects[object];
        format!(
            "({},{},{})",
            self.r1.source().object_name(a1),
            self.t().morphism_name(t),
            self.l2.source().object_name(a2)
        )
    }
}

#[derive(Debug)]
struct Projection {
    pullback: Arc<HomotopyPullback>,
    first: bool,
}

impl FunctorRepr for Projection {
    fn on_object(&self, object: usize) -> usize {
        let (a1, _, a2) = self.pullback.decode(object);
        if self.first {
            a1
        } else {
            a2
        }
    }
    fn on_morphism(&self, m: Mor) -> Mor {
        let (m1, m2) = self.pullback.decode_morphism(m);
        if self.first {
            m1
        } else {
            m2
        }
    }
}

/// A constructed pullback together with its projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub data: Arc<HomotopyPullback>,
    pub groupoid: Groupoid,
    pub p1: Functor,
    pub p2: Functor,
}

pub fn homotopy_pullback(r1: &Functor, l2: &Functor) -> Result<Pullback, ConstructionError> {
    homotopy_pullback_with(r1, l2, &Limits::from_env())
}

pub fn homotopy_pullback_with(r1: &Functor, l2: &Functor, limits: &Limits) -> Result<Pullback, ConstructionError> {
    let data = Arc::new(HomotopyPullback::new(r1, l2, limits)?);
    let groupoid = Groupoid::from_arc(data.clone());
    let p1 = Functor::new_unchecked(
        &groupoid,
        r1.source(),
        Arc::new(Projection {
            pullback: data.clone(),
            first: true,
        }),
    );
    let p2 = Functor::new_unchecked(
        &groupoid,
        l2.source(),
        Arc::new(Projection {
            pullback: data.clone(),
            first: false,
        }),
    );
    Ok(Pullback {
        data,
        groupoid,
        p1,
        p2,
    })
}

/// `(χ(M1 ×_T M2), Σ_d χ(M1/d) χ(T{d}) χ(d\M2))`, the sum over component
/// representatives `d` of `T`.
pub fn pullback_euler_check(r1: &Functor, l2: &Functor) -> Result<(Rational, Rational), ConstructionError> {
    let limits = Limits::from_env();
    let lhs = homotopy_pullback_with(r1, l2, &limits)?.groupoid.euler_characteristic();
    let t = r1.target();
    let mut rhs = Rational::zero();
    for d in t.components().representatives() {
        let right = fibre::right_fibre_with(r1, d, &limits)?.euler_characteristic();
        let left = fibre::left_fibre_with(l2, d, &limits)?.euler_characteristic();
        let td = Rational::new(1.into(), t.aut_order(d).into());
        rhs += right * td * left;
    }
    Ok((lhs, rhs))
}

/// `P ×_S M ×_T Q` for `R1: P → S`, `L: M → S`, `R: M → T`, `L2: Q → T`.
///
/// Objects are `(x, s, a, t, y)` with `s: R1 x → L a` and `t: R a → L2 y`.
/// The morphism `(u, m, v)` has index `(iu · deg a + im) · deg y + iv` and
/// lands at `(x', L(m) ∘ s ∘ R1(u)⁻¹, a', L2(v) ∘ t ∘ R(m)⁻¹, y')`.
#[derive(Debug)]
pub struct TwoSidedPullback {
    r1: Functor,
    l: Functor,
    r: Functor,
    l2: Functor,
    objects: Vec<(usize, Mor, usize, Mor, usize)>,
    lookup: HashMap<(usize, Mor, usize, Mor, usize), usize>,
}

impl TwoSidedPullback {
    pub fn new(r1: &Functor, l: &Functor, r: &Functor, l2: &Functor, limits: &Limits) -> Result<Self, ConstructionError> {
        check_cospan(r1, l)?;
        check_cospan(r, l2)?;
        if !l.source().same_structure(r.source()) {
            return Err(ConstructionError::Mismatch("L and R have different sources".into()));
        }
        let (s, t) = (r1.target(), r.target());
        let over_s = preimages(l);
        let over_t = preimages(l2);
        // Count (a, t, y) per a first, then combine with the (x, s) choices.
        let tail: Vec<u128> = l
            .source()
            .objects()
            .map(|a| {
                t.out_morphisms(r.on_object(a))
                    .map(|tm| over_t[t.target(tm)].len() as u128)
                    .sum()
            })
            .collect();
        let needed: u128 = r1
            .source()
            .objects()
            .flat_map(|x| s.out_morphisms(r1.on_object(x)))
            .map(|sm| over_s[s.target(sm)].iter().map(|&a| tail[a]).sum::<u128>())
            .sum();
        limits.check_objects(needed)?;
        let mut objects = Vec::with_capacity(needed as usize);
        for x in r1.source().objects() {
            for sm in s.out_morphisms(r1.on_object(x)) {
                for &a in &over_s[s.target(sm)] {
                    for tm in t.out_morphisms(r.on_object(a)) {
                        for &y in &over_t[t.target(tm)] {
                            objects.push((x, sm, a, tm, y));
                        }
                    }
                }
            }
        }
        let lookup = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        Ok(TwoSidedPullback {
            r1: r1.clone(),
            l: l.clone(),
            r: r.clone(),
            l2: l2.clone(),
            objects,
            lookup,
        })
    }

    pub fn into_groupoid(self) -> Groupoid {
        Groupoid::new(self)
    }

    pub fn decode(&self, object: usize) -> (usize, Mor, usize, Mor, usize) {
        self.objects[object]
    }

    fn degrees(&self, object: usize) -> (u64, u64, u64) {
        let (x, _, a, _, y) = self.objects[object];
        (
            self.r1.source().out_degree(x),
            self.l.source().out_degree(a),
            self.l2.source().out_degree(y),
        )
    }

    fn split(&self, m: Mor) -> (Mor, Mor, Mor) {
        let (x, _, a, _, y) = self.objects[m.source];
        let (_, dm, dv) = self.degrees(m.source);
        let iv = m.index % dv;
        let rest = m.index / dv;
        (Mor::new(x, rest / dm), Mor::new(a, rest % dm), Mor::new(y, iv))
    }

    fn join(&self, object: usize, u: Mor, m: Mor, v: Mor) -> Mor {
        let (_, dm, dv) = self.degrees(object);
        Mor::new(object, (u.index * dm + m.index) * dv + v.index)
    }
}

impl GroupoidRepr for TwoSidedPullback {
    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn out_degree(&self, object: usize) -> u64 {
        let (du, dm, dv) = self.degrees(object);
        du * dm * dv
    }
    fn target(&self, mor: Mor) -> usize {
        let (_, s, _, t, _) = self.objects[mor.source];
        let (u, m, v) = self.split(mor);
        let (sg, tg) = (self.r1.target(), self.r.target());
        let s2 = sg.compose(sg.compose(sg.inverse(self.r1.on_morphism(u)), s), self.l.on_morphism(m));
        let t2 = tg.compose(tg.compose(tg.inverse(self.r.on_morphism(m)), t), self.l2.on_morphism(v));
        let key = (
            self.r1.source().target(u),
            s2,
            self.l.source().target(m),
            t2,
            self.l2.source().target(v),
        );
        self.lookup[&key]
    }
    fn identity(&self, object: usize) -> Mor {
        let (x, _, a, _, y) = self.objects[object];
        self.join(
            object,
            self.r1.source().identity(x),
            self.l.source().identity(a),
            self.l2.source().identity(y),
        )
    }
    fn compose(&self, first: Mor, second: Mor) -> Mor {
        let (u1, m1, v1) = self.split(first);
        let (u2, m2, v2) = self.split(second);
        self.join(
            first.source,
            self.r1.source().compose(u1, u2),
            self.l.source().compose(m1, m2),
            self.l2.source().compose(v1, v2),
        )
    }
    fn inverse(&self, mor: Mor) -> Mor {
        let (u, m, v) = self.split(mor);
        self.join(
            self.target(mor),
            self.r1.source().inverse(u),
            self.l.source().inverse(m),
            self.l2.source().inverse(v),
        )
    }
    fn generators(&self, object: usize) -> Vec<Mor> {
        let (x, _, a, _, y) = self.objects[object];
        let (p, m, q) = (self.r1.source(), self.l.source(), self.l2.source());
        let (ix, ia, iy) = (p.identity(x), m.identity(a), q.identity(y));
        let mut gens: Vec<Mor> = p.generators(x).into_iter().map(|g| self.join(object, g, ia, iy)).collect();
        gens.extend(m.generators(a).into_iter().map(|g| self.join(object, ix, g, iy)));
        gens.extend(q.generators(y).into_iter().map(|g| self.join(object, ix, ia, g)));
        gens
    }
}

/// `(P ×_S M) ×_T Q`, built as two ordinary pullbacks.
pub fn iterated_pullback(
    r1: &Functor,
    l: &Functor,
    r: &Functor,
    l2: &Functor,
    limits: &Limits,
) -> Result<Groupoid, ConstructionError> {
    let first = homotopy_pullback_with(r1, l, limits)?;
    let to_t = first.p2.then(r)?;
    Ok(homotopy_pullback_with(&to_t, l2, limits)?.groupoid)
}
