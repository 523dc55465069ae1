use num_bigint::BigInt;

use super::{GSpan, SpanError, SpanMatrix, SpanMorphism};
use crate::algebra::{Elem, GroupRingElement, Rational};
use crate::constructions::{homotopy_pullback_with, Functor, Pullback};
use crate::groupoid::{Limits, Mor};

/// `(id_S, e)_*`: apex `S`, both legs the identity, all labels neutral.
pub fn identity_span(h: &Functor) -> Result<GSpan, SpanError> {
    let s = h.source();
    let id = Functor::identity(s);
    let group = h
        .delooping_group()
        .ok_or_else(|| SpanError::Shape("H must land in BG".into()))?;
    GSpan::new(&id, &id, h, h, vec![group.zero(); s.object_count()])
}

fn check_phi(phi: &Functor, h: &Functor, v: &Functor) -> Result<(), SpanError> {
    if !phi.source().same_structure(h.source()) || !phi.target().same_structure(v.source()) {
        return Err(SpanError::Shape("φ must run from the source of H to the source of V".into()));
    }
    Ok(())
}

/// `(φ, ε)_*` from `S` to `T`: apex `S`, `L = id`, `R = φ`.
pub fn pushforward_span(phi: &Functor, h: &Functor, v: &Functor, labels: Vec<Elem>) -> Result<GSpan, SpanError> {
    check_phi(phi, h, v)?;
    GSpan::new(&Functor::identity(phi.source()), phi, h, v, labels)
}

/// `(φ, ε⁻¹)^*` from `T` to `S`: apex `S`, `L = φ`, `R = id`, labels `-ε`.
pub fn pullback_span(phi: &Functor, h: &Functor, v: &Functor, labels: Vec<Elem>) -> Result<GSpan, SpanError> {
    check_phi(phi, h, v)?;
    let group = v
        .delooping_group()
        .ok_or_else(|| SpanError::Shape("V must land in BG".into()))?
        .clone();
    let neg = labels.into_iter().map(|g| group.neg(g)).collect();
    GSpan::new(phi, &Functor::identity(phi.source()), v, h, neg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Pushforward,
    Pullback,
}

/// The counting formula for the matrices of `(φ, ε)_*` and `(φ, ε⁻¹)^*`:
/// `(1/|T(d,d)|) Σ_{t ∈ T(φc, d)} (V(t) + ε(c))` at `(c, d)`, and
/// `(1/|S(c,c)|) Σ_{t ∈ T(d, φc)} (V(t) - ε(c))` at `(d, c)`.
pub fn pushforward_matrix_closed_form(
    phi: &Functor,
    h: &Functor,
    v: &Functor,
    labels: &[Elem],
    direction: Direction,
) -> Result<SpanMatrix, SpanError> {
    check_phi(phi, h, v)?;
    let group = v
        .delooping_group()
        .ok_or_else(|| SpanError::Shape("V must land in BG".into()))?
        .clone();
    let (s, t) = (phi.source(), phi.target());
    let s_reps = s.components().representatives();
    let t_reps = t.components().representatives();
    let weight = |n: u64| Rational::new(1.into(), BigInt::from(n));
    let cell = |c: usize, d: usize| -> GroupRingElement {
        match direction {
            Direction::Pushforward => GroupRingElement::from_terms(
                &group,
                t.hom(phi.on_object(c), d)
                    .into_iter()
                    .map(|m| (group.add(v.value(m), labels[c]), weight(t.aut_order(d)))),
            ),
            Direction::Pullback => GroupRingElement::from_terms(
                &group,
                t.hom(d, phi.on_object(c))
                    .into_iter()
                    .map(|m| (group.sub(v.value(m), labels[c]), weight(s.aut_order(c)))),
            ),
        }
    };
    let s_names: Vec<String> = s_reps.iter().map(|&c| s.object_name(c)).collect();
    let t_names: Vec<String> = t_reps.iter().map(|&d| t.object_name(d)).collect();
    Ok(match direction {
        Direction::Pushforward => SpanMatrix::new(
            group.clone(),
            s_names,
            t_names,
            s_reps.clone(),
            t_reps.clone(),
            s_reps
                .iter()
                .map(|&c| t_reps.iter().map(|&d| cell(c, d)).collect())
                .collect(),
        ),
        Direction::Pullback => SpanMatrix::new(
            group.clone(),
            t_names,
            s_names,
            t_reps.clone(),
            s_reps.clone(),
            t_reps
                .iter()
                .map(|&d| s_reps.iter().map(|&c| cell(c, d)).collect())
                .collect(),
        ),
    })
}

/// The universal G-span from `S` to `T`: apex `S ×_BG T`, objects
/// `(x, k, y)` labelled by `k`.
pub fn universal_span(h: &Functor, v: &Functor) -> Result<GSpan, SpanError> {
    universal_span_with(h, v, &Limits::from_env())
}

pub fn universal_span_with(h: &Functor, v: &Functor, limits: &Limits) -> Result<GSpan, SpanError> {
    Ok(universal_parts(h, v, limits)?.0)
}

fn universal_parts(h: &Functor, v: &Functor, limits: &Limits) -> Result<(GSpan, Pullback), SpanError> {
    let pb = homotopy_pullback_with(h, v, limits)?;
    let labels = (0..pb.groupoid.object_count())
        .map(|x| Elem(pb.data.decode(x).1.index as usize))
        .collect();
    Ok((GSpan::new(&pb.p1, &pb.p2, h, v, labels)?, pb))
}

/// The span morphism `M ⇒ S ×_BG T`, `x ↦ (Lx, εx, Rx)`, with identity
/// transformations. Returns the universal span alongside it.
pub fn universal_two_cell(sp: &GSpan) -> Result<(GSpan, SpanMorphism), SpanError> {
    let (universal, pb) = universal_parts(sp.h(), sp.v(), &Limits::from_env())?;
    let (l, r) = (sp.left().clone(), sp.right().clone());
    let sp_labels = sp.labels().to_vec();
    let data = pb.data.clone();
    let image = move |x: usize| {
        data.find(l.on_object(x), Mor::new(0, sp_labels[x].0 as u64), r.on_object(x))
            .expect("(Lx, εx, Rx) is an object of the pullback")
    };
    let image2 = image.clone();
    let (l, r) = (sp.left().clone(), sp.right().clone());
    let data = pb.data.clone();
    let phi = Functor::from_fn(sp.apex(), &pb.groupoid, image, move |m| {
        data.encode_morphism(image2(m.source), l.on_morphism(m), r.on_morphism(m))
    })?;
    let a = sp.apex().objects().map(|x| sp.source().identity(sp.left().on_object(x))).collect();
    let b = sp.apex().objects().map(|x| sp.target().identity(sp.right().on_object(x))).collect();
    let cell = SpanMorphism::new(sp, &universal, &phi, a, b)?;
    Ok((universal, cell))
}
