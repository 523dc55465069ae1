use std::sync::Arc;

use super::{compose_spans_with_pullback, GSpan, SpanError, EXHAUSTIVE_NATURALITY_LIMIT};
use crate::constructions::Functor;
use crate::groupoid::{Groupoid, Limits, Mor};

/// A morphism of G-spans `(Φ, A, B): (M1, ε1) ⇒ (M2, ε2)` between spans with
/// the same ends, `H` and `V`. `Φ: M1 → M2`, `A_x: L1 x → L2 Φx` and
/// `B_x: R1 x → R2 Φx` are natural, and
/// `V(B_x) + ε1(x) = ε2(Φx) + H(A_x)` for every object `x`.
#[derive(Clone, Debug)]
pub struct SpanMorphism {
    source: GSpan,
    target: GSpan,
    phi: Functor,
    a: Arc<Vec<Mor>>,
    b: Arc<Vec<Mor>>,
}

impl SpanMorphism {
    pub fn new(source: &GSpan, target: &GSpan, phi: &Functor, a: Vec<Mor>, b: Vec<Mor>) -> Result<Self, SpanError> {
        phi.verify()?;
        let cell = Self::assemble(source, target, phi, a, b)?;
        cell.verify_data()?;
        Ok(cell)
    }

    fn assemble(source: &GSpan, target: &GSpan, phi: &Functor, a: Vec<Mor>, b: Vec<Mor>) -> Result<Self, SpanError> {
        if !source.source().same_structure(target.source()) || !source.target().same_structure(target.target()) {
            return Err(SpanError::Shape("span morphism between spans with different ends".into()));
        }
        if !phi.source().same_structure(source.apex()) || !phi.target().same_structure(target.apex()) {
            return Err(SpanError::Shape("Φ does not run between the apexes".into()));
        }
        let n = source.apex().object_count();
        if a.len() != n || b.len() != n {
            return Err(SpanError::Shape(format!("A and B need {n} components")));
        }
        Ok(SpanMorphism {
            source: source.clone(),
            target: target.clone(),
            phi: phi.clone(),
            a: Arc::new(a),
            b: Arc::new(b),
        })
    }

    /// The identity morphism of a span.
    pub fn identity(sp: &GSpan) -> Self {
        let a = sp.apex().objects().map(|x| sp.source().identity(sp.left().on_object(x))).collect();
        let b = sp.apex().objects().map(|x| sp.target().identity(sp.right().on_object(x))).collect();
        SpanMorphism {
            source: sp.clone(),
            target: sp.clone(),
            phi: Functor::identity(sp.apex()),
            a: Arc::new(a),
            b: Arc::new(b),
        }
    }

    pub fn source(&self) -> &GSpan {
        &self.source
    }

    pub fn target(&self) -> &GSpan {
        &self.target
    }

    pub fn phi(&self) -> &Functor {
        &self.phi
    }

    pub fn a(&self) -> &[Mor] {
        &self.a
    }

    pub fn b(&self) -> &[Mor] {
        &self.b
    }

    /// Re-checks every condition, including functoriality of `Φ`.
    pub fn verify(&self) -> Result<(), SpanError> {
        self.phi.verify()?;
        self.verify_data()
    }

    fn verify_data(&self) -> Result<(), SpanError> {
        let (sp1, sp2) = (&self.source, &self.target);
        let (s, t, m) = (sp1.source(), sp1.target(), sp1.apex());
        let g = sp1.group();
        let fail = |reason: &str, witness: String| SpanError::TwoCell {
            reason: reason.into(),
            witness,
        };
        for x in m.objects() {
            let (ax, bx) = (self.a[x], self.b[x]);
            let px = self.phi.on_object(x);
            if ax.source != sp1.left().on_object(x)
                || ax.index >= s.out_degree(ax.source)
                || s.target(ax) != sp2.left().on_object(px)
            {
                return Err(fail("A_x does not run from L1 x to L2 Φx", m.object_name(x)));
            }
            if bx.source != sp1.right().on_object(x)
                || bx.index >= t.out_degree(bx.source)
                || t.target(bx) != sp2.right().on_object(px)
            {
                return Err(fail("B_x does not run from R1 x to R2 Φx", m.object_name(x)));
            }
            let lhs = g.add(sp1.v().value(bx), sp1.label(x));
            let rhs = g.add(sp2.label(px), sp1.h().value(ax));
            if lhs != rhs {
                return Err(fail("labels are not compatible", m.object_name(x)));
            }
        }
        let exhaustive = m.morphism_count() <= EXHAUSTIVE_NATURALITY_LIMIT;
        for x in m.objects() {
            let mors: Vec<Mor> = if exhaustive { m.out_morphisms(x).collect() } else { m.generators(x) };
            for f in mors {
                let y = m.target(f);
                let pf = self.phi.on_morphism(f);
                let a_ok = s.compose(sp1.left().on_morphism(f), self.a[y])
                    == s.compose(self.a[x], sp2.left().on_morphism(pf));
                let b_ok = t.compose(sp1.right().on_morphism(f), self.b[y])
                    == t.compose(self.b[x], sp2.right().on_morphism(pf));
                if !a_ok {
                    return Err(fail("A is not natural", m.morphism_name(f)));
                }
                if !b_ok {
                    return Err(fail("B is not natural", m.morphism_name(f)));
                }
            }
        }
        Ok(())
    }

    /// Extensional equality of `Φ`, `A` and `B`.
    pub fn agrees_with(&self, other: &SpanMorphism) -> bool {
        self.phi.agrees_with(&other.phi).is_ok() && self.a == other.a && self.b == other.b
    }
}

fn same_span(x: &GSpan, y: &GSpan) -> bool {
    x.apex().same_structure(y.apex())
        && x.labels() == y.labels()
        && x.left().agrees_with(y.left()).is_ok()
        && x.right().agrees_with(y.right()).is_ok()
}

/// `(A2Φ1 ∘ A1, Φ2Φ1, B2Φ1 ∘ B1)`.
pub fn vertical_compose(first: &SpanMorphism, second: &SpanMorphism) -> Result<SpanMorphism, SpanError> {
    if !same_span(&first.target, &second.source) {
        return Err(SpanError::Shape("span morphisms are not vertically composable".into()));
    }
    let (s, t) = (first.source.source(), first.source.target());
    let phi = first.phi.then(&second.phi)?;
    let n = first.source.apex().object_count();
    let a = (0..n)
        .map(|x| s.compose(first.a[x], second.a[first.phi.on_object(x)]))
        .collect();
    let b = (0..n)
        .map(|x| t.compose(first.b[x], second.b[first.phi.on_object(x)]))
        .collect();
    SpanMorphism::assemble(&first.source, &second.target, &phi, a, b)
}

/// The horizontal composite of `P ⇒ P'` (from `S` to `T`) and `Q ⇒ Q'`
/// (from `T` to `U`), a morphism between the composite spans. On objects
/// `(x1, t, x2) ↦ (Φ1 x1, A2 x2 ∘ t ∘ (B1 x1)⁻¹, Φ2 x2)`, with `A = A1 p1`
/// and `B = B2 p2`.
pub fn horizontal_compose(left: &SpanMorphism, right: &SpanMorphism) -> Result<SpanMorphism, SpanError> {
    horizontal_compose_with(left, right, &Limits::from_env())
}

pub fn horizontal_compose_with(
    left: &SpanMorphism,
    right: &SpanMorphism,
    limits: &Limits,
) -> Result<SpanMorphism, SpanError> {
    let (source, pb) = compose_spans_with_pullback(&left.source, &right.source, limits)?;
    let (target, pb2) = compose_spans_with_pullback(&left.target, &right.target, limits)?;
    let t: Groupoid = left.source.target().clone();
    let n = pb.groupoid.object_count();
    let mut objects = Vec::with_capacity(n);
    for x in 0..n {
        let (x1, tm, x2) = pb.data.decode(x);
        let u = t.compose(t.compose(t.inverse(left.b[x1]), tm), right.a[x2]);
        let image = pb2
            .data
            .find(left.phi.on_object(x1), u, right.phi.on_object(x2))
            .ok_or_else(|| SpanError::TwoCell {
                reason: "image is not an object of the target composite".into(),
                witness: pb.groupoid.object_name(x),
            })?;
        objects.push(image);
    }
    let objects = Arc::new(objects);
    let objects2 = objects.clone();
    let (data, data2) = (pb.data.clone(), pb2.data.clone());
    let (phi1, phi2) = (left.phi.clone(), right.phi.clone());
    let phi = Functor::from_fn_unchecked(
        &pb.groupoid,
        &pb2.groupoid,
        move |x| objects[x],
        move |m| {
            let (m1, m2) = data.decode_morphism(m);
            data2.encode_morphism(objects2[m.source], phi1.on_morphism(m1), phi2.on_morphism(m2))
        },
    );
    let a = (0..n).map(|x| left.a[pb.data.decode(x).0]).collect();
    let b = (0..n).map(|x| right.b[pb.data.decode(x).2]).collect();
    SpanMorphism::assemble(&source, &target, &phi, a, b)
}

/// Compares `(β2 ∘ β1) * (α2 ∘ α1)` with `(β2 * α2) ∘ (β1 * α1)`, where
/// `α1: P ⇒ P'`, `α2: P' ⇒ P''` compose vertically on the left and
/// `β1`, `β2` likewise on the right. Both sides are also verified.
pub fn interchange_check(
    alpha1: &SpanMorphism,
    alpha2: &SpanMorphism,
    beta1: &SpanMorphism,
    beta2: &SpanMorphism,
) -> Result<bool, SpanError> {
    let lhs = horizontal_compose(&vertical_compose(alpha1, alpha2)?, &vertical_compose(beta1, beta2)?)?;
    let rhs = vertical_compose(&horizontal_compose(alpha1, beta1)?, &horizontal_compose(alpha2, beta2)?)?;
    lhs.verify()?;
    rhs.verify()?;
    Ok(lhs.agrees_with(&rhs))
}

/// Builds the map of labelled fibres `c\M1/d → c\M2/d`,
/// `(α, x, β) ↦ (A_x ∘ α, Φx, β ∘ (B_x)⁻¹)`, checks that it is a functor and
/// that it preserves labels.
pub fn induced_fibre_map_check(cell: &SpanMorphism, c: usize, d: usize) -> Result<Functor, SpanError> {
    let f1 = cell.source.labeled_fibre(c, d)?;
    let f2 = cell.target.labeled_fibre(c, d)?;
    let (s, t) = (cell.source.source().clone(), cell.source.target().clone());
    let mut objects = Vec::with_capacity(f1.groupoid.object_count());
    for x in f1.groupoid.objects() {
        let (alpha, a, beta) = f1.fibre.decode(x);
        let alpha = alpha.expect("two-sided fibre");
        let beta = beta.expect("two-sided fibre");
        let image = f2
            .fibre
            .find(
                Some(s.compose(alpha, cell.a[a])),
                cell.phi.on_object(a),
                Some(t.compose(t.inverse(cell.b[a]), beta)),
            )
            .ok_or_else(|| SpanError::TwoCell {
                reason: "induced fibre map leaves the fibre".into(),
                witness: f1.groupoid.object_name(x),
            })?;
        if f2.labels[image] != f1.labels[x] {
            return Err(SpanError::TwoCell {
                reason: "induced fibre map changes the label".into(),
                witness: f1.groupoid.object_name(x),
            });
        }
        objects.push(image);
    }
    let objects = Arc::new(objects);
    let objects2 = objects.clone();
    let fibre = f1.fibre.clone();
    let phi = cell.phi.clone();
    Ok(Functor::from_fn(
        &f1.groupoid,
        &f2.groupoid,
        move |x| objects[x],
        move |m| Mor::new(objects2[m.source], phi.on_morphism(fibre.apex_morphism(m)).index),
    )?)
}
