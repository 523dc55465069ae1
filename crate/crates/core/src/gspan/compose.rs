use num_bigint::BigInt;
use num_traits::Zero;

use super::{matrix_multiply, weighted_euler_by_label, GSpan, SpanError, SpanMatrix};
use crate::algebra::{Elem, Rational};
use crate::constructions::{homotopy_pullback_with, Pullback};
use crate::groupoid::Limits;

/// The composite span with apex `M1 ×_T M2` and labels
/// `(a1, t, a2) ↦ ε2(a2) + V1(t) + ε1(a1)`.
pub fn compose_spans(sp1: &GSpan, sp2: &GSpan) -> Result<GSpan, SpanError> {
    Ok(compose_spans_with_pullback(sp1, sp2, &Limits::from_env())?.0)
}

/// As [`compose_spans`], also returning the pullback and its projections.
pub fn compose_spans_with_pullback(sp1: &GSpan, sp2: &GSpan, limits: &Limits) -> Result<(GSpan, Pullback), SpanError> {
    sp1.v()
        .agrees_with(sp2.h())
        .map_err(|e| SpanError::NotComposable(format!("V1 and H2 differ: {e}")))?;
    let pb = homotopy_pullback_with(sp1.right(), sp2.left(), limits)?;
    let l = pb.p1.then(sp1.left())?;
    let r = pb.p2.then(sp2.right())?;
    let g = sp1.group();
    let labels = (0..pb.groupoid.object_count())
        .map(|x| {
            let (a1, t, a2) = pb.data.decode(x);
            g.add(g.add(sp2.label(a2), sp1.v().value(t)), sp1.label(a1))
        })
        .collect();
    let span = GSpan::new(&l, &r, sp1.h(), sp2.v(), labels)?;
    Ok((span, pb))
}

/// `([M1 ×_T M2, ε1 ×_T ε2], [M1, ε1][M2, ε2])`.
pub fn check_main_theorem(sp1: &GSpan, sp2: &GSpan) -> Result<(SpanMatrix, SpanMatrix), SpanError> {
    let lhs = compose_spans(sp1, sp2)?.matrix()?;
    let rhs = matrix_multiply(&sp1.matrix()?, &sp2.matrix()?)?;
    Ok((lhs, rhs))
}

/// One group element's two sides of the labelled pullback identity. Each
/// level `X{ε = g}` is measured by the weighted count of
/// [`weighted_euler_by_label`]; labels on the pullback and on one-sided
/// fibres need not be constant on components, and the full subgroupoid on a
/// level does not satisfy the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledLemmaRow {
    pub label: Elem,
    /// `χ((M1 ×_T M2){ε1 ×_T ε2 = g})`.
    pub lhs: Rational,
    /// `Σ_d Σ_{g2 + g1 = g} χ((M1/d){g1}) χ(T{d}) χ((d\M2){g2})`.
    pub rhs: Rational,
}

/// Evaluates both sides of the labelled Euler characteristic identity for
/// every `g ∈ G`.
pub fn labeled_lemma_check(sp1: &GSpan, sp2: &GSpan) -> Result<Vec<LabeledLemmaRow>, SpanError> {
    let limits = Limits::from_env();
    let (composite, pb) = compose_spans_with_pullback(sp1, sp2, &limits)?;
    let lhs_levels = weighted_euler_by_label(&pb.groupoid, composite.labels());
    let group = sp1.group().clone();
    let mut rhs = vec![Rational::zero(); group.order()];
    let t = sp1.target();
    for d in t.components().representatives() {
        let td = Rational::new(1.into(), BigInt::from(t.aut_order(d)));
        let (right, rl) = sp1.right_fibre_labeled(d, &limits)?;
        let (left, ll) = sp2.left_fibre_labeled(d, &limits)?;
        let ones = weighted_euler_by_label(&right, &rl);
        let twos = weighted_euler_by_label(&left, &ll);
        for (g1, x1) in &ones {
            for (g2, x2) in &twos {
                rhs[group.add(*g2, *g1).0] += x1 * &td * x2;
            }
        }
    }
    Ok(group
        .elements()
        .map(|g| LabeledLemmaRow {
            label: g,
            lhs: lhs_levels.get(&g).cloned().unwrap_or_else(Rational::zero),
            rhs: rhs[g.0].clone(),
        })
        .collect())
}
