//! A catalog of G-spans with known matrices: subset spans, universal spans,
//! spans of groups, coset spans and the Stirling spans. Each comes with a
//! direct counting formula for its matrix.

mod stirling;

pub use stirling::{
    alternative_stratification, fin_perm_groupoid, fin_rel_groupoid, stirling_apex, stirling_composite,
    stirling_span, StirlingApex, StirlingConfig, StirlingKind, DEFAULT_STIRLING_GUARD,
};

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{AbelianGroup, AlgebraError, Elem, GroupHom, GroupRingElement, Rational};
use crate::constructions::{delooping, ConstructionError, Functor, FunctorError};
use crate::groupoid::{cosets, ActionGroupoid, Groupoid, GroupoidError, Mor};
use crate::gspan::{GSpan, SpanError, SpanMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExampleError {
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{element} is moved outside the subset by the action")]
    NotInvariant { element: String },
    #[error("the square does not commute at {witness}")]
    NotCommuting { witness: String },
    #[error("{0}")]
    Containment(String),
    #[error("homomorphisms do not fit together: {0}")]
    Shape(String),
    #[error("n = {n} exceeds the guard {guard}")]
    Guard { n: usize, guard: usize },
}

impl From<ConstructionError> for ExampleError {
    fn from(e: ConstructionError) -> Self {
        ExampleError::Span(e.into())
    }
}

impl From<FunctorError> for ExampleError {
    fn from(e: FunctorError) -> Self {
        ExampleError::Span(e.into())
    }
}

impl From<GroupoidError> for ExampleError {
    fn from(e: GroupoidError) -> Self {
        ExampleError::Span(ConstructionError::from(e).into())
    }
}

/// `B(hom)`: the functor between deloopings induced by a homomorphism.
fn delooping_functor(source: &Groupoid, target: &Groupoid, hom: &GroupHom) -> Result<Functor, FunctorError> {
    let hom = hom.clone();
    Functor::to_delooping(source, target, move |m| hom.apply(Elem(m.index as usize)))
}

fn one_by_one(group: &AbelianGroup, entry: GroupRingElement) -> SpanMatrix {
    SpanMatrix::new(
        group.clone(),
        vec!["*".into()],
        vec!["*".into()],
        vec![0],
        vec![0],
        vec![vec![entry]],
    )
}

fn inverse_count(n: usize) -> Rational {
    Rational::new(1.into(), BigInt::from(n))
}

/// The span `BS ← M//(S×T) → BT` for a subset `M ⊆ G` invariant under
/// `x·(s, t) = x - V(t) + H(s)`, labelled by inclusion.
pub fn subset_span(group: &AbelianGroup, subset: &[Elem], h: &GroupHom, v: &GroupHom) -> Result<GSpan, ExampleError> {
    if &h.target != group || &v.target != group {
        return Err(ExampleError::Shape("H and V must land in G".into()));
    }
    let mut points: Vec<Elem> = subset.to_vec();
    points.sort();
    points.dedup();
    if let Some(bad) = points.iter().find(|x| !group.contains(**x)) {
        return Err(ExampleError::Shape(format!("element index {} is not in G", bad.0)));
    }
    let (s, t) = (h.source.clone(), v.source.clone());
    let st = s.product(&t);
    let position = |x: Elem| points.binary_search(&x).ok();
    for &x in &points {
        for st_elem in st.elements() {
            let (a, b) = s.unpair(&t, st_elem);
            let y = group.add(group.sub(x, v.apply(b)), h.apply(a));
            if position(y).is_none() {
                return Err(ExampleError::NotInvariant {
                    element: group.render(x),
                });
            }
        }
    }
    let table: Vec<Vec<usize>> = points
        .iter()
        .map(|&x| {
            st.elements()
                .map(|e| {
                    let (a, b) = s.unpair(&t, e);
                    position(group.add(group.sub(x, v.apply(b)), h.apply(a))).expect("checked invariant")
                })
                .collect()
        })
        .collect();
    let names = points.iter().map(|&x| group.render(x)).collect();
    let apex = ActionGroupoid::new(Arc::new(st.clone()), points.len(), move |x, e| table[x][e.0], Some(names))?
        .into_groupoid();
    let (bs, bt, bg) = (delooping(&s), delooping(&t), delooping(group));
    let (s1, t1) = (s.clone(), t.clone());
    let l = Functor::to_delooping(&apex, &bs, move |m| s1.unpair(&t1, Elem(m.index as usize)).0)?;
    let (s2, t2) = (s.clone(), t.clone());
    let r = Functor::to_delooping(&apex, &bt, move |m| s2.unpair(&t2, Elem(m.index as usize)).1)?;
    let hf = delooping_functor(&bs, &bg, h)?;
    let vf = delooping_functor(&bt, &bg, v)?;
    Ok(GSpan::new(&l, &r, &hf, &vf, points)?)
}

/// `(1/|T|) Σ M`.
pub fn subset_matrix_closed_form(group: &AbelianGroup, subset: &[Elem], t_order: usize) -> SpanMatrix {
    let mut points = subset.to_vec();
    points.sort();
    points.dedup();
    let w = inverse_count(t_order);
    one_by_one(
        group,
        GroupRingElement::from_terms(group, points.into_iter().map(|x| (x, w.clone()))),
    )
}

/// `(1/|T(d,d)|) Σ_{g ∈ G} g` at every entry, the matrix of the universal
/// span from `S` to `T`.
pub fn universal_matrix_closed_form(h: &Functor, v: &Functor) -> Result<SpanMatrix, ExampleError> {
    let group = h
        .delooping_group()
        .ok_or_else(|| ExampleError::Shape("H must land in BG".into()))?
        .clone();
    let (s, t) = (h.source(), v.source());
    let rows = s.components().representatives();
    let cols = t.components().representatives();
    let entries = rows
        .iter()
        .map(|_| {
            cols.iter()
                .map(|&d| {
                    let w = inverse_count(t.aut_order(d) as usize);
                    GroupRingElement::from_terms(&group, group.elements().map(|g| (g, w.clone())))
                })
                .collect()
        })
        .collect();
    Ok(SpanMatrix::new(
        group,
        rows.iter().map(|&c| s.object_name(c)).collect(),
        cols.iter().map(|&d| t.object_name(d)).collect(),
        rows,
        cols,
        entries,
    ))
}

/// A square of finite abelian groups `K1 ←L− M −R→ K2`, `H: K1 → G`,
/// `V: K2 → G`, with `H L = V R`, and a label `x ∈ G`.
#[derive(Clone, Debug)]
pub struct GroupSquare {
    pub l: GroupHom,
    pub r: GroupHom,
    pub h: GroupHom,
    pub v: GroupHom,
    pub x: Elem,
}

impl GroupSquare {
    fn check(&self) -> Result<(), ExampleError> {
        if self.l.source != self.r.source
            || self.l.target != self.h.source
            || self.r.target != self.v.source
            || self.h.target != self.v.target
        {
            return Err(ExampleError::Shape("the four homomorphisms do not form a square".into()));
        }
        let g = &self.h.target;
        if !g.contains(self.x) {
            return Err(ExampleError::Shape("x is not an element of G".into()));
        }
        for m in self.l.source.elements() {
            if self.h.apply(self.l.apply(m)) != self.v.apply(self.r.apply(m)) {
                return Err(ExampleError::NotCommuting {
                    witness: self.l.source.render(m),
                });
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.h.target
    }

    /// `|{(k1, k2) : V(k2) + x + H(k1) = g}|` for every `g`.
    pub fn counts(&self) -> Vec<u64> {
        let g = self.group();
        let mut out = vec![0; g.order()];
        for k1 in self.h.source.elements() {
            for k2 in self.v.source.elements() {
                out[g.add(g.add(self.v.apply(k2), self.x), self.h.apply(k1)).0] += 1;
            }
        }
        out
    }
}

/// The G-span `BK1 ← BM → BK2` with constant label `x`.
pub fn group_square_span(sq: &GroupSquare) -> Result<GSpan, ExampleError> {
    sq.check()?;
    let bm = delooping(&sq.l.source);
    let (bk1, bk2, bg) = (delooping(&sq.h.source), delooping(&sq.v.source), delooping(sq.group()));
    let l = delooping_functor(&bm, &bk1, &sq.l)?;
    let r = delooping_functor(&bm, &bk2, &sq.r)?;
    let h = delooping_functor(&bk1, &bg, &sq.h)?;
    let v = delooping_functor(&bk2, &bg, &sq.v)?;
    Ok(GSpan::new(&l, &r, &h, &v, vec![sq.x])?)
}

/// `(1/(|M||K2|)) Σ_g |{(k1, k2) : V(k2) + x + H(k1) = g}| g`.
pub fn group_square_closed_form(sq: &GroupSquare) -> Result<SpanMatrix, ExampleError> {
    sq.check()?;
    let g = sq.group();
    let w = inverse_count(sq.l.source.order() * sq.v.source.order());
    let entry = GroupRingElement::from_terms(
        g,
        sq.counts()
            .into_iter()
            .enumerate()
            .map(|(i, n)| (Elem(i), Rational::from_integer(n.into()) * &w)),
    );
    Ok(one_by_one(g, entry))
}

/// Both forms of the counting identity for a composite of two spans of
/// groups, per `g ∈ G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSquareIdentityRow {
    pub label: Elem,
    /// `|K2| · |{(k1, k2, k3) : V2(k3) + x2 + V(k2) + x1 + H1(k1) = g}|`.
    pub lhs: BigInt,
    /// `Σ_{g1 + g2 = g} |{(k1, k2) : …= g1}| · |{(k2, k3) : …= g2}|`.
    pub rhs: BigInt,
    /// `|M1| |K2| |M2| · |{(k1, k3) : V2(k3) + x2 + x1 + H1(k1) = g}|`.
    pub strict_lhs: BigInt,
    /// `|M1 ×_{K2} M2| · rhs`, with the strict fibre product of groups.
    pub strict_rhs: BigInt,
}

/// Evaluates the composite identity for two composable squares (the right
/// homomorphism `V` of the first equals the left homomorphism `H` of the
/// second). The homotopy form `lhs = rhs` always holds. The strict form
/// replaces the homotopy pullback of `BM1 → BK2 ← BM2` by the delooping of
/// the strict fibre product, and holds only when `R1(M1) + L2(M2) = K2`.
pub fn group_square_composite_identity(
    sq1: &GroupSquare,
    sq2: &GroupSquare,
) -> Result<Vec<GroupSquareIdentityRow>, ExampleError> {
    sq1.check()?;
    sq2.check()?;
    if sq1.v != sq2.h {
        return Err(ExampleError::Shape("V of the first square differs from H of the second".into()));
    }
    let g = sq1.group();
    let (k1s, k2s, k3s) = (&sq1.h.source, &sq1.v.source, &sq2.v.source);
    let (m1, m2) = (&sq1.l.source, &sq2.l.source);
    let mut triples = vec![0u64; g.order()];
    let mut pairs13 = vec![0u64; g.order()];
    let x = g.add(sq2.x, sq1.x);
    for k1 in k1s.elements() {
        for k3 in k3s.elements() {
            let base = g.add(g.add(sq2.v.apply(k3), x), sq1.h.apply(k1));
            pairs13[base.0] += 1;
            for k2 in k2s.elements() {
                triples[g.add(base, sq1.v.apply(k2)).0] += 1;
            }
        }
    }
    let (n1, n2) = (sq1.counts(), sq2.counts());
    let strict_size = m1
        .elements()
        .flat_map(|a| m2.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| sq1.r.apply(a) == sq2.l.apply(b))
        .count();
    Ok(g.elements()
        .map(|target| {
            let mut rhs = BigInt::from(0);
            for g1 in g.elements() {
                let g2 = g.sub(target, g1);
                rhs += BigInt::from(n1[g1.0]) * BigInt::from(n2[g2.0]);
            }
            GroupSquareIdentityRow {
                label: target,
                lhs: BigInt::from(k2s.order()) * BigInt::from(triples[target.0]),
                strict_lhs: BigInt::from(m1.order() * k2s.order() * m2.order()) * BigInt::from(pairs13[target.0]),
                strict_rhs: BigInt::from(strict_size) * &rhs,
                rhs,
            }
        })
        .collect())
}

/// The span `K1\G ← H1\G → K2\G` over `BG` with neutral labels, for
/// subgroups `H1 ≤ K1 ∩ K2`.
pub fn coset_span(group: &AbelianGroup, h1: &[Elem], k1: &[Elem], k2: &[Elem]) -> Result<GSpan, ExampleError> {
    let h1 = group.check_subgroup(h1)?;
    let k1 = group.check_subgroup(k1)?;
    let k2 = group.check_subgroup(k2)?;
    if let Some(bad) = h1.iter().find(|h| !k1.contains(h) || !k2.contains(h)) {
        return Err(ExampleError::Containment(format!(
            "{} lies in H1 but not in K1 ∩ K2",
            group.render(*bad)
        )));
    }
    let apex = ActionGroupoid::coset(group, &h1)?.into_groupoid();
    let s = ActionGroupoid::coset(group, &k1)?.into_groupoid();
    let t = ActionGroupoid::coset(group, &k2)?.into_groupoid();
    let bg = delooping(group);
    let (_, h_reps) = cosets(group, &h1);
    // Coset groupoids carry the acting element as the morphism index, so a
    // projection keeps the index and moves the source to the larger coset.
    let projection = |sub: &[Elem], target: &Groupoid| -> Result<Functor, FunctorError> {
        let (coset_of, _) = cosets(group, sub);
        let image: Arc<Vec<usize>> = Arc::new(h_reps.iter().map(|r| coset_of[r.0]).collect());
        let image2 = image.clone();
        Functor::from_fn(&apex, target, move |x| image[x], move |m| Mor::new(image2[m.source], m.index))
    };
    let l = projection(&k1, &s)?;
    let r = projection(&k2, &t)?;
    let h = Functor::to_delooping(&s, &bg, |m| Elem(m.index as usize))?;
    let v = Functor::to_delooping(&t, &bg, |m| Elem(m.index as usize))?;
    Ok(GSpan::new(&l, &r, &h, &v, vec![group.zero(); apex.object_count()])?)
}

/// `(1/(|H1||K2|)) Σ_g |{(k1, k2) : k2 + k1 = g2 + g - g1}| g`, the entry at
/// the objects `(K1 + g1, K2 + g2)`. Coset groupoids are connected, so the
/// matrix itself is the `1 × 1` case `g1 = g2 = 0`; other choices of
/// objects exercise the evaluation away from representatives.
pub fn coset_entry_closed_form(
    group: &AbelianGroup,
    h1: &[Elem],
    k1: &[Elem],
    k2: &[Elem],
    g1: Elem,
    g2: Elem,
) -> Result<GroupRingElement, ExampleError> {
    let h1 = group.check_subgroup(h1)?;
    let k1 = group.check_subgroup(k1)?;
    let k2 = group.check_subgroup(k2)?;
    let w = inverse_count(h1.len() * k2.len());
    let mut e = GroupRingElement::zero(group);
    for &a in &k1 {
        for &b in &k2 {
            // k2 + k1 = g2 + g - g1, so g = k1 + k2 + g1 - g2.
            e.add_term(group.sub(group.add(group.add(a, b), g1), g2), w.clone());
        }
    }
    Ok(e)
}

/// Minimal representatives of the cosets of `subgroup`, in the object order
/// of the coset groupoid.
pub fn coset_representatives(group: &AbelianGroup, subgroup: &[Elem]) -> Result<Vec<Elem>, ExampleError> {
    let sub = group.check_subgroup(subgroup)?;
    Ok(cosets(group, &sub).1)
}

/// Both sides of `|K2| |{(k1, k2, k3) : k3 + k2 + k1 = g}| =
/// Σ_{g1 + g2 = g} |{(k1, k2) : k2 + k1 = g1}| |{(k2, k3) : k3 + k2 = g2}|`.
pub fn coset_composite_identity(
    group: &AbelianGroup,
    k1: &[Elem],
    k2: &[Elem],
    k3: &[Elem],
) -> Result<Vec<(Elem, BigInt, BigInt)>, ExampleError> {
    let k1 = group.check_subgroup(k1)?;
    let k2 = group.check_subgroup(k2)?;
    let k3 = group.check_subgroup(k3)?;
    let sums = |a: &[Elem], b: &[Elem]| {
        let mut out = vec![0u64; group.order()];
        for &x in a {
            for &y in b {
                out[group.add(x, y).0] += 1;
            }
        }
        out
    };
    let (p12, p23) = (sums(&k1, &k2), sums(&k2, &k3));
    let mut triples = vec![0u64; group.order()];
    for (i, &n) in p12.iter().enumerate() {
        for &c in &k3 {
            triples[group.add(Elem(i), c).0] += n;
        }
    }
    Ok(group
        .elements()
        .map(|g| {
            let lhs = BigInt::from(k2.len()) * BigInt::from(triples[g.0]);
            let rhs = group
                .elements()
                .map(|g1| BigInt::from(p12[g1.0]) * BigInt::from(p23[group.sub(g, g1).0]))
                .sum();
            (g, lhs, rhs)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, Character};
    use crate::gspan::{compose_spans, matrix_multiply};

    fn hom(s: &AbelianGroup, t: &AbelianGroup, images: &[usize]) -> GroupHom {
        let images: Vec<Elem> = images.iter().map(|&i| Elem(i)).collect();
        GroupHom::from_generator_images(s, t, &images).unwrap()
    }

    #[test]
    fn subset_span_matches_counting_formula() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        let z2 = AbelianGroup::cyclic(2).unwrap();
        let h = hom(&z2, &z4, &[2]);
        let sp = subset_span(&z4, &[Elem(3), Elem(1)], &h, &h).unwrap();
        let m = sp.matrix().unwrap();
        let expected = subset_matrix_closed_form(&z4, &[Elem(1), Elem(3)], 2);
        assert_eq!(m.entry(0, 0), expected.entry(0, 0));
        assert_eq!(m.entry(0, 0).coefficient(Elem(1)), rational(1, 2));

        let all: Vec<Elem> = z4.elements().collect();
        let sp = subset_span(&z4, &all, &GroupHom::identity(&z4), &GroupHom::zero(&z2, &z4)).unwrap();
        let expected = subset_matrix_closed_form(&z4, &all, 2);
        assert_eq!(sp.matrix().unwrap().entry(0, 0), expected.entry(0, 0));
    }

    #[test]
    fn subset_must_be_invariant() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        let z2 = AbelianGroup::cyclic(2).unwrap();
        let h = hom(&z2, &z4, &[2]);
        let err = subset_span(&z4, &[Elem(1)], &h, &h).unwrap_err();
        assert!(matches!(err, ExampleError::NotInvariant { .. }));
    }

    #[test]
    fn universal_span_matches_counting_formula() {
        let z3 = AbelianGroup::cyclic(3).unwrap();
        let s = ActionGroupoid::coset(&z3, &[Elem(0)]).unwrap().into_groupoid();
        let bg = delooping(&z3);
        let h = Functor::to_delooping(&s, &bg, |m| Elem(m.index as usize)).unwrap();
        let v = Functor::trivial_to_delooping(&bg, &bg).unwrap();
        let u = crate::gspan::universal_span(&h, &v).unwrap();
        let expected = universal_matrix_closed_form(&h, &v).unwrap();
        assert_eq!(u.matrix().unwrap().entries(), expected.entries());
    }

    fn sample_square() -> GroupSquare {
        let z2 = AbelianGroup::cyclic(2).unwrap();
        let z4 = AbelianGroup::cyclic(4).unwrap();
        GroupSquare {
            l: GroupHom::identity(&z2),
            r: hom(&z2, &z4, &[2]),
            h: hom(&z2, &z4, &[2]),
            v: GroupHom::identity(&z4),
            x: Elem(1),
        }
    }

    #[test]
    fn group_square_matches_counting_formula() {
        let sq = sample_square();
        let m = group_square_span(&sq).unwrap().matrix().unwrap();
        assert_eq!(m.entries(), group_square_closed_form(&sq).unwrap().entries());
        assert_eq!(m.entry(0, 0).augmentation(), rational(1, 1));
    }

    #[test]
    fn group_square_must_commute() {
        let mut sq = sample_square();
        sq.r = GroupHom::zero(&sq.l.source, &sq.v.source);
        assert!(matches!(group_square_span(&sq), Err(ExampleError::NotCommuting { .. })));
    }

    #[test]
    fn composite_identity_homotopy_form_always_holds() {
        let trivial = AbelianGroup::trivial();
        let z2 = AbelianGroup::cyclic(2).unwrap();
        // K2 = Z2 with everything else trivial: R1(M1) + L2(M2) is not K2.
        let v = GroupHom::zero(&z2, &trivial);
        let sq1 = GroupSquare {
            l: GroupHom::identity(&trivial),
            r: GroupHom::zero(&trivial, &z2),
            h: GroupHom::identity(&trivial),
            v: v.clone(),
            x: Elem(0),
        };
        let sq2 = GroupSquare {
            l: GroupHom::zero(&trivial, &z2),
            r: GroupHom::identity(&trivial),
            h: v,
            v: GroupHom::identity(&trivial),
            x: Elem(0),
        };
        let rows = group_square_composite_identity(&sq1, &sq2).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].lhs, rows[0].rhs);
        assert_eq!(rows[0].strict_lhs, BigInt::from(2));
        assert_eq!(rows[0].strict_rhs, BigInt::from(4));

        let composite = compose_spans(&group_square_span(&sq1).unwrap(), &group_square_span(&sq2).unwrap()).unwrap();
        let product = matrix_multiply(
            &group_square_closed_form(&sq1).unwrap(),
            &group_square_closed_form(&sq2).unwrap(),
        )
        .unwrap();
        assert_eq!(composite.matrix().unwrap().entries(), product.entries());
    }

    #[test]
    fn composite_identity_strict_form_with_surjective_legs() {
        let sq = sample_square();
        let sq2 = GroupSquare {
            l: GroupHom::identity(&sq.v.source),
            r: GroupHom::identity(&sq.v.source),
            h: sq.v.clone(),
            v: sq.v.clone(),
            x: Elem(3),
        };
        for row in group_square_composite_identity(&sq, &sq2).unwrap() {
            assert_eq!(row.lhs, row.rhs);
            assert_eq!(row.strict_lhs, row.strict_rhs);
        }
    }

    #[test]
    fn coset_entries_match_counting_formula() {
        let z6 = AbelianGroup::cyclic(6).unwrap();
        let (h1, k1, k2) = (vec![Elem(0)], vec![Elem(0), Elem(3)], vec![Elem(0), Elem(2), Elem(4)]);
        let sp = coset_span(&z6, &h1, &k1, &k2).unwrap();
        let (r1, r2) = (coset_representatives(&z6, &k1).unwrap(), coset_representatives(&z6, &k2).unwrap());
        assert_eq!(sp.matrix().unwrap().row_count(), 1);
        for (c, &g1) in r1.iter().enumerate() {
            for (d, &g2) in r2.iter().enumerate() {
                let expected = coset_entry_closed_form(&z6, &h1, &k1, &k2, g1, g2).unwrap();
                assert_eq!(sp.entry_at(c, d).unwrap(), expected, "objects {c}, {d}");
            }
        }
    }

    #[test]
    fn coset_containment_is_checked() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        let err = coset_span(&z4, &[Elem(0), Elem(2)], &[Elem(0)], &[Elem(0), Elem(2)]).unwrap_err();
        assert!(matches!(err, ExampleError::Containment(_)));
    }

    #[test]
    fn coset_composite_identity_holds() {
        let g = AbelianGroup::new(&[2, 4]).unwrap();
        let subs = g.subgroups();
        for k1 in &subs {
            for k3 in &subs {
                for (_, lhs, rhs) in coset_composite_identity(&g, k1, &subs[1], k3).unwrap() {
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    fn c1(n: usize, k: usize) -> i64 {
        match (n, k) {
            (0, 0) => 1,
            (0, _) | (_, 0) => 0,
            _ => (n as i64 - 1) * c1(n - 1, k) + c1(n - 1, k - 1),
        }
    }

    fn s2(n: usize, k: usize) -> i64 {
        match (n, k) {
            (0, 0) => 1,
            (0, _) | (_, 0) => 0,
            _ => k as i64 * s2(n - 1, k) + s2(n - 1, k - 1),
        }
    }

    #[test]
    fn stirling_matrices_at_three() {
        let first = stirling_span(&StirlingConfig::new(3, StirlingKind::First)).unwrap().matrix().unwrap();
        let second = stirling_span(&StirlingConfig::new(3, StirlingKind::Second)).unwrap().matrix().unwrap();
        for n in 0..=3 {
            for k in 0..=3 {
                let e = first.entry(n, k);
                assert_eq!(e.coefficient(Elem((n + k) % 2)), rational(c1(n, k), 1));
                assert_eq!(e.augmentation(), rational(c1(n, k), 1));
                assert_eq!(second.entry(n, k).coefficient(Elem(0)), rational(s2(n, k), 1));
            }
        }
        let sign = Character::standard(first.group());
        let product = stirling_composite(3, DEFAULT_STIRLING_GUARD).unwrap().matrix().unwrap();
        assert!(product.apply_character(&sign).unwrap().is_identity());
        assert_eq!(product.entries(), matrix_multiply(&first, &second).unwrap().entries());
    }

    #[test]
    fn stratification_agrees_with_composite_fibre() {
        let composite = stirling_composite(3, DEFAULT_STIRLING_GUARD).unwrap();
        for n in 0..=3 {
            for m in 0..=n {
                let direct = composite.labeled_fibre(n, m).unwrap().euler_by_label().unwrap();
                let alt = alternative_stratification(n, m, DEFAULT_STIRLING_GUARD).unwrap();
                assert_eq!(direct, alt, "({n}, {m})");
            }
        }
    }
}
