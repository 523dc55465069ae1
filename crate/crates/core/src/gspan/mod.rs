//! G-spans, their labelled homotopy fibres and group-ring matrices,
//! composition, special spans and span morphisms.

mod cell;
mod compose;
mod matrix;
mod special;

pub use cell::{
    horizontal_compose, horizontal_compose_with, induced_fibre_map_check, interchange_check, vertical_compose,
    SpanMorphism,
};
pub use compose::{
    check_main_theorem, compose_spans, compose_spans_with_pullback, labeled_lemma_check, LabeledLemmaRow,
};
pub use matrix::{matrix_multiply, matrix_multiply_commuted, CharacterMatrix, SpanMatrix};
pub use special::{
    identity_span, pullback_span, pushforward_matrix_closed_form, pushforward_span, universal_span, universal_span_with,
    universal_two_cell, Direction,
};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AbelianGroup, AlgebraError, Elem, GroupRingElement, Rational};
use crate::constructions::{ConstructionError, Fibre, Functor, FunctorError};
use crate::groupoid::{FullSubgroupoid, Groupoid, Limits, Mor};

/// Above this many apex morphisms, label naturality is checked on
/// generators only (which is complete, since labels are additive along
/// composites).
pub const EXHAUSTIVE_NATURALITY_LIMIT: u128 = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpanError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("labels are not natural at morphism {morphism}")]
    Naturality { morphism: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("spans are not composable: {0}")]
    NotComposable(String),
    #[error("fibre label is not constant on the component of {object}")]
    LabelNotConstant { object: String },
    #[error("matrix entry ({row}, {col}) has a negative coefficient")]
    NegativeEntry { row: usize, col: usize },
    #[error("invalid span morphism: {reason} at {witness}")]
    TwoCell { reason: String, witness: String },
}

impl From<FunctorError> for SpanError {
    fn from(e: FunctorError) -> Self {
        SpanError::Construction(e.into())
    }
}

/// A G-span `S ← M → T` with `H: S → BG`, `V: T → BG` and labels
/// `ε: Ob M → G` satisfying `ε(a2) + H(L m) = V(R m) + ε(a1)` for every
/// `m: a1 → a2`.
#[derive(Clone, Debug)]
pub struct GSpan {
    l: Functor,
    r: Functor,
    h: Functor,
    v: Functor,
    group: AbelianGroup,
    labels: Arc<Vec<Elem>>,
}

impl GSpan {
    pub fn new(l: &Functor, r: &Functor, h: &Functor, v: &Functor, labels: Vec<Elem>) -> Result<Self, SpanError> {
        if !l.source().same_structure(r.source()) {
            return Err(SpanError::Shape("L and R have different sources".into()));
        }
        if !h.source().same_structure(l.target()) {
            return Err(SpanError::Shape("H does not start at the target of L".into()));
        }
        if !v.source().same_structure(r.target()) {
            return Err(SpanError::Shape("V does not start at the target of R".into()));
        }
        let group = match (h.delooping_group(), v.delooping_group()) {
            (Some(a), Some(b)) if a == b => a.clone(),
            (Some(_), Some(_)) => return Err(SpanError::Shape("H and V land in different groups".into())),
            _ => return Err(SpanError::Shape("H and V must land in a delooping BG".into())),
        };
        if labels.len() != l.source().object_count() {
            return Err(SpanError::Shape(format!(
                "{} labels for {} apex objects",
                labels.len(),
                l.source().object_count()
            )));
        }
        if let Some(bad) = labels.iter().find(|g| !group.contains(**g)) {
            return Err(SpanError::Shape(format!("label index {} is not a group element", bad.0)));
        }
        let span = GSpan {
            l: l.clone(),
            r: r.clone(),
            h: h.clone(),
            v: v.clone(),
            group,
            labels: Arc::new(labels),
        };
        span.check_naturality()?;
        Ok(span)
    }

    fn check_naturality(&self) -> Result<(), SpanError> {
        let m = self.apex();
        let exhaustive = m.morphism_count() <= EXHAUSTIVE_NATURALITY_LIMIT;
        for a in m.objects() {
            let mors: Vec<Mor> = if exhaustive { m.out_morphisms(a).collect() } else { m.generators(a) };
            for f in mors {
                if !self.natural_at(f) {
                    return Err(SpanError::Naturality {
                        morphism: m.morphism_name(f),
                    });
                }
            }
        }
        Ok(())
    }

    fn natural_at(&self, f: Mor) -> bool {
        let g = &self.group;
        let b = self.apex().target(f);
        let lhs = g.add(self.labels[b], self.h.value(self.l.on_morphism(f)));
        let rhs = g.add(self.v.value(self.r.on_morphism(f)), self.labels[f.source]);
        lhs == rhs
    }

    pub fn apex(&self) -> &Groupoid {
        self.l.source()
    }

    pub fn source(&self) -> &Groupoid {
        self.l.target()
    }

    pub fn target(&self) -> &Groupoid {
        self.r.target()
    }

    pub fn left(&self) -> &Functor {
        &self.l
    }

    pub fn right(&self) -> &Functor {
        &self.r
    }

    pub fn h(&self) -> &Functor {
        &self.h
    }

    pub fn v(&self) -> &Functor {
        &self.v
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn labels(&self) -> &[Elem] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> Elem {
        self.labels[a]
    }

    /// `c\M/d` with labels `V(t) + ε(a) + H(s)`, constant on components.
    pub fn labeled_fibre(&self, c: usize, d: usize) -> Result<LabeledFibre, SpanError> {
        self.labeled_fibre_with(c, d, &Limits::from_env())
    }

    pub fn labeled_fibre_with(&self, c: usize, d: usize, limits: &Limits) -> Result<LabeledFibre, SpanError> {
        let fibre = Arc::new(Fibre::new(self.apex(), Some((&self.l, c)), Some((&self.r, d)), limits)?);
        let g = &self.group;
        let labels: Vec<Elem> = (0..fibre_len(&fibre))
            .map(|x| {
                let (s, a, t) = fibre.decode(x);
                let hs = self.h.value(s.expect("two-sided"));
                let vt = self.v.value(t.expect("two-sided"));
                g.add(g.add(vt, self.labels[a]), hs)
            })
            .collect();
        let groupoid = Groupoid::from_arc(fibre.clone());
        for x in groupoid.objects() {
            for m in groupoid.generators(x) {
                if labels[groupoid.target(m)] != labels[x] {
                    return Err(SpanError::LabelNotConstant {
                        object: groupoid.object_name(x),
                    });
                }
            }
        }
        Ok(LabeledFibre {
            fibre,
            groupoid,
            labels,
        })
    }

    /// `c\M` with labels `ε(a) + H(s)`.
    pub fn left_fibre_labeled(&self, c: usize, limits: &Limits) -> Result<(Groupoid, Vec<Elem>), SpanError> {
        let fibre = Arc::new(Fibre::new(self.apex(), Some((&self.l, c)), None, limits)?);
        let labels = (0..fibre_len(&fibre))
            .map(|x| {
                let (s, a, _) = fibre.decode(x);
                self.group.add(self.labels[a], self.h.value(s.expect("left end")))
            })
            .collect();
        Ok((Groupoid::from_arc(fibre), labels))
    }

    /// `M/d` with labels `V(t) + ε(a)`.
    pub fn right_fibre_labeled(&self, d: usize, limits: &Limits) -> Result<(Groupoid, Vec<Elem>), SpanError> {
        let fibre = Arc::new(Fibre::new(self.apex(), None, Some((&self.r, d)), limits)?);
        let labels = (0..fibre_len(&fibre))
            .map(|x| {
                let (_, a, t) = fibre.decode(x);
                self.group.add(self.v.value(t.expect("right end")), self.labels[a])
            })
            .collect();
        Ok((Groupoid::from_arc(fibre), labels))
    }

    /// `[M, ε](c, d)` evaluated at arbitrary objects `c` of `S` and `d` of `T`.
    pub fn entry_at(&self, c: usize, d: usize) -> Result<GroupRingElement, SpanError> {
        let lf = self.labeled_fibre(c, d)?;
        let weight = Rational::new(1.into(), BigInt::from(self.target().aut_order(d)));
        let levels = euler_by_label(&lf.groupoid, &lf.labels)?;
        Ok(GroupRingElement::from_terms(
            &self.group,
            levels.into_iter().map(|(g, chi)| (g, chi * &weight)),
        ))
    }

    /// The matrix `[M, ε]` indexed by canonical component representatives.
    pub fn matrix(&self) -> Result<SpanMatrix, SpanError> {
        let rows = self.source().components().representatives();
        let cols = self.target().components().representatives();
        let cells: Vec<(usize, usize)> = (0..rows.len())
            .flat_map(|i| (0..cols.len()).map(move |j| (i, j)))
            .collect();
        let values: Vec<Result<GroupRingElement, SpanError>> =
            cells.par_iter().map(|&(i, j)| self.entry_at(rows[i], cols[j])).collect();
        let mut entries = vec![Vec::with_capacity(cols.len()); rows.len()];
        for ((i, j), v) in cells.into_iter().zip(values) {
            let v = v?;
            if !v.is_nonnegative() {
                return Err(SpanError::NegativeEntry { row: i, col: j });
            }
            entries[i].push(v);
        }
        Ok(SpanMatrix::new(
            self.group.clone(),
            rows.iter().map(|&c| self.source().object_name(c)).collect(),
            cols.iter().map(|&d| self.target().object_name(d)).collect(),
            rows,
            cols,
            entries,
        ))
    }
}

fn fibre_len(f: &Fibre) -> usize {
    use crate::groupoid::GroupoidRepr;
    f.object_count()
}

/// A two-sided fibre with its label function.
#[derive(Clone, Debug)]
pub struct LabeledFibre {
    pub fibre: Arc<Fibre>,
    pub groupoid: Groupoid,
    pub labels: Vec<Elem>,
}

impl LabeledFibre {
    pub fn euler_by_label(&self) -> Result<BTreeMap<Elem, Rational>, SpanError> {
        euler_by_label(&self.groupoid, &self.labels)
    }
}

/// `g ↦ χ(G{label = g})` over the labels that occur. When the labels are
/// constant along generators the levels are unions of components;
/// otherwise each level's full subgroupoid is built.
pub fn euler_by_label(g: &Groupoid, labels: &[Elem]) -> Result<BTreeMap<Elem, Rational>, SpanError> {
    let constant = g
        .objects()
        .all(|x| g.generators(x).into_iter().all(|m| labels[g.target(m)] == labels[x]));
    let mut out: BTreeMap<Elem, Rational> = BTreeMap::new();
    if constant {
        let comps = g.components();
        for c in 0..comps.len() {
            let chi = Rational::new(1.into(), BigInt::from(comps.aut_order(c)));
            *out.entry(labels[comps.representative(c)]).or_insert_with(Rational::zero) += chi;
        }
    } else {
        let mut levels: BTreeMap<Elem, Vec<usize>> = BTreeMap::new();
        for x in g.objects() {
            levels.entry(labels[x]).or_default().push(x);
        }
        for (label, objs) in levels {
            let sub = FullSubgroupoid::new(g, &objs).map_err(ConstructionError::from)?;
            out.insert(label, sub.into_groupoid().euler_characteristic());
        }
    }
    Ok(out)
}

/// `g ↦ Σ k^x` over the objects `x` labelled `g`, with `k` the weighting of
/// the whole groupoid. Agrees with [`euler_by_label`] when the labels are
/// constant on components; otherwise this is the level decomposition that is
/// additive along pullbacks and fibres.
pub fn weighted_euler_by_label(g: &Groupoid, labels: &[Elem]) -> BTreeMap<Elem, Rational> {
    let mut out: BTreeMap<Elem, Rational> = BTreeMap::new();
    for (x, k) in g.weighting().into_iter().enumerate() {
        *out.entry(labels[x]).or_insert_with(Rational::zero) += k;
    }
    out
}
