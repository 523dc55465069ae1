//! The JSON definition language: named groups, groupoids, functors,
//! characters, spans and 2-cells that refer to each other by name.
//!
//! Parsing happens in two passes. The first deserializes the text into a
//! [`DocumentSpec`], which is what round-trips. The second resolves every
//! name and builds and validates the objects, memoising each definition
//! and reporting reference cycles.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use gspan_core::algebra::{AbelianGroup, Character, Elem};
use gspan_core::constructions::{
    delooping, discrete_groupoid, homotopy_pullback_with, left_fibre_with, right_fibre_with, Fibre, Functor,
    Pullback,
};
use gspan_core::groupoid::{ActionGroupoid, Groupoid, Limits, Mor, TableGroupoid, TableMorphism};
use gspan_core::gspan::{
    compose_spans, horizontal_compose, identity_span, pullback_span, pushforward_span, universal_span,
    universal_two_cell, vertical_compose, GSpan, SpanMorphism,
};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocumentError {
    #[error("syntax error at {path}: {reason}")]
    Syntax { path: String, reason: String },
    #[error("unresolved name at {path}: no {kind} named `{name}`")]
    UnresolvedName { path: String, kind: &'static str, name: String },
    #[error("reference cycle: {}", .cycle.join(" -> "))]
    Cycle { cycle: Vec<String> },
    #[error("validation failure at {path}: {reason}")]
    Validation { path: String, reason: String },
}

fn invalid(path: &str, reason: impl ToString) -> DocumentError {
    DocumentError::Validation {
        path: path.to_string(),
        reason: reason.to_string(),
    }
}

// ---------------------------------------------------------------- syntax

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentSpec {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groupoids: BTreeMap<String, GroupoidSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functors: BTreeMap<String, FunctorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub characters: BTreeMap<String, CharacterSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spans: BTreeMap<String, SpanSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cells: BTreeMap<String, CellSpec>,
}

/// `Z_{n1} × … × Z_{nk}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub orders: Vec<usize>,
}

/// An integer in a cyclic group, or an exponent tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Int(i64),
    Tuple(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    pub group: String,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Two,
}

/// A single object name, or `[c, d]` for a two-sided fibre.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum At {
    One(String),
    Two(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// Explicit tables. `compose` lists `[first, second, composite]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    pub identity: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
    pub inverse: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupoidBuilder {
    #[serde(rename = "BG")]
    Bg { group: String },
    Discrete { size: usize },
    /// Right cosets of the subgroup generated by `subgroup`.
    Coset { group: String, subgroup: Vec<ElementSpec> },
    /// `generators[i]` is the permutation of `points` by which the `i`-th
    /// cyclic generator acts.
    Action {
        group: String,
        points: Vec<String>,
        generators: Vec<Vec<usize>>,
    },
    /// The homotopy pullback of the functors `left: M1 → T ← M2: right`.
    Pullback { left: String, right: String },
    Fibre {
        side: Side,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        right: Option<String>,
        at: At,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GroupoidSpec {
    Builder(GroupoidBuilder),
    Table(TableSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorTable {
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctorBuilder {
    Identity { groupoid: String },
    /// `second ∘ first`.
    Compose { first: String, second: String },
    /// From an action, coset or delooping groupoid over `G` to `BG`,
    /// sending each morphism to its group element.
    Canonical { source: String, target: String },
    Trivial { source: String, target: String },
    /// Into `BG`, listing the element of each morphism; unlisted morphisms
    /// go to the neutral element.
    Values {
        source: String,
        target: String,
        values: BTreeMap<String, ElementSpec>,
    },
    /// `B(f)` for the homomorphism sending the `i`-th cyclic generator to
    /// `images[i]`.
    Hom {
        source: String,
        target: String,
        images: Vec<ElementSpec>,
    },
    Projection { pullback: String, side: Side },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FunctorSpec {
    Builder(FunctorBuilder),
    Table(FunctorTable),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanTable {
    pub left: String,
    pub right: String,
    pub h: String,
    pub v: String,
    #[serde(default)]
    pub labels: BTreeMap<String, ElementSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpanBuilder {
    Identity { h: String },
    Universal { h: String, v: String },
    Pushforward {
        phi: String,
        h: String,
        v: String,
        #[serde(default)]
        labels: BTreeMap<String, ElementSpec>,
    },
    Pullback {
        phi: String,
        h: String,
        v: String,
        #[serde(default)]
        labels: BTreeMap<String, ElementSpec>,
    },
    Compose { left: String, right: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SpanSpec {
    Builder(SpanBuilder),
    Table(SpanTable),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellTable {
    pub source: String,
    pub target: String,
    pub phi: String,
    #[serde(default)]
    pub a: BTreeMap<String, String>,
    #[serde(default)]
    pub b: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CellBuilder {
    Identity { span: String },
    Vertical { first: String, second: String },
    Horizontal { left: String, right: String },
    /// The canonical cell from `span` into the universal span.
    Universal { span: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CellSpec {
    Builder(CellBuilder),
    Table(CellTable),
}

/// Dispatches on the presence of a `"type"` key, so that a malformed
/// builder reports the builder's error instead of a failed literal match.
macro_rules! tagged_or_table {
    ($spec:ident, $builder:ident, $table:ident) => {
        impl<'de> Deserialize<'de> for $spec {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let v = Value::deserialize(d)?;
                if v.get("type").is_some() {
                    $builder::deserialize(v).map($spec::Builder).map_err(D::Error::custom)
                } else {
                    $table::deserialize(v).map($spec::Table).map_err(D::Error::custom)
                }
            }
        }
    };
}

tagged_or_table!(GroupoidSpec, GroupoidBuilder, TableSpec);
tagged_or_table!(FunctorSpec, FunctorBuilder, FunctorTable);
tagged_or_table!(SpanSpec, SpanBuilder, SpanTable);
tagged_or_table!(CellSpec, CellBuilder, CellTable);

impl DocumentSpec {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: DocumentSpec = serde_path_to_error::deserialize(de).map_err(|e| DocumentError::Syntax {
            path: e.path().to_string(),
            reason: e.inner().to_string(),
        })?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }

    /// Adds every definition of `other`; fails on a name defined in both.
    pub fn merge(&mut self, other: DocumentSpec) -> Result<(), DocumentError> {
        fn add<T>(into: &mut BTreeMap<String, T>, from: BTreeMap<String, T>, section: &str) -> Result<(), DocumentError> {
            for (k, v) in from {
                if into.contains_key(&k) {
                    return Err(invalid(&format!("{section}.{k}"), "defined twice"));
                }
                into.insert(k, v);
            }
            Ok(())
        }
        add(&mut self.groups, other.groups, "groups")?;
        add(&mut self.groupoids, other.groupoids, "groupoids")?;
        add(&mut self.functors, other.functors, "functors")?;
        add(&mut self.characters, other.characters, "characters")?;
        add(&mut self.spans, other.spans, "spans")?;
        add(&mut self.cells, other.cells, "cells")
    }

    /// The names of the functors serving as `H` and `V` of a span.
    pub fn span_legs_to_bg(&self, span: &str) -> Option<(String, String)> {
        self.legs_to_bg(span, 0)
    }

    fn legs_to_bg(&self, span: &str, depth: usize) -> Option<(String, String)> {
        if depth > self.spans.len() {
            return None;
        }
        Some(match self.spans.get(span)? {
            SpanSpec::Table(t) => (t.h.clone(), t.v.clone()),
            SpanSpec::Builder(SpanBuilder::Identity { h }) => (h.clone(), h.clone()),
            SpanSpec::Builder(SpanBuilder::Universal { h, v }) | SpanSpec::Builder(SpanBuilder::Pushforward { h, v, .. }) => {
                (h.clone(), v.clone())
            }
            SpanSpec::Builder(SpanBuilder::Pullback { h, v, .. }) => (v.clone(), h.clone()),
            SpanSpec::Builder(SpanBuilder::Compose { left, right }) => (
                self.legs_to_bg(left, depth + 1)?.0,
                self.legs_to_bg(right, depth + 1)?.1,
            ),
        })
    }
}

// ------------------------------------------------------------- resolution

/// A resolved groupoid with what builders need to know about it.
#[derive(Clone, Debug)]
pub struct GroupoidEntry {
    pub groupoid: Groupoid,
    /// The group whose elements index the morphisms, for action, coset and
    /// delooping groupoids.
    pub acting: Option<AbelianGroup>,
    pub pullback: Option<Pullback>,
}

/// A parsed, fully resolved and validated document.
#[derive(Clone, Debug)]
pub struct Document {
    pub spec: DocumentSpec,
    pub groups: BTreeMap<String, AbelianGroup>,
    pub groupoids: BTreeMap<String, GroupoidEntry>,
    pub functors: BTreeMap<String, Functor>,
    pub characters: BTreeMap<String, Character>,
    pub spans: BTreeMap<String, GSpan>,
    pub cells: BTreeMap<String, SpanMorphism>,
}

/// Documents are equal when their definitions are.
impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    resolve(DocumentSpec::parse(text)?, &Limits::from_env())
}

pub fn serialize(doc: &Document) -> String {
    doc.spec.to_json()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Group,
    Groupoid,
    Functor,
    Character,
    Span,
    Cell,
}

impl Kind {
    fn section(self) -> &'static str {
        match self {
            Kind::Group => "groups",
            Kind::Groupoid => "groupoids",
            Kind::Functor => "functors",
            Kind::Character => "characters",
            Kind::Span => "spans",
            Kind::Cell => "cells",
        }
    }

    fn noun(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::Groupoid => "groupoid",
            Kind::Functor => "functor",
            Kind::Character => "character",
            Kind::Span => "span",
            Kind::Cell => "cell",
        }
    }
}

pub fn resolve(spec: DocumentSpec, limits: &Limits) -> Result<Document, DocumentError> {
    let mut r = Resolver {
        spec: &spec,
        limits,
        stack: Vec::new(),
        doc: Document {
            spec: DocumentSpec::default(),
            groups: BTreeMap::new(),
            groupoids: BTreeMap::new(),
            functors: BTreeMap::new(),
            characters: BTreeMap::new(),
            spans: BTreeMap::new(),
            cells: BTreeMap::new(),
        },
    };
    for name in spec.groups.keys() {
        r.group(name, "groups")?;
    }
    for name in spec.groupoids.keys() {
        r.groupoid(name, "groupoids")?;
    }
    for name in spec.functors.keys() {
        r.functor(name, "functors")?;
    }
    for name in spec.characters.keys() {
        r.character(name, "characters")?;
    }
    for name in spec.spans.keys() {
        r.span(name, "spans")?;
    }
    for name in spec.cells.keys() {
        r.cell(name, "cells")?;
    }
    let mut doc = r.doc;
    doc.spec = spec;
    Ok(doc)
}

struct Resolver<'a> {
    spec: &'a DocumentSpec,
    limits: &'a Limits,
    stack: Vec<(Kind, String)>,
    doc: Document,
}

/// Looks a name up among the objects of `g`.
fn object_index(g: &Groupoid, name: &str, path: &str) -> Result<usize, DocumentError> {
    let mut found = g.objects().filter(|&a| g.object_name(a) == name);
    let a = found.next().ok_or_else(|| invalid(path, format!("no object named `{name}`")))?;
    if found.next().is_some() {
        return Err(invalid(path, format!("object name `{name}` is ambiguous")));
    }
    Ok(a)
}

fn morphism_table(g: &Groupoid, path: &str) -> Result<HashMap<String, Mor>, DocumentError> {
    let mut out = HashMap::new();
    for m in g.morphisms() {
        if out.insert(g.morphism_name(m), m).is_some() {
            return Err(invalid(path, format!("morphism name `{}` is ambiguous", g.morphism_name(m))));
        }
    }
    Ok(out)
}

fn lookup_morphism(table: &HashMap<String, Mor>, name: &str, path: &str) -> Result<Mor, DocumentError> {
    table
        .get(name)
        .copied()
        .ok_or_else(|| invalid(path, format!("no morphism named `{name}`")))
}

pub fn element(group: &AbelianGroup, e: &ElementSpec, path: &str) -> Result<Elem, DocumentError> {
    match e {
        ElementSpec::Int(n) if group.rank() == 1 => group.element(&[*n]).map_err(|err| invalid(path, err)),
        ElementSpec::Int(_) => Err(invalid(path, "use an exponent tuple for a group that is not cyclic")),
        ElementSpec::Tuple(t) => group.element(t).map_err(|err| invalid(path, err)),
    }
}

/// The canonical spelling of an element: an integer in a cyclic group.
pub fn element_spec(group: &AbelianGroup, e: Elem) -> ElementSpec {
    let exps: Vec<i64> = group.exponents(e).into_iter().map(|x| x as i64).collect();
    if exps.len() == 1 {
        ElementSpec::Int(exps[0])
    } else {
        ElementSpec::Tuple(exps)
    }
}

impl Resolver<'_> {
    /// Runs `build` for `(kind, name)` unless cached, detecting cycles.
    fn enter(&mut self, kind: Kind, name: &str, from: &str) -> Result<String, DocumentError> {
        let exists = match kind {
            Kind::Group => self.spec.groups.contains_key(name),
            Kind::Groupoid => self.spec.groupoids.contains_key(name),
            Kind::Functor => self.spec.functors.contains_key(name),
            Kind::Character => self.spec.characters.contains_key(name),
            Kind::Span => self.spec.spans.contains_key(name),
            Kind::Cell => self.spec.cells.contains_key(name),
        };
        if !exists {
            return Err(DocumentError::UnresolvedName {
                path: from.to_string(),
                kind: kind.noun(),
                name: name.to_string(),
            });
        }
        if let Some(pos) = self.stack.iter().position(|(k, n)| *k == kind && n == name) {
            let mut cycle: Vec<String> = self.stack[pos..]
                .iter()
                .map(|(k, n)| format!("{}.{n}", k.section()))
                .collect();
            cycle.push(format!("{}.{name}", kind.section()));
            return Err(DocumentError::Cycle { cycle });
        }
        self.stack.push((kind, name.to_string()));
        Ok(format!("{}.{name}", kind.section()))
    }

    fn leave(&mut self) {
        self.stack.pop();
    }

    fn group(&mut self, name: &str, from: &str) -> Result<AbelianGroup, DocumentError> {
        if let Some(g) = self.doc.groups.get(name) {
            return Ok(g.clone());
        }
        let path = self.enter(Kind::Group, name, from)?;
        let spec = &self.spec.groups[name];
        let g = AbelianGroup::new(&spec.orders).map_err(|e| invalid(&format!("{path}.orders"), e))?;
        if g.order() > self.limits.max_objects {
            return Err(invalid(
                &format!("{path}.orders"),
                format!("group order {} exceeds the limit {}", g.order(), self.limits.max_objects),
            ));
        }
        self.leave();
        self.doc.groups.insert(name.to_string(), g.clone());
        Ok(g)
    }

    fn groupoid(&mut self, name: &str, from: &str) -> Result<GroupoidEntry, DocumentError> {
        if let Some(g) = self.doc.groupoids.get(name) {
            return Ok(g.clone());
        }
        let path = self.enter(Kind::Groupoid, name, from)?;
        let entry = self.build_groupoid(&self.spec.groupoids[name].clone(), &path)?;
        self.leave();
        self.doc.groupoids.insert(name.to_string(), entry.clone());
        Ok(entry)
    }

    fn functor(&mut self, name: &str, from: &str) -> Result<Functor, DocumentError> {
        if let Some(f) = self.doc.functors.get(name) {
            return Ok(f.clone());
        }
        let path = self.enter(Kind::Functor, name, from)?;
        let f = self.build_functor(&self.spec.functors[name].clone(), &path)?;
        self.leave();
        self.doc.functors.insert(name.to_string(), f.clone());
        Ok(f)
    }

    fn character(&mut self, name: &str, from: &str) -> Result<Character, DocumentError> {
        if let Some(c) = self.doc.characters.get(name) {
            return Ok(c.clone());
        }
        let path = self.enter(Kind::Character, name, from)?;
        let spec = self.spec.characters[name].clone();
        let g = self.group(&spec.group, &format!("{path}.group"))?;
        let c = Character::new(&g, &spec.exponents).map_err(|e| invalid(&format!("{path}.exponents"), e))?;
        self.leave();
        self.doc.characters.insert(name.to_string(), c.clone());
        Ok(c)
    }

    fn span(&mut self, name: &str, from: &str) -> Result<GSpan, DocumentError> {
        if let Some(s) = self.doc.spans.get(name) {
            return Ok(s.clone());
        }
        let path = self.enter(Kind::Span, name, from)?;
        let s = self.build_span(&self.spec.spans[name].clone(), &path)?;
        self.leave();
        self.doc.spans.insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn cell(&mut self, name: &str, from: &str) -> Result<SpanMorphism, DocumentError> {
        if let Some(c) = self.doc.cells.get(name) {
            return Ok(c.clone());
        }
        let path = self.enter(Kind::Cell, name, from)?;
        let c = self.build_cell(&self.spec.cells[name].clone(), &path)?;
        self.leave();
        self.doc.cells.insert(name.to_string(), c.clone());
        Ok(c)
    }

    fn delooping_group(&mut self, name: &str, from: &str) -> Result<(Groupoid, AbelianGroup), DocumentError> {
        let g = self.groupoid(name, from)?.groupoid;
        let group = g
            .as_delooping()
            .cloned()
            .ok_or_else(|| invalid(from, format!("`{name}` is not a delooping BG")))?;
        Ok((g, group))
    }

    fn build_groupoid(&mut self, spec: &GroupoidSpec, path: &str) -> Result<GroupoidEntry, DocumentError> {
        let plain = |groupoid| GroupoidEntry {
            groupoid,
            acting: None,
            pullback: None,
        };
        let acted = |groupoid, group: AbelianGroup| GroupoidEntry {
            groupoid,
            acting: Some(group),
            pullback: None,
        };
        Ok(match spec {
            GroupoidSpec::Table(t) => plain(table_groupoid(t, path)?),
            GroupoidSpec::Builder(b) => match b {
                GroupoidBuilder::Bg { group } => {
                    let g = self.group(group, &format!("{path}.group"))?;
                    acted(delooping(&g), g)
                }
                GroupoidBuilder::Discrete { size } => {
                    if *size > self.limits.max_objects {
                        return Err(invalid(
                            &format!("{path}.size"),
                            format!("{size} objects exceed the limit {}", self.limits.max_objects),
                        ));
                    }
                    plain(discrete_groupoid(*size))
                }
                GroupoidBuilder::Coset { group, subgroup } => {
                    let g = self.group(group, &format!("{path}.group"))?;
                    let gens = subgroup
                        .iter()
                        .enumerate()
                        .map(|(i, e)| element(&g, e, &format!("{path}.subgroup[{i}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    let sub = g.span(&gens);
                    let c = ActionGroupoid::coset(&g, &sub).map_err(|e| invalid(path, e))?;
                    acted(c.into_groupoid(), g)
                }
                GroupoidBuilder::Action {
                    group,
                    points,
                    generators,
                } => {
                    let g = self.group(group, &format!("{path}.group"))?;
                    acted(action_groupoid(&g, points, generators, path)?, g)
                }
                GroupoidBuilder::Pullback { left, right } => {
                    let r1 = self.functor(left, &format!("{path}.left"))?;
                    let l2 = self.functor(right, &format!("{path}.right"))?;
                    let pb = homotopy_pullback_with(&r1, &l2, self.limits).map_err(|e| invalid(path, e))?;
                    GroupoidEntry {
                        groupoid: pb.groupoid.clone(),
                        acting: None,
                        pullback: Some(pb),
                    }
                }
                GroupoidBuilder::Fibre { side, left, right, at } => plain(self.fibre(*side, left, right, at, path)?),
            },
        })
    }

    fn fibre(
        &mut self,
        side: Side,
        left: &Option<String>,
        right: &Option<String>,
        at: &At,
        path: &str,
    ) -> Result<Groupoid, DocumentError> {
        let need = |f: &Option<String>, key: &str| {
            f.clone()
                .ok_or_else(|| invalid(path, format!("a {side:?} fibre needs `{key}`").to_lowercase()))
        };
        let single = || match at {
            At::One(c) => Ok(c.clone()),
            At::Two(_) => Err(invalid(&format!("{path}.at"), "expected one object name")),
        };
        let at_path = format!("{path}.at");
        match side {
            Side::Left => {
                let l = self.functor(&need(left, "left")?, &format!("{path}.left"))?;
                let c = object_index(l.target(), &single()?, &at_path)?;
                left_fibre_with(&l, c, self.limits).map_err(|e| invalid(path, e))
            }
            Side::Right => {
                let r = self.functor(&need(right, "right")?, &format!("{path}.right"))?;
                let d = object_index(r.target(), &single()?, &at_path)?;
                right_fibre_with(&r, d, self.limits).map_err(|e| invalid(path, e))
            }
            Side::Two => {
                let l = self.functor(&need(left, "left")?, &format!("{path}.left"))?;
                let r = self.functor(&need(right, "right")?, &format!("{path}.right"))?;
                let At::Two(pair) = at else {
                    return Err(invalid(&at_path, "expected [c, d]"));
                };
                if pair.len() != 2 {
                    return Err(invalid(&at_path, "expected [c, d]"));
                }
                let c = object_index(l.target(), &pair[0], &at_path)?;
                let d = object_index(r.target(), &pair[1], &at_path)?;
                Fibre::new(l.source(), Some((&l, c)), Some((&r, d)), self.limits)
                    .map(|f| f.into_groupoid())
                    .map_err(|e| invalid(path, e))
            }
        }
    }

    fn build_functor(&mut self, spec: &FunctorSpec, path: &str) -> Result<Functor, DocumentError> {
        let fail = |e: gspan_core::constructions::FunctorError| invalid(path, e);
        match spec {
            FunctorSpec::Table(t) => {
                let s = self.groupoid(&t.source, &format!("{path}.source"))?.groupoid;
                let tg = self.groupoid(&t.target, &format!("{path}.target"))?.groupoid;
                table_functor(&s, &tg, t, path)
            }
            FunctorSpec::Builder(b) => match b {
                FunctorBuilder::Identity { groupoid } => {
                    Ok(Functor::identity(&self.groupoid(groupoid, &format!("{path}.groupoid"))?.groupoid))
                }
                FunctorBuilder::Compose { first, second } => {
                    let f = self.functor(first, &format!("{path}.first"))?;
                    let g = self.functor(second, &format!("{path}.second"))?;
                    f.then(&g).map_err(fail)
                }
                FunctorBuilder::Canonical { source, target } => {
                    let s = self.groupoid(source, &format!("{path}.source"))?;
                    let (bg, group) = self.delooping_group(target, &format!("{path}.target"))?;
                    match s.acting {
                        Some(a) if a == group => {
                            Functor::to_delooping(&s.groupoid, &bg, |m| Elem(m.index as usize)).map_err(fail)
                        }
                        _ => Err(invalid(
                            &format!("{path}.source"),
                            format!("`{source}` is not an action of the group of `{target}`"),
                        )),
                    }
                }
                FunctorBuilder::Trivial { source, target } => {
                    let s = self.groupoid(source, &format!("{path}.source"))?.groupoid;
                    let (bg, _) = self.delooping_group(target, &format!("{path}.target"))?;
                    Functor::trivial_to_delooping(&s, &bg).map_err(fail)
                }
                FunctorBuilder::Values { source, target, values } => {
                    let s = self.groupoid(source, &format!("{path}.source"))?.groupoid;
                    let (bg, group) = self.delooping_group(target, &format!("{path}.target"))?;
                    let names = morphism_table(&s, &format!("{path}.source"))?;
                    let mut table: HashMap<Mor, Elem> = HashMap::new();
                    for (k, v) in values {
                        let p = format!("{path}.values.{k}");
                        table.insert(lookup_morphism(&names, k, &p)?, element(&group, v, &p)?);
                    }
                    Functor::to_delooping(&s, &bg, move |m| table.get(&m).copied().unwrap_or(Elem(0))).map_err(fail)
                }
                FunctorBuilder::Hom { source, target, images } => {
                    let (bs, sg) = self.delooping_group(source, &format!("{path}.source"))?;
                    let (bt, tg) = self.delooping_group(target, &format!("{path}.target"))?;
                    let images = images
                        .iter()
                        .enumerate()
                        .map(|(i, e)| element(&tg, e, &format!("{path}.images[{i}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    let hom = gspan_core::algebra::GroupHom::from_generator_images(&sg, &tg, &images)
                        .map_err(|e| invalid(&format!("{path}.images"), e))?;
                    Functor::to_delooping(&bs, &bt, move |m| hom.apply(Elem(m.index as usize))).map_err(fail)
                }
                FunctorBuilder::Projection { pullback, side } => {
                    let p = format!("{path}.pullback");
                    let pb = self
                        .groupoid(pullback, &p)?
                        .pullback
                        .ok_or_else(|| invalid(&p, format!("`{pullback}` is not a pullback")))?;
                    match side {
                        Side::Left => Ok(pb.p1),
                        Side::Right => Ok(pb.p2),
                        Side::Two => Err(invalid(&format!("{path}.side"), "a projection is left or right")),
                    }
                }
            },
        }
    }

    fn labels(
        &self,
        apex: &Groupoid,
        group: &AbelianGroup,
        labels: &BTreeMap<String, ElementSpec>,
        path: &str,
    ) -> Result<Vec<Elem>, DocumentError> {
        let mut out = vec![group.zero(); apex.object_count()];
        for (k, v) in labels {
            let p = format!("{path}.labels.{k}");
            out[object_index(apex, k, &p)?] = element(group, v, &p)?;
        }
        Ok(out)
    }

    fn build_span(&mut self, spec: &SpanSpec, path: &str) -> Result<GSpan, DocumentError> {
        let fail = |e: gspan_core::gspan::SpanError| invalid(path, e);
        let group_of = |f: &Functor, key: &str| {
            f.delooping_group()
                .cloned()
                .ok_or_else(|| invalid(&format!("{path}.{key}"), "must land in a delooping BG"))
        };
        match spec {
            SpanSpec::Table(t) => {
                let l = self.functor(&t.left, &format!("{path}.left"))?;
                let r = self.functor(&t.right, &format!("{path}.right"))?;
                let h = self.functor(&t.h, &format!("{path}.h"))?;
                let v = self.functor(&t.v, &format!("{path}.v"))?;
                let labels = self.labels(l.source(), &group_of(&h, "h")?, &t.labels, path)?;
                GSpan::new(&l, &r, &h, &v, labels).map_err(fail)
            }
            SpanSpec::Builder(b) => match b {
                SpanBuilder::Identity { h } => identity_span(&self.functor(h, &format!("{path}.h"))?).map_err(fail),
                SpanBuilder::Universal { h, v } => {
                    let h = self.functor(h, &format!("{path}.h"))?;
                    let v = self.functor(v, &format!("{path}.v"))?;
                    universal_span(&h, &v).map_err(fail)
                }
                SpanBuilder::Pushforward { phi, h, v, labels } | SpanBuilder::Pullback { phi, h, v, labels } => {
                    let phi = self.functor(phi, &format!("{path}.phi"))?;
                    let h = self.functor(h, &format!("{path}.h"))?;
                    let v = self.functor(v, &format!("{path}.v"))?;
                    let labels = self.labels(phi.source(), &group_of(&h, "h")?, labels, path)?;
                    if matches!(b, SpanBuilder::Pushforward { .. }) {
                        pushforward_span(&phi, &h, &v, labels).map_err(fail)
                    } else {
                        pullback_span(&phi, &h, &v, labels).map_err(fail)
                    }
                }
                SpanBuilder::Compose { left, right } => {
                    let a = self.span(left, &format!("{path}.left"))?;
                    let b = self.span(right, &format!("{path}.right"))?;
                    compose_spans(&a, &b).map_err(fail)
                }
            },
        }
    }

    fn build_cell(&mut self, spec: &CellSpec, path: &str) -> Result<SpanMorphism, DocumentError> {
        let fail = |e: gspan_core::gspan::SpanError| invalid(path, e);
        match spec {
            CellSpec::Table(t) => {
                let source = self.span(&t.source, &format!("{path}.source"))?;
                let target = self.span(&t.target, &format!("{path}.target"))?;
                let phi = self.functor(&t.phi, &format!("{path}.phi"))?;
                let apex = source.apex();
                let component = |sp_leg: &Functor, entries: &BTreeMap<String, String>, key: &str| {
                    let base = sp_leg.target();
                    let names = morphism_table(base, &format!("{path}.{key}"))?;
                    let mut out: Vec<Mor> = apex.objects().map(|x| base.identity(sp_leg.on_object(x))).collect();
                    for (k, v) in entries {
                        let p = format!("{path}.{key}.{k}");
                        out[object_index(apex, k, &p)?] = lookup_morphism(&names, v, &p)?;
                    }
                    Ok::<_, DocumentError>(out)
                };
                let a = component(source.left(), &t.a, "a")?;
                let b = component(source.right(), &t.b, "b")?;
                SpanMorphism::new(&source, &target, &phi, a, b).map_err(fail)
            }
            CellSpec::Builder(b) => match b {
                CellBuilder::Identity { span } => Ok(SpanMorphism::identity(&self.span(span, &format!("{path}.span"))?)),
                CellBuilder::Vertical { first, second } => {
                    let f = self.cell(first, &format!("{path}.first"))?;
                    let s = self.cell(second, &format!("{path}.second"))?;
                    vertical_compose(&f, &s).map_err(fail)
                }
                CellBuilder::Horizontal { left, right } => {
                    let l = self.cell(left, &format!("{path}.left"))?;
                    let r = self.cell(right, &format!("{path}.right"))?;
                    horizontal_compose(&l, &r).map_err(fail)
                }
                CellBuilder::Universal { span } => {
                    let sp = self.span(span, &format!("{path}.span"))?;
                    universal_two_cell(&sp).map(|(_, c)| c).map_err(fail)
                }
            },
        }
    }
}

fn table_groupoid(t: &TableSpec, path: &str) -> Result<Groupoid, DocumentError> {
    let obj: HashMap<&str, usize> = t.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    let mor: HashMap<&str, usize> = t.morphisms.iter().enumerate().map(|(i, m)| (m.id.as_str(), i)).collect();
    let find_obj = |name: &str, p: String| obj.get(name).copied().ok_or_else(|| invalid(&p, format!("no object named `{name}`")));
    let find_mor = |name: &str, p: String| mor.get(name).copied().ok_or_else(|| invalid(&p, format!("no morphism named `{name}`")));
    let mut morphisms = Vec::with_capacity(t.morphisms.len());
    for (i, m) in t.morphisms.iter().enumerate() {
        morphisms.push(TableMorphism {
            id: m.id.clone(),
            source: find_obj(&m.src, format!("{path}.morphisms[{i}].src"))?,
            target: find_obj(&m.tgt, format!("{path}.morphisms[{i}].tgt"))?,
        });
    }
    let mut identity = vec![None; t.objects.len()];
    for (o, m) in &t.identity {
        let p = format!("{path}.identity.{o}");
        let (o, m) = (find_obj(o, p.clone())?, find_mor(m, p)?);
        identity[o] = Some(m);
    }
    let mut compose = Vec::with_capacity(t.compose.len());
    for (i, [f, g, h]) in t.compose.iter().enumerate() {
        let p = || format!("{path}.compose[{i}]");
        compose.push((find_mor(f, p())?, find_mor(g, p())?, find_mor(h, p())?));
    }
    let mut inverse = vec![None; t.morphisms.len()];
    for (m, i) in &t.inverse {
        let p = format!("{path}.inverse.{m}");
        let (m, i) = (find_mor(m, p.clone())?, find_mor(i, p)?);
        inverse[m] = Some(i);
    }
    TableGroupoid {
        objects: t.objects.clone(),
        morphisms,
        identity,
        compose,
        inverse,
    }
    .into_groupoid()
    .map_err(|report| invalid(path, report))
}

fn action_groupoid(
    group: &AbelianGroup,
    points: &[String],
    generators: &[Vec<usize>],
    path: &str,
) -> Result<Groupoid, DocumentError> {
    let n = points.len();
    if generators.len() != group.rank() {
        return Err(invalid(
            &format!("{path}.generators"),
            format!("{} generators for a group of rank {}", generators.len(), group.rank()),
        ));
    }
    for (i, p) in generators.iter().enumerate() {
        let mut seen = vec![false; n];
        if p.len() != n || p.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
            return Err(invalid(&format!("{path}.generators[{i}]"), "not a permutation of the points"));
        }
    }
    let power = |p: &[usize], x: usize, k: usize| (0..k).fold(x, |y, _| p[y]);
    for (i, (p, &order)) in generators.iter().zip(group.cyclic_orders()).enumerate() {
        if (0..n).any(|x| power(p, x, order) != x) {
            return Err(invalid(
                &format!("{path}.generators[{i}]"),
                format!("order does not divide {order}"),
            ));
        }
        for (j, q) in generators.iter().enumerate().skip(i + 1) {
            if (0..n).any(|x| p[q[x]] != q[p[x]]) {
                return Err(invalid(
                    &format!("{path}.generators"),
                    format!("generators {i} and {j} do not commute"),
                ));
            }
        }
    }
    let (g, gens) = (group.clone(), generators.to_vec());
    let act = move |x: usize, e: Elem| {
        g.exponents(e)
            .iter()
            .zip(&gens)
            .fold(x, |y, (&k, p)| power(p, y, k))
    };
    ActionGroupoid::new(Arc::new(group.clone()), n, act, Some(points.to_vec()))
        .map(|a| a.into_groupoid())
        .map_err(|e| invalid(path, e))
}

fn table_functor(s: &Groupoid, t: &Groupoid, spec: &FunctorTable, path: &str) -> Result<Functor, DocumentError> {
    let mut objects = vec![usize::MAX; s.object_count()];
    for (k, v) in &spec.objects {
        let p = format!("{path}.objects.{k}");
        objects[object_index(s, k, &p)?] = object_index(t, v, &p)?;
    }
    if let Some(a) = objects.iter().position(|&x| x == usize::MAX) {
        return Err(invalid(
            &format!("{path}.objects"),
            format!("object `{}` has no image", s.object_name(a)),
        ));
    }
    let source_names = morphism_table(s, &format!("{path}.source"))?;
    let target_names = morphism_table(t, &format!("{path}.target"))?;
    let mut morphisms: HashMap<Mor, Mor> = s.objects().map(|a| (s.identity(a), t.identity(objects[a]))).collect();
    for (k, v) in &spec.morphisms {
        let p = format!("{path}.morphisms.{k}");
        morphisms.insert(lookup_morphism(&source_names, k, &p)?, lookup_morphism(&target_names, v, &p)?);
    }
    Functor::from_tables(s, t, objects, morphisms).map_err(|e| invalid(path, e))
}
