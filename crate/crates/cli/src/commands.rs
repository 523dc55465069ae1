//! The subcommands, as functions from a resolved document to output text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gspan_core::algebra::{render_rational, Character, Elem};
use gspan_core::constructions::{delooping, pullback_euler_check, Functor};
use gspan_core::examples::{stirling_composite, stirling_span, StirlingConfig, StirlingKind, DEFAULT_STIRLING_GUARD};
use gspan_core::groupoid::{materialize, Groupoid};
use gspan_core::gspan::{
    check_main_theorem, horizontal_compose, identity_span, interchange_check, labeled_lemma_check, matrix_multiply,
    pushforward_matrix_closed_form, pushforward_span, vertical_compose, Direction, GSpan, SpanMatrix, SpanMorphism,
};
use gspan_core::random::{
    random_cell_square, random_composable_pair, random_cospan, random_functor, random_groupoid, seeded, RandomConfig,
};
use rand::Rng;
use serde_json::json;
use thiserror::Error;

use crate::document::{
    element_spec, Document, DocumentError, DocumentSpec, FunctorSpec, FunctorTable, GroupoidSpec, MorphismSpec,
    SpanBuilder, SpanSpec, SpanTable, TableSpec,
};

/// Environment variable overriding the Stirling size guard.
pub const STIRLING_GUARD_VAR: &str = "GSPAN_STIRLING_GUARD";

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Input(String),
    #[error("{context}: {reason}")]
    Computation { context: String, reason: String },
}

impl CommandError {
    fn computation(context: impl ToString, reason: impl ToString) -> Self {
        CommandError::Computation {
            context: context.to_string(),
            reason: reason.to_string(),
        }
    }
}

pub fn cmd_validate(doc: &Document) -> String {
    format!(
        "ok: {} groups, {} groupoids, {} functors, {} characters, {} spans, {} cells",
        doc.groups.len(),
        doc.groupoids.len(),
        doc.functors.len(),
        doc.characters.len(),
        doc.spans.len(),
        doc.cells.len()
    )
}

fn lookup_groupoid<'a>(doc: &'a Document, name: &str) -> Result<&'a Groupoid, CommandError> {
    if let Some(g) = doc.groupoids.get(name) {
        return Ok(&g.groupoid);
    }
    if let Some(s) = doc.spans.get(name) {
        return Ok(s.apex());
    }
    Err(CommandError::Input(format!("no groupoid or span named `{name}`")))
}

/// `χ` of a groupoid, or of the apex of a span.
pub fn cmd_euler(doc: &Document, name: &str) -> Result<String, CommandError> {
    Ok(render_rational(&lookup_groupoid(doc, name)?.euler_characteristic()))
}

fn lookup_span<'a>(doc: &'a Document, name: &str) -> Result<&'a GSpan, CommandError> {
    doc.spans
        .get(name)
        .ok_or_else(|| CommandError::Input(format!("no span named `{name}`")))
}

/// A character defined in the document, or one of the built-ins `trivial`,
/// `standard` and `sign` (the standard character, named for `Z2`).
pub fn lookup_character(doc: Option<&Document>, name: &str, span: &GSpan) -> Result<Character, CommandError> {
    if let Some(c) = doc.and_then(|d| d.characters.get(name)) {
        return Ok(c.clone());
    }
    match name {
        "trivial" => Ok(Character::trivial(span.group())),
        "standard" | "sign" => Ok(Character::standard(span.group())),
        _ => Err(CommandError::Input(format!("no character named `{name}`"))),
    }
}

fn render_matrix(m: &SpanMatrix, character: Option<&Character>, json: bool) -> Result<serde_json::Value, CommandError> {
    Ok(match (character, json) {
        (None, true) => m.to_json(),
        (None, false) => m.render_text().into(),
        (Some(c), j) => {
            let cm = m.apply_character(c).map_err(|e| CommandError::computation("character", e))?;
            if j {
                cm.to_json()
            } else {
                cm.render_text().into()
            }
        }
    })
}

fn as_output(v: serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s,
        other => serde_json::to_string_pretty(&other).expect("json values serialize"),
    }
}

pub fn cmd_matrix(doc: &Document, span: &str, character: Option<&str>, json: bool) -> Result<String, CommandError> {
    let sp = lookup_span(doc, span)?;
    let m = sp.matrix().map_err(|e| CommandError::computation(format!("matrix of {span}"), e))?;
    let c = character.map(|c| lookup_character(Some(doc), c, sp)).transpose()?;
    Ok(as_output(render_matrix(&m, c.as_ref(), json)?))
}

/// Writes the composite of two spans as explicit tables: the apex under
/// `<out>.apex`, its legs under `<out>.left` and `<out>.right`, and the span
/// itself under `<out>`. The fragment merges into the source document.
pub fn cmd_compose(doc: &Document, left: &str, right: &str, out: &str) -> Result<DocumentSpec, CommandError> {
    let (a, b) = (lookup_span(doc, left)?, lookup_span(doc, right)?);
    let composite =
        gspan_core::gspan::compose_spans(a, b).map_err(|e| CommandError::computation(format!("{left} ; {right}"), e))?;
    let (h, _) = doc
        .spec
        .span_legs_to_bg(left)
        .ok_or_else(|| CommandError::Input(format!("cannot name the functor H of `{left}`")))?;
    let (_, v) = doc
        .spec
        .span_legs_to_bg(right)
        .ok_or_else(|| CommandError::Input(format!("cannot name the functor V of `{right}`")))?;
    let source_name = doc.spec.functors.get(&h).and_then(|_| groupoid_name(doc, composite.source()));
    let target_name = doc.spec.functors.get(&v).and_then(|_| groupoid_name(doc, composite.target()));
    let (Some(source_name), Some(target_name)) = (source_name, target_name) else {
        return Err(CommandError::Input("the outer groupoids of the composite are not named in the document".into()));
    };

    let apex = composite.apex();
    let apex_name = format!("{out}.apex");
    let table = materialize(apex).map_err(|e| CommandError::computation("apex", e))?;
    let mut seen = std::collections::HashSet::new();
    if !table.objects.iter().all(|o| seen.insert(o.clone())) {
        return Err(CommandError::computation("apex", "object names are not unique"));
    }
    let mid = |i: usize| table.morphisms[i].id.clone();
    let tables = TableSpec {
        objects: table.objects.clone(),
        morphisms: table
            .morphisms
            .iter()
            .map(|m| MorphismSpec {
                id: m.id.clone(),
                src: table.objects[m.source].clone(),
                tgt: table.objects[m.target].clone(),
            })
            .collect(),
        identity: table
            .identity
            .iter()
            .enumerate()
            .map(|(o, m)| (table.objects[o].clone(), mid(m.expect("materialized"))))
            .collect(),
        compose: table.compose.iter().map(|&(f, g, h)| [mid(f), mid(g), mid(h)]).collect(),
        inverse: table
            .inverse
            .iter()
            .enumerate()
            .map(|(f, i)| (mid(f), mid(i.expect("materialized"))))
            .collect(),
    };
    let leg = |f: &Functor, target: &str| FunctorTable {
        source: apex_name.clone(),
        target: target.to_string(),
        objects: apex.objects().map(|x| (apex.object_name(x), f.target().object_name(f.on_object(x)))).collect(),
        morphisms: apex
            .morphisms()
            .filter(|&m| m != apex.identity(m.source))
            .map(|m| (apex.morphism_name(m), f.target().morphism_name(f.on_morphism(m))))
            .collect(),
    };
    let group = composite.group();
    let labels = apex
        .objects()
        .filter(|&x| composite.label(x) != group.zero())
        .map(|x| (apex.object_name(x), element_spec(group, composite.label(x))))
        .collect();
    let mut fragment = DocumentSpec::default();
    fragment.groupoids.insert(apex_name.clone(), GroupoidSpec::Table(tables));
    fragment
        .functors
        .insert(format!("{out}.left"), FunctorSpec::Table(leg(composite.left(), &source_name)));
    fragment
        .functors
        .insert(format!("{out}.right"), FunctorSpec::Table(leg(composite.right(), &target_name)));
    fragment.spans.insert(
        out.to_string(),
        SpanSpec::Table(SpanTable {
            left: format!("{out}.left"),
            right: format!("{out}.right"),
            h,
            v,
            labels,
        }),
    );
    Ok(fragment)
}

/// The document name of a groupoid, found by identity.
fn groupoid_name(doc: &Document, g: &Groupoid) -> Option<String> {
    doc.groupoids
        .iter()
        .find(|(_, e)| e.groupoid.ptr_eq(g))
        .map(|(k, _)| k.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Main,
    Restrict,
    PhiStar,
    Interchange,
    LemmaChi,
    All,
}

impl std::str::FromStr for Which {
    type Err = CommandError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "main" => Which::Main,
            "restrict" => Which::Restrict,
            "phi*" | "phi" => Which::PhiStar,
            "interchange" => Which::Interchange,
            "lemma-chi" => Which::LemmaChi,
            "all" => Which::All,
            _ => return Err(CommandError::Input(format!("unknown check `{s}`"))),
        })
    }
}

/// The outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub cases: usize,
    /// The first counterexample, if any.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failure.is_none())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            match &o.failure {
                None => writeln!(out, "PASS {} ({} cases)", o.check, o.cases),
                Some(w) => writeln!(out, "FAIL {}: {w}", o.check),
            }
            .expect("writing to a string");
        }
        out
    }
}

/// Tracks cases and keeps the first failure.
struct Tally {
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failure: None }
    }

    fn record(&mut self, outcome: Result<Option<String>, String>, context: impl FnOnce() -> String) {
        self.cases += 1;
        if self.failure.is_some() {
            return;
        }
        match outcome {
            Ok(None) => {}
            Ok(Some(w)) => self.failure = Some(format!("{}: {w}", context())),
            Err(e) => self.failure = Some(format!("{}: error: {e}", context())),
        }
    }

    fn finish(self, check: &'static str) -> CheckOutcome {
        CheckOutcome {
            check,
            cases: self.cases,
            failure: self.failure,
        }
    }
}

/// The first entry where two matrices differ.
fn matrix_difference(lhs: &SpanMatrix, rhs: &SpanMatrix) -> Option<String> {
    if lhs.row_count() != rhs.row_count() || lhs.col_count() != rhs.col_count() {
        return Some(format!(
            "shapes {}x{} and {}x{} differ",
            lhs.row_count(),
            lhs.col_count(),
            rhs.row_count(),
            rhs.col_count()
        ));
    }
    for i in 0..lhs.row_count() {
        for j in 0..lhs.col_count() {
            if lhs.entry(i, j) != rhs.entry(i, j) {
                return Some(format!(
                    "entry ({}, {}): {} vs {}",
                    lhs.row_names()[i],
                    lhs.col_names()[j],
                    lhs.entry(i, j).render(),
                    rhs.entry(i, j).render()
                ));
            }
        }
    }
    None
}

fn composable(a: &GSpan, b: &GSpan) -> bool {
    a.target().same_structure(b.source()) && a.v().agrees_with(b.h()).is_ok()
}

fn doc_pairs(doc: Option<&Document>) -> Vec<(String, GSpan, GSpan)> {
    let Some(doc) = doc else { return Vec::new() };
    let mut out = Vec::new();
    for (na, a) in &doc.spans {
        for (nb, b) in &doc.spans {
            if composable(a, b) {
                out.push((format!("spans {na} ; {nb}"), a.clone(), b.clone()));
            }
        }
    }
    out
}

fn main_case(a: &GSpan, b: &GSpan) -> Result<Option<String>, String> {
    let (lhs, rhs) = check_main_theorem(a, b).map_err(|e| e.to_string())?;
    if let Some(d) = matrix_difference(&lhs, &rhs) {
        return Ok(Some(format!("composite vs product, {d}")));
    }
    for row in labeled_lemma_check(a, b).map_err(|e| e.to_string())? {
        if row.lhs != row.rhs {
            return Ok(Some(format!(
                "labelled Euler characteristic at {}: {} vs {}",
                a.group().render(row.label),
                render_rational(&row.lhs),
                render_rational(&row.rhs)
            )));
        }
    }
    Ok(None)
}

fn restrict_case(m: &GSpan) -> Result<Option<String>, String> {
    let e = |x: gspan_core::gspan::SpanError| x.to_string();
    let mm = m.matrix().map_err(e)?;
    let left = identity_span(m.h()).map_err(e)?.matrix().map_err(e)?;
    let right = identity_span(m.v()).map_err(e)?.matrix().map_err(e)?;
    if let Some(d) = matrix_difference(&matrix_multiply(&left, &mm).map_err(e)?, &mm) {
        return Ok(Some(format!("identity on the left, {d}")));
    }
    if let Some(d) = matrix_difference(&matrix_multiply(&mm, &right).map_err(e)?, &mm) {
        return Ok(Some(format!("identity on the right, {d}")));
    }
    Ok(None)
}

/// Compares a pushforward or pullback span with the counting formula. The
/// pullback span carries negated labels; `labels` are the original ones.
fn phi_case(sp: &GSpan, phi: &Functor, h: &Functor, v: &Functor, labels: &[Elem], dir: Direction) -> Result<Option<String>, String> {
    let e = |x: gspan_core::gspan::SpanError| x.to_string();
    let closed = pushforward_matrix_closed_form(phi, h, v, labels, dir).map_err(e)?;
    Ok(matrix_difference(&sp.matrix().map_err(e)?, &closed))
}

fn interchange_case(a1: &SpanMorphism, a2: &SpanMorphism, b1: &SpanMorphism, b2: &SpanMorphism) -> Result<Option<String>, String> {
    match interchange_check(a1, a2, b1, b2) {
        Ok(true) => Ok(None),
        Ok(false) => Ok(Some("the two composites differ".into())),
        Err(e) => Err(e.to_string()),
    }
}

fn lemma_case(r1: &Functor, l2: &Functor) -> Result<Option<String>, String> {
    let (lhs, rhs) = pullback_euler_check(r1, l2).map_err(|e| e.to_string())?;
    Ok((lhs != rhs).then(|| format!("{} vs {}", render_rational(&lhs), render_rational(&rhs))))
}

/// Runs the selected checks on every applicable configuration in the
/// document and on `trials` random instances drawn from `seed`.
pub fn cmd_check(doc: Option<&Document>, which: Which, seed: u64, trials: usize) -> CheckReport {
    let cfg = RandomConfig::default();
    let wants = |w: Which| which == w || which == Which::All;
    let random_ctx = |i: usize| move || format!("random trial {i} (seed {seed})");
    let mut report = CheckReport::default();

    if wants(Which::Main) {
        let mut t = Tally::new();
        for (name, a, b) in doc_pairs(doc) {
            t.record(main_case(&a, &b), || name);
        }
        let mut rng = seeded(seed);
        for i in 0..trials {
            let outcome = random_composable_pair(&mut rng, &cfg)
                .map_err(|e| e.to_string())
                .and_then(|(a, b)| main_case(&a, &b));
            t.record(outcome, random_ctx(i));
        }
        report.outcomes.push(t.finish("main"));
    }

    if wants(Which::Restrict) {
        let mut t = Tally::new();
        for (name, m) in doc.map(|d| d.spans.iter().collect::<Vec<_>>()).unwrap_or_default() {
            t.record(restrict_case(m), || format!("span {name}"));
        }
        let mut rng = seeded(seed.wrapping_add(1));
        for i in 0..trials {
            let outcome = random_composable_pair(&mut rng, &cfg)
                .map_err(|e| e.to_string())
                .and_then(|(a, _)| restrict_case(&a));
            t.record(outcome, random_ctx(i));
        }
        report.outcomes.push(t.finish("restrict"));
    }

    if wants(Which::PhiStar) {
        let mut t = Tally::new();
        if let Some(d) = doc {
            for (name, spec) in &d.spec.spans {
                let SpanSpec::Builder(b) = spec else { continue };
                let (phi, h, v, dir) = match b {
                    SpanBuilder::Pushforward { phi, h, v, .. } => (phi, h, v, Direction::Pushforward),
                    SpanBuilder::Pullback { phi, h, v, .. } => (phi, h, v, Direction::Pullback),
                    _ => continue,
                };
                let sp = &d.spans[name];
                let labels: Vec<Elem> = match dir {
                    Direction::Pushforward => sp.labels().to_vec(),
                    Direction::Pullback => sp.labels().iter().map(|&g| sp.group().neg(g)).collect(),
                };
                let (phi, h, v) = (&d.functors[phi], &d.functors[h], &d.functors[v]);
                t.record(phi_case(sp, phi, h, v, &labels, dir), || format!("span {name}"));
            }
        }
        let mut rng = seeded(seed.wrapping_add(2));
        for i in 0..trials {
            let outcome = random_phi_case(&mut rng, &cfg);
            t.record(outcome, random_ctx(i));
        }
        report.outcomes.push(t.finish("phi*"));
    }

    if wants(Which::Interchange) {
        let mut t = Tally::new();
        let cells: Vec<(&String, &SpanMorphism)> = doc.map(|d| d.cells.iter().collect()).unwrap_or_default();
        for (n1, a1) in &cells {
            for (n2, a2) in &cells {
                if vertical_compose(a1, a2).is_err() {
                    continue;
                }
                for (m1, b1) in &cells {
                    if horizontal_compose(a1, b1).is_err() {
                        continue;
                    }
                    for (m2, b2) in &cells {
                        if vertical_compose(b1, b2).is_err() {
                            continue;
                        }
                        t.record(interchange_case(a1, a2, b1, b2), || {
                            format!("cells {n1}, {n2} over {m1}, {m2}")
                        });
                    }
                }
            }
        }
        let mut rng = seeded(seed.wrapping_add(3));
        for i in 0..trials {
            let outcome = random_cell_square(&mut rng, &cfg)
                .map_err(|e| e.to_string())
                .and_then(|s| interchange_case(&s.alpha1, &s.alpha2, &s.beta1, &s.beta2));
            t.record(outcome, random_ctx(i));
        }
        report.outcomes.push(t.finish("interchange"));
    }

    if wants(Which::LemmaChi) {
        let mut t = Tally::new();
        for (name, a, b) in doc_pairs(doc) {
            t.record(lemma_case(a.right(), b.left()), || name);
        }
        let mut rng = seeded(seed.wrapping_add(4));
        for i in 0..trials {
            let outcome = random_cospan(&mut rng, &cfg)
                .map_err(|e| e.to_string())
                .and_then(|(r1, l2)| lemma_case(&r1, &l2));
            t.record(outcome, random_ctx(i));
        }
        report.outcomes.push(t.finish("lemma-chi"));
    }
    report
}

/// A random pushforward span: `φ: S → T` and `V: T → BG` random, labels
/// random, and `H(m) = V(φ m) + ε(source) - ε(target)`, which makes the
/// labels natural. The matching pullback span is checked as well.
fn random_phi_case(rng: &mut impl Rng, cfg: &RandomConfig) -> Result<Option<String>, String> {
    let e = |x: gspan_core::gspan::SpanError| x.to_string();
    let group = gspan_core::random::random_group(rng, cfg.max_group_order);
    let bg = delooping(&group);
    let s = random_groupoid(rng, cfg.max_objects);
    let t = random_groupoid(rng, cfg.max_objects);
    let phi = random_functor(rng, &s, &t).map_err(e)?;
    let v = random_functor(rng, &t, &bg).map_err(e)?;
    let labels: Vec<Elem> = s.objects().map(|_| Elem(rng.gen_range(0..group.order()))).collect();
    let (g, phi2, v2, l2, s2) = (group.clone(), phi.clone(), v.clone(), labels.clone(), s.clone());
    let h = Functor::to_delooping(&s, &bg, move |m| {
        g.sub(g.add(v2.value(phi2.on_morphism(m)), l2[m.source]), l2[s2.target(m)])
    })
    .map_err(|x| x.to_string())?;
    let push = pushforward_span(&phi, &h, &v, labels.clone()).map_err(e)?;
    if let Some(d) = phi_case(&push, &phi, &h, &v, &labels, Direction::Pushforward)? {
        return Ok(Some(format!("pushforward, {d}")));
    }
    let pull = gspan_core::gspan::pullback_span(&phi, &h, &v, labels.clone()).map_err(e)?;
    Ok(phi_case(&pull, &phi, &h, &v, &labels, Direction::Pullback)?.map(|d| format!("pullback, {d}")))
}

fn stirling_guard() -> Result<usize, CommandError> {
    match std::env::var(STIRLING_GUARD_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| CommandError::Input(format!("{STIRLING_GUARD_VAR} must be a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_STIRLING_GUARD),
    }
}

/// The Stirling matrices of both kinds, their product and the matrix of the
/// composite span, optionally under a character.
pub fn cmd_example_stirling(n: usize, character: Option<&str>, json: bool) -> Result<String, CommandError> {
    let guard = stirling_guard()?;
    let err = |what: &str| {
        let what = what.to_string();
        move |e: gspan_core::examples::ExampleError| CommandError::computation(what.clone(), e)
    };
    let serr = |what: &'static str| move |e: gspan_core::gspan::SpanError| CommandError::computation(what, e);
    let cfg = |kind| StirlingConfig { n, kind, guard };
    let first = stirling_span(&cfg(StirlingKind::First)).map_err(err("first kind"))?;
    let second = stirling_span(&cfg(StirlingKind::Second)).map_err(err("second kind"))?;
    let composite = stirling_composite(n, guard).map_err(err("composite"))?;
    let m1 = first.matrix().map_err(serr("first kind"))?;
    let m2 = second.matrix().map_err(serr("second kind"))?;
    let product = matrix_multiply(&m1, &m2).map_err(serr("product"))?;
    let mc = composite.matrix().map_err(serr("composite"))?;
    let c = character.map(|c| lookup_character(None, c, &first)).transpose()?;
    let sections: Vec<(&str, &SpanMatrix)> =
        vec![("first", &m1), ("second", &m2), ("product", &product), ("composite", &mc)];
    if json {
        let mut map = serde_json::Map::new();
        map.insert("n".into(), json!(n));
        if let Some(name) = character {
            map.insert("character".into(), json!(name));
        }
        for (k, m) in sections {
            map.insert(k.into(), render_matrix(m, c.as_ref(), true)?);
        }
        return Ok(serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("json values serialize"));
    }
    let mut out = String::new();
    for (k, m) in sections {
        writeln!(out, "# {k}").expect("writing to a string");
        writeln!(out, "{}", as_output(render_matrix(m, c.as_ref(), false)?)).expect("writing to a string");
    }
    Ok(out.trim_end().to_string())
}

/// Names used by [`cmd_compose`] for a composite called `out`.
pub fn compose_names(out: &str) -> BTreeMap<&'static str, String> {
    BTreeMap::from([
        ("apex", format!("{out}.apex")),
        ("left", format!("{out}.left")),
        ("right", format!("{out}.right")),
    ])
}

