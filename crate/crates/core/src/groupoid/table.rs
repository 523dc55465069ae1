use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{Groupoid, GroupoidError, GroupoidRepr, Limits, Mor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMorphism {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A groupoid given by explicit tables. Morphisms and objects are referred to
/// by position; `compose` lists `(first, second, second ∘ first)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableGroupoid {
    pub objects: Vec<String>,
    pub morphisms: Vec<TableMorphism>,
    pub identity: Vec<Option<usize>>,
    pub compose: Vec<(usize, usize, usize)>,
    pub inverse: Vec<Option<usize>>,
}

/// One violated groupoid axiom with named witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateObject(String),
    DuplicateMorphism(String),
    EndpointOutOfRange { morphism: String },
    MissingIdentity { object: String },
    IdentityNotEndomorphism { object: String, morphism: String },
    ComposeOutOfRange { entry: usize },
    ComposeNotComposable { first: String, second: String },
    ComposeWrongEndpoints { first: String, second: String, result: String },
    ComposeConflict { first: String, second: String },
    ComposeMissing { first: String, second: String },
    LeftIdentity { morphism: String },
    RightIdentity { morphism: String },
    Associativity { first: String, second: String, third: String },
    MissingInverse { morphism: String },
    InverseWrongEndpoints { morphism: String, inverse: String },
    InverseLaw { morphism: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DuplicateObject(o) => write!(f, "duplicate object {o}"),
            DuplicateMorphism(m) => write!(f, "duplicate morphism {m}"),
            EndpointOutOfRange { morphism } => write!(f, "morphism {morphism} has an unknown endpoint"),
            MissingIdentity { object } => write!(f, "object {object} has no identity"),
            IdentityNotEndomorphism { object, morphism } => {
                write!(f, "identity {morphism} of {object} is not an endomorphism of it")
            }
            ComposeOutOfRange { entry } => write!(f, "compose entry {entry} names an unknown morphism"),
            ComposeNotComposable { first, second } => {
                write!(f, "compose lists non-composable pair ({first}, {second})")
            }
            ComposeWrongEndpoints { first, second, result } => write!(
                f,
                "composite {result} of ({first}, {second}) has the wrong endpoints"
            ),
            ComposeConflict { first, second } => {
                write!(f, "pair ({first}, {second}) is composed more than once")
            }
            ComposeMissing { first, second } => {
                write!(f, "composable pair ({first}, {second}) has no composite")
            }
            LeftIdentity { morphism } => write!(f, "left identity law fails at {morphism}"),
            RightIdentity { morphism } => write!(f, "right identity law fails at {morphism}"),
            Associativity { first, second, third } => {
                write!(f, "associativity fails on ({first}, {second}, {third})")
            }
            MissingInverse { morphism } => write!(f, "morphism {morphism} has no inverse"),
            InverseWrongEndpoints { morphism, inverse } => {
                write!(f, "inverse {inverse} of {morphism} has the wrong endpoints")
            }
            InverseLaw { morphism } => write!(f, "inverse law fails at {morphism}"),
        }
    }
}

/// Result of [`TableGroupoid::validate`]; empty iff every axiom holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", lines.join("; "))
    }
}

impl TableGroupoid {
    fn mname(&self, m: usize) -> String {
        self.morphisms[m].id.clone()
    }

    /// Checks every groupoid axiom exhaustively.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let n = self.objects.len();
        let k = self.morphisms.len();

        let mut seen = HashSet::new();
        for o in &self.objects {
            if !seen.insert(o) {
                v.push(Violation::DuplicateObject(o.clone()));
            }
        }
        let mut seen = HashSet::new();
        for m in &self.morphisms {
            if !seen.insert(&m.id) {
                v.push(Violation::DuplicateMorphism(m.id.clone()));
            }
            if m.source >= n || m.target >= n {
                v.push(Violation::EndpointOutOfRange { morphism: m.id.clone() });
            }
        }
        if self.identity.len() != n || self.inverse.len() != k {
            v.push(Violation::ComposeOutOfRange { entry: usize::MAX });
        }
        if !v.is_empty() {
            return ValidationReport { violations: v };
        }

        for (a, id) in self.identity.iter().enumerate() {
            match id {
                None => v.push(Violation::MissingIdentity {
                    object: self.objects[a].clone(),
                }),
                Some(i) if *i >= k || self.morphisms[*i].source != a || self.morphisms[*i].target != a => {
                    v.push(Violation::IdentityNotEndomorphism {
                        object: self.objects[a].clone(),
                        morphism: if *i < k { self.mname(*i) } else { i.to_string() },
                    })
                }
                _ => {}
            }
        }

        let mut table: HashMap<(usize, usize), usize> = HashMap::new();
        for (e, &(f, g, h)) in self.compose.iter().enumerate() {
            if f >= k || g >= k || h >= k {
                v.push(Violation::ComposeOutOfRange { entry: e });
                continue;
            }
            let (mf, mg, mh) = (&self.morphisms[f], &self.morphisms[g], &self.morphisms[h]);
            if mf.target != mg.source {
                v.push(Violation::ComposeNotComposable {
                    first: self.mname(f),
                    second: self.mname(g),
                });
                continue;
            }
            if mh.source != mf.source || mh.target != mg.target {
                v.push(Violation::ComposeWrongEndpoints {
                    first: self.mname(f),
                    second: self.mname(g),
                    result: self.mname(h),
                });
            }
            if table.insert((f, g), h).is_some_and(|old| old != h) {
                v.push(Violation::ComposeConflict {
                    first: self.mname(f),
                    second: self.mname(g),
                });
            }
        }

        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, m) in self.morphisms.iter().enumerate() {
            out[m.source].push(i);
        }
        for f in 0..k {
            for &g in &out[self.morphisms[f].target] {
                if !table.contains_key(&(f, g)) {
                    v.push(Violation::ComposeMissing {
                        first: self.mname(f),
                        second: self.mname(g),
                    });
                }
            }
        }
        if !v.is_empty() {
            return ValidationReport { violations: v };
        }

        let comp = |f: usize, g: usize| table[&(f, g)];
        for f in 0..k {
            let m = &self.morphisms[f];
            let (Some(ids), Some(idt)) = (self.identity[m.source], self.identity[m.target]) else {
                continue;
            };
            if comp(ids, f) != f {
                v.push(Violation::RightIdentity { morphism: self.mname(f) });
            }
            if comp(f, idt) != f {
                v.push(Violation::LeftIdentity { morphism: self.mname(f) });
            }
        }
        for f in 0..k {
            for &g in &out[self.morphisms[f].target] {
                let gf = comp(f, g);
                for &h in &out[self.morphisms[g].target] {
                    if comp(gf, h) != comp(f, comp(g, h)) {
                        v.push(Violation::Associativity {
                            first: self.mname(f),
                            second: self.mname(g),
                            third: self.mname(h),
                        });
                    }
                }
            }
        }
        for f in 0..k {
            let m = &self.morphisms[f];
            match self.inverse[f] {
                None => v.push(Violation::MissingInverse { morphism: self.mname(f) }),
                Some(i) if i >= k || self.morphisms[i].source != m.target || self.morphisms[i].target != m.source => {
                    v.push(Violation::InverseWrongEndpoints {
                        morphism: self.mname(f),
                        inverse: if i < k { self.mname(i) } else { i.to_string() },
                    })
                }
                Some(i) => {
                    let (Some(ids), Some(idt)) = (self.identity[m.source], self.identity[m.target]) else {
                        continue;
                    };
                    if comp(f, i) != ids || comp(i, f) != idt {
                        v.push(Violation::InverseLaw { morphism: self.mname(f) });
                    }
                }
            }
        }
        ValidationReport { violations: v }
    }

    /// Validates and converts into the shared read interface.
    pub fn into_groupoid(self) -> Result<Groupoid, ValidationReport> {
        let report = self.validate();
        if !report.is_empty() {
            return Err(report);
        }
        Ok(Groupoid::new(TableRepr::build(self)))
    }
}

#[derive(Debug)]
struct TableRepr {
    objects: Vec<String>,
    ids: Vec<String>,
    out: Vec<Vec<usize>>,
    local: Vec<Mor>,
    targets: Vec<usize>,
    identity: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    inverse: Vec<usize>,
}

impl TableRepr {
    fn build(t: TableGroupoid) -> Self {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); t.objects.len()];
        let mut local = Vec::with_capacity(t.morphisms.len());
        for (i, m) in t.morphisms.iter().enumerate() {
            local.push(Mor::new(m.source, out[m.source].len() as u64));
            out[m.source].push(i);
        }
        TableRepr {
            targets: t.morphisms.iter().map(|m| m.target).collect(),
            ids: t.morphisms.into_iter().map(|m| m.id).collect(),
            objects: t.objects,
            out,
            local,
            identity: t.identity.into_iter().map(|i| i.expect("validated")).collect(),
            compose: t.compose.into_iter().map(|(f, g, h)| ((f, g), h)).collect(),
            inverse: t.inverse.into_iter().map(|i| i.expect("validated")).collect(),
        }
    }

    fn global(&self, m: Mor) -> usize {
        self.out[m.source][m.index as usize]
    }
}

impl GroupoidRepr for TableRepr {
    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn out_degree(&self, a: usize) -> u64 {
        self.out[a].len() as u64
    }
    fn target(&self, m: Mor) -> usize {
        self.targets[self.global(m)]
    }
    fn identity(&self, a: usize) -> Mor {
        self.local[self.identity[a]]
    }
    fn compose(&self, first: Mor, second: Mor) -> Mor {
        self.local[self.compose[&(self.global(first), self.global(second))]]
    }
    fn inverse(&self, m: Mor) -> Mor {
        self.local[self.inverse[self.global(m)]]
    }
    fn object_name(&self, a: usize) -> String {
        self.objects[a].clone()
    }
    fn morphism_name(&self, m: Mor) -> String {
        self.ids[self.global(m)].clone()
    }
}

/// Tabulates any groupoid, within the default (or environment) limits.
pub fn materialize(g: &Groupoid) -> Result<TableGroupoid, GroupoidError> {
    materialize_with(g, &Limits::from_env())
}

pub fn materialize_with(g: &Groupoid, limits: &Limits) -> Result<TableGroupoid, GroupoidError> {
    let count = g.morphism_count();
    if count > limits.max_table_morphisms as u128 {
        return Err(GroupoidError::SizeGuard {
            what: "morphisms",
            needed: count,
            bound: limits.max_table_morphisms as u128,
        });
    }
    let pairs: u128 = g.morphisms().map(|m| g.out_degree(g.target(m)) as u128).sum();
    if pairs > limits.max_table_pairs as u128 {
        return Err(GroupoidError::SizeGuard {
            what: "composable pairs",
            needed: pairs,
            bound: limits.max_table_pairs as u128,
        });
    }
    let mut offsets = Vec::with_capacity(g.object_count());
    let mut total = 0usize;
    for a in g.objects() {
        offsets.push(total);
        total += g.out_degree(a) as usize;
    }
    let global = |m: Mor| offsets[m.source] + m.index as usize;

    let mut objects: Vec<String> = g.objects().map(|a| g.object_name(a)).collect();
    if objects.iter().collect::<HashSet<_>>().len() != objects.len() {
        objects = g.objects().map(|a| a.to_string()).collect();
    }
    let mut morphisms: Vec<TableMorphism> = g
        .morphisms()
        .map(|m| TableMorphism {
            id: g.morphism_name(m),
            source: m.source,
            target: g.target(m),
        })
        .collect();
    if morphisms.iter().map(|m| &m.id).collect::<HashSet<_>>().len() != morphisms.len() {
        for (i, m) in morphisms.iter_mut().enumerate() {
            m.id = format!("m{i}");
        }
    }
    let identity = g.objects().map(|a| Some(global(g.identity(a)))).collect();
    let inverse = g.morphisms().map(|m| Some(global(g.inverse(m)))).collect();
    let mut compose = Vec::with_capacity(pairs as usize);
    for f in g.morphisms() {
        for h in g.out_morphisms(g.target(f)) {
            compose.push((global(f), global(h), global(g.compose(f, h))));
        }
    }
    Ok(TableGroupoid {
        objects,
        morphisms,
        identity,
        compose,
        inverse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AbelianGroup;
    use crate::groupoid::ActionGroupoid;

    fn bz2_table() -> TableGroupoid {
        TableGroupoid {
            objects: vec!["*".into()],
            morphisms: vec![
                TableMorphism { id: "e".into(), source: 0, target: 0 },
                TableMorphism { id: "s".into(), source: 0, target: 0 },
            ],
            identity: vec![Some(0)],
            compose: vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
            inverse: vec![Some(0), Some(1)],
        }
    }

    #[test]
    fn bz2_table_is_valid() {
        let t = bz2_table();
        assert!(t.validate().is_empty());
        let g = t.into_groupoid().unwrap();
        assert_eq!(g.aut_order(0), 2);
    }

    #[test]
    fn broken_associativity_is_reported() {
        // Z3 = {e, a, b} with a·a := a (wrong) breaks associativity.
        let mut t = TableGroupoid {
            objects: vec!["*".into()],
            morphisms: ["e", "a", "b"]
                .iter()
                .map(|s| TableMorphism { id: s.to_string(), source: 0, target: 0 })
                .collect(),
            identity: vec![Some(0)],
            compose: Vec::new(),
            inverse: vec![Some(0), Some(2), Some(1)],
        };
        for f in 0..3 {
            for g in 0..3 {
                t.compose.push((f, g, (f + g) % 3));
            }
        }
        assert!(t.validate().is_empty());
        let pos = t.compose.iter().position(|&(f, g, _)| f == 1 && g == 1).unwrap();
        t.compose[pos].2 = 1;
        let report = t.validate();
        assert!(report.violations.iter().any(|v| matches!(v, Violation::Associativity { .. })));
    }

    #[test]
    fn missing_inverse_is_named() {
        let mut t = bz2_table();
        t.inverse[1] = None;
        let report = t.validate();
        assert_eq!(
            report.violations,
            vec![Violation::MissingInverse { morphism: "s".into() }]
        );
    }

    #[test]
    fn missing_composite_is_named() {
        let mut t = bz2_table();
        t.compose.pop();
        assert_eq!(
            t.validate().violations,
            vec![Violation::ComposeMissing { first: "s".into(), second: "s".into() }]
        );
    }

    #[test]
    fn materialize_respects_guard() {
        let g = ActionGroupoid::regular(&AbelianGroup::cyclic(5).unwrap()).into_groupoid();
        let limits = Limits { max_table_morphisms: 24, ..Limits::default() };
        assert!(matches!(
            materialize_with(&g, &limits),
            Err(GroupoidError::SizeGuard { needed: 25, bound: 24, .. })
        ));
        let t = materialize_with(&g, &Limits::default()).unwrap();
        assert!(t.validate().is_empty());
    }

    #[test]
    fn materialized_delooping_is_bz2() {
        let g = ActionGroupoid::delooping(&AbelianGroup::cyclic(2).unwrap()).into_groupoid();
        let t = materialize(&g).unwrap();
        assert_eq!(t.objects.len(), 1);
        assert_eq!(t.morphisms.len(), 2);
        assert!(t.validate().is_empty());
    }
}
