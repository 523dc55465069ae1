//! Finite groupoids behind one read interface, with components, hom-sets,
//! automorphism orders, Euler characteristics and weightings.

mod action;
mod sub;
mod table;

pub use action::ActionGroupoid;
pub(crate) use action::cosets;
pub use sub::{DisjointUnion, FullSubgroupoid, UnitSubgroupoid};
pub use table::{materialize, materialize_with, TableGroupoid, TableMorphism, ValidationReport, Violation};

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{AbelianGroup, Rational};

/// A morphism, addressed by its source object and an index into the
/// source's out-going morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mor {
    pub source: usize,
    pub index: u64,
}

impl Mor {
    pub fn new(source: usize, index: u64) -> Self {
        Mor { source, index }
    }
}

/// The primitive operations every groupoid representation provides.
///
/// Morphisms out of `a` are `Mor { source: a, index: 0..out_degree(a) }`.
/// `generators(a)` must be a subset of those such that every morphism is a
/// composite of generators (at various objects) and their inverses; all
/// structural checks in this crate rely on that.
pub trait GroupoidRepr: Send + Sync + fmt::Debug {
    fn object_count(&self) -> usize;
    fn out_degree(&self, a: usize) -> u64;
    fn target(&self, m: Mor) -> usize;
    fn identity(&self, a: usize) -> Mor;
    /// `second ∘ first`; requires `target(first) == second.source`.
    fn compose(&self, first: Mor, second: Mor) -> Mor;
    fn inverse(&self, m: Mor) -> Mor;
    fn generators(&self, a: usize) -> Vec<Mor> {
        (0..self.out_degree(a)).map(|i| Mor::new(a, i)).collect()
    }
    fn object_name(&self, a: usize) -> String {
        a.to_string()
    }
    fn morphism_name(&self, m: Mor) -> String {
        format!("{}#{}", self.object_name(m.source), m.index)
    }
    /// `Some(G)` iff this is the one-object groupoid `BG` whose morphism
    /// indices are the elements of `G`.
    fn as_delooping(&self) -> Option<&AbelianGroup> {
        None
    }
}

/// Connected components in canonical order (sorted by minimal object).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    component_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    aut_orders: Vec<u64>,
}

impl Components {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of the component containing `a`.
    pub fn of(&self, a: usize) -> usize {
        self.component_of[a]
    }

    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    /// The minimal object of component `c`.
    pub fn representative(&self, c: usize) -> usize {
        self.members[c][0]
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.members.iter().map(|m| m[0]).collect()
    }

    pub fn aut_order(&self, c: usize) -> u64 {
        self.aut_orders[c]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("size guard exceeded: {what} would need {needed}, bound is {bound}")]
    SizeGuard {
        what: &'static str,
        needed: u128,
        bound: u128,
    },
    #[error("object {object} out of range for a groupoid with {count} objects")]
    ObjectOutOfRange { object: usize, count: usize },
    #[error("invalid groupoid: {0}")]
    Invalid(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
}

/// Size bounds for constructions. Defaults can be overridden with the
/// `GSPAN_SIZE_GUARD` (morphisms) and `GSPAN_OBJECT_GUARD` (objects)
/// environment variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of morphisms in an explicitly tabulated groupoid.
    pub max_table_morphisms: u64,
    /// Maximum number of composable pairs in an explicit composition table.
    pub max_table_pairs: u64,
    /// Maximum number of objects in a lazily constructed groupoid.
    pub max_objects: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_morphisms: 20_000,
            max_table_pairs: 4_000_000,
            max_objects: 200_000,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = std::env::var("GSPAN_SIZE_GUARD").ok().and_then(|s| s.parse().ok()) {
            limits.max_table_morphisms = v;
        }
        if let Some(v) = std::env::var("GSPAN_OBJECT_GUARD").ok().and_then(|s| s.parse().ok()) {
            limits.max_objects = v;
        }
        limits
    }

    pub fn check_objects(&self, needed: u128) -> Result<(), GroupoidError> {
        if needed > self.max_objects as u128 {
            Err(GroupoidError::SizeGuard {
                what: "objects",
                needed,
                bound: self.max_objects as u128,
            })
        } else {
            Ok(())
        }
    }
}

/// A shared, immutable finite groupoid. Cloning is cheap.
#[derive(Clone)]
pub struct Groupoid {
    repr: Arc<dyn GroupoidRepr>,
    components: Arc<OnceLock<Components>>,
}

impl fmt::Debug for Groupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.repr.fmt(f)
    }
}

impl Groupoid {
    pub fn new(repr: impl GroupoidRepr + 'static) -> Self {
        Self::from_arc(Arc::new(repr))
    }

    pub fn from_arc(repr: Arc<dyn GroupoidRepr>) -> Self {
        Groupoid {
            repr,
            components: Arc::new(OnceLock::new()),
        }
    }

    pub fn repr(&self) -> &dyn GroupoidRepr {
        self.repr.as_ref()
    }

    /// Whether both handles share the same underlying representation.
    pub fn ptr_eq(&self, other: &Groupoid) -> bool {
        Arc::ptr_eq(&self.components, &other.components)
    }

    pub fn object_count(&self) -> usize {
        self.repr.object_count()
    }

    pub fn objects(&self) -> std::ops::Range<usize> {
        0..self.object_count()
    }

    pub fn is_empty(&self) -> bool {
        self.object_count() == 0
    }

    pub fn out_degree(&self, a: usize) -> u64 {
        self.repr.out_degree(a)
    }

    pub fn out_morphisms(&self, a: usize) -> impl Iterator<Item = Mor> {
        (0..self.repr.out_degree(a)).map(move |i| Mor::new(a, i))
    }

    /// Every morphism, grouped by source.
    pub fn morphisms(&self) -> impl Iterator<Item = Mor> + '_ {
        self.objects().flat_map(move |a| self.out_morphisms(a))
    }

    pub fn morphism_count(&self) -> u128 {
        self.objects().map(|a| self.out_degree(a) as u128).sum()
    }

    pub fn target(&self, m: Mor) -> usize {
        self.repr.target(m)
    }

    pub fn identity(&self, a: usize) -> Mor {
        self.repr.identity(a)
    }

    /// `second ∘ first`.
    pub fn compose(&self, first: Mor, second: Mor) -> Mor {
        debug_assert_eq!(self.target(first), second.source);
        self.repr.compose(first, second)
    }

    pub fn inverse(&self, m: Mor) -> Mor {
        self.repr.inverse(m)
    }

    pub fn generators(&self, a: usize) -> Vec<Mor> {
        self.repr.generators(a)
    }

    pub fn object_name(&self, a: usize) -> String {
        self.repr.object_name(a)
    }

    pub fn morphism_name(&self, m: Mor) -> String {
        self.repr.morphism_name(m)
    }

    pub fn as_delooping(&self) -> Option<&AbelianGroup> {
        self.repr.as_delooping()
    }

    /// `Hom(a, b)`.
    pub fn hom(&self, a: usize, b: usize) -> Vec<Mor> {
        self.out_morphisms(a).filter(|&m| self.target(m) == b).collect()
    }

    pub fn components(&self) -> &Components {
        self.components.get_or_init(|| compute_components(self.repr.as_ref()))
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Canonical representative (minimal object) of the component of `a`.
    pub fn representative(&self, a: usize) -> usize {
        let comps = self.components();
        comps.representative(comps.of(a))
    }

    pub fn same_component(&self, a: usize, b: usize) -> bool {
        let comps = self.components();
        comps.of(a) == comps.of(b)
    }

    /// `|Aut(a)| = |G(a, a)|`.
    pub fn aut_order(&self, a: usize) -> u64 {
        let comps = self.components();
        comps.aut_order(comps.of(a))
    }

    /// `χ = Σ_components 1/|Aut|`; zero for the empty groupoid.
    pub fn euler_characteristic(&self) -> Rational {
        let comps = self.components();
        (0..comps.len()).fold(Rational::zero(), |acc, c| {
            acc + Rational::new(BigInt::from(1), BigInt::from(comps.aut_order(c)))
        })
    }

    /// Multiset of automorphism orders, one entry per component, sorted.
    pub fn aut_order_profile(&self) -> Vec<u64> {
        let comps = self.components();
        let mut v: Vec<u64> = (0..comps.len()).map(|c| comps.aut_order(c)).collect();
        v.sort_unstable();
        v
    }

    /// The weighting `k^b = 1/(|component(b)|·|Aut(b)|)`.
    pub fn weighting(&self) -> Vec<Rational> {
        let comps = self.components();
        self.objects()
            .map(|b| {
                let c = comps.of(b);
                let size = comps.members(c).len() as u64;
                Rational::new(1.into(), BigInt::from(size) * BigInt::from(comps.aut_order(c)))
            })
            .collect()
    }

    /// The coweighting; in a groupoid `|Hom(a,b)| = |Hom(b,a)|`, so it agrees
    /// with the weighting.
    pub fn coweighting(&self) -> Vec<Rational> {
        self.weighting()
    }

    /// Checks `Σ_b k^b |Hom(a,b)| = 1` at every object `a` by enumerating
    /// morphisms; returns the first failing object.
    pub fn verify_weighting(&self, k: &[Rational]) -> Result<(), usize> {
        for a in self.objects() {
            let total = self
                .out_morphisms(a)
                .fold(Rational::zero(), |acc, m| acc + &k[self.target(m)]);
            if total != Rational::from_integer(1.into()) {
                return Err(a);
            }
        }
        Ok(())
    }

    /// Checks `Σ_a k_a |Hom(a,b)| = 1` at every object `b`.
    pub fn verify_coweighting(&self, k: &[Rational]) -> Result<(), usize> {
        let mut totals = vec![Rational::zero(); self.object_count()];
        for m in self.morphisms() {
            totals[self.target(m)] += &k[m.source];
        }
        let one = Rational::from_integer(1.into());
        match totals.iter().position(|t| *t != one) {
            Some(b) => Err(b),
            None => Ok(()),
        }
    }

    /// Structural comparison on the whole multiplication table restricted to
    /// generators, which determines the groupoid.
    pub fn same_structure(&self, other: &Groupoid) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.object_count() != other.object_count() {
            return false;
        }
        for a in self.objects() {
            if self.out_degree(a) != other.out_degree(a) || self.identity(a) != other.identity(a) {
                return false;
            }
            for m in self.out_morphisms(a) {
                if self.target(m) != other.target(m) || self.inverse(m) != other.inverse(m) {
                    return false;
                }
            }
        }
        for m in self.morphisms() {
            let b = self.target(m);
            let mut gens = self.generators(b);
            gens.extend(other.generators(b));
            for g in gens {
                if self.compose(m, g) != other.compose(m, g) {
                    return false;
                }
            }
        }
        true
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn compute_components(g: &dyn GroupoidRepr) -> Components {
    let n = g.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    for a in 0..n {
        for m in g.generators(a) {
            let b = g.target(m);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                // Keep the smaller root so that roots are minimal objects.
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
    }
    let mut component_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        let r = find(&mut parent, a);
        if r == a {
            component_of[a] = members.len();
            members.push(vec![a]);
        } else {
            let c = component_of[r];
            component_of[a] = c;
            members[c].push(a);
        }
    }
    let aut_orders = members
        .iter()
        .map(|m| {
            let degree = g.out_degree(m[0]);
            let size = m.len() as u64;
            debug_assert_eq!(degree % size, 0, "out-degree not divisible by component size");
            degree / size
        })
        .collect();
    Components {
        component_of,
        members,
        aut_orders,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, AbelianGroup};

    #[test]
    fn components_of_discrete_and_delooping() {
        let d = ActionGroupoid::discrete(4).into_groupoid();
        assert_eq!(d.component_count(), 4);
        assert_eq!(d.euler_characteristic(), rational(4, 1));
        let bz2 = ActionGroupoid::delooping(&AbelianGroup::cyclic(2).unwrap()).into_groupoid();
        assert_eq!(bz2.component_count(), 1);
        assert_eq!(bz2.euler_characteristic(), rational(1, 2));
    }

    #[test]
    fn empty_groupoid_has_zero_euler_characteristic() {
        let e = ActionGroupoid::discrete(0).into_groupoid();
        assert_eq!(e.euler_characteristic(), rational(0, 1));
        assert!(e.weighting().is_empty());
    }

    #[test]
    fn weightings() {
        let d = ActionGroupoid::discrete(3).into_groupoid();
        assert!(d.weighting().iter().all(|k| *k == rational(1, 1)));
        let g = AbelianGroup::new(&[2, 3]).unwrap();
        let eg = ActionGroupoid::coset(&g, &[crate::algebra::Elem(0)]).unwrap().into_groupoid();
        let k = eg.weighting();
        assert!(k.iter().all(|x| *x == rational(1, 6)));
        assert_eq!(eg.verify_weighting(&k), Ok(()));
        assert_eq!(eg.verify_coweighting(&eg.coweighting()), Ok(()));
        let bad = vec![rational(1, 5); 6];
        assert_eq!(eg.verify_weighting(&bad), Err(0));
    }

    #[test]
    fn limits_reject_large_object_counts() {
        let limits = Limits {
            max_table_morphisms: 10,
            max_table_pairs: 100,
            max_objects: 5,
        };
        assert!(limits.check_objects(5).is_ok());
        assert!(matches!(
            limits.check_objects(6),
            Err(GroupoidError::SizeGuard { bound: 5, .. })
        ));
    }
}
