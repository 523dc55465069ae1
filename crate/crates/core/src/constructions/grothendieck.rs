use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::Rational;
use crate::groupoid::{Groupoid, GroupoidRepr, Mor};

/// A functor from a groupoid to finite sets `{0..size(a)}`.
pub trait SetFunctorRepr: Send + Sync + fmt::Debug {
    fn size(&self, a: usize) -> usize;
    /// The image of `x ∈ X(m.source)` under `X(m)`.
    fn transport(&self, m: Mor, x: usize) -> usize;
    fn element_name(&self, _a: usize, x: usize) -> String {
        x.to_string()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetFunctorError {
    #[error("transport along {morphism} sends {element} outside the target set")]
    OutOfRange { morphism: String, element: usize },
    #[error("transport along {morphism} is not a bijection")]
    NotBijective { morphism: String },
    #[error("transport along the identity of {object} is not the identity")]
    IdentityNotPreserved { object: String },
    #[error("transport is not compatible with composing {first} then {second}")]
    CompositionNotPreserved { first: String, second: String },
    #[error("missing transport for {morphism}")]
    MissingTransport { morphism: String },
}

/// A set-valued functor `X` on a groupoid, with bijective transports.
#[derive(Clone)]
pub struct SetValuedFunctor {
    base: Groupoid,
    repr: Arc<dyn SetFunctorRepr>,
}

impl fmt::Debug for SetValuedFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetValuedFunctor").field("repr", &self.repr).finish()
    }
}

#[derive(Debug)]
struct TableSetRepr {
    sizes: Vec<usize>,
    transports: HashMap<Mor, Vec<usize>>,
}

impl SetFunctorRepr for TableSetRepr {
    fn size(&self, a: usize) -> usize {
        self.sizes[a]
    }
    fn transport(&self, m: Mor, x: usize) -> usize {
        self.transports[&m][x]
    }
}

struct FnSetRepr<S, T> {
    size: S,
    transport: T,
}

impl<S, T> fmt::Debug for FnSetRepr<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnSetFunctor")
    }
}

impl<S, T> SetFunctorRepr for FnSetRepr<S, T>
where
    S: Fn(usize) -> usize + Send + Sync,
    T: Fn(Mor, usize) -> usize + Send + Sync,
{
    fn size(&self, a: usize) -> usize {
        (self.size)(a)
    }
    fn transport(&self, m: Mor, x: usize) -> usize {
        (self.transport)(m, x)
    }
}

impl SetValuedFunctor {
    pub fn new(base: &Groupoid, repr: Arc<dyn SetFunctorRepr>) -> Result<Self, SetFunctorError> {
        let f = SetValuedFunctor {
            base: base.clone(),
            repr,
        };
        f.verify()?;
        Ok(f)
    }

    pub fn from_fn(
        base: &Groupoid,
        size: impl Fn(usize) -> usize + Send + Sync + 'static,
        transport: impl Fn(Mor, usize) -> usize + Send + Sync + 'static,
    ) -> Result<Self, SetFunctorError> {
        Self::new(base, Arc::new(FnSetRepr { size, transport }))
    }

    pub fn from_tables(
        base: &Groupoid,
        sizes: Vec<usize>,
        transports: HashMap<Mor, Vec<usize>>,
    ) -> Result<Self, SetFunctorError> {
        for m in base.morphisms() {
            match transports.get(&m) {
                Some(t) if t.len() == sizes[m.source] => {}
                _ => {
                    return Err(SetFunctorError::MissingTransport {
                        morphism: base.morphism_name(m),
                    })
                }
            }
        }
        Self::new(base, Arc::new(TableSetRepr { sizes, transports }))
    }

    /// The constant one-point functor.
    pub fn singleton(base: &Groupoid) -> Self {
        Self::from_fn(base, |_| 1, |_, _| 0).expect("constant functor")
    }

    pub fn base(&self) -> &Groupoid {
        &self.base
    }

    pub fn size(&self, a: usize) -> usize {
        self.repr.size(a)
    }

    pub fn transport(&self, m: Mor, x: usize) -> usize {
        self.repr.transport(m, x)
    }

    /// Transports land in range and are bijections, identities act
    /// trivially, and transport along `g ∘ m` is transport along `m` then
    /// `g` for every morphism `m` and generator `g`.
    pub fn verify(&self) -> Result<(), SetFunctorError> {
        let g = &self.base;
        for m in g.morphisms() {
            let n = self.size(g.target(m));
            let mut hit = vec![false; n];
            for x in 0..self.size(m.source) {
                let y = self.transport(m, x);
                if y >= n {
                    return Err(SetFunctorError::OutOfRange {
                        morphism: g.morphism_name(m),
                        element: x,
                    });
                }
                hit[y] = true;
            }
            if self.size(m.source) != n || hit.iter().any(|h| !h) {
                return Err(SetFunctorError::NotBijective {
                    morphism: g.morphism_name(m),
                });
            }
        }
        for a in g.objects() {
            let id = g.identity(a);
            if (0..self.size(a)).any(|x| self.transport(id, x) != x) {
                return Err(SetFunctorError::IdentityNotPreserved {
                    object: g.object_name(a),
                });
            }
        }
        for m in g.morphisms() {
            for h in g.generators(g.target(m)) {
                let hm = g.compose(m, h);
                for x in 0..self.size(m.source) {
                    if self.transport(hm, x) != self.transport(h, self.transport(m, x)) {
                        return Err(SetFunctorError::CompositionNotPreserved {
                            first: g.morphism_name(m),
                            second: g.morphism_name(h),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ_a k^a |X(a)|` for the weighting `k` of the base.
    pub fn weighted_size(&self) -> Rational {
        let k = self.base.weighting();
        self.base.objects().fold(Rational::zero(), |acc, a| {
            acc + &k[a] * Rational::from_integer(BigInt::from(self.size(a)))
        })
    }
}

/// The category of elements `∫X`: objects `(a, x)` with `x ∈ X(a)`; a
/// morphism `(a1, x1) → (a2, x2)` is `m: a1 → a2` with `X(m)(x1) = x2`.
#[derive(Debug)]
pub struct Grothendieck {
    functor: SetValuedFunctor,
    offsets: Vec<usize>,
    total: usize,
}

impl Grothendieck {
    pub fn new(functor: &SetValuedFunctor) -> Self {
        let base = functor.base();
        let mut offsets = Vec::with_capacity(base.object_count());
        let mut total = 0;
        for a in base.objects() {
            offsets.push(total);
            total += functor.size(a);
        }
        Grothendieck {
            functor: functor.clone(),
            offsets,
            total,
        }
    }

    pub fn into_groupoid(self) -> Groupoid {
        Groupoid::new(self)
    }

    /// `(a, x)` for an object of `∫X`.
    pub fn decode(&self, object: usize) -> (usize, usize) {
        let a = self.offsets.partition_point(|&o| o <= object) - 1;
        let a = (a..self.offsets.len())
            .find(|&b| object < self.offsets[b] + self.functor.size(b))
            .expect("object in range");
        (a, object - self.offsets[a])
    }

    pub fn encode(&self, a: usize, x: usize) -> usize {
        self.offsets[a] + x
    }

    fn base_mor(&self, m: Mor) -> Mor {
        Mor::new(self.decode(m.source).0, m.index)
    }

    fn lift(&self, object: usize, m: Mor) -> Mor {
        Mor::new(object, m.index)
    }
}

impl GroupoidRepr for Grothendieck {
    fn object_count(&self) -> usize {
        self.total
    }
    fn out_degree(&self, object: usize) -> u64 {
        self.functor.base().out_degree(self.decode(object).0)
    }
    fn target(&self, m: Mor) -> usize {
        let (a, x) = self.decode(m.source);
        let bm = Mor::new(a, m.index);
        let base = self.functor.base();
        self.encode(base.target(bm), self.functor.transport(bm, x))
    }
    fn identity(&self, object: usize) -> Mor {
        let a = self.decode(object).0;
        self.lift(object, self.functor.base().identity(a))
    }
    fn compose(&self, first: Mor, second: Mor) -> Mor {
        let c = self
            .functor
            .base()
            .compose(self.base_mor(first), self.base_mor(second));
        self.lift(first.source, c)
    }
    fn inverse(&self, m: Mor) -> Mor {
        let inv = self.functor.base().inverse(self.base_mor(m));
        self.lift(self.target(m), inv)
    }
    fn generators(&self, object: usize) -> Vec<Mor> {
        let a = self.decode(object).0;
        self.functor
            .base()
            .generators(a)
            .into_iter()
            .map(|g| self.lift(object, g))
            .collect()
    }
    fn object_name(&self, object: usize) -> String {
        let (a, x) = self.decode(object);
        format!(
            "({},{})",
            self.functor.base().object_name(a),
            self.functor.repr.element_name(a, x)
        )
    }
}
