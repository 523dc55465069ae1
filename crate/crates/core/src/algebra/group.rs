use std::collections::{HashMap, HashSet};
use std::fmt;

use super::AlgebraError;

/// An element of a finite group, identified by its index in the group's
/// canonical enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub usize);

/// A finite group with elements `0..order()`.
///
/// Implementations must make `mul` associative with `identity()` as unit,
/// and every element must be a product of `generators()`.
pub trait FiniteGroup: Send + Sync + fmt::Debug {
    fn order(&self) -> usize;
    fn identity(&self) -> Elem;
    /// The product `a · b`.
    fn mul(&self, a: Elem, b: Elem) -> Elem;
    fn inv(&self, a: Elem) -> Elem;
    fn generators(&self) -> Vec<Elem>;
    fn element_name(&self, a: Elem) -> String {
        a.0.to_string()
    }
    /// `Some` when the group is one of our abelian groups; used to recognise
    /// deloopings `BG` of an abelian `G`.
    fn as_abelian(&self) -> Option<&AbelianGroup> {
        None
    }
}

/// `Z_{n1} × … × Z_{nk}`, written additively.
///
/// Multiplicative notation `g h`, `g⁻¹`, `e` maps to `add(g, h)`, `neg(g)`
/// and the zero tuple. Elements are enumerated lexicographically by
/// exponent tuple, so `Elem(i)` is the mixed-radix number with the first
/// component most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
}

impl AbelianGroup {
    pub fn new(orders: &[usize]) -> Result<Self, AlgebraError> {
        if let Some(pos) = orders.iter().position(|&n| n == 0) {
            return Err(AlgebraError::ZeroOrder { position: pos });
        }
        let mut strides = vec![1; orders.len()];
        let mut order = 1usize;
        for i in (0..orders.len()).rev() {
            strides[i] = order;
            order = order
                .checked_mul(orders[i])
                .ok_or(AlgebraError::GroupTooLarge)?;
        }
        Ok(AbelianGroup {
            orders: orders.to_vec(),
            strides,
            order,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self, AlgebraError> {
        Self::new(&[n])
    }

    pub fn trivial() -> Self {
        Self::new(&[]).expect("empty product")
    }

    pub fn cyclic_orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    pub fn exponents(&self, a: Elem) -> Vec<usize> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| (a.0 / s) % n)
            .collect()
    }

    /// Builds an element from arbitrary integer exponents, reducing mod `n_i`.
    pub fn element(&self, exponents: &[i64]) -> Result<Elem, AlgebraError> {
        if exponents.len() != self.orders.len() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.orders.len(),
                found: exponents.len(),
            });
        }
        let idx = exponents
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&e, &n), &s)| (e.rem_euclid(n as i64) as usize) * s)
            .sum();
        Ok(Elem(idx))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let mut idx = 0;
        for ((&n, &s), _) in self.orders.iter().zip(&self.strides).zip(0..) {
            let x = (a.0 / s) % n;
            let y = (b.0 / s) % n;
            idx += ((x + y) % n) * s;
        }
        Elem(idx)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let mut idx = 0;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let x = (a.0 / s) % n;
            idx += ((n - x) % n) * s;
        }
        Elem(idx)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `k·a` for a (possibly negative) integer `k`.
    pub fn scale(&self, k: i64, a: Elem) -> Elem {
        let exps: Vec<i64> = self
            .exponents(a)
            .into_iter()
            .map(|e| e as i64 * k)
            .collect();
        self.element(&exps).expect("arity matches")
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != Elem(0) {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.order
    }

    /// Checks that `subset` is a subgroup: nonempty, closed under addition
    /// and negation.
    pub fn check_subgroup(&self, subset: &[Elem]) -> Result<Vec<Elem>, AlgebraError> {
        let set: HashSet<Elem> = subset.iter().copied().collect();
        if set.is_empty() {
            return Err(AlgebraError::NotSubgroup("empty subset".into()));
        }
        if let Some(bad) = set.iter().find(|a| !self.contains(**a)) {
            return Err(AlgebraError::NotSubgroup(format!(
                "element index {} outside group of order {}",
                bad.0, self.order
            )));
        }
        for &a in &set {
            if !set.contains(&self.neg(a)) {
                return Err(AlgebraError::NotSubgroup(format!(
                    "inverse of {} missing",
                    self.render(a)
                )));
            }
            for &b in &set {
                if !set.contains(&self.add(a, b)) {
                    return Err(AlgebraError::NotSubgroup(format!(
                        "{} + {} missing",
                        self.render(a),
                        self.render(b)
                    )));
                }
            }
        }
        let mut v: Vec<Elem> = set.into_iter().collect();
        v.sort();
        Ok(v)
    }

    /// The subgroup generated by `gens`.
    pub fn span(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![Elem(0)];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if !seen[y.0] {
                    seen[y.0] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).map(Elem).collect()
    }

    /// All subgroups, each as a sorted element list. Exponential in the
    /// rank; meant for the small groups used in sweeps.
    pub fn subgroups(&self) -> Vec<Vec<Elem>> {
        let mut found: HashSet<Vec<Elem>> = HashSet::new();
        let mut frontier = vec![vec![Elem(0)]];
        found.insert(vec![Elem(0)]);
        while let Some(h) = frontier.pop() {
            for g in self.elements() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let bigger = self.span(&gens);
                if found.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
        let mut out: Vec<Vec<Elem>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    /// Canonical rendering `g(e1,...,ek)`.
    pub fn render(&self, a: Elem) -> String {
        let exps: Vec<String> = self.exponents(a).iter().map(|e| e.to_string()).collect();
        format!("g({})", exps.join(","))
    }

    /// Direct product `self × other`, exponent tuples concatenated.
    pub fn product(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        AbelianGroup::new(&orders).expect("orders are positive")
    }

    /// Embeds `(a, b)` into `self.product(other)`.
    pub fn pair(&self, other: &AbelianGroup, a: Elem, b: Elem) -> Elem {
        Elem(a.0 * other.order + b.0)
    }

    /// Splits an element of `self.product(other)`.
    pub fn unpair(&self, other: &AbelianGroup, ab: Elem) -> (Elem, Elem) {
        (Elem(ab.0 / other.order), Elem(ab.0 % other.order))
    }
}

impl FiniteGroup for AbelianGroup {
    fn order(&self) -> usize {
        self.order
    }
    fn identity(&self) -> Elem {
        Elem(0)
    }
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, b)
    }
    fn inv(&self, a: Elem) -> Elem {
        self.neg(a)
    }
    fn generators(&self) -> Vec<Elem> {
        (0..self.orders.len())
            .filter(|&i| self.orders[i] > 1)
            .map(|i| Elem(self.strides[i]))
            .collect()
    }
    fn element_name(&self, a: Elem) -> String {
        self.render(a)
    }
    fn as_abelian(&self) -> Option<&AbelianGroup> {
        Some(self)
    }
}

/// A homomorphism between abelian groups, stored as a full table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    images: Vec<Elem>,
}

impl GroupHom {
    /// Builds the homomorphism sending the `i`-th cyclic generator to
    /// `generator_images[i]`; fails if an image has the wrong order.
    pub fn from_generator_images(
        source: &AbelianGroup,
        target: &AbelianGroup,
        generator_images: &[Elem],
    ) -> Result<Self, AlgebraError> {
        if generator_images.len() != source.rank() {
            return Err(AlgebraError::ArityMismatch {
                expected: source.rank(),
                found: generator_images.len(),
            });
        }
        for (i, (&y, &n)) in generator_images.iter().zip(source.cyclic_orders()).enumerate() {
            if !target.contains(y) || target.scale(n as i64, y) != Elem(0) {
                return Err(AlgebraError::NotHomomorphism(format!(
                    "generator {i} of order {n} cannot map to {}",
                    target.render(y)
                )));
            }
        }
        let images = source
            .elements()
            .map(|a| {
                source
                    .exponents(a)
                    .iter()
                    .zip(generator_images)
                    .fold(Elem(0), |acc, (&e, &y)| target.add(acc, target.scale(e as i64, y)))
            })
            .collect();
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Builds a homomorphism from a full image table, checking additivity.
    pub fn from_table(
        source: &AbelianGroup,
        target: &AbelianGroup,
        images: Vec<Elem>,
    ) -> Result<Self, AlgebraError> {
        if images.len() != source.order() {
            return Err(AlgebraError::ArityMismatch {
                expected: source.order(),
                found: images.len(),
            });
        }
        for a in source.elements() {
            for b in source.elements() {
                let lhs = images[source.add(a, b).0];
                let rhs = target.add(images[a.0], images[b.0]);
                if lhs != rhs {
                    return Err(AlgebraError::NotHomomorphism(format!(
                        "f({} + {}) != f({}) + f({})",
                        source.render(a),
                        source.render(b),
                        source.render(a),
                        source.render(b)
                    )));
                }
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn identity(g: &AbelianGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            images: g.elements().collect(),
        }
    }

    pub fn zero(source: &AbelianGroup, target: &AbelianGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            images: vec![Elem(0); source.order()],
        }
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.images[a.0]
    }

    pub fn compose(&self, after: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: after.target.clone(),
            images: self.images.iter().map(|&y| after.apply(y)).collect(),
        }
    }
}

/// A permutation group on `{0..degree}`, closed from a generating set.
///
/// Permutations are one-line arrays `p` with `p[i]` the image of `i`. The
/// product `a · b` is "apply `a` first, then `b`", which makes
/// `x ↦ x·g` a right action on points.
#[derive(Clone)]
pub struct PermutationGroup {
    degree: usize,
    elements: Vec<Vec<u8>>,
    mul_table: Vec<u32>,
    inverses: Vec<u32>,
    gens: Vec<Elem>,
}

impl fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermutationGroup")
            .field("degree", &self.degree)
            .field("order", &self.elements.len())
            .finish()
    }
}

/// Refuse to tabulate groups larger than this (the multiplication table is quadratic).
const MAX_PERMUTATION_GROUP_ORDER: usize = 5040;

impl PermutationGroup {
    pub fn generated_by(degree: usize, generators: &[Vec<usize>]) -> Result<Self, AlgebraError> {
        for g in generators {
            if g.len() != degree || !is_permutation(g) {
                return Err(AlgebraError::NotPermutation(format!("{g:?}")));
            }
        }
        let id: Vec<u8> = (0..degree as u8).collect();
        let gens_u8: Vec<Vec<u8>> = generators
            .iter()
            .map(|g| g.iter().map(|&x| x as u8).collect())
            .collect();
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        seen.insert(id.clone());
        let mut stack = vec![id];
        while let Some(p) = stack.pop() {
            for g in &gens_u8 {
                let q = compose_perm(&p, g);
                if seen.insert(q.clone()) {
                    if seen.len() > MAX_PERMUTATION_GROUP_ORDER {
                        return Err(AlgebraError::GroupTooLarge);
                    }
                    stack.push(q);
                }
            }
        }
        let mut elements: Vec<Vec<u8>> = seen.into_iter().collect();
        elements.sort();
        let index: HashMap<Vec<u8>, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let n = elements.len();
        let mut mul_table = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                mul_table[i * n + j] = index[&compose_perm(a, b)];
            }
        }
        let inverses = elements
            .iter()
            .map(|p| {
                let mut q = vec![0u8; degree];
                for (i, &x) in p.iter().enumerate() {
                    q[x as usize] = i as u8;
                }
                index[&q]
            })
            .collect();
        let gens = gens_u8.iter().map(|g| Elem(index[g] as usize)).collect();
        Ok(PermutationGroup {
            degree,
            elements,
            mul_table,
            inverses,
            gens,
        })
    }

    /// The full symmetric group `Σ(n)`, generated by a transposition and an `n`-cycle.
    pub fn symmetric(n: usize) -> Result<Self, AlgebraError> {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens.push(swap);
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            gens.push(cycle);
        }
        Self::generated_by(n, &gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn permutation(&self, a: Elem) -> &[u8] {
        &self.elements[a.0]
    }

    pub fn index_of(&self, perm: &[usize]) -> Option<Elem> {
        let p: Vec<u8> = perm.iter().map(|&x| x as u8).collect();
        self.elements.binary_search(&p).ok().map(Elem)
    }
}

impl FiniteGroup for PermutationGroup {
    fn order(&self) -> usize {
        self.elements.len()
    }
    fn identity(&self) -> Elem {
        // The identity permutation is lexicographically smallest.
        Elem(0)
    }
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul_table[a.0 * self.elements.len() + b.0] as usize)
    }
    fn inv(&self, a: Elem) -> Elem {
        Elem(self.inverses[a.0] as usize)
    }
    fn generators(&self) -> Vec<Elem> {
        self.gens.clone()
    }
    fn element_name(&self, a: Elem) -> String {
        let parts: Vec<String> = self.elements[a.0].iter().map(|x| x.to_string()).collect();
        format!("p[{}]", parts.join(","))
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Apply `a` first, then `b`.
fn compose_perm(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().map(|&x| b[x as usize]).collect()
}
