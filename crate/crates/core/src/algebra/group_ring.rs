use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{integer, render_rational, AbelianGroup, AlgebraError, Elem, Rational};

/// A finitely supported rational combination of elements of an abelian group.
///
/// Zero coefficients are never stored, so structural equality is equality in
/// `QG`. Terms are kept in element-index order, which is lexicographic in the
/// exponent tuples.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    group: AbelianGroup,
    terms: BTreeMap<Elem, Rational>,
}

impl GroupRingElement {
    pub fn zero(group: &AbelianGroup) -> Self {
        GroupRingElement {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The unit `1·e`.
    pub fn one(group: &AbelianGroup) -> Self {
        Self::monomial(group, group.zero(), Rational::one())
    }

    pub fn monomial(group: &AbelianGroup, g: Elem, coefficient: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(g, coefficient);
        }
        GroupRingElement {
            group: group.clone(),
            terms,
        }
    }

    /// The group element `g` itself.
    pub fn basis(group: &AbelianGroup, g: Elem) -> Self {
        Self::monomial(group, g, Rational::one())
    }

    /// Builds an element from `(g, coefficient)` pairs, summing repeats.
    pub fn from_terms(group: &AbelianGroup, terms: impl IntoIterator<Item = (Elem, Rational)>) -> Self {
        let mut out = Self::zero(group);
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    /// `Σ_{g ∈ subset} g`, counting repeats.
    pub fn sum_of(group: &AbelianGroup, subset: impl IntoIterator<Item = Elem>) -> Self {
        Self::from_terms(group, subset.into_iter().map(|g| (g, Rational::one())))
    }

    /// `Ū = (1/|U|) Σ_{g ∈ U} g` for a subgroup `U`.
    pub fn average_idempotent(group: &AbelianGroup, subgroup: &[Elem]) -> Result<Self, AlgebraError> {
        let u = group.check_subgroup(subgroup)?;
        let weight = Rational::new(1.into(), (u.len() as i64).into());
        Ok(Self::from_terms(group, u.into_iter().map(|g| (g, weight.clone()))))
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elem, &Rational)> {
        self.terms.iter().map(|(g, c)| (*g, c))
    }

    pub fn coefficient(&self, g: Elem) -> Rational {
        self.terms.get(&g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// The augmentation `Σ coefficients`.
    pub fn augmentation(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn add_term(&mut self, g: Elem, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    fn same_group(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(AlgebraError::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(*g, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (*g, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.group);
        }
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (*g, c * q)).collect(),
        }
    }

    /// Convolution product: the coefficient of `g` is `Σ_{g2 + g1 = g} a(g1) b(g2)`.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let mut out = Self::zero(&self.group);
        for (g1, a) in &self.terms {
            for (g2, b) in &other.terms {
                out.add_term(self.group.add(*g2, *g1), a * b);
            }
        }
        Ok(out)
    }

    /// Applies a group homomorphism to the support.
    pub fn map(&self, f: impl Fn(Elem) -> Elem, target: &AbelianGroup) -> Self {
        Self::from_terms(target, self.terms.iter().map(|(g, c)| (f(*g), c.clone())))
    }

    /// Canonical rendering, e.g. `1/2*g(0) + 1/2*g(1)`; zero renders as `0`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(g, c)| format!("{}*{}", render_rational(c), self.group.render(*g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `n·e` for an integer `n`.
    pub fn integer(group: &AbelianGroup, n: i64) -> Self {
        Self::monomial(group, group.zero(), integer(n))
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement({})", self.render())
    }
}
