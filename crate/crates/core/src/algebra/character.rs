use num_integer::Integer;
use num_traits::Zero;

use super::{AbelianGroup, AlgebraError, CyclotomicNumber, Elem, GroupRingElement, Rational};

/// A character `ρ: G → Q(ζ_m)^×` with `m = lcm(n_i)`, given by exponents:
/// `ρ(g) = ζ_m^{Σ e_i g_i (m / n_i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    group: AbelianGroup,
    exponents: Vec<usize>,
    conductor: usize,
}

impl Character {
    pub fn new(group: &AbelianGroup, exponents: &[i64]) -> Result<Self, AlgebraError> {
        if exponents.len() != group.rank() {
            return Err(AlgebraError::ArityMismatch {
                expected: group.rank(),
                found: exponents.len(),
            });
        }
        let conductor = group.cyclic_orders().iter().fold(1usize, |acc, &n| acc.lcm(&n));
        let exponents = exponents
            .iter()
            .zip(group.cyclic_orders())
            .map(|(&e, &n)| e.rem_euclid(n as i64) as usize)
            .collect();
        Ok(Character {
            group: group.clone(),
            exponents,
            conductor,
        })
    }

    pub fn trivial(group: &AbelianGroup) -> Self {
        Self::new(group, &vec![0; group.rank()]).expect("arity matches")
    }

    /// For a cyclic group: the character sending the generator to `ζ_n`.
    pub fn standard(group: &AbelianGroup) -> Self {
        Self::new(group, &vec![1; group.rank()]).expect("arity matches")
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    /// The exponent `k` with `ρ(g) = ζ_m^k`, in `0..m`.
    pub fn exponent_of(&self, g: Elem) -> usize {
        let m = self.conductor;
        self.group
            .exponents(g)
            .iter()
            .zip(&self.exponents)
            .zip(self.group.cyclic_orders())
            .map(|((&gi, &ei), &ni)| gi * ei % ni * (m / ni))
            .sum::<usize>()
            % m
    }

    pub fn value(&self, g: Elem) -> CyclotomicNumber {
        CyclotomicNumber::zeta_power(self.conductor, self.exponent_of(g) as i64)
            .expect("conductor is positive")
    }

    pub fn is_injective(&self) -> bool {
        self.group.elements().filter(|&g| self.exponent_of(g) == 0).count() == 1
    }

    /// Whether `ρ` is trivial on every element of `subset`.
    pub fn trivial_on(&self, subset: &[Elem]) -> bool {
        subset.iter().all(|&g| self.exponent_of(g) == 0)
    }

    /// The `Q`-linear extension `Σ c_g ρ(g)`.
    pub fn apply(&self, a: &GroupRingElement) -> Result<CyclotomicNumber, AlgebraError> {
        if a.group() != &self.group {
            return Err(AlgebraError::GroupMismatch);
        }
        let mut coeffs = vec![Rational::zero(); self.conductor];
        for (g, c) in a.terms() {
            coeffs[self.exponent_of(g)] += c;
        }
        CyclotomicNumber::from_coefficients(self.conductor, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integer, rational};
    use proptest::prelude::*;

    #[test]
    fn z4_generator_maps_to_i() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        let rho = Character::standard(&z4);
        assert!(rho.is_injective());
        let v = rho.apply(&GroupRingElement::basis(&z4, Elem(1))).unwrap();
        assert_eq!(v, CyclotomicNumber::zeta_power(4, 1).unwrap());
    }

    #[test]
    fn injective_character_kills_nontrivial_averages() {
        let g = AbelianGroup::new(&[2, 3]).unwrap();
        let rho = Character::new(&g, &[1, 1]).unwrap();
        assert!(rho.is_injective());
        for u in g.subgroups() {
            let bar = GroupRingElement::average_idempotent(&g, &u).unwrap();
            let v = rho.apply(&bar).unwrap();
            if u.len() > 1 {
                assert!(v.is_zero());
            } else {
                assert_eq!(v.as_rational(), Some(integer(1)));
            }
        }
    }

    #[test]
    fn trivial_character_is_augmentation() {
        let g = AbelianGroup::new(&[2, 2]).unwrap();
        let a = GroupRingElement::from_terms(&g, [(Elem(1), rational(3, 2)), (Elem(3), integer(-5))]);
        let v = Character::trivial(&g).apply(&a).unwrap();
        assert_eq!(v.as_rational(), Some(a.augmentation()));
    }

    #[test]
    fn geometric_sums_vanish() {
        let g = AbelianGroup::new(&[4, 2]).unwrap();
        for e0 in 0..4 {
            for e1 in 0..2 {
                let rho = Character::new(&g, &[e0, e1]).unwrap();
                for u in g.subgroups() {
                    let total = rho.apply(&GroupRingElement::sum_of(&g, u.iter().copied())).unwrap();
                    if rho.trivial_on(&u) {
                        assert_eq!(total.as_rational(), Some(integer(u.len() as i64)));
                    } else {
                        assert!(total.is_zero());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn character_is_a_ring_map(
            e0 in 0i64..6, e1 in 0i64..2,
            a in proptest::collection::vec((0usize..12, -3i64..4, 1i64..3), 0..4),
            b in proptest::collection::vec((0usize..12, -3i64..4, 1i64..3), 0..4),
        ) {
            let g = AbelianGroup::new(&[6, 2]).unwrap();
            let rho = Character::new(&g, &[e0, e1]).unwrap();
            let mk = |v: &Vec<(usize, i64, i64)>| GroupRingElement::from_terms(
                &g, v.iter().map(|&(x, p, q)| (Elem(x), rational(p, q))));
            let (a, b) = (mk(&a), mk(&b));
            let lhs = rho.apply(&a.mul(&b).unwrap()).unwrap();
            let rhs = rho.apply(&a).unwrap().mul(&rho.apply(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = rho.apply(&a.add(&b).unwrap()).unwrap();
            let rhs = rho.apply(&a).unwrap().add(&rho.apply(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
