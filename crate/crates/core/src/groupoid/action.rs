use std::fmt;
use std::sync::Arc;

use super::{Groupoid, GroupoidError, GroupoidRepr, Mor};
use crate::algebra::{AbelianGroup, Elem, FiniteGroup};

/// The action groupoid `X//G` of a right `G`-set `X`.
///
/// Objects are the points of `X`; a morphism `x1 → x2` is an element `g`
/// with `x2·g = x1`. The morphism out of `x` with index `g` therefore lands
/// at `x·g⁻¹`, and the composite of `g` followed by `h` is `h·g`.
#[derive(Clone)]
pub struct ActionGroupoid {
    group: Arc<dyn FiniteGroup>,
    size: usize,
    action: Arc<Vec<u32>>,
    names: Option<Arc<Vec<String>>>,
}

impl fmt::Debug for ActionGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ActionGroupoid")
            .field("group", &self.group)
            .field("points", &self.size)
            .finish()
    }
}

impl ActionGroupoid {
    /// Tabulates the action `(x, g) ↦ x·g` and checks the action axioms.
    /// Compatibility is checked against generators only, which suffices
    /// because every element is a product of generators.
    pub fn new(
        group: Arc<dyn FiniteGroup>,
        size: usize,
        act: impl Fn(usize, Elem) -> usize,
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupoidError> {
        let order = group.order();
        let mut action = vec![0u32; size * order];
        for x in 0..size {
            for g in 0..order {
                let y = act(x, Elem(g));
                if y >= size {
                    return Err(GroupoidError::InvalidAction(format!(
                        "point {x} acted on by element {g} leaves the carrier"
                    )));
                }
                action[x * order + g] = y as u32;
            }
        }
        if let Some(n) = &names {
            if n.len() != size {
                return Err(GroupoidError::InvalidAction(format!(
                    "{} names for {size} points",
                    n.len()
                )));
            }
        }
        let out = ActionGroupoid {
            group,
            size,
            action: Arc::new(action),
            names: names.map(Arc::new),
        };
        out.check_axioms()?;
        Ok(out)
    }

    fn check_axioms(&self) -> Result<(), GroupoidError> {
        let e = self.group.identity();
        let gens = self.group.generators();
        for x in 0..self.size {
            if self.act(x, e) != x {
                return Err(GroupoidError::InvalidAction(format!(
                    "identity moves point {}",
                    self.point_name(x)
                )));
            }
            for g in 0..self.group.order() {
                let g = Elem(g);
                for &h in &gens {
                    if self.act(self.act(x, g), h) != self.act(x, self.group.mul(g, h)) {
                        return Err(GroupoidError::InvalidAction(format!(
                            "(x·g)·h != x·(gh) at x={}, g={}, h={}",
                            self.point_name(x),
                            self.group.element_name(g),
                            self.group.element_name(h)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `BG`: one point with the trivial action.
    pub fn delooping(group: &AbelianGroup) -> Self {
        Self::delooping_of(Arc::new(group.clone()))
    }

    pub fn delooping_of(group: Arc<dyn FiniteGroup>) -> Self {
        Self::new(group, 1, |_, _| 0, Some(vec!["*".to_string()])).expect("trivial action")
    }

    /// The discrete groupoid on `n` objects.
    pub fn discrete(n: usize) -> Self {
        Self::new(Arc::new(AbelianGroup::trivial()), n, |x, _| x, None).expect("trivial action")
    }

    /// `EG`: the group acting on itself by right translation.
    pub fn regular(group: &AbelianGroup) -> Self {
        let g = group.clone();
        let names = group.elements().map(|x| group.render(x)).collect();
        Self::new(Arc::new(group.clone()), group.order(), move |x, k| g.add(Elem(x), k).0, Some(names))
            .expect("regular action")
    }

    /// The coset groupoid `H\G` for a subgroup `H` of an abelian `G`: `G`
    /// acting on the cosets `H+g` by translation. Cosets are listed in order
    /// of their minimal element.
    pub fn coset(group: &AbelianGroup, subgroup: &[Elem]) -> Result<Self, GroupoidError> {
        let h = group
            .check_subgroup(subgroup)
            .map_err(|e| GroupoidError::InvalidAction(e.to_string()))?;
        let (coset_of, reps) = cosets(group, &h);
        let names = reps.iter().map(|&r| format!("H+{}", group.render(r))).collect();
        let g = group.clone();
        Self::new(
            Arc::new(group.clone()),
            reps.len(),
            move |c, k| coset_of[g.add(reps[c], k).0],
            Some(names),
        )
    }

    pub fn group(&self) -> &Arc<dyn FiniteGroup> {
        &self.group
    }

    pub fn point_count(&self) -> usize {
        self.size
    }

    /// `x·g`.
    pub fn act(&self, x: usize, g: Elem) -> usize {
        self.action[x * self.group.order() + g.0] as usize
    }

    pub fn point_name(&self, x: usize) -> String {
        match &self.names {
            Some(n) => n[x].clone(),
            None => x.to_string(),
        }
    }

    /// The group element carried by a morphism.
    pub fn element(&self, m: Mor) -> Elem {
        Elem(m.index as usize)
    }

    /// The morphism out of `x` labelled by `g`.
    pub fn morphism(&self, x: usize, g: Elem) -> Mor {
        Mor::new(x, g.0 as u64)
    }

    pub fn into_groupoid(self) -> Groupoid {
        Groupoid::new(self)
    }
}

/// Assigns each element its coset index; returns the map and the minimal
/// representative of each coset.
pub(crate) fn cosets(group: &AbelianGroup, subgroup: &[Elem]) -> (Vec<usize>, Vec<Elem>) {
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for g in group.elements() {
        if coset_of[g.0] != usize::MAX {
            continue;
        }
        for &h in subgroup {
            coset_of[group.add(g, h).0] = reps.len();
        }
        reps.push(g);
    }
    (coset_of, reps)
}

impl GroupoidRepr for ActionGroupoid {
    fn object_count(&self) -> usize {
        self.size
    }
    fn out_degree(&self, _a: usize) -> u64 {
        self.group.order() as u64
    }
    fn target(&self, m: Mor) -> usize {
        self.act(m.source, self.group.inv(Elem(m.index as usize)))
    }
    fn identity(&self, a: usize) -> Mor {
        Mor::new(a, self.group.identity().0 as u64)
    }
    fn compose(&self, first: Mor, second: Mor) -> Mor {
        let g = Elem(first.index as usize);
        let h = Elem(second.index as usize);
        Mor::new(first.source, self.group.mul(h, g).0 as u64)
    }
    fn inverse(&self, m: Mor) -> Mor {
        let g = Elem(m.index as usize);
        Mor::new(self.target(m), self.group.inv(g).0 as u64)
    }
    fn generators(&self, a: usize) -> Vec<Mor> {
        self.group
            .generators()
            .into_iter()
            .map(|g| Mor::new(a, g.0 as u64))
            .collect()
    }
    fn object_name(&self, a: usize) -> String {
        self.point_name(a)
    }
    fn morphism_name(&self, m: Mor) -> String {
        format!(
            "{}:{}",
            self.point_name(m.source),
            self.group.element_name(Elem(m.index as usize))
        )
    }
    fn as_delooping(&self) -> Option<&AbelianGroup> {
        if self.size == 1 {
            self.group.as_abelian()
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, PermutationGroup};
    use crate::groupoid::materialize;

    #[test]
    fn coset_groupoid_hom_sets_are_cosets() {
        let g = AbelianGroup::cyclic(6).unwrap();
        let h = [Elem(0), Elem(3)];
        let cg = ActionGroupoid::coset(&g, &h).unwrap().into_groupoid();
        assert_eq!(cg.object_count(), 3);
        assert_eq!(cg.component_count(), 1);
        assert_eq!(cg.euler_characteristic(), rational(1, 2));
        // hom(H+g1, H+g2) = g1 - g2 + H
        let hom: Vec<usize> = cg.hom(2, 0).iter().map(|m| m.index as usize).collect();
        assert_eq!(hom, vec![2, 5]);
    }

    #[test]
    fn coset_extremes() {
        let g = AbelianGroup::new(&[2, 2]).unwrap();
        let all: Vec<Elem> = g.elements().collect();
        let bg = ActionGroupoid::coset(&g, &all).unwrap().into_groupoid();
        assert_eq!(bg.object_count(), 1);
        assert_eq!(bg.euler_characteristic(), rational(1, 4));
        let eg = ActionGroupoid::coset(&g, &[Elem(0)]).unwrap().into_groupoid();
        assert_eq!(eg.euler_characteristic(), rational(1, 1));
        assert!(ActionGroupoid::coset(&g, &[Elem(1), Elem(2)]).is_err());
    }

    #[test]
    fn broken_action_is_rejected() {
        let z3 = Arc::new(AbelianGroup::cyclic(3).unwrap());
        // Swapping two of three points is not a Z3 action.
        let res = ActionGroupoid::new(z3, 3, |x, g| if g.0 == 0 { x } else { [1, 0, 2][x] }, None);
        assert!(matches!(res, Err(GroupoidError::InvalidAction(_))));
    }

    #[test]
    fn permutation_group_acting_on_points() {
        let s3 = Arc::new(PermutationGroup::symmetric(3).unwrap());
        let s = s3.clone();
        let a = ActionGroupoid::new(s3, 3, move |x, g| s.permutation(g)[x] as usize, None)
            .unwrap()
            .into_groupoid();
        assert_eq!(a.component_count(), 1);
        assert_eq!(a.aut_order(0), 2);
        assert_eq!(a.euler_characteristic(), rational(1, 2));
        let t = materialize(&a).unwrap();
        assert!(t.validate().is_empty());
    }

    #[test]
    fn regular_action_materializes_to_eg() {
        let g = AbelianGroup::cyclic(4).unwrap();
        let eg = ActionGroupoid::regular(&g).into_groupoid();
        let t = materialize(&eg).unwrap();
        assert!(t.validate().is_empty());
        assert_eq!(t.into_groupoid().unwrap().euler_characteristic(), rational(1, 1));
    }
}
