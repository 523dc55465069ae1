use super::{Groupoid, GroupoidError, GroupoidRepr, Mor};

/// The full subgroupoid on a set of objects: all morphisms between them.
/// Objects are renumbered in increasing parent order.
#[derive(Debug)]
pub struct FullSubgroupoid {
    parent: Groupoid,
    objects: Vec<usize>,
    index: Vec<u32>,
    out: Vec<Vec<u64>>,
}

const ABSENT: u32 = u32::MAX;

impl FullSubgroupoid {
    pub fn new(parent: &Groupoid, objects: &[usize]) -> Result<Self, GroupoidError> {
        let count = parent.object_count();
        let mut objects = objects.to_vec();
        objects.sort_unstable();
        objects.dedup();
        if let Some(&bad) = objects.iter().find(|&&a| a >= count) {
            return Err(GroupoidError::ObjectOutOfRange { object: bad, count });
        }
        let mut index = vec![ABSENT; count];
        for (i, &a) in objects.iter().enumerate() {
            index[a] = i as u32;
        }
        let out = objects
            .iter()
            .map(|&a| {
                parent
                    .out_morphisms(a)
                    .filter(|&m| index[parent.target(m)] != ABSENT)
                    .map(|m| m.index)
                    .collect()
            })
            .collect();
        Ok(FullSubgroupoid {
            parent: parent.clone(),
            objects,
            index,
            out,
        })
    }

    pub fn into_groupoid(self) -> Groupoid {
        Groupoid::new(self)
    }

    pub fn parent_object(&self, a: usize) -> usize {
        self.objects[a]
    }

    pub fn to_parent(&self, m: Mor) -> Mor {
        Mor::new(self.objects[m.source], self.out[m.source][m.index as usize])
    }

    pub fn from_parent(&self, m: Mor) -> Option<Mor> {
        let a = self.index[m.source];
        if a == ABSENT || self.index[self.parent.target(m)] == ABSENT {
            return None;
        }
        let a = a as usize;
        let i = self.out[a].binary_search(&m.index).ok()?;
        Some(Mor::new(a, i as u64))
    }
}

impl GroupoidRepr for FullSubgroupoid {
    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn out_degree(&self, a: usize) -> u64 {
        self.out[a].len() as u64
    }
    fn target(&self, m: Mor) -> usize {
        self.index[self.parent.target(self.to_parent(m))] as usize
    }
    fn identity(&self, a: usize) -> Mor {
        self.from_parent(self.parent.identity(self.objects[a]))
            .expect("identity stays inside")
    }
    fn compose(&self, first: Mor, second: Mor) -> Mor {
        let c = self.parent.compose(self.to_parent(first), self.to_parent(second));
        self.from_parent(c).expect("full subgroupoid is closed")
    }
    fn inverse(&self, m: Mor) -> Mor {
        self.from_parent(self.parent.inverse(self.to_parent(m)))
            .expect("full subgroupoid is closed")
    }
    fn object_name(&self, a: usize) -> String {
        self.parent.object_name(self.objects[a])
    }
    fn morphism_name(&self, m: Mor) -> String {
        self.parent.morphism_name(self.to_parent(m))
    }
}

/// `1{d}`: the single object `d` with only its identity.
#[derive(Debug)]
pub struct UnitSubgroupoid {
    parent: Groupoid,
    object: usize,
}

impl UnitSubgroupoid {
    pub fn new(parent: &Groupoid, object: usize) -> Result<Self, GroupoidError> {
        if object >= parent.object_count() {
            return Err(GroupoidError::ObjectOutOfRange {
                object,
                count: parent.object_count(),
            });
        }
        Ok(UnitSubgroupoid {
            parent: parent.clone(),
            object,
        })
    }

    pub fn into_groupoid(self) -> Groupoid {
        Groupoid::new(self)
    }

    pub fn parent_object(&self) -> usize {
        self.object
    }
}

impl GroupoidRepr for UnitSubgroupoid {
    fn object_count(&self) -> usize {
        1
    }
    fn out_degree(&self, _a: usize) -> u64 {
        1
    }
    fn target(&self, _m: Mor) -> usize {
        0
    }
    fn identity(&self, _a: usize) -> Mor {
        Mor::new(0, 0)
    }
    fn compose(&self, _first: Mor, _second: Mor) -> Mor {
        Mor::new(0, 0)
    }
    fn inverse(&self, m: Mor) -> Mor {
        m
    }
    fn object_name(&self, _a: usize) -> String {
        self.parent.object_name(self.object)
    }
}

/// `G1 ⊔ G2 ⊔ …`, objects numbered part by part.
#[derive(Debug)]
pub struct DisjointUnion {
    parts: Vec<Groupoid>,
    offsets: Vec<usize>,
    total: usize,
}

impl DisjointUnion {
    pub fn new(parts: Vec<Groupoid>) -> Self {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut total = 0;
        for p in &parts {
            offsets.push(total);
            total += p.object_count();
        }
        DisjointUnion { parts, offsets, total }
    }

    pub fn into_groupoid(self) -> Groupoid {
        Groupoid::new(self)
    }

    pub fn parts(&self) -> &[Groupoid] {
        &self.parts
    }

    /// `(part, object within part)`.
    pub fn locate(&self, a: usize) -> (usize, usize) {
        let p = self.offsets.partition_point(|&o| o <= a) - 1;
        // Skip empty parts sharing the same offset.
        let p = (p..self.parts.len())
            .find(|&q| a < self.offsets[q] + self.parts[q].object_count())
            .expect("object in range");
        (p, a - self.offsets[p])
    }

    pub fn offset(&self, part: usize) -> usize {
        self.offsets[part]
    }

    fn local(&self, m: Mor) -> (usize, Mor) {
        let (p, a) = self.locate(m.source);
        (p, Mor::new(a, m.index))
    }

    fn lift(&self, p: usize, m: Mor) -> Mor {
        Mor::new(m.source + self.offsets[p], m.index)
    }
}

impl GroupoidRepr for DisjointUnion {
    fn object_count(&self) -> usize {
        self.total
    }
    fn out_degree(&self, a: usize) -> u64 {
        let (p, a) = self.locate(a);
        self.parts[p].out_degree(a)
    }
    fn target(&self, m: Mor) -> usize {
        let (p, m) = self.local(m);
        self.parts[p].target(m) + self.offsets[p]
    }
    fn identity(&self, a: usize) -> Mor {
        let (p, a) = self.locate(a);
        self.lift(p, self.parts[p].identity(a))
    }
    fn compose(&self, first: Mor, second: Mor) -> Mor {
        let (p, f) = self.local(first);
        let (_, g) = self.local(second);
        self.lift(p, self.parts[p].compose(f, g))
    }
    fn inverse(&self, m: Mor) -> Mor {
        let (p, m) = self.local(m);
        self.lift(p, self.parts[p].inverse(m))
    }
    fn generators(&self, a: usize) -> Vec<Mor> {
        let (p, a) = self.locate(a);
        self.parts[p]
            .generators(a)
            .into_iter()
            .map(|m| self.lift(p, m))
            .collect()
    }
    fn object_name(&self, a: usize) -> String {
        let (p, a) = self.locate(a);
        format!("{p}.{}", self.parts[p].object_name(a))
    }
    fn morphism_name(&self, m: Mor) -> String {
        let (p, m) = self.local(m);
        format!("{p}.{}", self.parts[p].morphism_name(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, AbelianGroup};
    use crate::groupoid::{materialize, ActionGroupoid};

    fn b(n: usize) -> Groupoid {
        ActionGroupoid::delooping(&AbelianGroup::cyclic(n).unwrap()).into_groupoid()
    }

    #[test]
    fn disjoint_union_adds_euler_characteristics() {
        let u = DisjointUnion::new(vec![b(2), b(2), b(3)]).into_groupoid();
        assert_eq!(u.euler_characteristic(), rational(2, 2) + rational(1, 3));
        assert_eq!(u.component_count(), 3);
        let empty = ActionGroupoid::discrete(0).into_groupoid();
        let u = DisjointUnion::new(vec![b(4), empty.clone(), empty]).into_groupoid();
        assert_eq!(u.euler_characteristic(), rational(1, 4));
        let pts = DisjointUnion::new(vec![ActionGroupoid::discrete(1).into_groupoid(); 2]).into_groupoid();
        assert_eq!(pts.euler_characteristic(), rational(2, 1));
    }

    #[test]
    fn disjoint_union_with_empty_middle_part() {
        let empty = ActionGroupoid::discrete(0).into_groupoid();
        let u = DisjointUnion::new(vec![b(2), empty, b(3)]);
        assert_eq!(u.locate(1), (2, 0));
        let g = u.into_groupoid();
        assert!(materialize(&g).unwrap().validate().is_empty());
    }

    #[test]
    fn full_subgroupoids() {
        let g = ActionGroupoid::regular(&AbelianGroup::cyclic(4).unwrap()).into_groupoid();
        let all = FullSubgroupoid::new(&g, &[0, 1, 2, 3]).unwrap().into_groupoid();
        assert_eq!(all.euler_characteristic(), g.euler_characteristic());
        let none = FullSubgroupoid::new(&g, &[]).unwrap().into_groupoid();
        assert_eq!(none.euler_characteristic(), rational(0, 1));
        let two = FullSubgroupoid::new(&g, &[1, 3]).unwrap().into_groupoid();
        assert_eq!(two.component_count(), 1);
        assert_eq!(two.euler_characteristic(), rational(1, 1));
        assert!(materialize(&two).unwrap().validate().is_empty());
        assert!(FullSubgroupoid::new(&g, &[4]).is_err());
    }

    #[test]
    fn unit_subgroupoid_is_a_point() {
        let u = UnitSubgroupoid::new(&b(3), 0).unwrap().into_groupoid();
        assert_eq!(u.euler_characteristic(), rational(1, 1));
        assert!(materialize(&u).unwrap().validate().is_empty());
    }
}
