//! Seeded generators of small groupoids, functors, G-spans, cospans and
//! 2-cells. All randomness flows from a caller-supplied RNG, so a seed
//! reproduces every instance.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AbelianGroup, Elem};
use crate::constructions::{delooping, homotopy_pullback, Functor};
use crate::groupoid::{ActionGroupoid, DisjointUnion, Groupoid, Mor};
use crate::gspan::{GSpan, SpanError, SpanMorphism};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size bounds for generated instances.
#[derive(Clone, Copy, Debug)]
pub struct RandomConfig {
    /// Objects in a base groupoid `S`, `T`, `U`.
    pub max_objects: usize,
    /// Objects in a generated apex.
    pub max_apex_objects: usize,
    pub max_group_order: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_objects: 8,
            max_apex_objects: 6,
            max_group_order: 6,
        }
    }
}

const GROUPS: &[&[usize]] = &[&[1], &[2], &[3], &[4], &[2, 2], &[5], &[6], &[2, 3]];
const AUTOMORPHISMS: &[&[usize]] = &[&[1], &[1], &[2], &[3], &[2, 2], &[4]];

pub fn random_group(rng: &mut impl Rng, max_order: usize) -> AbelianGroup {
    let fitting: Vec<&[usize]> = GROUPS
        .iter()
        .copied()
        .filter(|o| o.iter().product::<usize>() <= max_order.max(1))
        .collect();
    AbelianGroup::new(fitting.choose(rng).expect("the trivial group always fits")).expect("valid orders")
}

/// A connected groupoid with `m` objects and automorphism group `K`: the
/// action of `K × Z_m` on `Z_m` by translation.
fn connected(k: &AbelianGroup, m: usize, prefix: &str) -> Groupoid {
    let zm = AbelianGroup::cyclic(m).expect("m ≥ 1");
    let acting = k.product(&zm);
    let (k2, zm2) = (k.clone(), zm.clone());
    let names = (0..m).map(|x| format!("{prefix}{x}")).collect();
    ActionGroupoid::new(
        Arc::new(acting),
        m,
        move |x, e| (x + k2.unpair(&zm2, e).1 .0) % m,
        Some(names),
    )
    .expect("translation is an action")
    .into_groupoid()
}

/// A disjoint union of connected groupoids with at most `max_objects`
/// objects in total (and at least one).
pub fn random_groupoid(rng: &mut impl Rng, max_objects: usize) -> Groupoid {
    let total = rng.gen_range(1..=max_objects.max(1));
    let mut parts = Vec::new();
    let mut used = 0;
    while used < total {
        let m = rng.gen_range(1..=(total - used).min(3));
        let k = AbelianGroup::new(AUTOMORPHISMS.choose(rng).expect("nonempty")).expect("valid orders");
        let prefix = ((b'a' + parts.len() as u8 % 26) as char).to_string();
        parts.push(connected(&k, m, &prefix));
        used += m;
    }
    DisjointUnion::new(parts).into_groupoid()
}

/// The loop `τ_x ; m ; τ_y⁻¹` at the base object.
fn loop_at_base(g: &Groupoid, tree: &HashMap<usize, Mor>, m: Mor) -> Mor {
    let back = g.inverse(tree[&g.target(m)]);
    g.compose(g.compose(tree[&m.source], m), back)
}

/// Extends `gens[i] ↦ images[i]` along the Cayley graph of the generated
/// subgroup; `None` if two paths disagree.
fn extend_homomorphism(source: &Groupoid, target: &Groupoid, base: usize, y: usize, gens: &[Mor], images: &[Mor]) -> Option<HashMap<Mor, Mor>> {
    let mut table = HashMap::from([(source.identity(base), target.identity(y))]);
    let mut queue = VecDeque::from([source.identity(base)]);
    while let Some(l) = queue.pop_front() {
        let fl = table[&l];
        for (s, c) in gens.iter().zip(images) {
            let (next, image) = (source.compose(l, *s), target.compose(fl, *c));
            match table.get(&next) {
                Some(&known) if known != image => return None,
                Some(_) => {}
                None => {
                    table.insert(next, image);
                    queue.push_back(next);
                }
            }
        }
    }
    Some(table)
}

/// A random functor, built one component at a time: the base object goes to
/// a random object `y`, tree morphisms go to random morphisms out of `y`, and
/// the automorphism group of the base maps through a random homomorphism
/// into `Aut(y)` found by search (the trivial one always qualifies).
pub fn random_functor(rng: &mut impl Rng, source: &Groupoid, target: &Groupoid) -> Result<Functor, SpanError> {
    if source.object_count() > 0 && target.object_count() == 0 {
        return Err(SpanError::Shape("no functor into the empty groupoid".into()));
    }
    let mut objects = vec![0; source.object_count()];
    let mut morphisms = HashMap::new();
    for rep in source.components().representatives() {
        let mut tree = HashMap::from([(rep, source.identity(rep))]);
        let mut queue = VecDeque::from([rep]);
        while let Some(a) = queue.pop_front() {
            for m in source.out_morphisms(a) {
                let b = source.target(m);
                if !tree.contains_key(&b) {
                    tree.insert(b, source.compose(tree[&a], m));
                    queue.push_back(b);
                }
            }
        }
        let y = rng.gen_range(0..target.object_count());
        let mut tree_image = HashMap::from([(rep, target.identity(y))]);
        let mut members: Vec<usize> = tree.keys().copied().collect();
        members.sort_unstable();
        for &x in &members {
            if x != rep {
                tree_image.insert(x, Mor::new(y, rng.gen_range(0..target.out_degree(y))));
            }
            objects[x] = target.target(tree_image[&x]);
        }

        let mut gens: Vec<Mor> = Vec::new();
        let mut closure: HashSet<Mor> = HashSet::from([source.identity(rep)]);
        for &x in &members {
            for m in source.out_morphisms(x) {
                let l = loop_at_base(source, &tree, m);
                if !closure.contains(&l) {
                    gens.push(l);
                    let ids = vec![target.identity(y); gens.len()];
                    closure = extend_homomorphism(source, target, rep, y, &gens, &ids)
                        .expect("the trivial map is a homomorphism")
                        .into_keys()
                        .collect();
                }
            }
        }
        let mut candidates = target.hom(y, y);
        let mut images = Vec::new();
        let mut psi = HashMap::from([(source.identity(rep), target.identity(y))]);
        for i in 0..gens.len() {
            candidates.shuffle(rng);
            for &c in &candidates {
                images.push(c);
                if let Some(t) = extend_homomorphism(source, target, rep, y, &gens[..=i], &images) {
                    psi = t;
                    break;
                }
                images.pop();
            }
            if images.len() <= i {
                break;
            }
        }
        if images.len() < gens.len() {
            images.resize(gens.len(), target.identity(y));
            psi = extend_homomorphism(source, target, rep, y, &gens, &images).expect("trivial extension");
        }
        for &x in &members {
            for m in source.out_morphisms(x) {
                let image_loop = psi[&loop_at_base(source, &tree, m)];
                let into = target.inverse(tree_image[&x]);
                let out = tree_image[&source.target(m)];
                morphisms.insert(m, target.compose(target.compose(into, image_loop), out));
            }
        }
    }
    Ok(Functor::from_tables(source, target, objects, morphisms)?)
}

/// The data `S`, `T`, `H`, `V` a span is built over.
#[derive(Clone, Debug)]
pub struct SpanBase {
    pub group: AbelianGroup,
    pub bg: Groupoid,
}

impl SpanBase {
    pub fn random(rng: &mut impl Rng, cfg: &RandomConfig) -> Self {
        let group = random_group(rng, cfg.max_group_order);
        let bg = delooping(&group);
        SpanBase { group, bg }
    }

    /// A random groupoid with a random functor to `BG`.
    pub fn random_leg(&self, rng: &mut impl Rng, cfg: &RandomConfig) -> Result<Functor, SpanError> {
        let g = random_groupoid(rng, cfg.max_objects);
        random_functor(rng, &g, &self.bg)
    }
}

/// A random G-span over `h: S → BG` and `v: T → BG`: a random apex mapped by
/// a random functor into the universal apex `S ×_BG T`, with legs and labels
/// pulled back along it.
pub fn random_span(rng: &mut impl Rng, h: &Functor, v: &Functor, max_apex_objects: usize) -> Result<GSpan, SpanError> {
    let pb = homotopy_pullback(h, v)?;
    let apex = random_groupoid(rng, max_apex_objects);
    let phi = random_functor(rng, &apex, &pb.groupoid)?;
    let labels = apex
        .objects()
        .map(|x| Elem(pb.data.decode(phi.on_object(x)).1.index as usize))
        .collect();
    GSpan::new(&phi.then(&pb.p1)?, &phi.then(&pb.p2)?, h, v, labels)
}

/// Two spans `S → T → U` sharing the functor `T → BG`.
pub fn random_composable_pair(rng: &mut impl Rng, cfg: &RandomConfig) -> Result<(GSpan, GSpan), SpanError> {
    let base = SpanBase::random(rng, cfg);
    let (h, v, w) = (base.random_leg(rng, cfg)?, base.random_leg(rng, cfg)?, base.random_leg(rng, cfg)?);
    let first = random_span(rng, &h, &v, cfg.max_apex_objects)?;
    let second = random_span(rng, &v, &w, cfg.max_apex_objects)?;
    Ok((first, second))
}

/// A cospan `M1 → T ← M2`.
pub fn random_cospan(rng: &mut impl Rng, cfg: &RandomConfig) -> Result<(Functor, Functor), SpanError> {
    let t = random_groupoid(rng, cfg.max_objects);
    let m1 = random_groupoid(rng, cfg.max_apex_objects);
    let m2 = random_groupoid(rng, cfg.max_apex_objects);
    Ok((random_functor(rng, &m1, &t)?, random_functor(rng, &m2, &t)?))
}

/// A random span morphism into `target`. The source apex maps into the
/// target apex by a random `Φ`; its legs are those of the target conjugated
/// by random morphisms `A_x`, `B_x`, and its labels are forced by the label
/// condition.
pub fn random_cell_into(rng: &mut impl Rng, target: &GSpan, max_apex_objects: usize) -> Result<SpanMorphism, SpanError> {
    let apex = random_groupoid(rng, max_apex_objects);
    let phi = random_functor(rng, &apex, target.apex())?;
    let twist = |rng: &mut dyn rand::RngCore, leg: &Functor| -> (Vec<Mor>, Vec<usize>) {
        let base = leg.target();
        apex.objects()
            .map(|x| {
                let anchor = leg.on_object(phi.on_object(x));
                let out = Mor::new(anchor, rng.gen_range(0..base.out_degree(anchor)));
                (base.inverse(out), base.target(out))
            })
            .unzip()
    };
    let (a, l_objects) = twist(rng, target.left());
    let (b, r_objects) = twist(rng, target.right());
    let conjugated = |leg: &Functor, t: &[Mor], objects: Vec<usize>| -> Result<Functor, SpanError> {
        let base = leg.target().clone();
        let (leg, phi, t) = (leg.clone(), phi.clone(), Arc::new(t.to_vec()));
        let target_of = apex.clone();
        Ok(Functor::from_fn(
            &apex,
            &base.clone(),
            move |x| objects[x],
            move |m| {
                let inner = leg.on_morphism(phi.on_morphism(m));
                let back = base.inverse(t[target_of.target(m)]);
                base.compose(base.compose(t[m.source], inner), back)
            },
        )?)
    };
    let l = conjugated(target.left(), &a, l_objects)?;
    let r = conjugated(target.right(), &b, r_objects)?;
    let g = target.group();
    let labels = apex
        .objects()
        .map(|x| {
            let shift = g.sub(target.h().value(a[x]), target.v().value(b[x]));
            g.add(target.label(phi.on_object(x)), shift)
        })
        .collect();
    let source = GSpan::new(&l, &r, target.h(), target.v(), labels)?;
    SpanMorphism::new(&source, target, &phi, a, b)
}

/// Four cells `α1: M → M'`, `α2: M' → M''` between spans `S → T` and
/// `β1: N → N'`, `β2: N' → N''` between spans `T → U`.
#[derive(Clone, Debug)]
pub struct CellSquare {
    pub alpha1: SpanMorphism,
    pub alpha2: SpanMorphism,
    pub beta1: SpanMorphism,
    pub beta2: SpanMorphism,
}

pub fn random_cell_square(rng: &mut impl Rng, cfg: &RandomConfig) -> Result<CellSquare, SpanError> {
    let (m2, n2) = random_composable_pair(rng, cfg)?;
    let alpha2 = random_cell_into(rng, &m2, cfg.max_apex_objects)?;
    let alpha1 = random_cell_into(rng, alpha2.source(), cfg.max_apex_objects)?;
    let beta2 = random_cell_into(rng, &n2, cfg.max_apex_objects)?;
    let beta1 = random_cell_into(rng, beta2.source(), cfg.max_apex_objects)?;
    Ok(CellSquare {
        alpha1,
        alpha2,
        beta1,
        beta2,
    })
}
