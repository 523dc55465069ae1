use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use super::ExampleError;
use crate::algebra::{AbelianGroup, Elem, FiniteGroup, PermutationGroup, Rational};
use crate::constructions::{delooping, discrete_groupoid, ConstructionError, Functor, Grothendieck, SetValuedFunctor};
use crate::groupoid::{ActionGroupoid, DisjointUnion, Groupoid, Mor};
use crate::gspan::{compose_spans, GSpan};

pub const DEFAULT_STIRLING_GUARD: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StirlingKind {
    /// Permutations stratified by cardinality and cycle count, signed labels.
    First,
    /// Equivalence relations stratified by cardinality and class count.
    Second,
}

/// A Stirling span over the discrete groupoid `{0..=n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StirlingConfig {
    pub n: usize,
    pub kind: StirlingKind,
    pub guard: usize,
}

impl StirlingConfig {
    pub fn new(n: usize, kind: StirlingKind) -> Self {
        StirlingConfig {
            n,
            kind,
            guard: DEFAULT_STIRLING_GUARD,
        }
    }

    fn check(&self) -> Result<(), ExampleError> {
        check_guard(self.n, self.guard)
    }
}

fn check_guard(n: usize, guard: usize) -> Result<(), ExampleError> {
    if n > guard {
        return Err(ExampleError::Guard { n, guard });
    }
    Ok(())
}

fn cycle_count(p: &[u8]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut cycles = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
        }
    }
    cycles
}

/// Relabels blocks in order of first appearance.
fn restricted_growth(labels: &[u8]) -> Vec<u8> {
    let mut map: HashMap<u8, u8> = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len() as u8;
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

/// All restricted growth strings of length `n` with exactly `blocks` blocks.
fn partitions(n: usize, blocks: usize) -> Vec<Vec<u8>> {
    fn extend(prefix: &mut Vec<u8>, max: u8, n: usize, blocks: usize, out: &mut Vec<Vec<u8>>) {
        let used = if prefix.is_empty() { 0 } else { max as usize + 1 };
        if prefix.len() == n {
            if used == blocks {
                out.push(prefix.clone());
            }
            return;
        }
        if used + (n - prefix.len()) < blocks {
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for b in 0..=limit {
            if b as usize >= blocks {
                break;
            }
            prefix.push(b);
            extend(prefix, max.max(b), n, blocks, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), 0, n, blocks, &mut out);
    out
}

fn render_partition(rgs: &[u8]) -> String {
    let blocks = rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
    let parts: Vec<String> = (0..blocks)
        .map(|b| {
            rgs.iter()
                .enumerate()
                .filter(|(_, &x)| x as usize == b)
                .map(|(i, _)| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!("{{{}}}", parts.join("|"))
}

/// `S1(n, k)//Σ(n)`: permutations with `k` cycles under conjugation.
fn perm_action(sym: &Arc<PermutationGroup>, k: usize) -> Result<ActionGroupoid, ExampleError> {
    let order = sym.order();
    let points: Vec<Elem> = (0..order)
        .map(Elem)
        .filter(|&e| cycle_count(sym.permutation(e)) == k)
        .collect();
    let mut position = vec![usize::MAX; order];
    for (i, p) in points.iter().enumerate() {
        position[p.0] = i;
    }
    let names = points.iter().map(|&p| sym.element_name(p)).collect();
    let g = sym.clone();
    let pts = points.clone();
    // σ·g = g⁻¹σg: apply g⁻¹, then σ, then g.
    let act = move |x: usize, h: Elem| position[g.mul(g.mul(g.inv(h), pts[x]), h).0];
    Ok(ActionGroupoid::new(sym.clone(), points.len(), act, Some(names))?)
}

/// `S2(n, m)//Σ(n)`: partitions with `m` blocks, moved by relabelling points.
fn rel_action(sym: &Arc<PermutationGroup>, n: usize, m: usize) -> Result<ActionGroupoid, ExampleError> {
    let points = partitions(n, m);
    let index: HashMap<Vec<u8>, usize> = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let names = points.iter().map(|p| render_partition(p)).collect();
    let g = sym.clone();
    let pts = points.clone();
    let act = move |x: usize, h: Elem| {
        let perm = g.permutation(h);
        let mut moved = vec![0u8; n];
        for (j, &b) in pts[x].iter().enumerate() {
            moved[perm[j] as usize] = b;
        }
        index[&restricted_growth(&moved)]
    };
    Ok(ActionGroupoid::new(sym.clone(), points.len(), act, Some(names))?)
}

/// The skeletal model `S1(n, k)//Σ(n)` of permutations of an `n`-set with
/// `k` cycles.
pub fn fin_perm_groupoid(n: usize, k: usize) -> Result<ActionGroupoid, ExampleError> {
    check_guard(n, DEFAULT_STIRLING_GUARD)?;
    perm_action(&Arc::new(PermutationGroup::symmetric(n)?), k)
}

/// The skeletal model `S2(k, m)//Σ(k)` of equivalence relations on a
/// `k`-set with `m` classes.
pub fn fin_rel_groupoid(k: usize, m: usize) -> Result<ActionGroupoid, ExampleError> {
    check_guard(k, DEFAULT_STIRLING_GUARD)?;
    rel_action(&Arc::new(PermutationGroup::symmetric(k)?), k, m)
}

/// `∫ Fin(X, X)` over one stratum: objects `(x, τ)` with `τ ∈ Σ(n)`, moved
/// by conjugation. `None` for an empty stratum.
fn stratum(sym: &Arc<PermutationGroup>, n: usize, k: usize, kind: StirlingKind) -> Result<Option<Groupoid>, ExampleError> {
    let base = match kind {
        StirlingKind::First => perm_action(sym, k)?,
        StirlingKind::Second => rel_action(sym, n, k)?,
    };
    if base.point_count() == 0 {
        return Ok(None);
    }
    let base = base.into_groupoid();
    let g = sym.clone();
    let order = sym.order();
    // Along a morphism labelled h the transport is τ ↦ hτh⁻¹.
    let functor = SetValuedFunctor::from_fn(
        &base,
        move |_| order,
        move |m: Mor, tau| {
            let h = Elem(m.index as usize);
            g.mul(g.mul(h, Elem(tau)), g.inv(h)).0
        },
    )
    .map_err(ConstructionError::from)?;
    Ok(Some(Grothendieck::new(&functor).into_groupoid()))
}

/// The apex of a Stirling span with the stratum `(|X|, k)` of each object.
#[derive(Clone, Debug)]
pub struct StirlingApex {
    pub groupoid: Groupoid,
    pub strata: Arc<Vec<(usize, usize)>>,
}

pub fn stirling_apex(cfg: &StirlingConfig) -> Result<StirlingApex, ExampleError> {
    cfg.check()?;
    let mut parts = Vec::new();
    let mut strata = Vec::new();
    for n in 0..=cfg.n {
        let sym = Arc::new(PermutationGroup::symmetric(n)?);
        for k in 0..=n {
            if let Some(g) = stratum(&sym, n, k, cfg.kind)? {
                strata.extend(std::iter::repeat_n((n, k), g.object_count()));
                parts.push(g);
            }
        }
    }
    Ok(StirlingApex {
        groupoid: DisjointUnion::new(parts).into_groupoid(),
        strata: Arc::new(strata),
    })
}

fn span_over(cfg: &StirlingConfig, z: &Groupoid, h: &Functor) -> Result<GSpan, ExampleError> {
    let apex = stirling_apex(cfg)?;
    let leg = |second: bool| -> Result<Functor, ExampleError> {
        let (s1, s2) = (apex.strata.clone(), apex.strata.clone());
        let pick = move |p: (usize, usize)| if second { p.1 } else { p.0 };
        Ok(Functor::from_fn(
            &apex.groupoid,
            z,
            move |x| pick(s1[x]),
            move |m| Mor::new(pick(s2[m.source]), 0),
        )?)
    };
    let (l, r) = (leg(false)?, leg(true)?);
    let labels = apex
        .strata
        .iter()
        .map(|&(n, k)| match cfg.kind {
            StirlingKind::First => Elem((n - k) % 2),
            StirlingKind::Second => Elem(0),
        })
        .collect();
    Ok(GSpan::new(&l, &r, h, h, labels)?)
}

fn base(n: usize) -> Result<(Groupoid, Functor), ExampleError> {
    let z = discrete_groupoid(n + 1);
    let bg = delooping(&AbelianGroup::cyclic(2)?);
    let h = Functor::trivial_to_delooping(&z, &bg)?;
    Ok((z, h))
}

/// The Stirling `Z2`-span from `{0..=n}` to itself: `L` is the cardinality,
/// `R` the number of cycles (first kind) or classes (second kind). Labels
/// are `(|X| - k) mod 2` for the first kind and neutral for the second.
pub fn stirling_span(cfg: &StirlingConfig) -> Result<GSpan, ExampleError> {
    let (z, h) = base(cfg.n)?;
    span_over(cfg, &z, &h)
}

/// The composite of the first-kind and second-kind spans, built as a
/// homotopy pullback over `{0..=n}`.
pub fn stirling_composite(n: usize, guard: usize) -> Result<GSpan, ExampleError> {
    let (z, h) = base(n)?;
    let first = span_over(&StirlingConfig { n, kind: StirlingKind::First, guard }, &z, &h)?;
    let second = span_over(&StirlingConfig { n, kind: StirlingKind::Second, guard }, &z, &h)?;
    Ok(compose_spans(&first, &second)?)
}

/// Per-label Euler characteristics of the composite fibre over `(n, m)`
/// computed stratum by stratum: the sum over `m ≤ k ≤ n` of
/// `χ(∫ FinPerm_{n,k}) · χ(∫ FinRel_{k,m})`, at label `(n - k) mod 2`.
pub fn alternative_stratification(n: usize, m: usize, guard: usize) -> Result<BTreeMap<Elem, Rational>, ExampleError> {
    check_guard(n, guard)?;
    let mut out: BTreeMap<Elem, Rational> = BTreeMap::new();
    let sym_n = Arc::new(PermutationGroup::symmetric(n)?);
    for k in m..=n {
        let sym_k = Arc::new(PermutationGroup::symmetric(k)?);
        let first = stratum(&sym_n, n, k, StirlingKind::First)?;
        let second = stratum(&sym_k, k, m, StirlingKind::Second)?;
        if let (Some(a), Some(b)) = (first, second) {
            let chi = a.euler_characteristic() * b.euler_characteristic();
            *out.entry(Elem((n - k) % 2)).or_insert_with(Rational::zero) += chi;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}
