//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//! All comparisons are exact (rational or cyclotomic equality); there is no
//! floating-point tolerance anywhere below.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gspan_core::algebra::{AbelianGroup, Character, CyclotomicNumber, Elem, GroupRingElement, Rational};
use gspan_core::constructions::{
    coset_groupoid, delooping, discrete_groupoid, full_subgroupoid, iterated_pullback, left_fibre,
    pullback_euler_check, Functor, Grothendieck, SetValuedFunctor, TwoSidedPullback,
};
use gspan_core::examples::{
    coset_entry_closed_form, coset_representatives, coset_span, stirling_composite, stirling_span,
    subset_matrix_closed_form, subset_span, universal_matrix_closed_form, StirlingConfig, StirlingKind,
    DEFAULT_STIRLING_GUARD,
};
use gspan_core::algebra::GroupHom;
use gspan_core::groupoid::{ActionGroupoid, Groupoid, Limits, Mor};
use gspan_core::gspan::{
    check_main_theorem, horizontal_compose, identity_span, induced_fibre_map_check, interchange_check,
    labeled_lemma_check, matrix_multiply, pullback_span, pushforward_matrix_closed_form, pushforward_span,
    universal_span, vertical_compose, Direction, GSpan, SpanMatrix,
};
use gspan_core::random::{
    random_cell_square, random_composable_pair, random_cospan, random_functor, random_groupoid, seeded, RandomConfig,
};
use num_bigint::BigInt;
use rand::Rng;

use common::{abelian_groups, brute_s1, brute_s2, coset_key, coset_keys, subgroups_by_closure};

const SEED: u64 = 20_240_611;
const STIRLING_N: usize = 4;
const STIRLING_BUDGET: Duration = Duration::from_secs(60);
const MAIN_PAIRS: usize = 50;
const MAIN_BUDGET: Duration = Duration::from_secs(120);
const COSPANS: usize = 50;
const SQUARES: usize = 20;
const SWEEP_ORDER: usize = 8;
const IDEMPOTENT_ORDER: usize = 12;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same_matrix(a: &SpanMatrix, b: &SpanMatrix) -> bool {
    a.row_index() == b.row_index() && a.col_index() == b.col_index() && a.entries() == b.entries()
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Every character of `g`, as exponent tuples.
fn characters(g: &AbelianGroup) -> Vec<Character> {
    let mut tuples: Vec<Vec<i64>> = vec![vec![]];
    for &n in g.cyclic_orders() {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..n as i64).map(move |k| {
                    let mut t = t.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
    }
    tuples.iter().map(|t| Character::new(g, t).unwrap()).collect()
}

fn is_cyclic(g: &AbelianGroup) -> bool {
    g.cyclic_orders().len() <= 1
}

/// The composable pairs shared by criteria 3, 4 and 6.
fn main_pairs() -> Result<Vec<(GSpan, GSpan)>, String> {
    let mut rng = seeded(SEED);
    let cfg = RandomConfig::default();
    (0..MAIN_PAIRS).map(|_| random_composable_pair(&mut rng, &cfg).map_err(e)).collect()
}

// ------------------------------------------------------------- criteria

fn stirling_identity() -> Outcome {
    let start = Instant::now();
    let first = stirling_span(&StirlingConfig::new(STIRLING_N, StirlingKind::First)).map_err(e)?;
    let second = stirling_span(&StirlingConfig::new(STIRLING_N, StirlingKind::Second)).map_err(e)?;
    let (m1, m2) = (first.matrix().map_err(e)?, second.matrix().map_err(e)?);
    let sign = Character::standard(m1.group());
    let product = m1
        .apply_character(&sign)
        .map_err(e)?
        .multiply(&m2.apply_character(&sign).map_err(e)?)
        .map_err(e)?;
    ensure(product.row_count() == STIRLING_N + 1, || format!("{} rows", product.row_count()))?;
    ensure(product.is_identity(), || format!("product is not the identity:\n{}", product.render_text()))?;
    let composite = stirling_composite(STIRLING_N, DEFAULT_STIRLING_GUARD).map_err(e)?;
    let mc = composite.matrix().map_err(e)?.apply_character(&sign).map_err(e)?;
    ensure(mc.is_identity(), || format!("composite is not the identity:\n{}", mc.render_text()))?;
    let elapsed = start.elapsed();
    ensure(elapsed < STIRLING_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{0}x{0} identity from the product and from the composite span", STIRLING_N + 1))
}

fn stirling_entries() -> Outcome {
    let first = stirling_span(&StirlingConfig::new(STIRLING_N, StirlingKind::First)).map_err(e)?;
    let second = stirling_span(&StirlingConfig::new(STIRLING_N, StirlingKind::Second)).map_err(e)?;
    let (m1, m2) = (first.matrix().map_err(e)?, second.matrix().map_err(e)?);
    let sign = Character::standard(m1.group());
    let (c1, c2) = (m1.apply_character(&sign).map_err(e)?, m2.apply_character(&sign).map_err(e)?);
    let mut checked = 0;
    for (i, &n) in m1.row_index().iter().enumerate() {
        for (j, &k) in m1.col_index().iter().enumerate() {
            let s1 = brute_s1(n, k) as i64;
            let signed = if (n + k) % 2 == 0 { s1 } else { -s1 };
            let expected = CyclotomicNumber::from_rational(c1.entry(i, j).conductor(), q(signed, 1)).map_err(e)?;
            ensure(c1.entry(i, j) == &expected, || {
                format!("first kind ({n},{k}): {} vs {signed}", c1.entry(i, j).render())
            })?;
            checked += 1;
        }
    }
    for (i, &k) in m2.row_index().iter().enumerate() {
        for (j, &m) in m2.col_index().iter().enumerate() {
            let s2 = brute_s2(k, m) as i64;
            let expected = CyclotomicNumber::from_rational(c2.entry(i, j).conductor(), q(s2, 1)).map_err(e)?;
            ensure(c2.entry(i, j) == &expected, || {
                format!("second kind ({k},{m}): {} vs {s2}", c2.entry(i, j).render())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} entries against permutation and partition enumeration"))
}

fn main_theorem(pairs: &[(GSpan, GSpan)]) -> Outcome {
    let start = Instant::now();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let (lhs, rhs) = check_main_theorem(a, b).map_err(e)?;
        ensure(same_matrix(&lhs, &rhs), || {
            format!("pair {i}: composite\n{}\nproduct\n{}", lhs.render_text(), rhs.render_text())
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < MAIN_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} seeded pairs (seed {SEED})", pairs.len()))
}

fn labeled_lemma(pairs: &[(GSpan, GSpan)]) -> Outcome {
    let mut rows = 0;
    for (i, (a, b)) in pairs.iter().enumerate() {
        for row in labeled_lemma_check(a, b).map_err(e)? {
            ensure(row.lhs == row.rhs, || {
                format!("pair {i}, label {}: {} vs {}", row.label.0, row.lhs, row.rhs)
            })?;
            rows += 1;
        }
    }
    Ok(format!("{rows} label rows over {} pairs", pairs.len()))
}

fn pullback_lemma() -> Outcome {
    let mut rng = seeded(SEED + 1);
    let cfg = RandomConfig::default();
    let mut nonzero = 0;
    for i in 0..COSPANS {
        let (r1, l2) = random_cospan(&mut rng, &cfg).map_err(e)?;
        let (lhs, rhs) = pullback_euler_check(&r1, &l2).map_err(e)?;
        ensure(lhs == rhs, || format!("cospan {i}: {lhs} vs {rhs}"))?;
        if lhs != q(0, 1) {
            nonzero += 1;
        }
    }
    Ok(format!("{COSPANS} seeded cospans, {nonzero} with nonzero χ"))
}

fn absorption(pairs: &[(GSpan, GSpan)]) -> Outcome {
    let mut count = 0;
    for (i, sp) in pairs.iter().flat_map(|(a, b)| [a, b]).enumerate() {
        let m = sp.matrix().map_err(e)?;
        let left = identity_span(sp.h()).map_err(e)?.matrix().map_err(e)?;
        let right = identity_span(sp.v()).map_err(e)?.matrix().map_err(e)?;
        ensure(same_matrix(&matrix_multiply(&left, &m).map_err(e)?, &m), || format!("span {i}, left"))?;
        ensure(same_matrix(&matrix_multiply(&m, &right).map_err(e)?, &m), || format!("span {i}, right"))?;
        count += 1;
    }
    Ok(format!("{count} span matrices fixed on both sides"))
}

fn canonical_to_bg(s: &Groupoid, bg: &Groupoid) -> Result<Functor, String> {
    Functor::to_delooping(s, bg, |m| Elem(m.index as usize)).map_err(e)
}

fn closed_forms() -> Outcome {
    let (mut universal, mut subset, mut phi, mut coset) = (0, 0, 0, 0);
    let mut rng = seeded(SEED + 2);
    for g in abelian_groups(SWEEP_ORDER) {
        let bg = delooping(&g);
        let subs = subgroups_by_closure(&g);
        let cosets: Vec<(Groupoid, Functor)> = subs
            .iter()
            .map(|k| {
                let s = coset_groupoid(&g, k).map_err(e)?;
                let h = canonical_to_bg(&s, &bg)?;
                Ok((s, h))
            })
            .collect::<Result<_, String>>()?;

        // Universal spans between coset groupoids.
        for (_, h) in &cosets {
            for (_, v) in &cosets {
                let sp = universal_span(h, v).map_err(e)?;
                let closed = universal_matrix_closed_form(h, v).map_err(e)?;
                ensure(same_matrix(&sp.matrix().map_err(e)?, &closed), || format!("universal span over {}", g.order()))?;
                universal += 1;
            }
        }

        // Subset spans for cyclic sources mapping onto elements x, y.
        for x in g.elements() {
            for y in g.elements() {
                let (zx, zy) = (
                    AbelianGroup::cyclic(g.element_order(x)).map_err(e)?,
                    AbelianGroup::cyclic(g.element_order(y)).map_err(e)?,
                );
                let h = GroupHom::from_generator_images(&zx, &g, &[x]).map_err(e)?;
                let v = GroupHom::from_generator_images(&zy, &g, &[y]).map_err(e)?;
                let generated = subs
                    .iter()
                    .filter(|s| s.contains(&x) && s.contains(&y))
                    .min_by_key(|s| s.len())
                    .expect("G itself contains both");
                let keys = coset_keys(&g, generated);
                let mut subsets: Vec<Vec<Elem>> = keys
                    .iter()
                    .map(|&r| g.elements().filter(|&z| coset_key(&g, generated, z) == r).collect())
                    .collect();
                subsets.push(g.elements().collect());
                for m in subsets {
                    let sp = subset_span(&g, &m, &h, &v).map_err(e)?;
                    let closed = subset_matrix_closed_form(&g, &m, zy.order());
                    ensure(sp.matrix().map_err(e)?.entries() == closed.entries(), || {
                        format!("subset span in order {} at x={}, y={}", g.order(), x.0, y.0)
                    })?;
                    subset += 1;
                }
            }
        }

        // Pushforward and pullback spans of seeded random functors.
        for _ in 0..4 {
            let s = random_groupoid(&mut rng, 5);
            let t = random_groupoid(&mut rng, 5);
            let phi_f = random_functor(&mut rng, &s, &t).map_err(e)?;
            let v = random_functor(&mut rng, &t, &bg).map_err(e)?;
            let labels: Vec<Elem> = s.objects().map(|_| Elem(rng.gen_range(0..g.order()))).collect();
            let (g2, phi2, v2, l2, s2) = (g.clone(), phi_f.clone(), v.clone(), labels.clone(), s.clone());
            let h = Functor::to_delooping(&s, &bg, move |m| {
                g2.sub(g2.add(v2.value(phi2.on_morphism(m)), l2[m.source]), l2[s2.target(m)])
            })
            .map_err(e)?;
            let push = pushforward_span(&phi_f, &h, &v, labels.clone()).map_err(e)?;
            let closed = pushforward_matrix_closed_form(&phi_f, &h, &v, &labels, Direction::Pushforward).map_err(e)?;
            ensure(same_matrix(&push.matrix().map_err(e)?, &closed), || format!("pushforward in order {}", g.order()))?;
            let pull = pullback_span(&phi_f, &h, &v, labels.clone()).map_err(e)?;
            let closed = pushforward_matrix_closed_form(&phi_f, &h, &v, &labels, Direction::Pullback).map_err(e)?;
            ensure(same_matrix(&pull.matrix().map_err(e)?, &closed), || format!("pullback in order {}", g.order()))?;
            phi += 2;
        }

        // Coset spans H1 ⊆ K1 ∩ K2.
        for h1 in &subs {
            for k1 in subs.iter().filter(|k| h1.iter().all(|x| k.contains(x))) {
                for k2 in subs.iter().filter(|k| h1.iter().all(|x| k.contains(x))) {
                    let sp = coset_span(&g, h1, k1, k2).map_err(e)?;
                    let r1 = coset_representatives(&g, k1).map_err(e)?;
                    let r2 = coset_representatives(&g, k2).map_err(e)?;
                    for (c, &g1) in r1.iter().enumerate() {
                        for (d, &g2) in r2.iter().enumerate() {
                            let expected = coset_entry_closed_form(&g, h1, k1, k2, g1, g2).map_err(e)?;
                            ensure(sp.entry_at(c, d).map_err(e)? == expected, || {
                                format!("coset span in order {} at ({c},{d})", g.order())
                            })?;
                        }
                    }
                    coset += 1;
                }
            }
        }
    }
    Ok(format!(
        "{universal} universal, {subset} subset, {phi} pushforward/pullback, {coset} coset spans"
    ))
}

/// The one-object span labelled `z`, with trivial legs into `BG`.
fn point_span(g: &AbelianGroup, z: Elem) -> Result<GSpan, String> {
    let pt = discrete_groupoid(1);
    let bg = delooping(g);
    let id = Functor::identity(&pt);
    let h = Functor::trivial_to_delooping(&pt, &bg).map_err(e)?;
    GSpan::new(&id, &id, &h, &h, vec![z]).map_err(e)
}

fn character_layer(pairs: &[(GSpan, GSpan)]) -> Outcome {
    let z2 = AbelianGroup::cyclic(2).map_err(e)?;
    let z4 = AbelianGroup::cyclic(4).map_err(e)?;
    let minus = point_span(&z2, Elem(1))?.matrix().map_err(e)?;
    let minus = minus.apply_character(&Character::new(&z2, &[1]).map_err(e)?).map_err(e)?;
    ensure(minus.entry(0, 0) == &CyclotomicNumber::from_rational(2, q(-1, 1)).map_err(e)?, || {
        format!("(-1) realized as {}", minus.entry(0, 0).render())
    })?;
    let i = point_span(&z4, Elem(1))?.matrix().map_err(e)?;
    let i = i.apply_character(&Character::new(&z4, &[1]).map_err(e)?).map_err(e)?;
    ensure(i.entry(0, 0) == &CyclotomicNumber::zeta_power(4, 1).map_err(e)?, || {
        format!("(i) realized as {}", i.entry(0, 0).render())
    })?;

    // Vanishing for injective characters.
    let mut vanishing = 0;
    let mut spans: Vec<&GSpan> = pairs.iter().flat_map(|(a, b)| [a, b]).collect();
    let extra: Vec<GSpan> = abelian_groups(SWEEP_ORDER)
        .into_iter()
        .filter(is_cyclic)
        .map(|g| {
            let bg = delooping(&g);
            let sub = subgroups_by_closure(&g).into_iter().nth(1).unwrap_or_else(|| vec![g.zero()]);
            let s = coset_groupoid(&g, &sub).map_err(e)?;
            let h = canonical_to_bg(&s, &bg)?;
            universal_span(&h, &Functor::identity(&bg)).map_err(e)
        })
        .collect::<Result<_, String>>()?;
    spans.extend(extra.iter());
    for sp in spans.iter().filter(|sp| is_cyclic(sp.group())) {
        let rho = Character::new(sp.group(), &[1]).map_err(e)?;
        if !rho.is_injective() {
            continue;
        }
        let m = sp.matrix().map_err(e)?;
        let cm = m.apply_character(&rho).map_err(e)?;
        for (i, &c) in m.row_index().iter().enumerate() {
            for (j, &d) in m.col_index().iter().enumerate() {
                let s = sp.source();
                let t = sp.target();
                let h_nontrivial = s.hom(c, c).into_iter().any(|x| sp.h().value(x) != sp.group().zero());
                let v_nontrivial = t.hom(d, d).into_iter().any(|x| sp.v().value(x) != sp.group().zero());
                if h_nontrivial || v_nontrivial {
                    ensure(cm.entry(i, j).is_zero(), || {
                        format!("entry ({c},{d}) is {} under an injective character", cm.entry(i, j).render())
                    })?;
                    vanishing += 1;
                }
            }
        }
    }
    ensure(vanishing > 0, || "no entry exercised the vanishing statement".into())?;

    // Multiplicativity on products of generated matrices.
    let mut products = 0;
    for (a, b) in pairs {
        let (ma, mb) = (a.matrix().map_err(e)?, b.matrix().map_err(e)?);
        let prod = matrix_multiply(&ma, &mb).map_err(e)?;
        for rho in characters(a.group()) {
            let lhs = prod.apply_character(&rho).map_err(e)?;
            let rhs = ma
                .apply_character(&rho)
                .map_err(e)?
                .multiply(&mb.apply_character(&rho).map_err(e)?)
                .map_err(e)?;
            ensure(lhs.entries() == rhs.entries(), || format!("character {:?}", rho.exponents()))?;
            products += 1;
        }
    }
    Ok(format!("(-1) and (i) realized; {vanishing} vanishing entries; {products} character products"))
}

fn idempotents() -> Outcome {
    let mut subgroups = 0;
    for g in abelian_groups(IDEMPOTENT_ORDER) {
        for u in subgroups_by_closure(&g) {
            let a = GroupRingElement::average_idempotent(&g, &u).map_err(e)?;
            ensure(a.mul(&a).map_err(e)? == a, || format!("average of a subgroup of order {} in |G|={}", u.len(), g.order()))?;
            subgroups += 1;
        }
    }
    let mut spans = 0;
    let mut rng = seeded(SEED + 3);
    for g in abelian_groups(SWEEP_ORDER) {
        let bg = delooping(&g);
        let mut legs: Vec<Functor> = subgroups_by_closure(&g)
            .iter()
            .map(|k| {
                let s = coset_groupoid(&g, k).map_err(e)?;
                canonical_to_bg(&s, &bg)
            })
            .collect::<Result<_, String>>()?;
        for _ in 0..3 {
            let s = random_groupoid(&mut rng, 6);
            legs.push(random_functor(&mut rng, &s, &bg).map_err(e)?);
        }
        for h in legs {
            let m = identity_span(&h).map_err(e)?.matrix().map_err(e)?;
            ensure(m.is_diagonal(), || "identity-span matrix is not diagonal".into())?;
            ensure(same_matrix(&matrix_multiply(&m, &m).map_err(e)?, &m), || "not idempotent".into())?;
            for (i, &c) in m.row_index().iter().enumerate() {
                let image: BTreeSet<Elem> = h.source().hom(c, c).into_iter().map(|x| h.value(x)).collect();
                let image: Vec<Elem> = image.into_iter().collect();
                let expected = GroupRingElement::average_idempotent(&g, &image).map_err(e)?;
                ensure(m.entry(i, i) == &expected, || format!("diagonal entry at {c} in order {}", g.order()))?;
            }
            spans += 1;
        }
    }
    Ok(format!("{subgroups} subgroup averages square to themselves; {spans} identity spans"))
}

fn two_cells() -> Outcome {
    let mut rng = seeded(SEED + 4);
    let cfg = RandomConfig::default();
    let mut fibres = 0;
    for i in 0..SQUARES {
        let sq = random_cell_square(&mut rng, &cfg).map_err(e)?;
        for (name, cell) in [("α1", &sq.alpha1), ("α2", &sq.alpha2), ("β1", &sq.beta1), ("β2", &sq.beta2)] {
            cell.verify().map_err(|x| format!("square {i}, {name}: {x}"))?;
        }
        let composites = [
            vertical_compose(&sq.alpha1, &sq.alpha2),
            vertical_compose(&sq.beta1, &sq.beta2),
            horizontal_compose(&sq.alpha1, &sq.beta1),
            horizontal_compose(&sq.alpha2, &sq.beta2),
        ];
        for c in composites {
            c.map_err(|x| format!("square {i}: {x}"))?.verify().map_err(|x| format!("square {i}: {x}"))?;
        }
        let ok = interchange_check(&sq.alpha1, &sq.alpha2, &sq.beta1, &sq.beta2).map_err(e)?;
        ensure(ok, || format!("square {i}: interchange fails"))?;
        for cell in [&sq.alpha1, &sq.alpha2, &sq.beta1, &sq.beta2] {
            let (s, t) = (cell.source().source(), cell.source().target());
            for c in s.components().representatives() {
                for d in t.components().representatives() {
                    induced_fibre_map_check(cell, c, d).map_err(|x| format!("square {i}: {x}"))?;
                    fibres += 1;
                }
            }
        }
    }
    Ok(format!("{SQUARES} seeded squares; {fibres} induced fibre maps preserve labels"))
}

/// `b ↦ B(b0, b) × B(b1, b)` under postcomposition.
fn hom_pair_functor(base: &Groupoid, b0: usize, b1: usize) -> Result<SetValuedFunctor, String> {
    let g = base.clone();
    let g2 = base.clone();
    let size = move |b: usize| g.hom(b0, b).len() * g.hom(b1, b).len();
    let transport = move |m: Mor, x: usize| {
        let b = m.source;
        let c = g2.target(m);
        let (h0, h1) = (g2.hom(b0, b), g2.hom(b1, b));
        let (u, v) = (h0[x / h1.len()], h1[x % h1.len()]);
        let (n0, n1) = (g2.hom(b0, c), g2.hom(b1, c));
        let (u2, v2) = (g2.compose(u, m), g2.compose(v, m));
        let i = n0.iter().position(|&y| y == u2).unwrap();
        let j = n1.iter().position(|&y| y == v2).unwrap();
        i * n1.len() + j
    };
    SetValuedFunctor::from_fn(base, size, transport).map_err(e)
}

fn weighting() -> Outcome {
    let mut rng = seeded(SEED + 5);
    let cfg = RandomConfig::default();
    let mut groupoids: Vec<Groupoid> = (0..30).map(|_| random_groupoid(&mut rng, cfg.max_objects)).collect();
    for g in abelian_groups(SWEEP_ORDER) {
        for k in subgroups_by_closure(&g) {
            groupoids.push(coset_groupoid(&g, &k).map_err(e)?);
        }
    }
    for _ in 0..10 {
        let (a, b) = random_composable_pair(&mut rng, &cfg).map_err(e)?;
        groupoids.push(a.apex().clone());
        groupoids.push(gspan_core::gspan::compose_spans(&a, &b).map_err(e)?.apex().clone());
    }
    let mut objects = 0;
    for (i, g) in groupoids.iter().enumerate() {
        let k = g.weighting();
        // Σ_b k^b |Hom(a, b)| = 1, counted directly.
        for a in g.objects() {
            let total: Rational = g
                .objects()
                .map(|b| &k[b] * Rational::from_integer(BigInt::from(g.hom(a, b).len())))
                .sum();
            ensure(total == q(1, 1), || format!("groupoid {i}, object {a}: {total}"))?;
            objects += 1;
        }
        g.verify_coweighting(&g.coweighting()).map_err(|a| format!("groupoid {i}: coweighting at {a}"))?;
        let sum: Rational = k.iter().sum();
        ensure(sum == g.euler_characteristic(), || format!("groupoid {i}: Σk = {sum}"))?;
    }
    let mut functors = 0;
    for _ in 0..20 {
        let base = random_groupoid(&mut rng, 5);
        let b0 = rng.gen_range(0..base.object_count());
        let b1 = rng.gen_range(0..base.object_count());
        for f in [SetValuedFunctor::singleton(&base), hom_pair_functor(&base, b0, b1)?] {
            f.verify().map_err(e)?;
            let direct = Grothendieck::new(&f).into_groupoid().euler_characteristic();
            ensure(f.weighted_size() == direct, || format!("{} vs {direct}", f.weighted_size()))?;
            functors += 1;
        }
    }
    Ok(format!("{} groupoids ({objects} objects); {functors} Grothendieck constructions", groupoids.len()))
}

fn foundations() -> Outcome {
    let mut cosets = 0;
    let mut actions = 0;
    for g in abelian_groups(SWEEP_ORDER) {
        let subs = subgroups_by_closure(&g);
        for h in &subs {
            let c = coset_groupoid(&g, h).map_err(e)?;
            ensure(c.euler_characteristic() == q(1, h.len() as i64), || {
                format!("χ(H\\G) for |H| = {} in |G| = {}", h.len(), g.order())
            })?;
            cosets += 1;
        }
        // X = G/K1 ⊔ G/K2 under translation.
        for k1 in &subs {
            for k2 in &subs {
                let points: Vec<(usize, Elem)> = coset_keys(&g, k1)
                    .into_iter()
                    .map(|r| (0, r))
                    .chain(coset_keys(&g, k2).into_iter().map(|r| (1, r)))
                    .collect();
                let (g2, p2, ks) = (g.clone(), points.clone(), [k1.clone(), k2.clone()]);
                let act = move |x: usize, a: Elem| {
                    let (side, r) = p2[x];
                    let moved = (side, coset_key(&g2, &ks[side], g2.add(r, a)));
                    p2.iter().position(|&p| p == moved).unwrap()
                };
                let x = ActionGroupoid::new(Arc::new(g.clone()), points.len(), act, None)
                    .map_err(e)?
                    .into_groupoid();
                ensure(x.euler_characteristic() == q(points.len() as i64, g.order() as i64), || {
                    format!("χ(X//G) with |X| = {} and |G| = {}", points.len(), g.order())
                })?;
                actions += 1;
            }
        }
    }

    let mut rng = seeded(SEED + 6);
    let mut fibres = 0;
    for i in 0..30 {
        let m = random_groupoid(&mut rng, 6);
        let s = random_groupoid(&mut rng, 6);
        let l = random_functor(&mut rng, &m, &s).map_err(e)?;
        for c in s.objects() {
            let hofib = left_fibre(&l, c).map_err(e)?.euler_characteristic();
            let inverse_image: Vec<usize> = m.objects().filter(|&a| s.same_component(c, l.on_object(a))).collect();
            let chi = if inverse_image.is_empty() {
                q(0, 1)
            } else {
                full_subgroupoid(&m, &inverse_image).map_err(e)?.0.euler_characteristic()
            };
            let expected = Rational::from_integer(BigInt::from(s.aut_order(c))) * chi;
            ensure(hofib == expected, || format!("instance {i}, object {c}: {hofib} vs {expected}"))?;
            fibres += 1;
        }
    }

    let cfg = RandomConfig::default();
    let limits = Limits::default();
    let mut two_sided = 0;
    for i in 0..20 {
        let (sp, _) = random_composable_pair(&mut rng, &cfg).map_err(e)?;
        let p = random_groupoid(&mut rng, 4);
        let qg = random_groupoid(&mut rng, 4);
        let r1 = random_functor(&mut rng, &p, sp.source()).map_err(e)?;
        let l2 = random_functor(&mut rng, &qg, sp.target()).map_err(e)?;
        let direct = TwoSidedPullback::new(&r1, sp.left(), sp.right(), &l2, &limits)
            .map_err(e)?
            .into_groupoid();
        let iterated = iterated_pullback(&r1, sp.left(), sp.right(), &l2, &limits).map_err(e)?;
        ensure(direct.euler_characteristic() == iterated.euler_characteristic(), || {
            format!("instance {i}: χ {} vs {}", direct.euler_characteristic(), iterated.euler_characteristic())
        })?;
        ensure(direct.component_count() == iterated.component_count(), || {
            format!("instance {i}: π0 {} vs {}", direct.component_count(), iterated.component_count())
        })?;
        two_sided += 1;
    }
    Ok(format!(
        "{cosets} coset groupoids, {actions} actions, {fibres} fibres, {two_sided} two-sided pullbacks"
    ))
}

fn main() {
    let total = Instant::now();
    let pairs = main_pairs();
    let with_pairs = |f: fn(&[(GSpan, GSpan)]) -> Outcome| -> Outcome {
        match &pairs {
            Ok(p) => f(p),
            Err(x) => Err(format!("could not generate pairs: {x}")),
        }
    };
    let criteria: Vec<Criterion> = vec![
        ("stirling identity", Box::new(stirling_identity)),
        ("stirling entries", Box::new(stirling_entries)),
        ("composite matches product", Box::new(move || with_pairs(main_theorem))),
        ("per-label euler characteristic", Box::new(move || with_pairs(labeled_lemma))),
        ("pullback euler characteristic", Box::new(pullback_lemma)),
        ("absorption", Box::new(move || with_pairs(absorption))),
        ("closed forms", Box::new(closed_forms)),
        ("character layer", Box::new(move || with_pairs(character_layer))),
        ("idempotents", Box::new(idempotents)),
        ("2-cells", Box::new(two_cells)),
        ("weighting", Box::new(weighting)),
        ("foundations", Box::new(foundations)),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>().map(String::as_str).or(p.downcast_ref::<&str>().copied()))));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2} s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.2} s",
        criteria.len() - failures,
        criteria.len(),
        total.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
