//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own combinatorics.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use gspan_core::algebra::{AbelianGroup, Elem};

/// All abelian groups of order at most `max`, one per isomorphism class,
/// as invariant-factor lists.
pub fn abelian_groups(max: usize) -> Vec<AbelianGroup> {
    const CLASSES: &[&[usize]] = &[
        &[1],
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[7],
        &[8],
        &[2, 4],
        &[2, 2, 2],
        &[9],
        &[3, 3],
        &[10],
        &[11],
        &[12],
        &[2, 6],
    ];
    CLASSES
        .iter()
        .filter(|o| o.iter().product::<usize>() <= max)
        .map(|o| AbelianGroup::new(o).unwrap())
        .collect()
}

/// Every subgroup, found by closing every subset of size at most two under
/// addition. Finite abelian groups of order at most 12 are generated by two
/// elements, so this is exhaustive there.
pub fn subgroups_by_closure(g: &AbelianGroup) -> Vec<Vec<Elem>> {
    let elems: Vec<Elem> = g.elements().collect();
    let mut seen = BTreeSet::new();
    for &a in &elems {
        for &b in &elems {
            let mut set: BTreeSet<Elem> = [g.zero(), a, b].into_iter().collect();
            loop {
                let next: BTreeSet<Elem> = set
                    .iter()
                    .flat_map(|&x| set.iter().map(move |&y| (x, y)))
                    .map(|(x, y)| g.add(x, y))
                    .chain(set.iter().copied())
                    .collect();
                if next.len() == set.len() {
                    break;
                }
                set = next;
            }
            seen.insert(set.into_iter().collect::<Vec<_>>());
        }
    }
    seen.into_iter().collect()
}

/// The smallest element of the coset `x + K`.
pub fn coset_key(g: &AbelianGroup, k: &[Elem], x: Elem) -> Elem {
    k.iter().map(|&y| g.add(x, y)).min().unwrap()
}

pub fn coset_keys(g: &AbelianGroup, k: &[Elem]) -> Vec<Elem> {
    let keys: BTreeSet<Elem> = g.elements().map(|x| coset_key(g, k, x)).collect();
    keys.into_iter().collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn cycles(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut count = 0;
    for start in 0..p.len() {
        if !seen[start] {
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = p[x];
            }
        }
    }
    count
}

/// Unsigned Stirling numbers of the first kind by counting permutations.
pub fn brute_s1(n: usize, k: usize) -> u64 {
    permutations(n).iter().filter(|p| cycles(p) == k).count() as u64
}

/// Stirling numbers of the second kind by counting the distinct kernels of
/// all maps `[n] → [n]`.
pub fn brute_s2(n: usize, k: usize) -> u64 {
    let mut partitions: HashSet<BTreeSet<BTreeSet<usize>>> = HashSet::new();
    let total = n.pow(n as u32);
    for code in 0..total.max(1) {
        let mut f = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            f.push(c % n.max(1));
            c /= n.max(1);
        }
        let blocks: BTreeSet<BTreeSet<usize>> = (0..n)
            .map(|v| (0..n).filter(|&i| f[i] == f[v]).collect())
            .collect();
        partitions.insert(blocks);
    }
    partitions.iter().filter(|b| b.len() == k).count() as u64
}
