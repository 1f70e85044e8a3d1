//! Exhaustive enumeration of unlabeled posets.
//!
//! Every `n`-element poset has a maximal element whose removal leaves an
//! `(n-1)`-element poset, and the removed element sits above some down-set of
//! the rest. Extending one representative per class on `n-1` elements by a
//! new maximal element over each of its down-sets therefore reaches every
//! class on `n` elements; duplicates are removed by canonical form.
//!
//! Canonical forms come from individualization-refinement over the strict
//! order: colour refinement by below/above colour multisets, branching on
//! the first non-singleton cell, keeping the lexicographically least
//! relation code over all leaves.

use rayon::prelude::*;

use crate::poset::Poset;

/// Largest size supported by the `u16` row masks.
pub const MAX_CANONICAL_SIZE: usize = 16;

/// Row `i` is the bitmask of elements strictly below element `i`.
pub type OrderRows = Vec<u16>;

fn above_rows(below: &[u16]) -> Vec<u16> {
    let n = below.len();
    let mut above = vec![0u16; n];
    for (y, &mask) in below.iter().enumerate() {
        for (x, row) in above.iter_mut().enumerate() {
            if mask >> x & 1 == 1 {
                *row |= 1 << y;
            }
        }
    }
    above
}

fn rerank<T: Ord + Clone>(sigs: &[T]) -> (Vec<u32>, usize) {
    let mut distinct = sigs.to_vec();
    distinct.sort();
    distinct.dedup();
    let colors = sigs
        .iter()
        .map(|s| distinct.binary_search(s).unwrap() as u32)
        .collect();
    (colors, distinct.len())
}

fn refine(below: &[u16], above: &[u16], colors: &mut Vec<u32>) {
    let n = colors.len();
    let mut cells = {
        let mut c = colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..n)
            .map(|v| {
                let gather = |mask: u16| {
                    let mut cs: Vec<u32> = (0..n)
                        .filter(|&u| mask >> u & 1 == 1)
                        .map(|u| colors[u])
                        .collect();
                    cs.sort_unstable();
                    cs
                };
                (colors[v], gather(below[v]), gather(above[v]))
            })
            .collect();
        let (next, count) = rerank(&sigs);
        *colors = next;
        if count == cells {
            return;
        }
        cells = count;
    }
}

fn leaf_code(below: &[u16], colors: &[u32]) -> OrderRows {
    let n = below.len();
    let mut rows = vec![0u16; n];
    for v in 0..n {
        let mut mask = 0u16;
        for u in 0..n {
            if below[v] >> u & 1 == 1 {
                mask |= 1 << colors[u];
            }
        }
        rows[colors[v] as usize] = mask;
    }
    rows
}

fn search(below: &[u16], above: &[u16], colors: Vec<u32>, best: &mut Option<OrderRows>) {
    let n = colors.len();
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let target = match (0..n as u32).find(|&c| sizes[c as usize] > 1) {
        None => {
            let code = leaf_code(below, &colors);
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        Some(c) => c,
    };
    for v in (0..n).filter(|&v| colors[v] == target) {
        let sigs: Vec<(u32, bool)> = (0..n).map(|u| (colors[u], u != v)).collect();
        let (mut next, _) = rerank(&sigs);
        refine(below, above, &mut next);
        search(below, above, next, best);
    }
}

/// Canonical relation code: equal for two order-row tables iff the posets
/// are isomorphic. Row `i` of the result lists the positions below `i`.
pub fn canonical_rows(below: &[u16]) -> OrderRows {
    assert!(below.len() <= MAX_CANONICAL_SIZE);
    if below.is_empty() {
        return Vec::new();
    }
    let above = above_rows(below);
    let mut colors = vec![0u32; below.len()];
    refine(below, &above, &mut colors);
    let mut best = None;
    search(below, &above, colors, &mut best);
    best.unwrap()
}

pub fn order_rows(p: &Poset) -> OrderRows {
    assert!(p.len() <= MAX_CANONICAL_SIZE);
    (0..p.len())
        .map(|y| p.strictly_below(y).ones().fold(0u16, |m, x| m | 1 << x))
        .collect()
}

pub fn canonical_form(p: &Poset) -> OrderRows {
    canonical_rows(&order_rows(p))
}

pub fn is_isomorphic(a: &Poset, b: &Poset) -> bool {
    a.len() == b.len() && a.cover_count() == b.cover_count() && canonical_form(a) == canonical_form(b)
}

/// The poset on elements `"0"`, `"1"`, ... with the given order rows.
pub fn poset_from_rows(rows: &[u16]) -> Poset {
    let names = (0..rows.len()).map(|i| i.to_string()).collect();
    Poset::from_relation(names, |x, y| rows[y] >> x & 1 == 1).expect("order rows are acyclic")
}

fn down_sets(rows: &[u16]) -> impl Iterator<Item = u16> + '_ {
    let m = rows.len();
    (0u32..1 << m).map(|d| d as u16).filter(move |&d| {
        (0..m).all(|x| d >> x & 1 == 0 || rows[x] & !d == 0)
    })
}

/// Canonical order rows of every unlabeled poset on `n` elements, sorted.
pub fn enum_canonical_rows(n: usize) -> Vec<OrderRows> {
    assert!(n <= MAX_CANONICAL_SIZE);
    let mut level: Vec<OrderRows> = vec![Vec::new()];
    for _ in 0..n {
        let mut next: Vec<OrderRows> = level
            .par_iter()
            .flat_map_iter(|rows| {
                down_sets(rows).map(move |d| {
                    let mut grown = rows.clone();
                    grown.push(d);
                    canonical_rows(&grown)
                })
            })
            .collect();
        next.par_sort_unstable();
        next.dedup();
        level = next;
    }
    level
}

/// One representative poset per isomorphism class on `n` elements, in a
/// deterministic order.
pub fn enum_all_posets(n: usize) -> Vec<Poset> {
    enum_canonical_rows(n)
        .par_iter()
        .map(|rows| poset_from_rows(rows))
        .collect()
}
