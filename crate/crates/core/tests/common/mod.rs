//! Brute-force oracles. None of these touch the library's structure
//! finders, canonical forms or isomorphism code; they work on plain
//! strict-order matrices.
#![allow(dead_code)]

use std::collections::BTreeSet;

use dcomplete::Poset;

pub type Order = Vec<Vec<bool>>;

pub fn order_of(p: &Poset, elems: &[usize]) -> Order {
    elems
        .iter()
        .map(|&a| elems.iter().map(|&b| p.lt(a, b)).collect())
        .collect()
}

/// `dt_k(1)` as an ordinal sum: a chain of k - 2, a two-element antichain,
/// then another chain of k - 2 (one shorter without the top).
pub fn dtd_order(k: usize, with_top: bool) -> Order {
    let mut levels: Vec<usize> = (0..k - 2).collect();
    levels.extend([k - 2, k - 2]);
    let neck = if with_top { k - 2 } else { k - 3 };
    levels.extend((k - 1..).take(neck));
    levels
        .iter()
        .map(|&a| levels.iter().map(|&b| a < b).collect())
        .collect()
}

/// Plain backtracking over bijections, checking every pair as it goes.
pub fn isomorphic(a: &Order, b: &Order) -> bool {
    fn extend(a: &Order, b: &Order, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let i = map.len();
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] {
                continue;
            }
            let fits = map
                .iter()
                .enumerate()
                .all(|(s, &t)| a[s][i] == b[t][j] && a[i][s] == b[j][t]);
            if fits {
                map.push(j);
                used[j] = true;
                if extend(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
        }
        false
    }
    a.len() == b.len() && extend(a, b, &mut Vec::new(), &mut vec![false; b.len()])
}

fn interval(p: &Poset, w: usize, z: usize) -> Vec<usize> {
    (0..p.len()).filter(|&v| p.le(w, v) && p.le(v, z)).collect()
}

fn convex(p: &Poset, s: &[usize]) -> bool {
    s.iter().all(|&a| {
        s.iter()
            .all(|&b| (0..p.len()).all(|v| !(p.lt(a, v) && p.lt(v, b)) || s.contains(&v)))
    })
}

/// Element sets of all intervals isomorphic to `dt_k(1)`.
pub fn dk_intervals(p: &Poset, k: usize) -> BTreeSet<Vec<usize>> {
    let target = dtd_order(k, true);
    let mut out = BTreeSet::new();
    for w in 0..p.len() {
        for z in 0..p.len() {
            if !p.lt(w, z) {
                continue;
            }
            let iv = interval(p, w, z);
            if iv.len() == 2 * k - 2 && isomorphic(&order_of(p, &iv), &target) {
                out.insert(iv);
            }
        }
    }
    out
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Element sets of all convex subsets isomorphic to `dt_k(1)` minus its top.
pub fn dk_minus_sets(p: &Poset, k: usize) -> BTreeSet<Vec<usize>> {
    let target = dtd_order(k, false);
    subsets(p.len(), 2 * k - 3)
        .into_iter()
        .filter(|s| convex(p, s) && isomorphic(&order_of(p, s), &target))
        .collect()
}

/// Elements `z` such that `S + z` is the interval from the bottom of `S`
/// to `z` and is isomorphic to `dt_k(1)`.
pub fn completions(p: &Poset, s: &[usize], k: usize) -> Vec<usize> {
    let target = dtd_order(k, true);
    let w = *s.iter().find(|&&a| s.iter().all(|&b| p.le(a, b))).unwrap();
    (0..p.len())
        .filter(|z| !s.contains(z))
        .filter(|&z| {
            let mut with: Vec<usize> = s.to_vec();
            with.push(z);
            with.sort_unstable();
            interval(p, w, z) == with && isomorphic(&order_of(p, &with), &target)
        })
        .collect()
}

fn maximal_in(p: &Poset, s: &[usize]) -> Vec<usize> {
    s.iter()
        .copied()
        .filter(|&a| s.iter().all(|&b| !p.lt(a, b)))
        .collect()
}

fn lower_covers(p: &Poset, z: usize) -> Vec<usize> {
    (0..p.len()).filter(|&v| p.is_cover(v, z)).collect()
}

/// d_k-completeness read straight off the covers-exactly formulation.
pub fn kokyuroku(p: &Poset, k: usize) -> bool {
    let sets = dk_minus_sets(p, k);
    sets.iter().all(|s| {
        let top = maximal_in(p, s);
        (0..p.len()).any(|z| {
            lower_covers(p, z) == top
                && sets.iter().all(|t| {
                    t == s || !maximal_in(p, t).iter().all(|m| p.is_cover(*m, z))
                })
        })
    })
}

/// Every strict order on `0..n` that extends the natural order, as
/// matrices. Every isomorphism class has at least one such labelling.
pub fn natural_orders(n: usize) -> Vec<Order> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut m = vec![vec![false; n]; n];
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            m[i][j] = mask >> bit & 1 == 1;
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| !m[a][b] || (0..n).all(|c| !m[b][c] || m[a][c]))
        });
        if transitive {
            out.push(m);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Number of posets on `n` points up to isomorphism, by taking the
/// lexicographically least relabelling of every natural order.
pub fn class_count(n: usize) -> usize {
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    for m in natural_orders(n) {
        let key = perms
            .iter()
            .map(|pi| {
                let mut bits = vec![false; n * n];
                for a in 0..n {
                    for b in 0..n {
                        bits[pi[a] * n + pi[b]] = m[a][b];
                    }
                }
                bits
            })
            .min()
            .unwrap();
        seen.insert(key);
    }
    seen.len()
}

pub fn poset_of(m: &Order) -> Poset {
    let names = (0..m.len()).map(|i| format!("v{i}")).collect();
    Poset::from_relation(names, |a, b| m[a][b]).unwrap()
}
