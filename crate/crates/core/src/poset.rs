//! Immutable finite posets stored as a Hasse diagram plus bitset reachability.
//!
//! Elements carry opaque string ids but every query below the id-based
//! convenience layer works on dense indices `0..len()`, in the order the
//! elements were supplied. That order is also the canonical order used to
//! pick reproducible witnesses elsewhere in the crate.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest poset accepted by [`Poset::linear_extension_count`].
pub const LINEAR_EXTENSION_LIMIT: usize = 40;

#[derive(Clone, Debug)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    above: Vec<FixedBitSet>,
    below: Vec<FixedBitSet>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.upper == other.upper
    }
}

impl Eq for Poset {}

/// The closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalView {
    pub lo: usize,
    pub hi: usize,
    /// Sorted member indices.
    pub members: Vec<usize>,
}

impl IntervalView {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// A rank function normalized so that the largest rank in every connected
/// component is 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankAssignment {
    pub ranks: Vec<i64>,
}

impl RankAssignment {
    pub fn rank(&self, x: usize) -> i64 {
        self.ranks[x]
    }
}

/// Two Hasse-diagram paths with common endpoints whose signed lengths
/// (up-steps minus down-steps) differ, so no rank function exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankConflict {
    pub path_a: Vec<usize>,
    pub path_b: Vec<usize>,
}

impl Poset {
    /// Builds a poset, rejecting redundant cover pairs.
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        Self::build(elements, covers, false)
    }

    /// Builds a poset from element ids and cover pairs `(x, y)` meaning `y`
    /// covers `x`. With `auto_reduce` set, pairs implied by longer chains are
    /// dropped instead of reported.
    pub fn build<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
        auto_reduce: bool,
    ) -> Result<Self> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let mut pairs = Vec::with_capacity(covers.len());
        for (x, y) in covers {
            let lookup = |s: &S| {
                index
                    .get(s.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()))
            };
            pairs.push((lookup(x)?, lookup(y)?));
        }
        Self::from_index_covers(names, &pairs, auto_reduce)
    }

    pub(crate) fn from_index_covers(
        names: Vec<String>,
        pairs: &[(usize, usize)],
        auto_reduce: bool,
    ) -> Result<Self> {
        let n = names.len();
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        if index.len() != n {
            let mut seen = HashMap::new();
            for name in &names {
                if seen.insert(name, ()).is_some() {
                    return Err(Error::DuplicateElement(name.clone()));
                }
            }
        }

        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(x, y) in pairs {
            if x == y {
                return Err(Error::CycleDetected(vec![names[x].clone(), names[x].clone()]));
            }
            upper[x].push(y);
            lower[y].push(x);
        }
        for list in upper.iter_mut().chain(lower.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }

        let order = topological_order(&upper, &lower)
            .ok_or_else(|| Error::CycleDetected(find_cycle(&upper, &names)))?;

        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for &y in &order {
            let mut acc = FixedBitSet::with_capacity(n);
            for &x in &lower[y] {
                acc.union_with(&below[x]);
                acc.insert(x);
            }
            below[y] = acc;
        }

        let mut redundant = Vec::new();
        for y in 0..n {
            for &x in &lower[y] {
                if lower[y].iter().any(|&v| v != x && below[v].contains(x)) {
                    redundant.push((x, y));
                }
            }
        }
        if !redundant.is_empty() {
            if !auto_reduce {
                let (x, y) = redundant[0];
                return Err(Error::RedundantCover(names[x].clone(), names[y].clone()));
            }
            for (x, y) in redundant {
                upper[x].retain(|&v| v != y);
                lower[y].retain(|&v| v != x);
            }
        }

        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for y in 0..n {
            for x in below[y].ones() {
                above[x].insert(y);
            }
        }

        Ok(Poset {
            names,
            index,
            upper,
            lower,
            above,
            below,
        })
    }

    /// Builds the poset whose strict order is the transitive closure of
    /// `less`, which must be acyclic.
    pub fn from_relation<F>(names: Vec<String>, less: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        let n = names.len();
        let mut pairs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && less(x, y) {
                    pairs.push((x, y));
                }
            }
        }
        Self::from_index_covers(names, &pairs, true)
    }

    pub fn empty() -> Self {
        Poset {
            names: Vec::new(),
            index: HashMap::new(),
            upper: Vec::new(),
            lower: Vec::new(),
            above: Vec::new(),
            below: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names_of(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.names[x].clone()).collect()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.upper[x].binary_search(&y).is_ok()
    }

    /// All cover pairs, sorted by (lower index, upper index).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.upper
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn cover_count(&self) -> usize {
        self.upper.iter().map(Vec::len).sum()
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.below[y].contains(x)
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.lt(y, x)
    }

    /// Strict up-set of `x`.
    pub fn strictly_above(&self, x: usize) -> &FixedBitSet {
        &self.above[x]
    }

    /// Strict down-set of `x`.
    pub fn strictly_below(&self, x: usize) -> &FixedBitSet {
        &self.below[x]
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn set_of(&self, xs: &[usize]) -> FixedBitSet {
        let mut s = self.empty_set();
        for &x in xs {
            s.insert(x);
        }
        s
    }

    /// Members of `[lo, hi]`; empty when `lo` is not below or equal to `hi`.
    pub fn interval_set(&self, lo: usize, hi: usize) -> FixedBitSet {
        let mut s = self.empty_set();
        if !self.le(lo, hi) {
            return s;
        }
        s.union_with(&self.above[lo]);
        s.intersect_with(&self.below[hi]);
        s.insert(lo);
        s.insert(hi);
        s
    }

    pub fn interval_at(&self, lo: usize, hi: usize) -> Option<IntervalView> {
        if !self.le(lo, hi) {
            return None;
        }
        Some(IntervalView {
            lo,
            hi,
            members: self.interval_set(lo, hi).ones().collect(),
        })
    }

    pub fn is_less(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.lt(self.index_of(x)?, self.index_of(y)?))
    }

    pub fn interval(&self, lo: &str, hi: &str) -> Result<IntervalView> {
        let (a, b) = (self.index_of(lo)?, self.index_of(hi)?);
        self.interval_at(a, b)
            .ok_or_else(|| Error::NotComparable(lo.to_string(), hi.to_string()))
    }

    /// True iff every element strictly between two members is a member.
    pub fn is_convex(&self, s: &FixedBitSet) -> bool {
        s.ones().all(|x| {
            s.ones()
                .filter(|&z| self.lt(x, z))
                .all(|z| self.interval_set(x, z).is_subset(s))
        })
    }

    pub fn is_convex_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<bool> {
        let xs = ids
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.is_convex(&self.set_of(&xs)))
    }

    pub fn is_up_closed(&self, s: &FixedBitSet) -> bool {
        s.ones().all(|x| self.above[x].is_subset(s))
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.upper[x].is_empty()).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lower[x].is_empty()).collect()
    }

    /// Connected components of the Hasse diagram, each sorted, ordered by
    /// their smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in self.upper[x].iter().chain(&self.lower[x]) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Finds a rank function or a pair of paths that rules one out.
    pub fn rank_function(&self) -> std::result::Result<RankAssignment, RankConflict> {
        let n = self.len();
        let mut rank: Vec<Option<i64>> = vec![None; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut ranks = vec![0i64; n];
        for comp in self.components() {
            let root = comp[0];
            rank[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                let rx = rank[x].unwrap();
                let steps = self.upper[x]
                    .iter()
                    .map(|&y| (y, 1))
                    .chain(self.lower[x].iter().map(|&y| (y, -1)));
                for (y, step) in steps {
                    match rank[y] {
                        None => {
                            rank[y] = Some(rx + step);
                            parent[y] = Some(x);
                            queue.push_back(y);
                        }
                        Some(ry) if ry != rx + step => {
                            return Err(conflict_paths(&parent, x, y));
                        }
                        Some(_) => {}
                    }
                }
            }
            let top = comp.iter().map(|&x| rank[x].unwrap()).max().unwrap();
            for &x in &comp {
                ranks[x] = rank[x].unwrap() - top;
            }
        }
        Ok(RankAssignment { ranks })
    }

    /// Elements whose up-set is a chain; requires a unique maximal element.
    pub fn top_tree(&self) -> Result<Vec<usize>> {
        if self.maximal_elements().len() != 1 {
            return Err(Error::NoUniqueMax);
        }
        Ok((0..self.len())
            .filter(|&x| {
                let mut up: Vec<usize> = self.above[x].ones().collect();
                up.push(x);
                up.iter()
                    .all(|&a| up.iter().all(|&b| self.comparable(a, b)))
            })
            .collect())
    }

    /// Number of linear extensions, by dynamic programming over down-sets.
    pub fn linear_extension_count(&self) -> Result<u128> {
        let n = self.len();
        if n > LINEAR_EXTENSION_LIMIT {
            return Err(Error::TooLarge {
                size: n,
                limit: LINEAR_EXTENSION_LIMIT,
            });
        }
        let lower_masks: Vec<u64> = (0..n)
            .map(|y| self.lower[y].iter().fold(0u64, |m, &x| m | (1 << x)))
            .collect();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut memo = HashMap::new();
        Ok(count_completions(0, full, &lower_masks, &mut memo))
    }

    /// The induced subposet on `keep`, preserving element order.
    pub fn induced(&self, keep: &FixedBitSet) -> Poset {
        let kept: Vec<usize> = keep.ones().collect();
        let names = kept.iter().map(|&x| self.names[x].clone()).collect();
        Poset::from_relation(names, |a, b| self.lt(kept[a], kept[b]))
            .expect("a suborder of a poset is a poset")
    }
}

fn topological_order(upper: &[Vec<usize>], lower: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = upper.len();
    let mut indegree: Vec<usize> = lower.iter().map(Vec::len).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&x| indegree[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &y in &upper[x] {
            indegree[y] -= 1;
            if indegree[y] == 0 {
                queue.push_back(y);
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn find_cycle(upper: &[Vec<usize>], names: &[String]) -> Vec<String> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let n = upper.len();
    let mut state = vec![0u8; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        stack.push((start, 0));
        state[start] = 1;
        while let Some(&mut (x, ref mut next)) = stack.last_mut() {
            if let Some(&y) = upper[x].get(*next) {
                *next += 1;
                match state[y] {
                    0 => {
                        state[y] = 1;
                        stack.push((y, 0));
                    }
                    1 => {
                        let pos = stack.iter().position(|&(v, _)| v == y).unwrap();
                        let mut cycle: Vec<String> =
                            stack[pos..].iter().map(|&(v, _)| names[v].clone()).collect();
                        cycle.push(names[y].clone());
                        return cycle;
                    }
                    _ => {}
                }
            } else {
                state[x] = 2;
                stack.pop();
            }
        }
    }
    Vec::new()
}

fn conflict_paths(parent: &[Option<usize>], x: usize, y: usize) -> RankConflict {
    let to_root = |mut v: usize| {
        let mut path = vec![v];
        while let Some(p) = parent[v] {
            path.push(p);
            v = p;
        }
        path.reverse();
        path
    };
    let py = to_root(y);
    let mut px = to_root(x);
    px.push(y);
    let common = py
        .iter()
        .zip(&px)
        .take_while(|(a, b)| a == b)
        .count()
        .max(1);
    RankConflict {
        path_a: py[common - 1..].to_vec(),
        path_b: px[common - 1..].to_vec(),
    }
}

fn count_completions(
    placed: u64,
    full: u64,
    lower_masks: &[u64],
    memo: &mut HashMap<u64, u128>,
) -> u128 {
    if placed == full {
        return 1;
    }
    if let Some(&c) = memo.get(&placed) {
        return c;
    }
    let mut total = 0u128;
    for (x, &need) in lower_masks.iter().enumerate() {
        let bit = 1u64 << x;
        if placed & bit == 0 && need & !placed == 0 {
            total += count_completions(placed | bit, full, lower_masks, memo);
        }
    }
    memo.insert(placed, total);
    total
}

impl RankConflict {
    /// Up-steps minus down-steps along a path.
    pub fn signed_length(p: &Poset, path: &[usize]) -> i64 {
        path.windows(2)
            .map(|w| if p.is_cover(w[0], w[1]) { 1 } else { -1 })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Poset {
        Poset::new(
            &["w", "x", "y", "z"],
            &[("w", "x"), ("w", "y"), ("x", "z"), ("y", "z")],
        )
        .unwrap()
    }

    fn chain(n: usize) -> Poset {
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let covers: Vec<(String, String)> = (1..n)
            .map(|i| (names[i - 1].clone(), names[i].clone()))
            .collect();
        Poset::new(&names, &covers).unwrap()
    }

    #[test]
    fn builds_diamond() {
        let p = diamond();
        assert_eq!(p.len(), 4);
        assert!(p.is_less("w", "z").unwrap());
        assert!(!p.is_less("x", "y").unwrap());
        assert!(!p.is_less("y", "x").unwrap());
    }

    #[test]
    fn rejects_redundant_cover() {
        let err = Poset::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap_err();
        assert_eq!(err, Error::RedundantCover("a".into(), "c".into()));
        let p = Poset::build(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")], true).unwrap();
        assert_eq!(p.cover_count(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            Poset::new(&["a", "a"], &[]).unwrap_err(),
            Error::DuplicateElement("a".into())
        );
        assert_eq!(
            Poset::new(&["a"], &[("a", "q")]).unwrap_err(),
            Error::UnknownElement("q".into())
        );
        let err = Poset::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap_err();
        assert!(matches!(err, Error::CycleDetected(ref c) if c.len() == 4), "{err:?}");
        assert!(matches!(
            Poset::new(&["a"], &[("a", "a")]).unwrap_err(),
            Error::CycleDetected(_)
        ));
    }

    #[test]
    fn intervals_and_convexity() {
        let p = diamond();
        assert_eq!(p.interval("w", "z").unwrap().len(), 4);
        assert_eq!(
            p.interval("x", "y").unwrap_err(),
            Error::NotComparable("x".into(), "y".into())
        );
        let c = chain(3);
        assert!(!c.is_convex_ids(&["c0", "c2"]).unwrap());
        assert!(c.is_convex_ids(&["c0", "c1"]).unwrap());
        let c5 = chain(5);
        assert_eq!(c5.interval("c0", "c4").unwrap().len(), 5);
    }

    #[test]
    fn components_of_small_posets() {
        assert_eq!(diamond().components().len(), 1);
        assert_eq!(Poset::empty().components().len(), 0);
        let two = Poset::new(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        assert_eq!(two.components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn diamond_rank_normalized_at_top() {
        let r = diamond().rank_function().unwrap();
        assert_eq!(r.ranks, vec![-2, -1, -1, 0]);
    }

    #[test]
    fn unequal_paths_are_not_ranked() {
        let p = Poset::new(
            &["a", "b", "d", "e", "f"],
            &[("a", "b"), ("b", "f"), ("a", "d"), ("d", "e"), ("e", "f")],
        )
        .unwrap();
        let c = p.rank_function().unwrap_err();
        assert_eq!(c.path_a.first(), c.path_b.first());
        assert_eq!(c.path_a.last(), c.path_b.last());
        assert_ne!(
            RankConflict::signed_length(&p, &c.path_a),
            RankConflict::signed_length(&p, &c.path_b)
        );
    }

    #[test]
    fn top_tree_of_diamond_and_chain() {
        assert_eq!(diamond().top_tree().unwrap(), vec![1, 2, 3]);
        assert_eq!(chain(4).top_tree().unwrap(), vec![0, 1, 2, 3]);
        let anti = Poset::new(&["a", "b"], &[]).unwrap();
        assert_eq!(anti.top_tree().unwrap_err(), Error::NoUniqueMax);
    }

    #[test]
    fn linear_extensions() {
        let anti = Poset::new(&["a", "b", "c"], &[]).unwrap();
        assert_eq!(anti.linear_extension_count().unwrap(), 6);
        assert_eq!(diamond().linear_extension_count().unwrap(), 2);
        assert_eq!(chain(6).linear_extension_count().unwrap(), 1);
        assert_eq!(Poset::empty().linear_extension_count().unwrap(), 1);
    }

    #[test]
    fn induced_subposet_rereduces() {
        let c = chain(3);
        let sub = c.induced(&c.set_of(&[0, 2]));
        assert_eq!(sub.covers(), vec![(0, 1)]);
        assert_eq!(sub.names(), &["c0".to_string(), "c2".to_string()]);
    }
}
