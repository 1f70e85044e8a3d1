//! Prototypical d-complete families and test corpora.
//!
//! Shapes and shifted shapes are oriented with the corner cell as the unique
//! maximal element: cell `(i, j)` lies below `(i', j')` iff `i' <= i` and
//! `j' <= j`.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::enum_all_posets;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Default upper bound on `n` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// An integer partition with positive, weakly decreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    /// A partition with strictly decreasing parts.
    pub fn strict(parts: Vec<usize>) -> Result<Self> {
        let p = Self::new(parts)?;
        if !p.is_strict() {
            return Err(Error::InvalidPartition(p.0));
        }
        Ok(p)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }
}

/// All partitions of `n`, parts in decreasing order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn strict_partitions_of(n: usize) -> Vec<Partition> {
    partitions_of(n)
        .into_iter()
        .filter(Partition::is_strict)
        .collect()
}

fn cell_poset(cells: Vec<(usize, usize)>) -> Result<Poset> {
    let names: Vec<String> = cells.iter().map(|(i, j)| format!("r{i}c{j}")).collect();
    let pos = |c: (usize, usize)| cells.iter().position(|&d| d == c);
    let mut pairs = Vec::new();
    for (idx, &(i, j)) in cells.iter().enumerate() {
        if j > 0 {
            if let Some(left) = pos((i, j - 1)) {
                pairs.push((idx, left));
            }
        }
        if i > 0 {
            if let Some(up) = pos((i - 1, j)) {
                pairs.push((idx, up));
            }
        }
    }
    Poset::from_index_covers(names, &pairs, false)
}

/// Shape poset of a partition; rows are indexed from the corner.
pub fn shape(lambda: &Partition) -> Result<Poset> {
    let cells = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
        .collect();
    cell_poset(cells)
}

/// Shifted shape poset of a strict partition; row `i` starts at column `i`.
pub fn shifted_shape(lambda: &Partition) -> Result<Poset> {
    if !lambda.is_strict() {
        return Err(Error::InvalidPartition(lambda.parts().to_vec()));
    }
    let cells = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &len)| (i..i + len).map(move |j| (i, j)))
        .collect();
    cell_poset(cells)
}

/// The double tailed diamond `dt_k(1)`: `a_k -> ... -> a_3 -> {b, c} -> f_3 -> ... -> f_k`.
pub fn dtd(k: usize) -> Result<Poset> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    let mut names: Vec<String> = (3..=k).rev().map(|i| format!("a{i}")).collect();
    names.push("b".into());
    names.push("c".into());
    names.extend((3..=k).map(|i| format!("f{i}")));
    let tail = k - 2;
    let (b, c) = (tail, tail + 1);
    let mut pairs: Vec<(usize, usize)> = (1..tail).map(|i| (i - 1, i)).collect();
    pairs.extend([(tail - 1, b), (tail - 1, c), (b, c + 1), (c, c + 1)]);
    pairs.extend((c + 2..names.len()).map(|i| (i - 1, i)));
    Poset::from_index_covers(names, &pairs, false)
}

/// Rooted tree from a parent table: exactly one entry is `None` (the root),
/// and every other node is covered by its parent.
pub fn rooted_tree(parents: &[Option<usize>]) -> Result<Poset> {
    let roots = parents.iter().filter(|p| p.is_none()).count();
    if roots != 1 {
        return Err(Error::InvalidTree(format!("expected one root, found {roots}")));
    }
    if let Some(&bad) = parents.iter().flatten().find(|&&q| q >= parents.len()) {
        return Err(Error::InvalidTree(format!("parent {bad} out of range")));
    }
    let names = (0..parents.len()).map(|i| format!("t{i}")).collect();
    let pairs: Vec<(usize, usize)> = parents
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.map(|q| (i, q)))
        .collect();
    Poset::from_index_covers(names, &pairs, false)
}

/// Random recursive tree on `n >= 1` nodes: node `i` hangs below a uniform
/// earlier node.
pub fn random_tree(n: usize, seed: u64) -> Result<Poset> {
    if n == 0 {
        return Err(Error::InvalidTree("a rooted tree needs a root".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parents: Vec<Option<usize>> = (0..n)
        .map(|i| (i > 0).then(|| rng.gen_range(0..i)))
        .collect();
    rooted_tree(&parents)
}

/// The induced subposet on an up-closed subset.
pub fn filter(p: &Poset, f: &FixedBitSet) -> Result<Poset> {
    for x in f.ones() {
        if let Some(y) = p.strictly_above(x).ones().find(|&y| !f.contains(y)) {
            return Err(Error::NotUpClosed(p.name(x).into(), p.name(y).into()));
        }
    }
    Ok(p.induced(f))
}

pub fn filter_ids<S: AsRef<str>>(p: &Poset, ids: &[S]) -> Result<Poset> {
    let xs = ids
        .iter()
        .map(|s| p.index_of(s.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    filter(p, &p.set_of(&xs))
}

/// Disjoint union; element ids are prefixed with `0:` and `1:`.
pub fn disjoint_union(a: &Poset, b: &Poset) -> Poset {
    let mut names: Vec<String> = a.names().iter().map(|s| format!("0:{s}")).collect();
    names.extend(b.names().iter().map(|s| format!("1:{s}")));
    let shift = a.len();
    let mut pairs = a.covers();
    pairs.extend(b.covers().into_iter().map(|(x, y)| (x + shift, y + shift)));
    Poset::from_index_covers(names, &pairs, false).expect("union of posets is a poset")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub n: usize,
    /// Sample size; ignored for exhaustive corpora.
    pub count: usize,
    pub seed: u64,
    /// Probability of relating each pair of a random linear order.
    pub density: f64,
    /// Largest `n` accepted for exhaustive corpora.
    pub cap: usize,
}

impl CorpusSpec {
    pub fn exhaustive(n: usize) -> Self {
        CorpusSpec {
            kind: CorpusKind::Exhaustive,
            n,
            count: 0,
            seed: 0,
            density: 0.0,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn random(n: usize, count: usize, seed: u64) -> Self {
        CorpusSpec {
            kind: CorpusKind::Random,
            n,
            count,
            seed,
            density: 0.35,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Random posets: each pair of a shuffled linear order is related with
/// probability `density`; the relation is closed and reduced.
pub fn random_posets(spec: &CorpusSpec) -> Vec<Poset> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let names: Vec<String> = (0..spec.n).map(|i| format!("e{i}")).collect();
    (0..spec.count)
        .map(|_| {
            let mut order: Vec<usize> = (0..spec.n).collect();
            order.shuffle(&mut rng);
            let mut less = vec![vec![false; spec.n]; spec.n];
            for i in 0..spec.n {
                for j in i + 1..spec.n {
                    if rng.gen_bool(spec.density) {
                        less[order[i]][order[j]] = true;
                    }
                }
            }
            Poset::from_relation(names.clone(), |x, y| less[x][y])
                .expect("relation follows a linear order")
        })
        .collect()
}

/// Builds the corpus described by `spec`.
pub fn corpus(spec: &CorpusSpec) -> Result<Vec<Poset>> {
    match spec.kind {
        CorpusKind::Exhaustive => {
            if spec.n > spec.cap {
                return Err(Error::TooLarge {
                    size: spec.n,
                    limit: spec.cap,
                });
            }
            Ok(enum_all_posets(spec.n))
        }
        CorpusKind::Random => Ok(random_posets(spec)),
    }
}

/// Small named posets used throughout the tests and documentation.
pub mod fixtures {
    use crate::poset::Poset;

    pub fn diamond() -> Poset {
        Poset::new(
            &["w", "x", "y", "z"],
            &[("w", "x"), ("w", "y"), ("x", "z"), ("y", "z")],
        )
        .unwrap()
    }

    /// Boolean lattice on three atoms.
    pub fn cube() -> Poset {
        Poset::new(
            &["0", "a", "b", "c", "ab", "ac", "bc", "abc"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("0", "c"),
                ("a", "ab"),
                ("a", "ac"),
                ("b", "ab"),
                ("b", "bc"),
                ("c", "ac"),
                ("c", "bc"),
                ("ab", "abc"),
                ("ac", "abc"),
                ("bc", "abc"),
            ],
        )
        .unwrap()
    }

    pub fn chain(n: usize) -> Poset {
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let covers: Vec<(String, String)> = names
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        Poset::new(&names, &covers).unwrap()
    }

    pub fn antichain(n: usize) -> Poset {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        Poset::new::<String>(&names, &[]).unwrap()
    }

    /// `w -> {x, y}` and `w' -> {y, y'}`.
    pub fn w_poset() -> Poset {
        Poset::new(
            &["w", "w'", "x", "y", "y'"],
            &[("w", "x"), ("w", "y"), ("w'", "y"), ("w'", "y'")],
        )
        .unwrap()
    }

    /// `{w, w'} -> {x, y}`.
    pub fn criss_cross() -> Poset {
        Poset::new(
            &["w", "w'", "x", "y"],
            &[("w", "x"), ("w", "y"), ("w'", "x"), ("w'", "y")],
        )
        .unwrap()
    }

    /// `{w, w'} -> {x, y} -> z`.
    pub fn criss_cross_with_top() -> Poset {
        Poset::new(
            &["w", "w'", "x", "y", "z"],
            &[
                ("w", "x"),
                ("w", "y"),
                ("w'", "x"),
                ("w'", "y"),
                ("x", "z"),
                ("y", "z"),
            ],
        )
        .unwrap()
    }

    /// A diamond `w -> {x, y} -> z` with a second chain `w -> u -> z`.
    pub fn extra_chain() -> Poset {
        Poset::new(
            &["w", "x", "y", "u", "z"],
            &[
                ("w", "x"),
                ("w", "y"),
                ("w", "u"),
                ("x", "z"),
                ("y", "z"),
                ("u", "z"),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![3, 1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Partition::strict(vec![2, 2]).is_err());
        assert_eq!(Partition::new(vec![3, 3, 1]).unwrap().size(), 7);
        assert_eq!(partitions_of(5).len(), 7);
        assert_eq!(partitions_of(0).len(), 1);
        assert_eq!(strict_partitions_of(6).len(), 4);
    }

    #[test]
    fn small_shapes() {
        let one = shape(&Partition::new(vec![1]).unwrap()).unwrap();
        assert_eq!(one.len(), 1);
        let sq = shape(&Partition::new(vec![2, 2]).unwrap()).unwrap();
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.cover_count(), 4);
        assert_eq!(sq.maximal_elements(), vec![0]);
        assert_eq!(sq.linear_extension_count().unwrap(), 2);
        let s32 = shape(&Partition::new(vec![3, 2]).unwrap()).unwrap();
        assert_eq!(s32.len(), 5);
        assert!(s32.rank_function().is_ok());
    }

    #[test]
    fn shifted_shapes() {
        let s = |parts: Vec<usize>| shifted_shape(&Partition::strict(parts).unwrap()).unwrap();
        assert_eq!(s(vec![2, 1]).len(), 3);
        assert_eq!(s(vec![1]).len(), 1);
        let big = s(vec![9, 6, 3, 1]);
        assert_eq!(big.len(), 19);
        assert_eq!(big.top_tree().unwrap().len(), 10);
        assert!(shifted_shape(&Partition::new(vec![2, 2]).unwrap()).is_err());
    }

    #[test]
    fn dtd_shape() {
        for k in 3..=9 {
            let p = dtd(k).unwrap();
            assert_eq!(p.len(), 2 * k - 2);
            let incomparable = (0..p.len())
                .flat_map(|x| (0..p.len()).map(move |y| (x, y)))
                .filter(|&(x, y)| x < y && !p.comparable(x, y))
                .count();
            assert_eq!(incomparable, 1, "exactly one incomparable pair");
        }
        assert_eq!(dtd(2).unwrap_err(), Error::InvalidK(2));
    }

    #[test]
    fn trees() {
        assert_eq!(rooted_tree(&[None]).unwrap().len(), 1);
        let path = rooted_tree(&[None, Some(0), Some(1), Some(2)]).unwrap();
        assert_eq!(path.linear_extension_count().unwrap(), 1);
        assert!(rooted_tree(&[None, None]).is_err());
        assert!(rooted_tree(&[Some(1), Some(0), None]).is_err());
        let t = random_tree(10, 7).unwrap();
        assert_eq!(t.len(), 10);
        assert_eq!(t.maximal_elements().len(), 1);
        assert_eq!(t.cover_count(), 9);
    }

    #[test]
    fn filters() {
        let d = fixtures::diamond();
        let f = filter_ids(&d, &["x", "z"]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.cover_count(), 1);
        assert!(matches!(
            filter_ids(&d, &["x"]),
            Err(Error::NotUpClosed(_, _))
        ));
        let all = filter_ids(&d, &["w", "x", "y", "z"]).unwrap();
        assert_eq!(all, d);
        let p = dtd(4).unwrap();
        let neck = filter_ids(&p, &["b", "c", "f3", "f4"]).unwrap();
        assert_eq!(neck.len(), 4);
        assert_eq!(neck.cover_count(), 3);
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let spec = CorpusSpec::random(6, 10, 1);
        let a = random_posets(&spec);
        let b = random_posets(&spec);
        assert_eq!(a.len(), 10);
        assert_eq!(a, b);
        assert!(random_posets(&CorpusSpec::random(0, 1, 1))[0].is_empty());
    }

    #[test]
    fn exhaustive_corpus_respects_cap() {
        let mut spec = CorpusSpec::exhaustive(9);
        assert!(corpus(&spec).is_err());
        spec.n = 3;
        assert_eq!(corpus(&spec).unwrap().len(), 5);
    }
}
