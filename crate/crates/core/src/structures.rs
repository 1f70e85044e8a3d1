//! Detection of the local configurations built from double tailed diamonds.
//!
//! `dt_k(1)` is the poset `a_k -> ... -> a_3 -> {b, c} -> f_3 -> ... -> f_k`.
//! A d_k-interval is an interval isomorphic to it, a d_k⁻-set is a convex set
//! isomorphic to it with `f_k` removed, a Y_k-set is the stem `a_k..a_3` with
//! both elbows, and a ΛY_k-set is a Y_k-set with two extra elements covered
//! by its lowest stem element.
//!
//! All finders grow structures level by level from the k = 3 case. Every
//! intermediate candidate already contains the set it must equal, so each
//! membership test reduces to comparing the size of one interval.
//! Results come back in canonical order: by bottom, then elbows.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::poset::Poset;

/// `{w; x, y; z}` with `w -> {x, y} -> z`; elbows stored with `x < y`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Diamond {
    pub bottom: usize,
    pub elbows: (usize, usize),
    pub top: usize,
}

/// `{w; x, y}` with `w -> {x, y}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Vee {
    pub bottom: usize,
    pub elbows: (usize, usize),
}

/// A d_k-interval `{w_k, ..., w_3; x, y; z_3, ..., z_k}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DkInterval {
    pub k: usize,
    /// `w_k, ..., w_3`, bottom first.
    pub tail: Vec<usize>,
    pub elbows: (usize, usize),
    /// `z_3, ..., z_k`, lowest first.
    pub neck: Vec<usize>,
}

/// A d_k⁻-set `{w_k, ..., w_3; x, y; z_3, ..., z_{k-1}}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DkMinusSet {
    pub k: usize,
    pub tail: Vec<usize>,
    pub elbows: (usize, usize),
    /// `z_3, ..., z_{k-1}`; empty when k = 3.
    pub neck: Vec<usize>,
}

/// A Y_k-set `[w_k; x, y]` with stem `w_k -> ... -> w_3 -> {x, y}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct YkSet {
    pub k: usize,
    pub stem: Vec<usize>,
    pub elbows: (usize, usize),
}

/// A ΛY_k-set `[u, v; x, y]` with `{u, v} -> w_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LambdaYkSet {
    pub k: usize,
    pub forks: (usize, usize),
    pub y_set: YkSet,
}

/// Two overlapping d_k⁻-sets; they differ only in their bottoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OverlapPair {
    pub first: DkMinusSet,
    pub second: DkMinusSet,
}

fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        Err(Error::InvalidK(k))
    } else {
        Ok(())
    }
}

impl Diamond {
    pub fn elements(&self) -> Vec<usize> {
        vec![self.bottom, self.elbows.0, self.elbows.1, self.top]
    }
}

impl DkInterval {
    pub fn bottom(&self) -> usize {
        self.tail[0]
    }

    pub fn top(&self) -> usize {
        *self.neck.last().unwrap()
    }

    pub fn elements(&self) -> Vec<usize> {
        let mut v = self.tail.clone();
        v.extend([self.elbows.0, self.elbows.1]);
        v.extend(&self.neck);
        v
    }

    pub fn contains(&self, x: usize) -> bool {
        self.tail.contains(&x) || self.neck.contains(&x) || x == self.elbows.0 || x == self.elbows.1
    }

    /// The d_h-interval `[w_h, z_h]` nested inside, for `3 <= h <= k`.
    pub fn restrict(&self, h: usize) -> DkInterval {
        assert!((3..=self.k).contains(&h));
        DkInterval {
            k: h,
            tail: self.tail[self.k - h..].to_vec(),
            elbows: self.elbows,
            neck: self.neck[..h - 2].to_vec(),
        }
    }

    /// The d_k⁻-set left after removing the maximum.
    pub fn without_top(&self) -> DkMinusSet {
        DkMinusSet {
            k: self.k,
            tail: self.tail.clone(),
            elbows: self.elbows,
            neck: self.neck[..self.k - 3].to_vec(),
        }
    }
}

impl DkMinusSet {
    pub fn bottom(&self) -> usize {
        self.tail[0]
    }

    /// `{x, y}` when k = 3, otherwise `{z_{k-1}}`.
    pub fn maximal_elements(&self) -> Vec<usize> {
        match self.neck.last() {
            Some(&z) => vec![z],
            None => vec![self.elbows.0, self.elbows.1],
        }
    }

    pub fn elements(&self) -> Vec<usize> {
        let mut v = self.tail.clone();
        v.extend([self.elbows.0, self.elbows.1]);
        v.extend(&self.neck);
        v
    }

    pub fn contains(&self, x: usize) -> bool {
        self.tail.contains(&x) || self.neck.contains(&x) || x == self.elbows.0 || x == self.elbows.1
    }

    pub fn complete_with(&self, z: usize) -> DkInterval {
        let mut neck = self.neck.clone();
        neck.push(z);
        DkInterval {
            k: self.k,
            tail: self.tail.clone(),
            elbows: self.elbows,
            neck,
        }
    }
}

impl YkSet {
    pub fn elements(&self) -> Vec<usize> {
        let mut v = self.stem.clone();
        v.extend([self.elbows.0, self.elbows.1]);
        v
    }

    pub fn contains(&self, x: usize) -> bool {
        self.stem.contains(&x) || x == self.elbows.0 || x == self.elbows.1
    }
}

impl LambdaYkSet {
    pub fn elements(&self) -> Vec<usize> {
        let mut v = vec![self.forks.0, self.forks.1];
        v.extend(self.y_set.elements());
        v
    }
}

/// Common upper covers of `x` and `y`.
pub fn common_upper_covers(p: &Poset, x: usize, y: usize) -> Vec<usize> {
    let ys = p.upper_covers(y);
    p.upper_covers(x)
        .iter()
        .copied()
        .filter(|z| ys.binary_search(z).is_ok())
        .collect()
}

/// Common lower covers of `x` and `y`.
pub fn common_lower_covers(p: &Poset, x: usize, y: usize) -> Vec<usize> {
    let ys = p.lower_covers(y);
    p.lower_covers(x)
        .iter()
        .copied()
        .filter(|z| ys.binary_search(z).is_ok())
        .collect()
}

pub fn find_vees(p: &Poset) -> Vec<Vee> {
    let mut out = Vec::new();
    for w in 0..p.len() {
        let up = p.upper_covers(w);
        for (i, &x) in up.iter().enumerate() {
            for &y in &up[i + 1..] {
                out.push(Vee {
                    bottom: w,
                    elbows: (x, y),
                });
            }
        }
    }
    out
}

pub fn find_diamonds(p: &Poset) -> Vec<Diamond> {
    find_vees(p)
        .into_iter()
        .flat_map(|v| {
            common_upper_covers(p, v.elbows.0, v.elbows.1)
                .into_iter()
                .map(move |z| Diamond {
                    bottom: v.bottom,
                    elbows: v.elbows,
                    top: z,
                })
        })
        .collect()
}

/// True iff the diamond is the whole interval between its bottom and top.
pub fn diamond_is_interval(p: &Poset, d: &Diamond) -> bool {
    p.interval_set(d.bottom, d.top).count_ones(..) == 4
}

fn d3_intervals(p: &Poset) -> Vec<DkInterval> {
    find_diamonds(p)
        .into_iter()
        .filter(|d| diamond_is_interval(p, d))
        .map(|d| DkInterval {
            k: 3,
            tail: vec![d.bottom],
            elbows: d.elbows,
            neck: vec![d.top],
        })
        .collect()
}

/// Extends each d_{k-1}-interval by one tail and one neck element.
fn grow_intervals(p: &Poset, prev: &[DkInterval]) -> Vec<DkInterval> {
    let mut out = Vec::new();
    for iv in prev {
        let size = 2 * (iv.k + 1) - 2;
        for &w in p.lower_covers(iv.bottom()) {
            for &z in p.upper_covers(iv.top()) {
                if p.interval_set(w, z).count_ones(..) == size {
                    let mut tail = vec![w];
                    tail.extend(&iv.tail);
                    let mut neck = iv.neck.clone();
                    neck.push(z);
                    out.push(DkInterval {
                        k: iv.k + 1,
                        tail,
                        elbows: iv.elbows,
                        neck,
                    });
                }
            }
        }
    }
    out
}

fn canonical_sort<T: Ord + Clone, K: Ord>(items: &mut [T], key: impl Fn(&T) -> K) {
    items.sort_by(|a, b| key(a).cmp(&key(b)).then_with(|| a.cmp(b)));
}

/// All d_k-intervals of `p`.
pub fn find_dk_intervals(p: &Poset, k: usize) -> Result<Vec<DkInterval>> {
    check_k(k)?;
    if 2 * k - 2 > p.len() {
        return Ok(Vec::new());
    }
    let mut level = d3_intervals(p);
    for _ in 4..=k {
        if level.is_empty() {
            break;
        }
        level = grow_intervals(p, &level);
    }
    canonical_sort(&mut level, |iv| (iv.bottom(), iv.elbows));
    Ok(level)
}

/// All d_k⁻-sets. For k = 3 these are the vees.
pub fn find_dk_minus_sets(p: &Poset, k: usize) -> Result<Vec<DkMinusSet>> {
    check_k(k)?;
    if 2 * k - 3 > p.len() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    if k == 3 {
        out.extend(find_vees(p).into_iter().map(|v| DkMinusSet {
            k: 3,
            tail: vec![v.bottom],
            elbows: v.elbows,
            neck: Vec::new(),
        }));
    } else {
        let size = 2 * k - 3;
        for iv in find_dk_intervals(p, k - 1)? {
            for &w in p.lower_covers(iv.bottom()) {
                if p.interval_set(w, iv.top()).count_ones(..) == size {
                    let mut tail = vec![w];
                    tail.extend(&iv.tail);
                    out.push(DkMinusSet {
                        k,
                        tail,
                        elbows: iv.elbows,
                        neck: iv.neck.clone(),
                    });
                }
            }
        }
    }
    canonical_sort(&mut out, |s| (s.bottom(), s.elbows));
    Ok(out)
}

/// Every `z` such that `s ∪ {z}` is a d_k-interval. Such a `z` covers the
/// maximal element(s) of `s` and `s ∪ {z}` must be all of `[w_k, z]`.
pub fn completions_of(p: &Poset, s: &DkMinusSet) -> Vec<usize> {
    let size = 2 * s.k - 2;
    let bottom = s.bottom();
    let candidates = match s.neck.last() {
        Some(&top) => p.upper_covers(top).to_vec(),
        None => common_upper_covers(p, s.elbows.0, s.elbows.1),
    };
    candidates
        .into_iter()
        .filter(|&z| p.interval_set(bottom, z).count_ones(..) == size)
        .collect()
}

/// All Y_k-sets. A Y_3-set is a vee.
pub fn find_yk_sets(p: &Poset, k: usize) -> Result<Vec<YkSet>> {
    check_k(k)?;
    if k > p.len() {
        return Ok(Vec::new());
    }
    let mut level: Vec<YkSet> = find_vees(p)
        .into_iter()
        .map(|v| YkSet {
            k: 3,
            stem: vec![v.bottom],
            elbows: v.elbows,
        })
        .collect();
    for h in 4..=k {
        let mut next = Vec::new();
        for y in &level {
            for &w in p.lower_covers(y.stem[0]) {
                let mut set = p.interval_set(w, y.elbows.0);
                set.union_with(&p.interval_set(w, y.elbows.1));
                if set.count_ones(..) == h && p.is_convex(&set) {
                    let mut stem = vec![w];
                    stem.extend(&y.stem);
                    next.push(YkSet {
                        k: h,
                        stem,
                        elbows: y.elbows,
                    });
                }
            }
        }
        level = next;
    }
    canonical_sort(&mut level, |y| (y.stem[0], y.elbows));
    Ok(level)
}

/// All ΛY_k-sets.
pub fn find_lambda_yk_sets(p: &Poset, k: usize) -> Result<Vec<LambdaYkSet>> {
    let mut out = Vec::new();
    for y in find_yk_sets(p, k)? {
        let below = p.lower_covers(y.stem[0]);
        for (i, &u) in below.iter().enumerate() {
            for &v in &below[i + 1..] {
                let mut set = p.empty_set();
                for fork in [u, v] {
                    set.union_with(&p.interval_set(fork, y.elbows.0));
                    set.union_with(&p.interval_set(fork, y.elbows.1));
                }
                if set.count_ones(..) == k + 2 && p.is_convex(&set) {
                    out.push(LambdaYkSet {
                        k,
                        forks: (u, v),
                        y_set: y.clone(),
                    });
                }
            }
        }
    }
    canonical_sort(&mut out, |l| (l.forks.0, l.y_set.elbows));
    Ok(out)
}

/// Overlapping pairs of d_k⁻-sets, each unordered pair once.
///
/// For k = 3 these are two vees on the same elbows. For k >= 4 the pair
/// `[w, z']`, `[w', z']` qualifies when some `u` is the unique element
/// covering `w` and `u` also covers `w'`; nothing is required of the other
/// upper covers of `w'`.
pub fn overlapping_dk_minus_pairs(p: &Poset, k: usize) -> Result<Vec<OverlapPair>> {
    let sets = find_dk_minus_sets(p, k)?;
    let mut out = Vec::new();
    if k == 3 {
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if a.elbows == b.elbows {
                    out.push(OverlapPair {
                        first: a.clone(),
                        second: b.clone(),
                    });
                }
            }
        }
    } else {
        let size = 2 * k - 3;
        for s in &sets {
            let w = s.bottom();
            let [u] = p.upper_covers(w) else { continue };
            let top = *s.neck.last().unwrap();
            for &w2 in p.lower_covers(*u) {
                if w2 == w || p.interval_set(w2, top).count_ones(..) != size {
                    continue;
                }
                let mut other = s.clone();
                other.tail[0] = w2;
                let (first, second) = if w < w2 {
                    (s.clone(), other)
                } else {
                    (other, s.clone())
                };
                out.push(OverlapPair { first, second });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.first.bottom(), a.first.elbows, a.second.bottom())
            .cmp(&(b.first.bottom(), b.first.elbows, b.second.bottom()))
            .then_with(|| a.cmp(b))
    });
    out.dedup();
    Ok(out)
}

/// Structure families addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    Diamond,
    Vee,
    Dk,
    DkMinus,
    Yk,
    LambdaYk,
    Overlap,
}

impl std::str::FromStr for StructureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "diamond" => Self::Diamond,
            "vee" => Self::Vee,
            "dk" => Self::Dk,
            "dkminus" => Self::DkMinus,
            "yk" => Self::Yk,
            "lambdayk" => Self::LambdaYk,
            "overlap" => Self::Overlap,
            other => return Err(format!("unknown structure kind `{other}`")),
        })
    }
}

/// A located structure, tagged with its family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Hit {
    Diamond(Diamond),
    Vee(Vee),
    DkInterval(DkInterval),
    DkMinusSet(DkMinusSet),
    YkSet(YkSet),
    LambdaYkSet(LambdaYkSet),
    Overlap(OverlapPair),
    Elements { elements: Vec<usize> },
}

impl Hit {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Hit::Diamond(_) => "diamond",
            Hit::Vee(_) => "vee",
            Hit::DkInterval(_) => "dk_interval",
            Hit::DkMinusSet(_) => "dk_minus_set",
            Hit::YkSet(_) => "yk_set",
            Hit::LambdaYkSet(_) => "lambda_yk_set",
            Hit::Overlap(_) => "overlap",
            Hit::Elements { .. } => "elements",
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            Hit::Diamond(_) | Hit::Vee(_) | Hit::Elements { .. } => None,
            Hit::DkInterval(s) => Some(s.k),
            Hit::DkMinusSet(s) => Some(s.k),
            Hit::YkSet(s) => Some(s.k),
            Hit::LambdaYkSet(s) => Some(s.k),
            Hit::Overlap(s) => Some(s.first.k),
        }
    }

    /// Role name and members, in a fixed order per family.
    pub fn roles(&self) -> Vec<(&'static str, Vec<usize>)> {
        let pair = |(a, b): (usize, usize)| vec![a, b];
        match self {
            Hit::Diamond(d) => vec![
                ("bottom", vec![d.bottom]),
                ("elbows", pair(d.elbows)),
                ("top", vec![d.top]),
            ],
            Hit::Vee(v) => vec![("bottom", vec![v.bottom]), ("elbows", pair(v.elbows))],
            Hit::DkInterval(s) => vec![
                ("tail", s.tail.clone()),
                ("elbows", pair(s.elbows)),
                ("neck", s.neck.clone()),
            ],
            Hit::DkMinusSet(s) => vec![
                ("tail", s.tail.clone()),
                ("elbows", pair(s.elbows)),
                ("neck", s.neck.clone()),
            ],
            Hit::YkSet(s) => vec![("stem", s.stem.clone()), ("elbows", pair(s.elbows))],
            Hit::LambdaYkSet(s) => vec![
                ("forks", pair(s.forks)),
                ("stem", s.y_set.stem.clone()),
                ("elbows", pair(s.y_set.elbows)),
            ],
            Hit::Overlap(o) => vec![
                ("bottoms", vec![o.first.bottom(), o.second.bottom()]),
                ("tail", o.first.tail[1..].to_vec()),
                ("elbows", pair(o.first.elbows)),
                ("neck", o.first.neck.clone()),
            ],
            Hit::Elements { elements } => vec![("elements", elements.clone())],
        }
    }

    pub fn elements(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.roles().into_iter().flat_map(|(_, xs)| xs).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// JSON object with element ids in place of indices.
    pub fn to_labeled_json(&self, p: &Poset) -> Value {
        let mut obj = Map::new();
        obj.insert("kind".into(), json!(self.kind_name()));
        if let Some(k) = self.k() {
            obj.insert("k".into(), json!(k));
        }
        for (role, xs) in self.roles() {
            obj.insert(role.into(), json!(p.names_of(&xs)));
        }
        Value::Object(obj)
    }
}

/// Runs the finder for `kind` at `k` (ignored for diamonds and vees).
pub fn find_structures(p: &Poset, kind: StructureKind, k: usize) -> Result<Vec<Hit>> {
    Ok(match kind {
        StructureKind::Diamond => find_diamonds(p).into_iter().map(Hit::Diamond).collect(),
        StructureKind::Vee => find_vees(p).into_iter().map(Hit::Vee).collect(),
        StructureKind::Dk => find_dk_intervals(p, k)?
            .into_iter()
            .map(Hit::DkInterval)
            .collect(),
        StructureKind::DkMinus => find_dk_minus_sets(p, k)?
            .into_iter()
            .map(Hit::DkMinusSet)
            .collect(),
        StructureKind::Yk => find_yk_sets(p, k)?.into_iter().map(Hit::YkSet).collect(),
        StructureKind::LambdaYk => find_lambda_yk_sets(p, k)?
            .into_iter()
            .map(Hit::LambdaYkSet)
            .collect(),
        StructureKind::Overlap => overlapping_dk_minus_pairs(p, k)?
            .into_iter()
            .map(Hit::Overlap)
            .collect(),
    })
}

fn is_chain_of_covers(p: &Poset, xs: &[usize]) -> bool {
    xs.windows(2).all(|w| p.is_cover(w[0], w[1]))
}

fn is_vee(p: &Poset, w: usize, (x, y): (usize, usize)) -> bool {
    x != y && p.is_cover(w, x) && p.is_cover(w, y)
}

/// Re-checks that `iv` is a d_k-interval of `p`.
pub fn is_valid_dk_interval(p: &Poset, iv: &DkInterval) -> bool {
    let (x, y) = iv.elbows;
    iv.k >= 3
        && iv.tail.len() == iv.k - 2
        && iv.neck.len() == iv.k - 2
        && is_chain_of_covers(p, &iv.tail)
        && is_chain_of_covers(p, &iv.neck)
        && is_vee(p, *iv.tail.last().unwrap(), iv.elbows)
        && p.is_cover(x, iv.neck[0])
        && p.is_cover(y, iv.neck[0])
        && p.interval_set(iv.bottom(), iv.top()).count_ones(..) == 2 * iv.k - 2
}

/// Re-checks that `s` is a d_k⁻-set of `p`.
pub fn is_valid_dk_minus_set(p: &Poset, s: &DkMinusSet) -> bool {
    if s.k < 3 || s.tail.len() != s.k - 2 || s.neck.len() != s.k - 3 {
        return false;
    }
    if !is_chain_of_covers(p, &s.tail) || !is_vee(p, *s.tail.last().unwrap(), s.elbows) {
        return false;
    }
    match s.neck.first() {
        None => true,
        Some(&z3) => {
            p.is_cover(s.elbows.0, z3)
                && p.is_cover(s.elbows.1, z3)
                && is_chain_of_covers(p, &s.neck)
                && p.interval_set(s.bottom(), *s.neck.last().unwrap())
                    .count_ones(..)
                    == 2 * s.k - 3
        }
    }
}

/// Re-checks that `y` is a Y_k-set of `p`.
pub fn is_valid_yk_set(p: &Poset, y: &YkSet) -> bool {
    if y.k < 3 || y.stem.len() != y.k - 2 {
        return false;
    }
    if !is_chain_of_covers(p, &y.stem) || !is_vee(p, *y.stem.last().unwrap(), y.elbows) {
        return false;
    }
    let w = y.stem[0];
    let mut set = p.interval_set(w, y.elbows.0);
    set.union_with(&p.interval_set(w, y.elbows.1));
    set.count_ones(..) == y.k && p.is_convex(&set)
}

/// Re-checks that `l` is a ΛY_k-set of `p`.
pub fn is_valid_lambda_yk_set(p: &Poset, l: &LambdaYkSet) -> bool {
    let (u, v) = l.forks;
    if !is_valid_yk_set(p, &l.y_set) || u == v {
        return false;
    }
    let w = l.y_set.stem[0];
    if !p.is_cover(u, w) || !p.is_cover(v, w) {
        return false;
    }
    let mut set = p.empty_set();
    for fork in [u, v] {
        set.union_with(&p.interval_set(fork, l.y_set.elbows.0));
        set.union_with(&p.interval_set(fork, l.y_set.elbows.1));
    }
    set.count_ones(..) == l.k + 2 && p.is_convex(&set)
}

/// Re-checks that `o` is an overlapping pair of d_k⁻-sets of `p`.
pub fn is_valid_overlap(p: &Poset, o: &OverlapPair) -> bool {
    let (a, b) = (&o.first, &o.second);
    if a.k != b.k
        || a.bottom() == b.bottom()
        || a.tail[1..] != b.tail[1..]
        || a.elbows != b.elbows
        || a.neck != b.neck
        || !is_valid_dk_minus_set(p, a)
        || !is_valid_dk_minus_set(p, b)
    {
        return false;
    }
    if a.k == 3 {
        return true;
    }
    let unique_cover = |s: &DkMinusSet, other: &DkMinusSet| {
        matches!(p.upper_covers(s.bottom()), [u] if p.is_cover(other.bottom(), *u))
    };
    unique_cover(a, b) || unique_cover(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dtd, fixtures};

    #[test]
    fn diamond_counts() {
        assert_eq!(find_diamonds(&fixtures::diamond()).len(), 1);
        assert_eq!(find_diamonds(&fixtures::cube()).len(), 6);
        assert!(find_diamonds(&fixtures::chain(5)).is_empty());
    }

    #[test]
    fn vee_counts() {
        assert_eq!(find_vees(&fixtures::diamond()).len(), 1);
        assert_eq!(find_vees(&fixtures::cube()).len(), 6);
        assert_eq!(find_vees(&fixtures::w_poset()).len(), 2);
    }

    #[test]
    fn dtd4_intervals() {
        let p = dtd(4).unwrap();
        let d3 = find_dk_intervals(&p, 3).unwrap();
        assert_eq!(d3.len(), 1);
        assert_eq!(p.names_of(&[d3[0].bottom(), d3[0].top()]), ["a3", "f3"]);
        let d4 = find_dk_intervals(&p, 4).unwrap();
        assert_eq!(d4.len(), 1);
        assert_eq!(d4[0].elements().len(), p.len());
        assert!(find_dk_intervals(&p, 5).unwrap().is_empty());
        assert!(p.is_less("a4", "f4").unwrap());
    }

    #[test]
    fn cube_intervals() {
        let c = fixtures::cube();
        assert_eq!(find_dk_intervals(&c, 3).unwrap().len(), 6);
        assert!(find_dk_intervals(&c, 4).unwrap().is_empty());
        assert!(find_dk_minus_sets(&c, 4).unwrap().is_empty());
        assert_eq!(find_dk_intervals(&c, 2).unwrap_err(), Error::InvalidK(2));
    }

    #[test]
    fn dtd_minus_top_is_one_minus_set() {
        for k in 3..=7 {
            let p = dtd(k).unwrap();
            let mut keep = p.set_of(&(0..p.len()).collect::<Vec<_>>());
            keep.set(p.index_of(&format!("f{k}")).unwrap(), false);
            let q = p.induced(&keep);
            let sets = find_dk_minus_sets(&q, k).unwrap();
            assert_eq!(sets.len(), 1, "k = {k}");
            assert_eq!(sets[0].elements().len(), q.len());
        }
        assert_eq!(find_dk_minus_sets(&fixtures::diamond(), 3).unwrap().len(), 1);
    }

    #[test]
    fn completions() {
        let d = fixtures::diamond();
        let s = &find_dk_minus_sets(&d, 3).unwrap()[0];
        assert_eq!(completions_of(&d, s), vec![d.index_of("z").unwrap()]);

        let c = fixtures::cube();
        let vee = find_dk_minus_sets(&c, 3)
            .unwrap()
            .into_iter()
            .find(|s| c.names_of(&s.elements()) == ["0", "a", "b"])
            .unwrap();
        assert_eq!(c.names_of(&completions_of(&c, &vee)), ["ab"]);

        let e = fixtures::extra_chain();
        let s = &find_dk_minus_sets(&e, 3).unwrap();
        let xy = s.iter().find(|s| e.names_of(&s.maximal_elements()) == ["x", "y"]).unwrap();
        assert!(completions_of(&e, xy).is_empty());
        assert_eq!(find_diamonds(&e).len(), 3);
    }

    #[test]
    fn y_sets() {
        for k in 3..=6 {
            let p = dtd(k).unwrap();
            let ys = find_yk_sets(&p, k).unwrap();
            assert_eq!(ys.len(), 1);
            assert_eq!(p.name(ys[0].stem[0]), format!("a{k}"));
        }
        assert!(find_yk_sets(&fixtures::chain(6), 3).unwrap().is_empty());
        // v -> w -> {x, y} with a second chain v -> t -> x is not a Y_4-set.
        let p = Poset::new(
            &["v", "w", "t", "x", "y"],
            &[("v", "w"), ("w", "x"), ("w", "y"), ("v", "t"), ("t", "x")],
        )
        .unwrap();
        assert!(find_yk_sets(&p, 4).unwrap().is_empty());
        assert_eq!(find_yk_sets(&p, 3).unwrap().len(), 2);
    }

    #[test]
    fn lambda_y_sets() {
        let p = Poset::new(
            &["u", "v", "w", "x", "y"],
            &[("u", "w"), ("v", "w"), ("w", "x"), ("w", "y")],
        )
        .unwrap();
        let l = find_lambda_yk_sets(&p, 3).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(p.names_of(&[l[0].forks.0, l[0].forks.1]), ["u", "v"]);
        for k in 3..=6 {
            let d = dtd(k).unwrap();
            for h in 3..=k {
                assert!(find_lambda_yk_sets(&d, h).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn overlaps() {
        let cc = Poset::new(
            &["w", "w'", "x", "y"],
            &[("w", "x"), ("w", "y"), ("w'", "x"), ("w'", "y")],
        )
        .unwrap();
        assert_eq!(overlapping_dk_minus_pairs(&cc, 3).unwrap().len(), 1);
        assert!(overlapping_dk_minus_pairs(&fixtures::diamond(), 3).unwrap().is_empty());

        // Two d_4⁻-intervals sharing everything but their bottoms.
        let p = Poset::new(
            &["w", "w'", "u", "x", "y", "z"],
            &[
                ("w", "u"),
                ("w'", "u"),
                ("u", "x"),
                ("u", "y"),
                ("x", "z"),
                ("y", "z"),
            ],
        )
        .unwrap();
        let pairs = overlapping_dk_minus_pairs(&p, 4).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(p.names_of(&[pairs[0].first.bottom(), pairs[0].second.bottom()]), ["w", "w'"]);
    }

    #[test]
    fn restrict_gives_nested_intervals() {
        let p = dtd(6).unwrap();
        let top = &find_dk_intervals(&p, 6).unwrap()[0];
        for h in 3..=6 {
            assert!(find_dk_intervals(&p, h).unwrap().contains(&top.restrict(h)));
        }
    }

    #[test]
    fn labeled_json_uses_names() {
        let d = fixtures::diamond();
        let hit = Hit::Diamond(find_diamonds(&d)[0].clone());
        assert_eq!(
            hit.to_labeled_json(&d),
            json!({"kind": "diamond", "bottom": ["w"], "elbows": ["x", "y"], "top": ["z"]})
        );
    }
}
