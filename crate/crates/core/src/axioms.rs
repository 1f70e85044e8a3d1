//! Axiom and property checkers with witnesses.
//!
//! The seven k = 3 axioms are implemented directly on vees and diamonds, not
//! by delegating to their general-k counterparts, so that the two routes can
//! be compared against each other.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::poset::{Poset, RankConflict};
use crate::structures::{
    common_lower_covers, common_upper_covers, completions_of, diamond_is_interval,
    find_diamonds, find_dk_intervals, find_dk_minus_sets, find_lambda_yk_sets, find_vees,
    find_yk_sets, is_valid_dk_interval, is_valid_dk_minus_set, is_valid_lambda_yk_set,
    is_valid_overlap, is_valid_yk_set, overlapping_dk_minus_pairs, Diamond, DkInterval,
    DkMinusSet, Hit, LambdaYkSet, OverlapPair, Vee, YkSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomName {
    Vt,
    D3mC,
    Ft,
    D3Mf,
    D3mCf,
    Ncc,
    D3Md,
    DkmC,
    DkMf,
    DkmCf,
    NoDkm,
    DkMd,
}

impl AxiomName {
    pub const ALL: [AxiomName; 12] = [
        Self::Vt,
        Self::D3mC,
        Self::Ft,
        Self::D3Mf,
        Self::D3mCf,
        Self::Ncc,
        Self::D3Md,
        Self::DkmC,
        Self::DkMf,
        Self::DkmCf,
        Self::NoDkm,
        Self::DkMd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Vt => "VT",
            Self::D3mC => "D3mC",
            Self::Ft => "FT",
            Self::D3Mf => "D3MF",
            Self::D3mCf => "D3mCF",
            Self::Ncc => "NCC",
            Self::D3Md => "D3MD",
            Self::DkmC => "DkmC",
            Self::DkMf => "DkMF",
            Self::DkmCf => "DkmCF",
            Self::NoDkm => "NODkm",
            Self::DkMd => "DkMD",
        }
    }

    pub fn is_k3_specific(self) -> bool {
        !matches!(
            self,
            Self::DkmC | Self::DkMf | Self::DkmCf | Self::NoDkm | Self::DkMd
        )
    }

    /// The general-k axiom whose k = 3 instance this one is, if any.
    pub fn general_form(self) -> Option<AxiomName> {
        match self {
            Self::D3mC => Some(Self::DkmC),
            Self::D3Mf => Some(Self::DkMf),
            Self::D3mCf => Some(Self::DkmCf),
            Self::Ncc => Some(Self::NoDkm),
            Self::D3Md => Some(Self::DkMd),
            _ => None,
        }
    }

    /// Name of the instance at `k`, using the k = 3 name where one exists.
    pub fn name_at(self, k: usize) -> &'static str {
        let special = Self::ALL
            .into_iter()
            .find(|n| n.general_form() == Some(self));
        match special {
            Some(n) if k == 3 => n.as_str(),
            _ => self.as_str(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyName {
    Upue,
    Um,
    Clmee,
    Cle,
    Ss,
    Dai,
    Ntc,
    Ut,
    Uck,
    Yecoi,
    Nlyk,
    Ranked,
    Conn,
}

impl PropertyName {
    pub const ALL: [PropertyName; 13] = [
        Self::Upue,
        Self::Um,
        Self::Clmee,
        Self::Cle,
        Self::Ss,
        Self::Dai,
        Self::Ntc,
        Self::Ut,
        Self::Uck,
        Self::Yecoi,
        Self::Nlyk,
        Self::Ranked,
        Self::Conn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Upue => "UPUE",
            Self::Um => "UM",
            Self::Clmee => "CLMEE",
            Self::Cle => "CLE",
            Self::Ss => "SS",
            Self::Dai => "DAI",
            Self::Ntc => "NTC",
            Self::Ut => "UT",
            Self::Uck => "UCk",
            Self::Yecoi => "YECOI",
            Self::Nlyk => "NLYk",
            Self::Ranked => "Ranked",
            Self::Conn => "Conn",
        }
    }

    pub fn takes_k(self) -> bool {
        matches!(self, Self::Uck | Self::Yecoi | Self::Nlyk)
    }
}

fn parse_name<T: Copy>(all: &[T], as_str: impl Fn(T) -> &'static str, s: &str) -> Option<T> {
    all.iter().copied().find(|&n| as_str(n).eq_ignore_ascii_case(s))
}

impl FromStr for AxiomName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_name(&Self::ALL, Self::as_str, s).ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

impl FromStr for PropertyName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_name(&Self::ALL, Self::as_str, s).ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AxiomId {
    pub name: AxiomName,
    /// Always 3 for the k = 3 specific names.
    pub k: usize,
}

impl AxiomId {
    pub fn new(name: AxiomName, k: usize) -> Result<Self> {
        if name.is_k3_specific() {
            return Ok(Self { name, k: 3 });
        }
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        Ok(Self { name, k })
    }

    pub fn k3(name: AxiomName) -> Self {
        Self { name, k: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyId {
    pub name: PropertyName,
    /// Present only for UCk, YECOI and NLYk.
    pub k: Option<usize>,
}

impl PropertyId {
    pub fn new(name: PropertyName, k: usize) -> Result<Self> {
        if !name.takes_k() {
            return Ok(Self { name, k: None });
        }
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        Ok(Self { name, k: Some(k) })
    }

    pub fn plain(name: PropertyName) -> Self {
        Self { name, k: None }
    }
}

/// Anything `check` can decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Axiom(AxiomId),
    Property(PropertyId),
}

impl Check {
    pub fn axiom(name: AxiomName, k: usize) -> Check {
        Check::Axiom(AxiomId::new(name, k).expect("k >= 3"))
    }

    pub fn property(name: PropertyName, k: usize) -> Check {
        Check::Property(PropertyId::new(name, k).expect("k >= 3"))
    }

    /// Parses an axiom or property name and attaches `k` where it applies.
    pub fn parse(name: &str, k: usize) -> Result<Check, String> {
        if let Ok(a) = name.parse::<AxiomName>() {
            return AxiomId::new(a, k).map(Check::Axiom).map_err(|e| e.to_string());
        }
        if let Ok(p) = name.parse::<PropertyName>() {
            return PropertyId::new(p, k)
                .map(Check::Property)
                .map_err(|e| e.to_string());
        }
        Err(format!("unknown axiom or property `{name}`"))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Check::Axiom(a) => a.name.as_str(),
            Check::Property(p) => p.name.as_str(),
        }
    }

    /// The k this check is evaluated at, if it depends on one.
    pub fn k(&self) -> Option<usize> {
        match self {
            Check::Axiom(a) if a.name.is_k3_specific() => None,
            Check::Axiom(a) => Some(a.k),
            Check::Property(p) => p.k,
        }
    }

    pub fn is_axiom(&self) -> bool {
        matches!(self, Check::Axiom(_))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k() {
            Some(k) => write!(f, "{}[k={k}]", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// A violating configuration, plus any auxiliary elements that explain it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub hit: Hit,
    pub related: Option<Hit>,
    pub detail: Vec<(&'static str, Vec<usize>)>,
}

impl Witness {
    fn of(hit: Hit) -> Self {
        Self {
            hit,
            related: None,
            detail: Vec::new(),
        }
    }

    fn with(mut self, role: &'static str, xs: Vec<usize>) -> Self {
        self.detail.push((role, xs));
        self
    }

    fn related(mut self, hit: Hit) -> Self {
        self.related = Some(hit);
        self
    }

    fn elements(xs: Vec<usize>) -> Self {
        Self::of(Hit::Elements { elements: xs })
    }

    pub fn to_labeled_json(&self, p: &Poset) -> Value {
        let mut obj = Map::new();
        obj.insert("structure".into(), self.hit.to_labeled_json(p));
        if let Some(r) = &self.related {
            obj.insert("related".into(), r.to_labeled_json(p));
        }
        for (role, xs) in &self.detail {
            obj.insert((*role).into(), json!(p.names_of(xs)));
        }
        Value::Object(obj)
    }

    pub fn detail_of(&self, role: &str) -> Option<&[usize]> {
        self.detail
            .iter()
            .find(|(r, _)| *r == role)
            .map(|(_, xs)| xs.as_slice())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    #[serde(skip)]
    pub check: Check,
    pub verdict: bool,
    pub witness: Option<Witness>,
}

impl AxiomReport {
    pub fn to_labeled_json(&self, p: &Poset) -> Value {
        let mut obj = Map::new();
        obj.insert("name".into(), json!(self.check.name()));
        if let Some(k) = self.check.k() {
            obj.insert("k".into(), json!(k));
        }
        obj.insert("verdict".into(), json!(self.verdict));
        obj.insert(
            "witness".into(),
            self.witness
                .as_ref()
                .map_or(Value::Null, |w| w.to_labeled_json(p)),
        );
        Value::Object(obj)
    }
}

/// Every structure family at one k.
#[derive(Clone, Debug)]
pub struct Level {
    pub k: usize,
    pub intervals: Vec<DkInterval>,
    pub minus_sets: Vec<DkMinusSet>,
    /// `completions[i]` completes `minus_sets[i]`.
    pub completions: Vec<Vec<usize>>,
    pub y_sets: Vec<YkSet>,
    pub lambda_sets: Vec<LambdaYkSet>,
    pub overlaps: Vec<OverlapPair>,
}

impl Level {
    pub fn compute(p: &Poset, k: usize) -> Result<Self> {
        let minus_sets = find_dk_minus_sets(p, k)?;
        let completions = minus_sets.iter().map(|s| completions_of(p, s)).collect();
        Ok(Self {
            k,
            intervals: find_dk_intervals(p, k)?,
            minus_sets,
            completions,
            y_sets: find_yk_sets(p, k)?,
            lambda_sets: find_lambda_yk_sets(p, k)?,
            overlaps: overlapping_dk_minus_pairs(p, k)?,
        })
    }

    /// Completions of the i-th d_k⁻-set whose new maximum covers nothing
    /// outside the set.
    pub fn free_completions(&self, p: &Poset, i: usize) -> Vec<usize> {
        let s = &self.minus_sets[i];
        self.completions[i]
            .iter()
            .copied()
            .filter(|&z| p.lower_covers(z).iter().all(|&c| s.contains(c)))
            .collect()
    }
}

/// Largest k at which a d_k⁻-set fits in `n` elements.
pub fn k_max(n: usize) -> usize {
    ((n + 3) / 2).max(3)
}

/// Largest k at which any structure fits in `n` elements; Y_k-sets reach
/// further than d_k⁻-sets.
pub fn k_limit(n: usize) -> usize {
    n.max(3)
}

/// Memoized analysis of one poset: structures per k and verdicts per check.
pub struct Analysis<'p> {
    p: &'p Poset,
    levels: RefCell<BTreeMap<usize, Rc<Level>>>,
    verdicts: RefCell<HashMap<Check, bool>>,
}

impl<'p> Analysis<'p> {
    pub fn new(p: &'p Poset) -> Self {
        Self {
            p,
            levels: RefCell::new(BTreeMap::new()),
            verdicts: RefCell::new(HashMap::new()),
        }
    }

    pub fn poset(&self) -> &'p Poset {
        self.p
    }

    pub fn k_max(&self) -> usize {
        k_max(self.p.len())
    }

    pub fn k_limit(&self) -> usize {
        k_limit(self.p.len())
    }

    pub fn level(&self, k: usize) -> Rc<Level> {
        assert!(k >= 3, "structures need k >= 3");
        if let Some(l) = self.levels.borrow().get(&k) {
            return Rc::clone(l);
        }
        let level = Rc::new(Level::compute(self.p, k).expect("k >= 3"));
        self.levels.borrow_mut().insert(k, Rc::clone(&level));
        level
    }

    pub fn holds(&self, check: Check) -> bool {
        if let Some(&v) = self.verdicts.borrow().get(&check) {
            return v;
        }
        let v = self.report(check).verdict;
        self.verdicts.borrow_mut().insert(check, v);
        v
    }

    pub fn report(&self, check: Check) -> AxiomReport {
        let witness = match check {
            Check::Axiom(a) => self.axiom_witness(a),
            Check::Property(p) => self.property_witness(p),
        };
        AxiomReport {
            check,
            verdict: witness.is_none(),
            witness,
        }
    }

    fn axiom_witness(&self, id: AxiomId) -> Option<Witness> {
        let p = self.p;
        match id.name {
            AxiomName::Vt => vt(p),
            AxiomName::D3mC => d3_minus_c(p),
            AxiomName::Ft => ft(p),
            AxiomName::D3Mf => d3_mf(p),
            AxiomName::D3mCf => d3_minus_cf(p),
            AxiomName::Ncc => ncc(p),
            AxiomName::D3Md => d3_md(p),
            AxiomName::DkmC => dk_minus_c(&self.level(id.k)),
            AxiomName::DkMf => dk_mf(p, &self.level(id.k)),
            AxiomName::DkmCf => dk_minus_cf(p, &self.level(id.k)),
            AxiomName::NoDkm => self
                .level(id.k)
                .overlaps
                .first()
                .map(|o| Witness::of(Hit::Overlap(o.clone()))),
            AxiomName::DkMd => dk_md(&self.level(id.k)),
        }
    }

    fn property_witness(&self, id: PropertyId) -> Option<Witness> {
        let p = self.p;
        match id.name {
            PropertyName::Upue => upue(p),
            PropertyName::Um => um(p),
            PropertyName::Clmee => clmee(p),
            PropertyName::Cle => cle(p),
            PropertyName::Ss => ss(p),
            PropertyName::Dai => dai(p),
            PropertyName::Ntc => ntc(p),
            PropertyName::Ut => ut(p),
            PropertyName::Uck => uck(&self.level(id.k.unwrap())),
            PropertyName::Yecoi => yecoi(p, &self.level(id.k.unwrap())),
            PropertyName::Nlyk => self
                .level(id.k.unwrap())
                .lambda_sets
                .first()
                .map(|l| Witness::of(Hit::LambdaYkSet(l.clone()))),
            PropertyName::Ranked => ranked(p),
            PropertyName::Conn => conn(p),
        }
    }
}

/// Every axiom and property, general ones at each `3 <= k <= k_hi`.
pub fn all_checks(k_hi: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for name in AxiomName::ALL.into_iter().filter(|n| n.is_k3_specific()) {
        out.push(Check::Axiom(AxiomId::k3(name)));
    }
    for k in 3..=k_hi {
        for name in AxiomName::ALL.into_iter().filter(|n| !n.is_k3_specific()) {
            out.push(Check::axiom(name, k));
        }
    }
    for name in PropertyName::ALL.into_iter().filter(|n| !n.takes_k()) {
        out.push(Check::Property(PropertyId::plain(name)));
    }
    for k in 3..=k_hi {
        for name in PropertyName::ALL.into_iter().filter(|n| n.takes_k()) {
            out.push(Check::property(name, k));
        }
    }
    out
}

pub fn check(p: &Poset, c: Check) -> AxiomReport {
    Analysis::new(p).report(c)
}

pub fn check_axiom(p: &Poset, id: AxiomId) -> Result<AxiomReport> {
    let id = AxiomId::new(id.name, id.k)?;
    Ok(check(p, Check::Axiom(id)))
}

pub fn check_property(p: &Poset, id: PropertyId) -> Result<AxiomReport> {
    let id = PropertyId::new(id.name, id.k.unwrap_or(3))?;
    Ok(check(p, Check::Property(id)))
}

fn vee_tops(p: &Poset, v: &Vee) -> Vec<usize> {
    common_upper_covers(p, v.elbows.0, v.elbows.1)
}

/// Tops `z` of the vee with `[w, z]` exactly the diamond.
fn vee_completions(p: &Poset, v: &Vee) -> Vec<usize> {
    vee_tops(p, v)
        .into_iter()
        .filter(|&z| p.interval_set(v.bottom, z).count_ones(..) == 4)
        .collect()
}

fn foreign_covers(p: &Poset, top: usize, inside: impl Fn(usize) -> bool) -> Vec<usize> {
    p.lower_covers(top)
        .iter()
        .copied()
        .filter(|&c| !inside(c))
        .collect()
}

fn diamond_foreign(p: &Poset, d: &Diamond) -> Vec<usize> {
    foreign_covers(p, d.top, |c| c == d.elbows.0 || c == d.elbows.1)
}

fn vt(p: &Poset) -> Option<Witness> {
    find_vees(p)
        .into_iter()
        .find(|v| vee_tops(p, v).is_empty())
        .map(|v| Witness::of(Hit::Vee(v)))
}

fn d3_minus_c(p: &Poset) -> Option<Witness> {
    find_vees(p)
        .into_iter()
        .find(|v| vee_completions(p, v).is_empty())
        .map(|v| {
            let tops = vee_tops(p, &v);
            Witness::of(Hit::Vee(v)).with("tops", tops)
        })
}

fn ft(p: &Poset) -> Option<Witness> {
    find_diamonds(p).into_iter().find_map(|d| {
        let foreign = diamond_foreign(p, &d);
        (!foreign.is_empty()).then(|| Witness::of(Hit::Diamond(d)).with("foreign_covers", foreign))
    })
}

fn d3_mf(p: &Poset) -> Option<Witness> {
    find_diamonds(p)
        .into_iter()
        .filter(|d| diamond_is_interval(p, d))
        .find_map(|d| {
            let foreign = diamond_foreign(p, &d);
            (!foreign.is_empty())
                .then(|| Witness::of(Hit::Diamond(d)).with("foreign_covers", foreign))
        })
}

fn d3_minus_cf(p: &Poset) -> Option<Witness> {
    find_vees(p)
        .into_iter()
        .find(|v| {
            !vee_completions(p, v)
                .into_iter()
                .any(|z| p.lower_covers(z).len() == 2)
        })
        .map(|v| {
            let tops = vee_tops(p, &v);
            Witness::of(Hit::Vee(v)).with("tops", tops)
        })
}

fn vee_as_minus(w: usize, elbows: (usize, usize)) -> DkMinusSet {
    DkMinusSet {
        k: 3,
        tail: vec![w],
        elbows,
        neck: Vec::new(),
    }
}

fn ncc(p: &Poset) -> Option<Witness> {
    find_vees(p).into_iter().find_map(|v| {
        let (x, y) = v.elbows;
        common_lower_covers(p, x, y)
            .into_iter()
            .find(|&w2| w2 > v.bottom)
            .map(|w2| {
                Witness::of(Hit::Overlap(OverlapPair {
                    first: vee_as_minus(v.bottom, v.elbows),
                    second: vee_as_minus(w2, v.elbows),
                }))
            })
    })
}

fn d3_md(p: &Poset) -> Option<Witness> {
    let ivs: Vec<Diamond> = find_diamonds(p)
        .into_iter()
        .filter(|d| diamond_is_interval(p, d))
        .collect();
    for (i, a) in ivs.iter().enumerate() {
        for b in &ivs[i + 1..] {
            if a.top == b.top && a != b {
                return Some(Witness::of(Hit::Diamond(a.clone())).related(Hit::Diamond(b.clone())));
            }
        }
    }
    None
}

fn dk_minus_c(l: &Level) -> Option<Witness> {
    l.minus_sets
        .iter()
        .zip(&l.completions)
        .find(|(_, c)| c.is_empty())
        .map(|(s, _)| Witness::of(Hit::DkMinusSet(s.clone())))
}

fn dk_mf(p: &Poset, l: &Level) -> Option<Witness> {
    l.intervals.iter().find_map(|iv| {
        let foreign = foreign_covers(p, iv.top(), |c| iv.contains(c));
        (!foreign.is_empty())
            .then(|| Witness::of(Hit::DkInterval(iv.clone())).with("foreign_covers", foreign))
    })
}

fn dk_minus_cf(p: &Poset, l: &Level) -> Option<Witness> {
    (0..l.minus_sets.len())
        .find(|&i| l.free_completions(p, i).is_empty())
        .map(|i| {
            Witness::of(Hit::DkMinusSet(l.minus_sets[i].clone()))
                .with("completions", l.completions[i].clone())
        })
}

fn sorted_elements(iv: &DkInterval) -> Vec<usize> {
    let mut v = iv.elements();
    v.sort_unstable();
    v
}

fn dk_md(l: &Level) -> Option<Witness> {
    for (i, a) in l.intervals.iter().enumerate() {
        for b in &l.intervals[i + 1..] {
            if a.top() == b.top() && sorted_elements(a) != sorted_elements(b) {
                return Some(
                    Witness::of(Hit::DkInterval(a.clone())).related(Hit::DkInterval(b.clone())),
                );
            }
        }
    }
    None
}

fn upue_fails(p: &Poset, w: usize, x: usize, y: usize) -> bool {
    p.le(w, y)
        && p.is_cover(w, x)
        && !p.le(x, y)
        && !p.upper_covers(y).iter().any(|&z| p.le(x, z))
}

fn upue(p: &Poset) -> Option<Witness> {
    for w in 0..p.len() {
        for &x in p.upper_covers(w) {
            for y in 0..p.len() {
                if upue_fails(p, w, x, y) {
                    return Some(Witness::elements(vec![w, x, y]));
                }
            }
        }
    }
    None
}

fn um(p: &Poset) -> Option<Witness> {
    let maxes = p.maximal_elements();
    (maxes.len() != 1).then(|| Witness::elements(maxes))
}

/// Shortest and longest saturated chain lengths from `x` to every element;
/// `None` where the element is not above `x`.
fn chain_lengths(p: &Poset, x: usize) -> Vec<Option<(usize, usize)>> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&u| p.strictly_below(u).count_ones(..));
    let mut len = vec![None; p.len()];
    len[x] = Some((0, 0));
    for u in order {
        if !p.lt(x, u) {
            continue;
        }
        let mut acc: Option<(usize, usize)> = None;
        for &c in p.lower_covers(u) {
            if let Some((lo, hi)) = len[c] {
                acc = Some(match acc {
                    None => (lo + 1, hi + 1),
                    Some((a, b)) => (a.min(lo + 1), b.max(hi + 1)),
                });
            }
        }
        len[u] = acc;
    }
    len
}

fn uneven_chains(p: &Poset, x: usize, y: usize) -> bool {
    matches!(chain_lengths(p, x)[y], Some((lo, hi)) if lo != hi)
}

fn clmee(p: &Poset) -> Option<Witness> {
    if let Some(w) = um(p) {
        return Some(w);
    }
    let top = p.maximal_elements()[0];
    (0..p.len())
        .find(|&x| uneven_chains(p, x, top))
        .map(|x| Witness::elements(vec![x, top]))
}

fn cle(p: &Poset) -> Option<Witness> {
    for x in 0..p.len() {
        let lens = chain_lengths(p, x);
        if let Some(y) = (0..p.len()).find(|&y| matches!(lens[y], Some((lo, hi)) if lo != hi)) {
            return Some(Witness::elements(vec![x, y]));
        }
    }
    None
}

fn ss(p: &Poset) -> Option<Witness> {
    for w in 0..p.len() {
        for &u in p.upper_covers(w) {
            for &z in p.upper_covers(u) {
                let size = p.interval_set(w, z).count_ones(..);
                if size != 3 && size != 4 {
                    let members = p.interval_set(w, z).ones().collect();
                    return Some(Witness::elements(vec![w, z]).with("interval", members));
                }
            }
        }
    }
    None
}

fn dai(p: &Poset) -> Option<Witness> {
    find_diamonds(p)
        .into_iter()
        .find(|d| !diamond_is_interval(p, d))
        .map(|d| {
            let members = p.interval_set(d.bottom, d.top).ones().collect();
            Witness::of(Hit::Diamond(d)).with("interval", members)
        })
}

fn ntc(p: &Poset) -> Option<Witness> {
    (0..p.len())
        .find(|&x| p.upper_covers(x).len() >= 3)
        .map(|x| Witness::elements(vec![x]).with("upper_covers", p.upper_covers(x).to_vec()))
}

fn ut(p: &Poset) -> Option<Witness> {
    find_vees(p).into_iter().find_map(|v| {
        let tops = vee_tops(p, &v);
        (tops.len() != 1).then(|| Witness::of(Hit::Vee(v)).with("tops", tops))
    })
}

fn uck(l: &Level) -> Option<Witness> {
    l.minus_sets
        .iter()
        .zip(&l.completions)
        .find(|(_, c)| c.len() != 1)
        .map(|(s, c)| Witness::of(Hit::DkMinusSet(s.clone())).with("completions", c.clone()))
}

fn stem_escape(p: &Poset, y: &YkSet) -> Option<(usize, usize)> {
    y.stem.iter().find_map(|&s| {
        p.upper_covers(s)
            .iter()
            .find(|&&u| !y.contains(u))
            .map(|&u| (s, u))
    })
}

fn yecoi(p: &Poset, l: &Level) -> Option<Witness> {
    l.y_sets.iter().find_map(|y| {
        stem_escape(p, y)
            .map(|(s, u)| Witness::of(Hit::YkSet(y.clone())).with("outside_cover", vec![s, u]))
    })
}

fn ranked(p: &Poset) -> Option<Witness> {
    p.rank_function().err().map(|c| {
        let (a, b) = (c.path_a[0], *c.path_a.last().unwrap());
        Witness::elements(vec![a, b])
            .with("path_a", c.path_a)
            .with("path_b", c.path_b)
    })
}

fn conn(p: &Poset) -> Option<Witness> {
    let comps = p.components();
    (comps.len() != 1).then(|| Witness::elements(comps.iter().map(|c| c[0]).collect()))
}

fn is_real_vee(p: &Poset, v: &Vee) -> bool {
    v.elbows.0 != v.elbows.1 && p.is_cover(v.bottom, v.elbows.0) && p.is_cover(v.bottom, v.elbows.1)
}

fn is_real_diamond(p: &Poset, d: &Diamond) -> bool {
    let v = Vee {
        bottom: d.bottom,
        elbows: d.elbows,
    };
    is_real_vee(p, &v) && p.is_cover(d.elbows.0, d.top) && p.is_cover(d.elbows.1, d.top)
}

fn is_valid_path(p: &Poset, path: &[usize]) -> bool {
    path.windows(2)
        .all(|w| p.is_cover(w[0], w[1]) || p.is_cover(w[1], w[0]))
}

/// True iff the report is consistent with `p`: a false verdict must carry a
/// witness that, re-checked on its own elements, still violates the check.
/// A true verdict must carry no witness.
pub fn revalidate(p: &Poset, report: &AxiomReport) -> bool {
    let Some(w) = &report.witness else {
        return report.verdict;
    };
    if report.verdict {
        return false;
    }
    let elems = |h: &Hit| match h {
        Hit::Elements { elements } => Some(elements.clone()),
        _ => None,
    };
    match (report.check, &w.hit) {
        (Check::Axiom(a), hit) => match (a.name, hit) {
            (AxiomName::Vt, Hit::Vee(v)) => is_real_vee(p, v) && vee_tops(p, v).is_empty(),
            (AxiomName::D3mC, Hit::Vee(v)) => is_real_vee(p, v) && vee_completions(p, v).is_empty(),
            (AxiomName::Ft, Hit::Diamond(d)) => {
                is_real_diamond(p, d) && !diamond_foreign(p, d).is_empty()
            }
            (AxiomName::D3Mf, Hit::Diamond(d)) => {
                is_real_diamond(p, d)
                    && diamond_is_interval(p, d)
                    && !diamond_foreign(p, d).is_empty()
            }
            (AxiomName::D3mCf, Hit::Vee(v)) => {
                is_real_vee(p, v)
                    && vee_completions(p, v)
                        .into_iter()
                        .all(|z| p.lower_covers(z).len() != 2)
            }
            (AxiomName::Ncc, Hit::Overlap(o)) | (AxiomName::NoDkm, Hit::Overlap(o)) => {
                o.first.k == a.k && is_valid_overlap(p, o)
            }
            (AxiomName::D3Md, Hit::Diamond(d)) => match &w.related {
                Some(Hit::Diamond(e)) => {
                    d != e
                        && d.top == e.top
                        && [d, e]
                            .iter()
                            .all(|x| is_real_diamond(p, x) && diamond_is_interval(p, x))
                }
                _ => false,
            },
            (AxiomName::DkmC, Hit::DkMinusSet(s)) => {
                s.k == a.k && is_valid_dk_minus_set(p, s) && completions_of(p, s).is_empty()
            }
            (AxiomName::DkMf, Hit::DkInterval(iv)) => {
                iv.k == a.k
                    && is_valid_dk_interval(p, iv)
                    && !foreign_covers(p, iv.top(), |c| iv.contains(c)).is_empty()
            }
            (AxiomName::DkmCf, Hit::DkMinusSet(s)) => {
                s.k == a.k
                    && is_valid_dk_minus_set(p, s)
                    && completions_of(p, s)
                        .into_iter()
                        .all(|z| p.lower_covers(z).iter().any(|&c| !s.contains(c)))
            }
            (AxiomName::DkMd, Hit::DkInterval(x)) => match &w.related {
                Some(Hit::DkInterval(y)) => {
                    x.k == a.k
                        && y.k == a.k
                        && x.top() == y.top()
                        && sorted_elements(x) != sorted_elements(y)
                        && is_valid_dk_interval(p, x)
                        && is_valid_dk_interval(p, y)
                }
                _ => false,
            },
            _ => false,
        },
        (Check::Property(prop), hit) => match (prop.name, hit) {
            (PropertyName::Upue, h) => {
                matches!(elems(h).as_deref(), Some(&[w0, x, y]) if upue_fails(p, w0, x, y))
            }
            (PropertyName::Um, _) => p.maximal_elements().len() != 1,
            (PropertyName::Clmee, h) => {
                p.maximal_elements().len() != 1
                    || matches!(elems(h).as_deref(), Some(&[x, top]) if uneven_chains(p, x, top))
            }
            (PropertyName::Cle, h) => {
                matches!(elems(h).as_deref(), Some(&[x, y]) if uneven_chains(p, x, y))
            }
            (PropertyName::Ss, h) => matches!(elems(h).as_deref(), Some(&[a, z])
                if p.upper_covers(a).iter().any(|&u| p.is_cover(u, z))
                    && !matches!(p.interval_set(a, z).count_ones(..), 3 | 4)),
            (PropertyName::Dai, Hit::Diamond(d)) => {
                is_real_diamond(p, d) && !diamond_is_interval(p, d)
            }
            (PropertyName::Ntc, h) => {
                matches!(elems(h).as_deref(), Some(&[x]) if p.upper_covers(x).len() >= 3)
            }
            (PropertyName::Ut, Hit::Vee(v)) => is_real_vee(p, v) && vee_tops(p, v).len() != 1,
            (PropertyName::Uck, Hit::DkMinusSet(s)) => {
                Some(s.k) == prop.k
                    && is_valid_dk_minus_set(p, s)
                    && completions_of(p, s).len() != 1
            }
            (PropertyName::Yecoi, Hit::YkSet(y)) => {
                Some(y.k) == prop.k
                    && is_valid_yk_set(p, y)
                    && matches!(w.detail_of("outside_cover"), Some(&[s, u])
                        if y.stem.contains(&s) && p.is_cover(s, u) && !y.contains(u))
            }
            (PropertyName::Nlyk, Hit::LambdaYkSet(l)) => {
                Some(l.k) == prop.k && is_valid_lambda_yk_set(p, l)
            }
            (PropertyName::Ranked, _) => {
                match (w.detail_of("path_a"), w.detail_of("path_b")) {
                    (Some(a), Some(b)) => {
                        !a.is_empty()
                            && !b.is_empty()
                            && a[0] == b[0]
                            && a.last() == b.last()
                            && is_valid_path(p, a)
                            && is_valid_path(p, b)
                            && RankConflict::signed_length(p, a) != RankConflict::signed_length(p, b)
                    }
                    _ => false,
                }
            }
            (PropertyName::Conn, _) => p.components().len() != 1,
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dtd, fixtures, shape, Partition};

    fn failing(p: &Poset, c: Check) -> AxiomReport {
        let r = check(p, c);
        assert!(!r.verdict, "{c} should fail");
        assert!(revalidate(p, &r), "{c} witness does not revalidate");
        r
    }

    #[test]
    fn cube_fails_d3mf_at_an_upper_diamond() {
        let p = fixtures::cube();
        let r = failing(&p, Check::Axiom(AxiomId::k3(AxiomName::D3Mf)));
        let w = r.witness.unwrap();
        let Hit::Diamond(d) = &w.hit else { panic!() };
        assert_eq!(p.name(d.bottom), "a");
        assert_eq!(p.name(d.top), "abc");
        assert_eq!(p.names_of(w.detail_of("foreign_covers").unwrap()), ["bc"]);
    }

    #[test]
    fn chain_satisfies_everything() {
        let p = fixtures::chain(6);
        let a = Analysis::new(&p);
        for c in all_checks(a.k_max()) {
            assert!(a.holds(c), "{c}");
        }
    }

    #[test]
    fn w_poset_has_no_criss_cross() {
        let p = fixtures::w_poset();
        assert!(check(&p, Check::Axiom(AxiomId::k3(AxiomName::Ncc))).verdict);
    }

    #[test]
    fn criss_cross_fails_ncc_and_nod3() {
        let p = fixtures::criss_cross();
        failing(&p, Check::Axiom(AxiomId::k3(AxiomName::Ncc)));
        failing(&p, Check::axiom(AxiomName::NoDkm, 3));
    }

    #[test]
    fn cube_bottom_is_triply_covered() {
        let p = fixtures::cube();
        let r = failing(&p, Check::property(PropertyName::Ntc, 3));
        assert_eq!(r.witness.unwrap().hit.elements(), vec![p.index_of("0").unwrap()]);
    }

    #[test]
    fn shape_has_equal_chain_lengths() {
        let p = shape(&Partition::new(vec![3, 2]).unwrap()).unwrap();
        assert!(check(&p, Check::property(PropertyName::Cle, 3)).verdict);
        assert!(check(&p, Check::property(PropertyName::Ranked, 3)).verdict);
    }

    #[test]
    fn dtd5_short_intervals_are_small() {
        let p = dtd(5).unwrap();
        assert!(check(&p, Check::property(PropertyName::Ss, 3)).verdict);
    }

    #[test]
    fn extra_chain_breaks_short_intervals() {
        let p = fixtures::extra_chain();
        let r = failing(&p, Check::property(PropertyName::Ss, 3));
        assert_eq!(r.witness.unwrap().detail_of("interval").unwrap().len(), 5);
        failing(&p, Check::axiom(AxiomName::D3mC, 3));
        assert!(check(&p, Check::axiom(AxiomName::Vt, 3)).verdict);
    }

    #[test]
    fn disconnected_poset_lacks_um_and_conn() {
        let p = fixtures::antichain(2);
        failing(&p, Check::property(PropertyName::Um, 3));
        failing(&p, Check::property(PropertyName::Clmee, 3));
        failing(&p, Check::property(PropertyName::Conn, 3));
    }

    #[test]
    fn unranked_witness_revalidates() {
        let p = Poset::new(
            &["a", "b", "c", "d", "e", "f"],
            &[("a", "b"), ("b", "f"), ("a", "d"), ("d", "e"), ("e", "f")],
        )
        .unwrap();
        failing(&p, Check::property(PropertyName::Ranked, 3));
        failing(&p, Check::property(PropertyName::Cle, 3));
    }

    #[test]
    fn invalid_k_is_rejected() {
        assert_eq!(AxiomId::new(AxiomName::DkMd, 2), Err(Error::InvalidK(2)));
        assert_eq!(AxiomId::new(AxiomName::Vt, 0).unwrap().k, 3);
        assert!(Check::parse("ucK", 1).is_err());
        assert_eq!(
            Check::parse("d3mf", 9).unwrap(),
            Check::Axiom(AxiomId::k3(AxiomName::D3Mf))
        );
    }

    #[test]
    fn k3_instances_match_specific_axioms() {
        for p in [
            fixtures::cube(),
            fixtures::criss_cross_with_top(),
            fixtures::extra_chain(),
            fixtures::w_poset(),
            dtd(4).unwrap(),
        ] {
            let a = Analysis::new(&p);
            for name in AxiomName::ALL {
                if let Some(general) = name.general_form() {
                    assert_eq!(
                        a.holds(Check::Axiom(AxiomId::k3(name))),
                        a.holds(Check::axiom(general, 3)),
                        "{} on {:?}",
                        name.as_str(),
                        p.names()
                    );
                }
            }
        }
    }
}
