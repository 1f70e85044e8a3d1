//! Replays implication tables, structural lemmas and the d-complete
//! consequence suite over poset corpora.
//!
//! A row is a list of hypotheses and conclusions. Each condition is read
//! either at a fixed k, at the current k, at k + 1, or for every
//! `3 <= h <= k`. Rows that mention no k-dependent condition are checked
//! once per poset; the rest at every k up to the poset size.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::axioms::{Analysis, AxiomName, Check, PropertyName};
use crate::certify::{
    certify, consequence_failures, filter_closure_check, holds_at, neck_tail_audit, Criterion,
};
use crate::enumerate::poset_from_rows;
use crate::generators::{
    dtd, partitions_of, random_tree, shape, shifted_shape, strict_partitions_of,
};
use crate::io;
use crate::poset::Poset;
use crate::structures::{
    common_upper_covers, is_valid_dk_interval, is_valid_dk_minus_set, is_valid_yk_set,
    DkInterval, DkMinusSet, YkSet,
};

/// Violating posets kept per row; the count is always exact.
pub const STORED_VIOLATIONS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Realm {
    Fixed,
    AtK,
    ForAllHLeqK,
    AtKPlusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pred {
    Axiom(AxiomName),
    Property(PropertyName),
    Criterion(Criterion),
    Finite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cond {
    pub pred: Pred,
    pub realm: Realm,
    /// Used when the realm is `Fixed`.
    pub k: usize,
}

impl Cond {
    fn new(pred: Pred, realm: Realm) -> Self {
        Self { pred, realm, k: 3 }
    }

    fn depends_on_k(&self) -> bool {
        match self.pred {
            Pred::Axiom(a) => !a.is_k3_specific() && self.realm != Realm::Fixed,
            Pred::Property(p) => p.takes_k() && self.realm != Realm::Fixed,
            Pred::Criterion(_) => self.realm != Realm::Fixed,
            Pred::Finite => false,
        }
    }

    fn eval_at(&self, a: &Analysis<'_>, k: usize) -> bool {
        match self.pred {
            Pred::Axiom(name) => a.holds(Check::axiom(name, k)),
            Pred::Property(name) => a.holds(Check::property(name, k)),
            Pred::Criterion(c) => holds_at(a, c, k),
            Pred::Finite => true,
        }
    }

    pub fn holds(&self, a: &Analysis<'_>, k: usize) -> bool {
        match self.realm {
            Realm::Fixed => self.eval_at(a, self.k),
            Realm::AtK => self.eval_at(a, k),
            Realm::AtKPlusOne => self.eval_at(a, k + 1),
            Realm::ForAllHLeqK => (3..=k).all(|h| self.eval_at(a, h)),
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.pred {
            Pred::Axiom(a) => a.as_str(),
            Pred::Property(p) => p.as_str(),
            Pred::Criterion(c) => c.as_str(),
            Pred::Finite => "finite",
        };
        f.write_str(name)?;
        if !self.depends_on_k() {
            if self.realm == Realm::Fixed && matches!(self.pred, Pred::Property(p) if p.takes_k()) {
                write!(f, "@{}", self.k)?;
            }
            return Ok(());
        }
        match self.realm {
            Realm::Fixed => write!(f, "@{}", self.k),
            Realm::AtK => f.write_str("@k"),
            Realm::AtKPlusOne => f.write_str("@k+1"),
            Realm::ForAllHLeqK => f.write_str("@h<=k"),
        }
    }
}

/// Axiom: k = 3 names are fixed, general names read at k.
fn ax(name: AxiomName) -> Cond {
    let realm = if name.is_k3_specific() {
        Realm::Fixed
    } else {
        Realm::AtK
    };
    Cond::new(Pred::Axiom(name), realm)
}

fn ax_h(name: AxiomName) -> Cond {
    Cond::new(Pred::Axiom(name), Realm::ForAllHLeqK)
}

fn ax_next(name: AxiomName) -> Cond {
    Cond::new(Pred::Axiom(name), Realm::AtKPlusOne)
}

fn pr(name: PropertyName) -> Cond {
    let realm = if name.takes_k() {
        Realm::AtK
    } else {
        Realm::Fixed
    };
    Cond::new(Pred::Property(name), realm)
}

fn pr3(name: PropertyName) -> Cond {
    Cond::new(Pred::Property(name), Realm::Fixed)
}

fn crit(c: Criterion) -> Cond {
    Cond::new(Pred::Criterion(c), Realm::AtK)
}

fn crit_h(c: Criterion) -> Cond {
    Cond::new(Pred::Criterion(c), Realm::ForAllHLeqK)
}

fn finite() -> Cond {
    Cond::new(Pred::Finite, Realm::Fixed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Table {
    One,
    Two,
    Three,
    Five,
    Lemmas,
    Corollaries,
    Controls,
}

impl Table {
    pub const ALL: [Table; 7] = [
        Self::One,
        Self::Two,
        Self::Three,
        Self::Five,
        Self::Lemmas,
        Self::Corollaries,
        Self::Controls,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::One => "1",
            Self::Two => "2",
            Self::Three => "3",
            Self::Five => "5",
            Self::Lemmas => "lemmas",
            Self::Corollaries => "corollaries",
            Self::Controls => "controls",
        }
    }
}

impl Serialize for Table {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl FromStr for Table {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown table `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicationRow {
    pub table: Table,
    /// Row label within its table.
    pub row: &'static str,
    pub hypotheses: Vec<Cond>,
    pub conclusions: Vec<Cond>,
    /// False for the fabricated rows that must be falsified.
    pub asserted: bool,
}

impl ImplicationRow {
    fn new(table: Table, row: &'static str, hyp: Vec<Cond>, concl: Vec<Cond>) -> Self {
        Self {
            table,
            row,
            hypotheses: hyp,
            conclusions: concl,
            asserted: table != Table::Controls,
        }
    }

    /// `table:row`, e.g. `1:b`.
    pub fn key(&self) -> String {
        format!("{}:{}", self.table.as_str(), self.row)
    }

    pub fn needs_finite(&self) -> bool {
        self.hypotheses.iter().any(|c| c.pred == Pred::Finite)
    }

    pub fn depends_on_k(&self) -> bool {
        self.hypotheses
            .iter()
            .chain(&self.conclusions)
            .any(Cond::depends_on_k)
    }

    pub fn statement(&self) -> String {
        let join = |cs: &[Cond]| {
            cs.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!("{} => {}", join(&self.hypotheses), join(&self.conclusions))
    }

    /// Checks the row on one poset at one k. `None` when a hypothesis
    /// fails, otherwise the conclusions that fail.
    pub fn eval(&self, a: &Analysis<'_>, k: usize) -> Option<Vec<Cond>> {
        if !self.hypotheses.iter().all(|c| c.holds(a, k)) {
            return None;
        }
        Some(
            self.conclusions
                .iter()
                .filter(|c| !c.holds(a, k))
                .copied()
                .collect(),
        )
    }
}

/// All k = 3 axioms plus DAI, UT and UC3: what the d_3-complete hypotheses
/// yield once every listed conclusion is fed back into earlier rows.
fn d3_complete_consequences() -> Vec<Cond> {
    use AxiomName::*;
    let mut v: Vec<Cond> = [Vt, D3mC, Ft, D3Mf, D3mCf, Ncc, D3Md].map(ax).to_vec();
    v.extend([pr(PropertyName::Dai), pr(PropertyName::Ut), pr3(PropertyName::Uck)]);
    v
}

pub fn rows_for(table: Table) -> Vec<ImplicationRow> {
    use AxiomName::*;
    use PropertyName::*;
    let r = |row, hyp, concl| ImplicationRow::new(table, row, hyp, concl);
    match table {
        Table::One => vec![
            r("a", vec![ax(Vt), ax(Ncc)], vec![pr(Ut)]),
            r("b", vec![ax(Vt), pr(Dai)], vec![ax(D3mC)]),
            r("c", vec![ax(Vt), pr(Ntc)], vec![ax(D3mC)]),
            r("d", vec![ax(Vt), pr(Ss)], vec![ax(D3mC)]),
            r("e", vec![ax(Vt), ax(Ft)], vec![ax(D3mC), ax(D3Mf)]),
            r("f", vec![ax(D3mC), pr(Ut)], vec![pr(Dai)]),
            r("g", vec![ax(D3mC), ax(Ncc)], vec![pr(Ut), pr(Dai), pr3(Uck)]),
            r(
                "h",
                vec![ax(D3mC), ax(D3Md), pr(Ntc)],
                vec![ax(Ncc), pr(Ut), pr(Dai), pr3(Uck)],
            ),
            r("i", vec![ax(D3Mf), ax(Ncc)], vec![ax(D3Md)]),
            r("j", vec![ax(D3Mf), pr(Dai)], vec![ax(Ft)]),
            r("k", vec![ax(D3mCf), pr3(Uck)], vec![ax(D3mC), ax(D3Mf)]),
            r("l", vec![ax(D3mCf), ax(Ncc)], d3_complete_consequences()),
            r("m", vec![ax(D3mCf), ax(D3Md)], d3_complete_consequences()),
            r("n", vec![ax(D3mC), ax(D3Mf), ax(Ncc)], d3_complete_consequences()),
            r("o", vec![ax(Vt)], vec![pr(Upue)]),
        ],
        Table::Two => vec![
            r("a", vec![ax(Vt), pr(Conn), finite()], vec![pr(Um), pr(Clmee)]),
            r("b", vec![ax(Vt), finite()], vec![pr(Ranked), pr(Cle)]),
            r("c", vec![ax(Vt), pr(Ntc), finite()], vec![pr(Ss)]),
            r("d", vec![ax(D3mCf), finite()], vec![pr(Ntc)]),
            r("e", vec![ax(D3mC), ax(D3Mf), finite()], vec![ax(Vt), ax(Ft)]),
            r(
                "f",
                vec![ax(D3mC), ax(D3Md), finite()],
                vec![ax(Ncc), pr(Ntc), pr3(Uck), pr(Ut), pr(Dai), pr(Ss)],
            ),
        ],
        Table::Three => vec![
            r(
                "a",
                vec![ax(Vt), ax(DkmC), ax(DkMd), pr(Ntc)],
                vec![ax(NoDkm)],
            ),
            r("b", vec![ax(DkmCf), pr(Uck)], vec![ax(DkmC), ax(DkMf)]),
            r("c", vec![ax(DkmCf), ax(DkMd)], vec![ax(NoDkm)]),
            r("d", vec![ax_h(DkmCf), ax_h(NoDkm)], vec![ax(DkMd)]),
            r("e", vec![ax_h(DkMf), ax_h(NoDkm)], vec![ax(DkMd)]),
            r("f", vec![ax_h(DkmCf), ax(NoDkm)], vec![pr(Uck), ax(DkMf)]),
        ],
        Table::Five => {
            use Criterion::*;
            vec![
                r("a=>c", vec![crit(ComboA)], vec![crit(ComboC)]),
                r("c=>a", vec![crit_h(ComboC)], vec![crit(ComboA)]),
                r("d=>c", vec![crit(ComboD)], vec![crit(ComboC)]),
                r("c=>d", vec![crit_h(ComboC)], vec![crit(ComboD)]),
                r("b=>d", vec![crit(ComboB)], vec![crit(ComboD)]),
                r("a=>b", vec![crit_h(ComboA)], vec![crit(ComboB)]),
                r("d=>kokyuroku", vec![crit(ComboD)], vec![crit(Kokyuroku)]),
                r("kokyuroku=>c", vec![crit(Kokyuroku)], vec![crit(ComboC)]),
            ]
        }
        Table::Lemmas => vec![
            r("yecoi", vec![ax(Vt), pr(Ntc)], vec![pr(Yecoi)]),
            r("nlyk", vec![ax_next(NoDkm), ax_h(DkmCf)], vec![pr(Nlyk)]),
            r("uck", vec![ax_h(DkmC), pr(Ntc), ax(DkMd)], vec![pr(Uck)]),
        ],
        Table::Corollaries => vec![
            r("ft=>mf+dai", vec![ax(Ft)], vec![ax(D3Mf), pr(Dai)]),
            r("mf+dai=>ft", vec![ax(D3Mf), pr(Dai)], vec![ax(Ft)]),
            r("vt+ft=>ntc", vec![ax(Vt), ax(Ft), finite()], vec![pr(Ntc)]),
            r("c+mf=>ntc", vec![ax(D3mC), ax(D3Mf), finite()], vec![pr(Ntc)]),
            r("d3c=>vt", vec![ax(D3mC)], vec![ax(Vt)]),
            r("d3cf=>d3c", vec![ax(D3mCf)], vec![ax(D3mC)]),
            r("ft=>d3mf", vec![ax(Ft)], vec![ax(D3Mf)]),
            r("d3c+d3mf=>d3cf", vec![ax(D3mC), ax(D3Mf)], vec![ax(D3mCf)]),
            r("dkcf=>dkc", vec![ax(DkmCf)], vec![ax(DkmC)]),
            r("dkc+dkmf=>dkcf", vec![ax(DkmC), ax(DkMf)], vec![ax(DkmCf)]),
            r("ft=>dai", vec![ax(Ft)], vec![pr(Dai)]),
            r("ntc=>dai", vec![pr(Ntc)], vec![pr(Dai)]),
            r("ss=>dai", vec![pr(Ss)], vec![pr(Dai)]),
        ],
        Table::Controls => vec![
            r("vt=>d3c", vec![ax(Vt)], vec![ax(D3mC)]),
            r("d3mf=>ft", vec![ax(D3Mf)], vec![ax(Ft)]),
        ],
    }
}

pub fn all_rows() -> Vec<ImplicationRow> {
    Table::ALL.into_iter().flat_map(rows_for).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Asserted, hypotheses met somewhere, never violated.
    Verified,
    /// Asserted, but no corpus poset met the hypotheses.
    Vacuous,
    Violated,
    /// A fabricated row that the corpus refutes, as it should.
    Falsified,
    NotFalsified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub poset: Value,
    pub k: Option<usize>,
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImplicationResult {
    pub key: String,
    pub statement: String,
    pub asserted: bool,
    pub needs_finite: bool,
    pub posets_checked: usize,
    /// (poset, k) pairs, or structure instances for the lemmas.
    pub instances_checked: usize,
    pub hypothesis_hits: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub status: Status,
}

impl ImplicationResult {
    fn empty(key: String, statement: String, asserted: bool, needs_finite: bool) -> Self {
        Self {
            key,
            statement,
            asserted,
            needs_finite,
            posets_checked: 0,
            instances_checked: 0,
            hypothesis_hits: 0,
            violation_count: 0,
            violations: Vec::new(),
            status: Status::Vacuous,
        }
    }

    fn absorb(&mut self, o: PosetOutcome, p: &Poset) {
        self.posets_checked += 1;
        self.instances_checked += o.instances;
        self.hypothesis_hits += o.hits;
        for (k, failed) in o.failures {
            self.violation_count += 1;
            if self.violations.len() < STORED_VIOLATIONS {
                self.violations.push(Violation {
                    poset: io::to_json(p),
                    k,
                    failed,
                });
            }
        }
    }

    fn finish(mut self) -> Self {
        self.status = match (self.asserted, self.violation_count > 0) {
            (true, true) => Status::Violated,
            (true, false) if self.hypothesis_hits == 0 => Status::Vacuous,
            (true, false) => Status::Verified,
            (false, true) => Status::Falsified,
            (false, false) => Status::NotFalsified,
        };
        self
    }

    /// True unless an asserted row is violated or a control survived.
    pub fn ok(&self) -> bool {
        matches!(
            self.status,
            Status::Verified | Status::Vacuous | Status::Falsified
        )
    }
}

#[derive(Default)]
struct PosetOutcome {
    instances: usize,
    hits: usize,
    failures: Vec<(Option<usize>, Vec<String>)>,
}

fn eval_row_on(row: &ImplicationRow, a: &Analysis<'_>) -> PosetOutcome {
    let mut out = PosetOutcome::default();
    let ks = if row.depends_on_k() {
        3..=a.k_limit()
    } else {
        3..=3
    };
    for k in ks {
        out.instances += 1;
        if let Some(failed) = row.eval(a, k) {
            out.hits += 1;
            if !failed.is_empty() {
                let k = row.depends_on_k().then_some(k);
                out.failures
                    .push((k, failed.iter().map(|c| c.to_string()).collect()));
            }
        }
    }
    out
}

/// Replays `rows` over `corpus` in parallel; results follow `rows` and
/// stored violations follow corpus order.
pub fn verify_rows(rows: &[ImplicationRow], corpus: &[Poset]) -> Vec<ImplicationResult> {
    let per_poset: Vec<Vec<PosetOutcome>> = corpus
        .par_iter()
        .map(|p| {
            let a = Analysis::new(p);
            rows.iter().map(|r| eval_row_on(r, &a)).collect()
        })
        .collect();
    let mut results: Vec<ImplicationResult> = rows
        .iter()
        .map(|r| ImplicationResult::empty(r.key(), r.statement(), r.asserted, r.needs_finite()))
        .collect();
    for (p, outcomes) in corpus.iter().zip(per_poset) {
        for (res, o) in results.iter_mut().zip(outcomes) {
            res.absorb(o, p);
        }
    }
    results.into_iter().map(ImplicationResult::finish).collect()
}

/// One row at one fixed k, or at every k when `k` is `None`.
pub fn verify_row(row: &ImplicationRow, corpus: &[Poset], k: Option<usize>) -> ImplicationResult {
    let Some(k) = k else {
        return verify_rows(std::slice::from_ref(row), corpus).remove(0);
    };
    let mut res =
        ImplicationResult::empty(row.key(), row.statement(), row.asserted, row.needs_finite());
    for p in corpus {
        let a = Analysis::new(p);
        let mut o = PosetOutcome {
            instances: 1,
            ..Default::default()
        };
        if let Some(failed) = row.eval(&a, k) {
            o.hits = 1;
            if !failed.is_empty() {
                o.failures
                    .push((Some(k), failed.iter().map(|c| c.to_string()).collect()));
            }
        }
        res.absorb(o, p);
    }
    res.finish()
}

fn free_necks(p: &Poset, iv: &DkInterval) -> bool {
    let mut elbows = vec![iv.elbows.0, iv.elbows.1];
    elbows.sort_unstable();
    iv.neck.iter().enumerate().all(|(i, &z)| {
        if i == 0 {
            p.lower_covers(z) == elbows.as_slice()
        } else {
            p.lower_covers(z) == [iv.neck[i - 1]]
        }
    })
}

/// For each d_k-interval and each `w -> w_k` with `[w; x, y]` a
/// Y_{k+1}-set: (hypothesis holds, `[w, z_k]` is a d_{k+1}⁻-set).
fn tail_extensions(
    a: &Analysis<'_>,
    hypothesis: impl Fn(&DkInterval) -> bool,
) -> Vec<(bool, bool)> {
    let p = a.poset();
    let mut out = Vec::new();
    for k in 3..=a.k_max() {
        for iv in &a.level(k).intervals {
            for &w in p.lower_covers(iv.bottom()) {
                let mut tail = vec![w];
                tail.extend(&iv.tail);
                let y = YkSet {
                    k: k + 1,
                    stem: tail.clone(),
                    elbows: iv.elbows,
                };
                if !is_valid_yk_set(p, &y) {
                    continue;
                }
                let s = DkMinusSet {
                    k: k + 1,
                    tail,
                    elbows: iv.elbows,
                    neck: iv.neck.clone(),
                };
                out.push((hypothesis(iv), is_valid_dk_minus_set(p, &s)));
            }
        }
    }
    out
}

/// Whether the Y_k-set extends by `z_3 -> ... -> z_k` with every
/// `[w_h, z_h]` a d_h-interval, and with each `z_h` free when asked.
pub fn completion_chain(p: &Poset, y: &YkSet, free: bool) -> Option<Vec<usize>> {
    fn grow(p: &Poset, y: &YkSet, free: bool, neck: &mut Vec<usize>) -> bool {
        let h = neck.len() + 3;
        if h > y.k {
            return true;
        }
        let candidates = match neck.last() {
            None => common_upper_covers(p, y.elbows.0, y.elbows.1),
            Some(&z) => p.upper_covers(z).to_vec(),
        };
        for z in candidates {
            neck.push(z);
            let iv = DkInterval {
                k: h,
                tail: y.stem[y.k - h..].to_vec(),
                elbows: y.elbows,
                neck: neck.clone(),
            };
            let ok = is_valid_dk_interval(p, &iv) && (!free || free_necks(p, &iv));
            if ok && grow(p, y, free, neck) {
                return true;
            }
            neck.pop();
        }
        false
    }
    let mut neck = Vec::new();
    grow(p, y, free, &mut neck).then_some(neck)
}

fn y_chain_outcomes(a: &Analysis<'_>, free: bool) -> Vec<(bool, bool)> {
    let p = a.poset();
    let base = if free {
        AxiomName::DkmCf
    } else {
        AxiomName::DkmC
    };
    let ntc = free || a.holds(Check::property(PropertyName::Ntc, 3));
    let mut out = Vec::new();
    for k in 3..=a.k_limit() {
        let hyp = ntc && (3..=k).all(|h| a.holds(Check::axiom(base, h)));
        for y in &a.level(k).y_sets {
            out.push((hyp, !hyp || completion_chain(p, y, free).is_some()));
        }
    }
    out
}

/// The structural lemmas, which quantify over structures rather than
/// whole posets: tail extension with free necks, tail extension under VT
/// and NTC, and completion chains for Y_k-sets (freely under Dh⁻CF,
/// plainly under Dh⁻C with NTC).
pub fn verify_lemmas(corpus: &[Poset]) -> Vec<ImplicationResult> {
    let names = [
        ("lemmas:att1", "d_k-interval with free necks, Y_{k+1} below => d_{k+1}- set"),
        ("lemmas:att2", "VT, NTC, d_k-interval, Y_{k+1} below => d_{k+1}- set"),
        ("lemmas:ykcf", "DkmCF@h<=k, Y_k-set => free completion chain"),
        ("lemmas:ykc", "DkmC@h<=k, NTC, Y_k-set => completion chain"),
    ];
    let per_poset: Vec<[Vec<(bool, bool)>; 4]> = corpus
        .par_iter()
        .map(|p| {
            let a = Analysis::new(p);
            let vt_ntc = a.holds(Check::axiom(AxiomName::Vt, 3))
                && a.holds(Check::property(PropertyName::Ntc, 3));
            [
                tail_extensions(&a, |iv| free_necks(p, iv)),
                tail_extensions(&a, |_| vt_ntc),
                y_chain_outcomes(&a, true),
                y_chain_outcomes(&a, false),
            ]
        })
        .collect();
    let mut results: Vec<ImplicationResult> = names
        .iter()
        .map(|(k, s)| ImplicationResult::empty(k.to_string(), s.to_string(), true, false))
        .collect();
    for (p, outcomes) in corpus.iter().zip(per_poset) {
        for (res, inst) in results.iter_mut().zip(outcomes) {
            let o = PosetOutcome {
                instances: inst.len(),
                hits: inst.iter().filter(|(h, _)| *h).count(),
                failures: inst
                    .iter()
                    .filter(|(h, ok)| *h && !ok)
                    .map(|_| (None, vec!["conclusion".to_string()]))
                    .collect(),
            };
            res.absorb(o, p);
        }
    }
    let mut out: Vec<ImplicationResult> = results
        .into_iter()
        .map(ImplicationResult::finish)
        .collect();
    out.extend(verify_rows(&rows_for(Table::Lemmas), corpus));
    out
}

pub fn verify_corollaries(corpus: &[Poset]) -> Vec<ImplicationResult> {
    verify_rows(&rows_for(Table::Corollaries), corpus)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub n_max: usize,
    pub posets_scanned: usize,
    /// Posets satisfying D3mC.
    pub hypothesis_hits: usize,
    pub counterexamples: Vec<Value>,
    /// `"consistent"` when nothing was found, `"discovery"` otherwise.
    pub status: &'static str,
}

/// Looks for a finite D3mC poset with a short interval of size other than
/// 3 or 4, over every poset with at most `n_max` elements. Finding one is
/// reported, never treated as an error.
pub fn search_d3c_without_ss(n_max: usize) -> SearchReport {
    let corpus = exhaustive_corpus(n_max);
    let found: Vec<(bool, bool)> = corpus
        .par_iter()
        .map(|p| {
            let a = Analysis::new(p);
            let hyp = a.holds(Check::axiom(AxiomName::D3mC, 3));
            (hyp, hyp && !a.holds(Check::property(PropertyName::Ss, 3)))
        })
        .collect();
    let counterexamples: Vec<Value> = corpus
        .iter()
        .zip(&found)
        .filter(|(_, (_, bad))| *bad)
        .map(|(p, _)| io::to_json(p))
        .collect();
    SearchReport {
        n_max,
        posets_scanned: corpus.len(),
        hypothesis_hits: found.iter().filter(|(h, _)| *h).count(),
        status: if counterexamples.is_empty() {
            "consistent"
        } else {
            "discovery"
        },
        counterexamples,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AgreementReport {
    pub posets: usize,
    /// (poset, k) pairs compared.
    pub instances: usize,
    pub d_complete: usize,
    pub disagreements: Vec<Value>,
}

/// The five criteria must give the same d_{<=k} verdict at every k.
pub fn verify_agreement(corpus: &[Poset]) -> AgreementReport {
    let certs: Vec<(usize, bool, bool)> = corpus
        .par_iter()
        .map(|p| {
            let c = certify(p);
            (c.per_k.len(), c.agreement, c.d_complete() == Some(true))
        })
        .collect();
    let mut r = AgreementReport {
        posets: corpus.len(),
        ..Default::default()
    };
    for (p, (ks, agree, dc)) in corpus.iter().zip(certs) {
        r.instances += ks;
        r.d_complete += dc as usize;
        if !agree {
            r.disagreements.push(io::to_json(p));
        }
    }
    r
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConsequenceReport {
    pub posets: usize,
    pub d_complete: usize,
    pub filters_checked: usize,
    pub intervals_audited: usize,
    pub failures: Vec<(Value, String)>,
}

/// Everything a d-complete poset must satisfy: all axioms and properties,
/// closure under filters and disjoint union, and the neck/tail audit.
pub fn verify_consequences(corpus: &[Poset]) -> ConsequenceReport {
    type Outcome = Option<(usize, usize, Vec<String>)>;
    let outcomes: Vec<Outcome> = corpus
        .par_iter()
        .map(|p| {
            if certify(p).d_complete() != Some(true) {
                return None;
            }
            let mut msgs: Vec<String> = consequence_failures(&Analysis::new(p))
                .into_iter()
                .map(|c| format!("{c} fails"))
                .collect();
            let (filters, intervals) = match (filter_closure_check(p), neck_tail_audit(p)) {
                (Ok(f), Ok(t)) => {
                    if !f.passed() {
                        msgs.push(format!("{} filters not d-complete", f.failures.len()));
                    }
                    if !f.disjoint_union_ok {
                        msgs.push("disjoint union not d-complete".into());
                    }
                    msgs.extend(t.failures);
                    (f.filters_checked, t.intervals)
                }
                (f, t) => {
                    msgs.push(format!("audit refused: {:?} {:?}", f.err(), t.err()));
                    (0, 0)
                }
            };
            Some((filters, intervals, msgs))
        })
        .collect();
    let mut r = ConsequenceReport {
        posets: corpus.len(),
        ..Default::default()
    };
    for (p, o) in corpus.iter().zip(outcomes) {
        let Some((filters, intervals, msgs)) = o else {
            continue;
        };
        r.d_complete += 1;
        r.filters_checked += filters;
        r.intervals_audited += intervals;
        for m in msgs {
            r.failures.push((io::to_json(p), m));
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruthTableEntry {
    pub from: Criterion,
    pub to: Criterion,
    /// (poset, k) pairs where `from` holds at k alone.
    pub hits: usize,
    /// Of those, how many fail `to` at k.
    pub failures: usize,
}

/// How often each criterion at k alone implies each other one at k.
/// Informational: none of these is asserted.
pub fn at_k_truth_table(corpus: &[Poset]) -> Vec<TruthTableEntry> {
    let n = Criterion::ALL.len();
    let counts: Vec<Vec<(usize, usize)>> = corpus
        .par_iter()
        .map(|p| {
            let a = Analysis::new(p);
            let mut c = vec![(0, 0); n * n];
            for k in 3..=a.k_max() {
                let v: Vec<bool> = Criterion::ALL.iter().map(|&x| holds_at(&a, x, k)).collect();
                for i in 0..n {
                    for j in 0..n {
                        if v[i] {
                            c[i * n + j].0 += 1;
                            c[i * n + j].1 += !v[j] as usize;
                        }
                    }
                }
            }
            c
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (hits, failures) = counts
                .iter()
                .fold((0, 0), |acc, c| (acc.0 + c[i * n + j].0, acc.1 + c[i * n + j].1));
            out.push(TruthTableEntry {
                from: Criterion::ALL[i],
                to: Criterion::ALL[j],
                hits,
                failures,
            });
        }
    }
    out
}

/// One representative of every poset with at most `n_max` elements.
pub fn exhaustive_corpus(n_max: usize) -> Vec<Poset> {
    (0..=n_max)
        .flat_map(io::cached_canonical_rows)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|rows| poset_from_rows(rows))
        .collect()
}

/// Shapes and shifted shapes up to `max_cells`, double tailed diamonds up to
/// `dt_8(1)`, and a few seeded random trees.
pub fn family_corpus(max_cells: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    for n in 1..=max_cells {
        for lambda in partitions_of(n) {
            out.push(shape(&lambda).unwrap());
        }
        for lambda in strict_partitions_of(n) {
            out.push(shifted_shape(&lambda).unwrap());
        }
    }
    out.extend((3..=8).map(|k| dtd(k).unwrap()));
    out.extend((0..10).map(|seed| random_tree(3 + seed as usize, seed).unwrap()));
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub n_max: usize,
    pub posets: usize,
    pub results: Vec<ImplicationResult>,
    pub at_k_truth_table: Vec<TruthTableEntry>,
}

impl TheoremReport {
    pub fn asserted_violations(&self) -> usize {
        self.results
            .iter()
            .filter(|r| r.status == Status::Violated)
            .count()
    }
}

/// Rows of `tables` (optionally only those whose label or key is listed in
/// `rows`) over `corpus`, lemma instances included when the lemma table is
/// selected.
pub fn run_tables(
    tables: &[Table],
    rows: Option<&[String]>,
    corpus: &[Poset],
    n_max: usize,
) -> TheoremReport {
    let wanted = |key: &str, row: &str| {
        rows.is_none_or(|rs| rs.iter().any(|r| r == key || r == row))
    };
    let selected: Vec<ImplicationRow> = tables
        .iter()
        .flat_map(|&t| rows_for(t))
        .filter(|r| wanted(&r.key(), r.row))
        .collect();
    let mut results = verify_rows(&selected, corpus);
    if tables.contains(&Table::Lemmas) {
        let lemma_keys: Vec<String> = selected.iter().map(|r| r.key()).collect();
        results.extend(
            verify_lemmas(corpus)
                .into_iter()
                .filter(|r| !lemma_keys.contains(&r.key))
                .filter(|r| wanted(&r.key, r.key.trim_start_matches("lemmas:"))),
        );
    }
    let truth = if tables.contains(&Table::Five) {
        at_k_truth_table(corpus)
    } else {
        Vec::new()
    };
    TheoremReport {
        n_max,
        posets: corpus.len(),
        results,
        at_k_truth_table: truth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixtures;

    #[test]
    fn row_keys_are_unique() {
        let mut keys: Vec<String> = all_rows().iter().map(|r| r.key()).collect();
        let n = keys.len();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), n);
    }

    #[test]
    fn statements_render_realms() {
        let r = &rows_for(Table::Three)[3];
        assert_eq!(r.statement(), "DkmCF@h<=k, NODkm@h<=k => DkMD@k");
        let g = &rows_for(Table::One)[6];
        assert_eq!(g.statement(), "D3mC, NCC => UT, DAI, UCk@3");
        assert!(!g.depends_on_k());
        assert!(rows_for(Table::Two)[3].needs_finite());
    }

    #[test]
    fn control_is_falsified_by_extra_chain() {
        let row = &rows_for(Table::Controls)[0];
        let res = verify_row(row, &[fixtures::extra_chain()], None);
        assert_eq!(res.status, Status::Falsified);
        assert_eq!(res.violation_count, 1);
        let cube = verify_row(&rows_for(Table::Controls)[1], &[fixtures::cube()], None);
        assert_eq!(cube.status, Status::NotFalsified);
    }

    #[test]
    fn small_corpus_has_no_violations() {
        let corpus = exhaustive_corpus(5);
        assert_eq!(corpus.len(), 1 + 1 + 2 + 5 + 16 + 63);
        for r in verify_rows(&all_rows(), &corpus) {
            assert!(r.ok(), "{} {:?}", r.key, r.violations.first());
        }
    }

    #[test]
    fn completion_chain_in_dtd() {
        for k in 3..=6 {
            let p = dtd(k).unwrap();
            let a = Analysis::new(&p);
            let y = &a.level(k).y_sets[0];
            let chain = completion_chain(&p, y, true).unwrap();
            assert_eq!(p.names_of(&chain).last().unwrap(), &format!("f{k}"));
        }
    }

    #[test]
    fn chains_make_lemmas_trivial() {
        let corpus: Vec<Poset> = (1..6).map(fixtures::chain).collect();
        for r in verify_lemmas(&corpus) {
            assert_eq!(r.violation_count, 0);
        }
    }

    #[test]
    fn search_is_consistent_small() {
        let r = search_d3c_without_ss(5);
        assert_eq!(r.status, "consistent");
        assert!(r.hypothesis_hits > 0);
    }
}
