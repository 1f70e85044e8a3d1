//! d_k-completeness under the Kôkyûroku definition and the four axiom
//! combinations, plus the consequence checks that every d-complete poset
//! must pass.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::axioms::{all_checks, k_max, Analysis, AxiomName, Check, Level, PropertyName, Witness};
use crate::error::{Error, Result};
use crate::generators::{disjoint_union, filter};
use crate::io;
use crate::poset::Poset;
use crate::structures::{DkInterval, Hit};

/// Largest poset whose filters are enumerated exhaustively.
pub const EXHAUSTIVE_FILTER_LIMIT: usize = 12;
pub const SAMPLED_FILTERS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Criterion {
    Kokyuroku,
    ComboA,
    ComboB,
    ComboC,
    ComboD,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Self::Kokyuroku,
        Self::ComboA,
        Self::ComboB,
        Self::ComboC,
        Self::ComboD,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Kokyuroku => "kokyuroku",
            Self::ComboA => "combo-a",
            Self::ComboB => "combo-b",
            Self::ComboC => "combo-c",
            Self::ComboD => "combo-d",
        }
    }

    /// The axioms the combination requires at one `h`; empty for Kôkyûroku.
    pub fn axioms(self, h: usize) -> Vec<Check> {
        use AxiomName::*;
        let names: &[AxiomName] = match self {
            Self::Kokyuroku => &[],
            Self::ComboA => &[DkmC, DkMf, NoDkm],
            Self::ComboB => &[DkmC, DkMf, DkMd],
            Self::ComboC => &[DkmCf, NoDkm],
            Self::ComboD => &[DkmCf, DkMd],
        };
        names.iter().map(|&n| Check::axiom(n, h)).collect()
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        Ok(match key.as_str() {
            "kokyuroku" | "k" => Self::Kokyuroku,
            "comboa" | "a" => Self::ComboA,
            "combob" | "b" => Self::ComboB,
            "comboc" | "c" => Self::ComboC,
            "combod" | "d" => Self::ComboD,
            _ => return Err(format!("unknown criterion `{s}`")),
        })
    }
}

/// Outcome of one criterion checked for every `3 <= h <= k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub k: usize,
    pub verdict: bool,
    /// Smallest `h` at which the criterion fails.
    pub failed_at: Option<usize>,
    /// Name of the first violated axiom, or `"kokyuroku"`.
    pub failed: Option<String>,
    pub witness: Option<Witness>,
}

impl CriterionReport {
    pub fn to_labeled_json(&self, p: &Poset) -> Value {
        json!({
            "criterion": self.criterion.as_str(),
            "k": self.k,
            "verdict": self.verdict,
            "failed_at": self.failed_at,
            "failed": self.failed,
            "witness": self.witness.as_ref().map(|w| w.to_labeled_json(p)),
        })
    }
}

/// Why the Kôkyûroku condition fails for one d_k⁻-set, if it does.
pub fn kokyuroku_witness(p: &Poset, level: &Level) -> Option<Witness> {
    for s in &level.minus_sets {
        let mut maxes = s.maximal_elements();
        maxes.sort_unstable();
        let candidates: Vec<usize> = p
            .upper_covers(maxes[0])
            .iter()
            .copied()
            .filter(|&z| p.lower_covers(z) == maxes.as_slice())
            .collect();
        let mut clash = None;
        let completed = candidates.iter().any(|&z| {
            let other = level.minus_sets.iter().find(|t| {
                *t != s
                    && t.maximal_elements()
                        .iter()
                        .all(|m| p.lower_covers(z).contains(m))
            });
            if let (Some(t), None) = (other, &clash) {
                clash = Some((z, t.clone()));
            }
            other.is_none()
        });
        if completed {
            continue;
        }
        let w = Witness {
            hit: Hit::DkMinusSet(s.clone()),
            related: clash.as_ref().map(|(_, t)| Hit::DkMinusSet(t.clone())),
            detail: clash.map(|(z, _)| vec![("completion", vec![z])]).unwrap_or_default(),
        };
        return Some(w);
    }
    None
}

/// First failure of `c` at exactly `h`, as (failed name, witness).
pub fn criterion_failure_at(
    a: &Analysis<'_>,
    c: Criterion,
    h: usize,
) -> Option<(String, Option<Witness>)> {
    if c == Criterion::Kokyuroku {
        return kokyuroku_witness(a.poset(), &a.level(h))
            .map(|w| (c.as_str().to_string(), Some(w)));
    }
    c.axioms(h).into_iter().find(|&x| !a.holds(x)).map(|x| {
        let name = match x {
            Check::Axiom(id) => id.name.name_at(id.k),
            _ => x.name(),
        };
        (name.to_string(), a.report(x).witness)
    })
}

pub fn holds_at(a: &Analysis<'_>, c: Criterion, h: usize) -> bool {
    criterion_failure_at(a, c, h).is_none()
}

/// d_{<=k}-completeness under `c`, reusing the analysis cache.
pub fn dleqk_report(a: &Analysis<'_>, c: Criterion, k: usize) -> CriterionReport {
    for h in 3..=k {
        if let Some((failed, witness)) = criterion_failure_at(a, c, h) {
            return CriterionReport {
                criterion: c,
                k,
                verdict: false,
                failed_at: Some(h),
                failed: Some(failed),
                witness,
            };
        }
    }
    CriterionReport {
        criterion: c,
        k,
        verdict: true,
        failed_at: None,
        failed: None,
        witness: None,
    }
}

pub fn is_dk_complete_kokyuroku(p: &Poset, k: usize) -> Result<CriterionReport> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    let a = Analysis::new(p);
    let witness = kokyuroku_witness(p, &a.level(k));
    Ok(CriterionReport {
        criterion: Criterion::Kokyuroku,
        k,
        verdict: witness.is_none(),
        failed_at: witness.as_ref().map(|_| k),
        failed: witness.as_ref().map(|_| "kokyuroku".to_string()),
        witness,
    })
}

pub fn is_dleqk_complete(p: &Poset, k: usize, c: Criterion) -> Result<CriterionReport> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    Ok(dleqk_report(&Analysis::new(p), c, k))
}

pub fn is_d_complete(p: &Poset, c: Criterion) -> CriterionReport {
    dleqk_report(&Analysis::new(p), c, k_max(p.len()))
}

/// d_{<=k}-verdicts of all five criteria at one k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KBreakdown {
    pub k: usize,
    pub verdicts: Vec<(Criterion, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub poset_hash: String,
    pub size: usize,
    pub k_max: usize,
    pub criteria: Vec<CriterionReport>,
    pub per_k: Vec<KBreakdown>,
    pub agreement: bool,
}

impl Certificate {
    /// The common verdict, or `None` when the criteria disagree.
    pub fn d_complete(&self) -> Option<bool> {
        self.agreement.then(|| self.criteria[0].verdict)
    }

    pub fn criterion(&self, c: Criterion) -> &CriterionReport {
        self.criteria.iter().find(|r| r.criterion == c).unwrap()
    }

    pub fn to_labeled_json(&self, p: &Poset) -> Value {
        json!({
            "poset_hash": self.poset_hash,
            "size": self.size,
            "k_max": self.k_max,
            "d_complete": self.d_complete(),
            "agreement": self.agreement,
            "criteria": self.criteria.iter().map(|r| r.to_labeled_json(p)).collect::<Vec<_>>(),
            "per_k": self.per_k.iter().map(|b| {
                let mut obj = serde_json::Map::new();
                obj.insert("k".into(), json!(b.k));
                for (c, v) in &b.verdicts {
                    obj.insert(c.as_str().into(), json!(v));
                }
                Value::Object(obj)
            }).collect::<Vec<_>>(),
        })
    }
}

pub fn poset_hash(p: &Poset) -> String {
    let digest = Sha256::digest(io::to_json_string(p).as_bytes());
    format!("{digest:x}")
}

pub fn certify(p: &Poset) -> Certificate {
    let a = Analysis::new(p);
    let km = a.k_max();
    let per_k: Vec<KBreakdown> = (3..=km)
        .map(|k| KBreakdown {
            k,
            verdicts: Criterion::ALL
                .iter()
                .map(|&c| (c, (3..=k).all(|h| holds_at(&a, c, h))))
                .collect(),
        })
        .collect();
    let agreement = per_k
        .iter()
        .all(|b| b.verdicts.iter().all(|&(_, v)| v == b.verdicts[0].1));
    Certificate {
        poset_hash: poset_hash(p),
        size: p.len(),
        k_max: km,
        criteria: Criterion::ALL.iter().map(|&c| dleqk_report(&a, c, km)).collect(),
        per_k,
        agreement,
    }
}

fn require_d_complete(p: &Poset) -> Result<()> {
    if is_d_complete(p, Criterion::Kokyuroku).verdict {
        Ok(())
    } else {
        Err(Error::NotDComplete)
    }
}

/// Checks that must pass on a d-complete poset: every axiom at every k and
/// every property, except that a disconnected poset is excused UM, CLMEE and
/// Conn. Returns the failing checks.
pub fn consequence_failures(a: &Analysis<'_>) -> Vec<Check> {
    let connected = a.poset().is_connected();
    all_checks(a.k_limit())
        .into_iter()
        .filter(|c| {
            connected
                || !matches!(
                    c,
                    Check::Property(p)
                        if matches!(p.name, PropertyName::Um | PropertyName::Clmee | PropertyName::Conn)
                )
        })
        .filter(|&c| !a.holds(c))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub intervals: usize,
    pub ntc: bool,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn contains_all(outer: &DkInterval, inner: &DkInterval) -> bool {
    inner.elements().iter().all(|&x| outer.contains(x))
}

fn nested_in(outer: &DkInterval, inner: &DkInterval) -> bool {
    outer.k >= inner.k && outer.restrict(inner.k) == *inner
}

fn audit_intervals(p: &Poset, all: &[DkInterval], ntc: bool) -> Vec<String> {
    let mut failures = Vec::new();
    let show = |iv: &DkInterval| format!("d{}{:?}", iv.k, p.names_of(&iv.elements()));
    for iv in all {
        let elbows = sorted(vec![iv.elbows.0, iv.elbows.1]);
        for (i, &z) in iv.neck.iter().enumerate() {
            let want = if i == 0 { elbows.clone() } else { vec![iv.neck[i - 1]] };
            if p.lower_covers(z) != want.as_slice() {
                failures.push(format!("neck element {} of {} is not free", p.name(z), show(iv)));
            }
        }
        if ntc {
            let m = iv.tail.len();
            for (i, &w) in iv.tail.iter().enumerate() {
                let want = if i + 1 == m { elbows.clone() } else { vec![iv.tail[i + 1]] };
                if p.upper_covers(w) != want.as_slice() {
                    failures.push(format!(
                        "tail element {} of {} is covered externally",
                        p.name(w),
                        show(iv)
                    ));
                }
            }
        }
    }
    for i in all {
        for j in all.iter().filter(|j| j.k >= i.k) {
            let shares_neck = i.neck.iter().any(|z| j.neck.contains(z));
            let shares_tail = ntc && i.tail.iter().any(|w| j.tail.contains(w));
            if (shares_neck || shares_tail) && !contains_all(j, i) {
                failures.push(format!("{} and {} intersect but are not nested", show(i), show(j)));
            }
            if (shares_neck || shares_tail) && !nested_in(j, i) {
                failures.push(format!("{} shares a neck or tail with {} off-template", show(i), show(j)));
            }
        }
        for k2 in i.k..=all.iter().map(|j| j.k).max().unwrap_or(3) {
            let containing: Vec<&DkInterval> = all
                .iter()
                .filter(|j| j.k == k2 && contains_all(j, i))
                .collect();
            if containing.len() > 1 {
                failures.push(format!("{} lies in {} d{k2}-intervals", show(i), containing.len()));
            }
            if containing.iter().any(|j| !nested_in(j, i)) {
                failures.push(format!("{} lies in a d{k2}-interval off-template", show(i)));
            }
        }
    }
    failures
}

/// Freeness of necks and tails, and how DTD intervals may intersect.
pub fn neck_tail_audit(p: &Poset) -> Result<AuditReport> {
    require_d_complete(p)?;
    let a = Analysis::new(p);
    let all: Vec<DkInterval> = (3..=a.k_max())
        .flat_map(|k| a.level(k).intervals.clone())
        .collect();
    let ntc = a.holds(Check::property(PropertyName::Ntc, 3));
    Ok(AuditReport {
        intervals: all.len(),
        ntc,
        failures: audit_intervals(p, &all, ntc),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub filters_checked: usize,
    pub exhaustive: bool,
    pub failures: Vec<Vec<String>>,
    pub disjoint_union_ok: bool,
}

impl FilterReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.disjoint_union_ok
    }
}

fn up_closure(p: &Poset, seed: &FixedBitSet) -> FixedBitSet {
    let mut out = seed.clone();
    for x in seed.ones() {
        out.union_with(p.strictly_above(x));
    }
    out
}

/// Every up-closed subset of a small poset, as bitsets.
pub fn all_filters(p: &Poset) -> Result<Vec<FixedBitSet>> {
    let n = p.len();
    if n > EXHAUSTIVE_FILTER_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EXHAUSTIVE_FILTER_LIMIT,
        });
    }
    let above: Vec<u32> = (0..n)
        .map(|x| p.strictly_above(x).ones().fold(0, |m, y| m | 1 << y))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        if (0..n).all(|x| mask >> x & 1 == 0 || above[x] & !mask == 0) {
            let mut s = p.empty_set();
            for x in (0..n).filter(|&x| mask >> x & 1 == 1) {
                s.insert(x);
            }
            out.push(s);
        }
    }
    Ok(out)
}

fn sampled_filters(p: &Poset, count: usize, seed: u64) -> Vec<FixedBitSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut s = p.empty_set();
            for x in 0..p.len() {
                if rng.gen_bool(0.15) {
                    s.insert(x);
                }
            }
            up_closure(p, &s)
        })
        .collect()
}

/// Every filter of `p`, and `p ⊔ p`, must be d-complete.
pub fn filter_closure_check(p: &Poset) -> Result<FilterReport> {
    require_d_complete(p)?;
    let exhaustive = p.len() <= EXHAUSTIVE_FILTER_LIMIT;
    let filters = if exhaustive {
        all_filters(p)?
    } else {
        sampled_filters(p, SAMPLED_FILTERS, 0)
    };
    let mut report = FilterReport {
        filters_checked: filters.len(),
        exhaustive,
        ..Default::default()
    };
    for f in &filters {
        let q = filter(p, f)?;
        if !is_d_complete(&q, Criterion::Kokyuroku).verdict {
            report.failures.push(q.names().to_vec());
        }
    }
    report.disjoint_union_ok = is_d_complete(&disjoint_union(p, p), Criterion::Kokyuroku).verdict;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dtd, fixtures, rooted_tree, shape, shifted_shape, Partition};

    #[test]
    fn diamond_is_d3_complete() {
        let p = fixtures::diamond();
        assert!(is_dk_complete_kokyuroku(&p, 3).unwrap().verdict);
        let c = certify(&p);
        assert_eq!(c.d_complete(), Some(true));
        assert_eq!(c.k_max, 3);
    }

    #[test]
    fn criss_cross_with_top_fails_everywhere() {
        let p = fixtures::criss_cross_with_top();
        let r = is_dk_complete_kokyuroku(&p, 3).unwrap();
        assert!(!r.verdict);
        let w = r.witness.unwrap();
        assert_eq!(p.names_of(w.detail_of("completion").unwrap()), ["z"]);
        let c = certify(&p);
        assert!(c.agreement);
        assert_eq!(c.d_complete(), Some(false));
    }

    #[test]
    fn cube_fails_combo_a_on_d3mf() {
        let p = fixtures::cube();
        let r = is_dleqk_complete(&p, 3, Criterion::ComboA).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.failed.as_deref(), Some("D3MF"));
        assert!(!is_d_complete(&p, Criterion::Kokyuroku).verdict);
        assert!(certify(&p).agreement);
    }

    #[test]
    fn families_are_d_complete() {
        let shapes = [
            shape(&Partition::new(vec![3, 2]).unwrap()).unwrap(),
            shifted_shape(&Partition::strict(vec![9, 6, 3, 1]).unwrap()).unwrap(),
            dtd(5).unwrap(),
            rooted_tree(&[None, Some(0), Some(0), Some(1), Some(1), Some(2)]).unwrap(),
            fixtures::chain(5),
        ];
        for p in &shapes {
            let c = certify(p);
            assert_eq!(c.d_complete(), Some(true), "{:?}", p.names());
        }
    }

    #[test]
    fn criterion_names_parse() {
        for c in Criterion::ALL {
            assert_eq!(c.as_str().parse::<Criterion>().unwrap(), c);
        }
        assert_eq!("D".parse::<Criterion>().unwrap(), Criterion::ComboD);
        assert!("e".parse::<Criterion>().is_err());
    }

    #[test]
    fn invalid_k() {
        assert_eq!(
            is_dleqk_complete(&fixtures::chain(2), 2, Criterion::ComboB),
            Err(Error::InvalidK(2))
        );
    }

    #[test]
    fn dtd6_audit() {
        let p = dtd(6).unwrap();
        let r = neck_tail_audit(&p).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.intervals, 4);
        let a = Analysis::new(&p);
        let d4 = a.level(4).intervals[0].clone();
        for k2 in [5, 6] {
            let containing: Vec<_> = a
                .level(k2)
                .intervals
                .iter()
                .filter(|j| contains_all(j, &d4))
                .cloned()
                .collect();
            assert_eq!(containing.len(), 1);
            assert!(nested_in(&containing[0], &d4));
        }
    }

    #[test]
    fn shifted_audit_passes() {
        let p = shifted_shape(&Partition::strict(vec![9, 6, 3, 1]).unwrap()).unwrap();
        assert!(neck_tail_audit(&p).unwrap().passed());
        assert_eq!(neck_tail_audit(&fixtures::cube()), Err(Error::NotDComplete));
    }

    #[test]
    fn diamond_filters() {
        let p = fixtures::diamond();
        assert_eq!(all_filters(&p).unwrap().len(), 6);
        let r = filter_closure_check(&p).unwrap();
        assert!(r.passed());
        assert_eq!(r.filters_checked, 6);
        assert!(filter_closure_check(&dtd(4).unwrap()).unwrap().passed());
    }

    #[test]
    fn d_complete_posets_pass_consequences() {
        let p = dtd(5).unwrap();
        assert!(consequence_failures(&Analysis::new(&p)).is_empty());
        let u = disjoint_union(&fixtures::diamond(), &fixtures::diamond());
        assert!(consequence_failures(&Analysis::new(&u)).is_empty());
        assert!(!consequence_failures(&Analysis::new(&fixtures::cube())).is_empty());
    }
}
