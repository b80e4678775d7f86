//! Condensed representations of correlated patterns.
//!
//! A representation keeps the minimal and closed patterns of the f_bond
//! equivalence classes (or a reduction of them) and can answer, for any
//! itemset, whether it is rare correlated together with its supports and bond.
//! This module also owns the text format shared by all result files.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_rational::Ratio;

use crate::config::{Scenario, Thresholds};
use crate::error::{Error, Result};
use crate::itemset::{
    canonical_cmp, interval, is_strictly_sorted, is_subset, maximal_elements,
    minimal_elements, normalize, without_index, Item, Itemset,
};
use crate::measures::{Bond, PatternRecord};

/// Sorts records canonically: by itemset length, then lexicographically.
pub fn sort_records(records: &mut [PatternRecord]) {
    records.sort_by(|a, b| canonical_cmp(&a.itemset, &b.itemset));
}

/// Formats a ratio as `num/den` in lowest terms, including integers.
pub fn fmt_ratio(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepresentationKind {
    Rcpr,
    MMaxCr,
    MinMcr,
    MinMMaxCr,
    Rfccp,
}

impl RepresentationKind {
    pub const ALL: [RepresentationKind; 5] = [
        RepresentationKind::Rcpr,
        RepresentationKind::MMaxCr,
        RepresentationKind::MinMcr,
        RepresentationKind::MinMMaxCr,
        RepresentationKind::Rfccp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepresentationKind::Rcpr => "RCPR",
            RepresentationKind::MMaxCr => "MMaxCR",
            RepresentationKind::MinMcr => "MinMCR",
            RepresentationKind::MinMMaxCr => "MinMMaxCR",
            RepresentationKind::Rfccp => "RFCCP",
        }
    }

    fn is_frequent(self) -> bool {
        self == RepresentationKind::Rfccp
    }
}

impl fmt::Display for RepresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RepresentationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown representation kind {s:?}")))
    }
}

/// Minimal and closed parts of a representation.
///
/// For RFCCP the minimal part is empty, the closed part holds the frequent
/// closed correlated patterns and `generators` the frequent minimal correlated
/// ones, which rule generation needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondensedRepresentation {
    pub kind: RepresentationKind,
    pub minimal_part: Vec<PatternRecord>,
    pub closed_part: Vec<PatternRecord>,
    pub generators: Vec<PatternRecord>,
    pub transaction_count: u64,
    pub thresholds: Thresholds,
}

impl CondensedRepresentation {
    fn sorted(mut self) -> Self {
        sort_records(&mut self.minimal_part);
        sort_records(&mut self.closed_part);
        sort_records(&mut self.generators);
        self
    }

    /// Distinct itemsets over the minimal and closed parts.
    pub fn elements(&self) -> Vec<&PatternRecord> {
        let mut seen = HashSet::new();
        let mut out: Vec<&PatternRecord> = self
            .minimal_part
            .iter()
            .chain(&self.closed_part)
            .filter(|r| seen.insert(&r.itemset))
            .collect();
        out.sort_by(|a, b| canonical_cmp(&a.itemset, &b.itemset));
        out
    }

    pub fn distinct_count(&self) -> usize {
        self.elements().len()
    }

    fn find(&self, itemset: &[Item]) -> Option<&PatternRecord> {
        self.minimal_part
            .iter()
            .chain(&self.closed_part)
            .find(|r| r.itemset == itemset)
    }

    fn expect_kind(&self, allowed: &[RepresentationKind]) -> Result<()> {
        if allowed.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected: allowed.iter().map(|k| k.name()).collect::<Vec<_>>().join(" or "),
                found: self.kind.name().into(),
            })
        }
    }

    /// Membership test shared by the rare-correlated kinds: some element lies
    /// below the itemset and some element above it.
    fn brackets(&self, itemset: &[Item]) -> bool {
        let all = || self.minimal_part.iter().chain(&self.closed_part);
        all().any(|r| is_subset(&r.itemset, itemset)) && all().any(|r| is_subset(itemset, &r.itemset))
    }
}

/// The ⊆-least closed pattern containing `itemset`, taken as the smallest cover.
pub fn closure_in<'a>(closed: &'a [PatternRecord], itemset: &[Item]) -> Option<&'a PatternRecord> {
    closed
        .iter()
        .filter(|r| is_subset(itemset, &r.itemset))
        .min_by(|a, b| canonical_cmp(&a.itemset, &b.itemset))
}

/// A plain pattern set (FCP or RCP).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    pub scenario: Scenario,
    pub records: Vec<PatternRecord>,
    pub transaction_count: u64,
    pub thresholds: Thresholds,
}

/// Result of a mining run or of a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MiningOutput {
    Patterns(PatternSet),
    Representation(CondensedRepresentation),
}

impl MiningOutput {
    pub fn patterns(scenario: Scenario, mut records: Vec<PatternRecord>, transaction_count: u64, thresholds: Thresholds) -> Self {
        assert!(matches!(scenario, Scenario::Fcp | Scenario::Rcp));
        sort_records(&mut records);
        MiningOutput::Patterns(PatternSet {
            scenario,
            records,
            transaction_count,
            thresholds,
        })
    }

    /// Builds RCPR (minimals and closeds) or RFCCP (generators and closeds).
    pub fn condensed(
        scenario: Scenario,
        minimals: Vec<PatternRecord>,
        closeds: Vec<PatternRecord>,
        transaction_count: u64,
        thresholds: Thresholds,
    ) -> Self {
        let rep = match scenario {
            Scenario::Rcpr => CondensedRepresentation {
                kind: RepresentationKind::Rcpr,
                minimal_part: minimals,
                closed_part: closeds,
                generators: Vec::new(),
                transaction_count,
                thresholds,
            },
            Scenario::Rfccp => CondensedRepresentation {
                kind: RepresentationKind::Rfccp,
                minimal_part: Vec::new(),
                closed_part: closeds,
                generators: minimals,
                transaction_count,
                thresholds,
            },
            other => panic!("{other} is not a representation scenario"),
        };
        MiningOutput::Representation(rep.sorted())
    }

    /// Pattern records of a pattern set; empty for representations.
    pub fn records(&self) -> &[PatternRecord] {
        match self {
            MiningOutput::Patterns(p) => &p.records,
            MiningOutput::Representation(_) => &[],
        }
    }

    pub fn representation(&self) -> Option<&CondensedRepresentation> {
        match self {
            MiningOutput::Representation(r) => Some(r),
            MiningOutput::Patterns(_) => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MiningOutput::Patterns(p) if p.scenario == Scenario::Fcp => "FCP",
            MiningOutput::Patterns(_) => "RCP",
            MiningOutput::Representation(r) => r.kind.name(),
        }
    }

    pub fn transaction_count(&self) -> u64 {
        match self {
            MiningOutput::Patterns(p) => p.transaction_count,
            MiningOutput::Representation(r) => r.transaction_count,
        }
    }

    pub fn thresholds(&self) -> Thresholds {
        match self {
            MiningOutput::Patterns(p) => p.thresholds,
            MiningOutput::Representation(r) => r.thresholds,
        }
    }

    /// Writes the result in the line format read back by [`MiningOutput::parse`].
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let th = self.thresholds();
        writeln!(
            out,
            "# kind={} transactions={} minsupp={} minbond={}",
            self.kind_name(),
            self.transaction_count(),
            th.minsupp,
            fmt_ratio(&th.minbond)
        )?;
        let mut line = |part: &str, r: &PatternRecord| {
            let ids: Vec<String> = r.itemset.iter().map(|i| i.to_string()).collect();
            writeln!(
                out,
                "{part};{};{};{};{}",
                ids.join(" "),
                r.conj,
                r.disj,
                fmt_ratio(&r.bond)
            )
        };
        match self {
            MiningOutput::Patterns(p) => {
                for r in &p.records {
                    line("pattern", r)?;
                }
            }
            MiningOutput::Representation(rep) => {
                for r in &rep.minimal_part {
                    line("minimal", r)?;
                }
                for r in &rep.closed_part {
                    line("closed", r)?;
                }
                for r in &rep.generators {
                    line("generator", r)?;
                }
            }
        }
        Ok(())
    }

    pub fn to_file_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Parses and validates a result file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(Error::Format {
            line: 1,
            message: "missing header".into(),
        })?;
        let fmt_err = |line: usize, message: String| Error::Format {
            line: line + 1,
            message,
        };
        let body = header
            .strip_prefix('#')
            .ok_or_else(|| fmt_err(hline, "header must start with '#'".into()))?;
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for tok in body.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| fmt_err(hline, format!("bad header field {tok:?}")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| fmt_err(hline, format!("header lacks {k}")))
        };
        let kind = get("kind")?;
        let transaction_count: u64 = get("transactions")?
            .parse()
            .map_err(|_| fmt_err(hline, "bad transaction count".into()))?;
        let minsupp: u64 = get("minsupp")?
            .parse()
            .map_err(|_| fmt_err(hline, "bad minsupp".into()))?;
        let minbond = parse_ratio(get("minbond")?).ok_or_else(|| fmt_err(hline, "bad minbond".into()))?;
        let thresholds =
            Thresholds::new(minsupp, minbond).map_err(|e| fmt_err(hline, e.to_string()))?;

        let (rep_kind, scenario) = match kind {
            "FCP" => (None, Some(Scenario::Fcp)),
            "RCP" => (None, Some(Scenario::Rcp)),
            other => (
                Some(
                    other
                        .parse::<RepresentationKind>()
                        .map_err(|_| fmt_err(hline, format!("unknown kind {other:?}")))?,
                ),
                None,
            ),
        };
        let frequent = match (rep_kind, scenario) {
            (Some(k), _) => k.is_frequent(),
            (None, Some(s)) => s.is_frequent(),
            _ => unreachable!(),
        };
        let allowed: &[&str] = match rep_kind {
            None => &["pattern"],
            Some(RepresentationKind::Rfccp) => &["closed", "generator"],
            Some(_) => &["minimal", "closed"],
        };

        let mut parts: HashMap<&str, Vec<PatternRecord>> = HashMap::new();
        for (n, line) in lines {
            let cols: Vec<&str> = line.split(';').collect();
            if cols.len() != 5 {
                return Err(fmt_err(n, format!("expected 5 fields, found {}", cols.len())));
            }
            let part = cols[0];
            if !allowed.contains(&part) {
                return Err(fmt_err(n, format!("part {part:?} not allowed in {kind}")));
            }
            let itemset = cols[1]
                .split_whitespace()
                .map(|t| t.parse::<Item>())
                .collect::<std::result::Result<Itemset, _>>()
                .map_err(|_| fmt_err(n, "bad item id".into()))?;
            if itemset.is_empty() || !is_strictly_sorted(&itemset) {
                return Err(fmt_err(n, "itemset must be non-empty and strictly increasing".into()));
            }
            let conj: u64 = cols[2].parse().map_err(|_| fmt_err(n, "bad conj".into()))?;
            let disj: u64 = cols[3].parse().map_err(|_| fmt_err(n, "bad disj".into()))?;
            if disj == 0 || conj > disj || disj > transaction_count {
                return Err(fmt_err(n, "supports out of range".into()));
            }
            let (num, den) = cols[4]
                .split_once('/')
                .and_then(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)))
                .ok_or_else(|| fmt_err(n, "bond must be num/den".into()))?;
            let rec = PatternRecord::new(itemset, conj, disj);
            if (num, den) != (*rec.bond.numer(), *rec.bond.denom()) {
                return Err(fmt_err(n, format!("bond {num}/{den} is not conj/disj in lowest terms")));
            }
            if !thresholds.is_correlated(conj, disj) {
                return Err(fmt_err(n, "pattern is not correlated".into()));
            }
            if thresholds.is_frequent(conj) != frequent {
                return Err(fmt_err(n, "pattern violates the frequency constraint".into()));
            }
            parts.entry(part).or_default().push(rec);
        }
        let mut take = |p: &str| parts.remove(p).unwrap_or_default();
        Ok(match rep_kind {
            None => MiningOutput::patterns(scenario.unwrap(), take("pattern"), transaction_count, thresholds),
            Some(kind) => MiningOutput::Representation(
                CondensedRepresentation {
                    kind,
                    minimal_part: take("minimal"),
                    closed_part: take("closed"),
                    generators: take("generator"),
                    transaction_count,
                    thresholds,
                }
                .sorted(),
            ),
        })
    }
}

fn parse_ratio(s: &str) -> Option<Ratio<u64>> {
    let (n, d) = s.split_once('/')?;
    let (n, d): (u64, u64) = (n.parse().ok()?, d.parse().ok()?);
    (d != 0).then(|| Ratio::new(n, d))
}

/// Reduces an RCPR to one of the derived kinds.
pub fn derive(kind: RepresentationKind, rcpr: &CondensedRepresentation) -> Result<CondensedRepresentation> {
    rcpr.expect_kind(&[RepresentationKind::Rcpr])?;
    let keep = |parts: &[PatternRecord], chosen: Vec<Itemset>| -> Vec<PatternRecord> {
        let chosen: HashSet<Itemset> = chosen.into_iter().collect();
        parts.iter().filter(|r| chosen.contains(&r.itemset)).cloned().collect()
    };
    let sets = |parts: &[PatternRecord]| -> Vec<Itemset> { parts.iter().map(|r| r.itemset.clone()).collect() };
    let mut out = rcpr.clone();
    out.kind = kind;
    match kind {
        RepresentationKind::Rcpr => {}
        RepresentationKind::MMaxCr => {
            out.closed_part = keep(&rcpr.closed_part, maximal_elements(&sets(&rcpr.closed_part)));
        }
        RepresentationKind::MinMcr => {
            out.minimal_part = keep(&rcpr.minimal_part, minimal_elements(&sets(&rcpr.minimal_part)));
        }
        RepresentationKind::MinMMaxCr => {
            out.closed_part = keep(&rcpr.closed_part, maximal_elements(&sets(&rcpr.closed_part)));
            out.minimal_part = keep(&rcpr.minimal_part, minimal_elements(&sets(&rcpr.minimal_part)));
        }
        RepresentationKind::Rfccp => {
            return Err(Error::KindMismatch {
                expected: "a rare correlated kind".into(),
                found: "RFCCP".into(),
            })
        }
    }
    Ok(out)
}

/// Exact answer for a rare correlated itemset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactAnswer {
    pub record: PatternRecord,
    pub neg: u64,
}

/// Bounds on the supports and bond of an itemset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BondInterval {
    pub conj_lo: u64,
    pub conj_hi: u64,
    pub disj_lo: u64,
    pub disj_hi: u64,
    pub bond_lo: Bond,
    pub bond_hi: Bond,
}

impl BondInterval {
    pub fn exact(r: &PatternRecord) -> Self {
        BondInterval {
            conj_lo: r.conj,
            conj_hi: r.conj,
            disj_lo: r.disj,
            disj_hi: r.disj,
            bond_lo: r.bond,
            bond_hi: r.bond,
        }
    }

    pub fn contains(&self, r: &PatternRecord) -> bool {
        (self.conj_lo..=self.conj_hi).contains(&r.conj)
            && (self.disj_lo..=self.disj_hi).contains(&r.disj)
            && self.bond_lo <= r.bond
            && r.bond <= self.bond_hi
    }
}

/// Answer to a query against any representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    RareCorrelated(ExactAnswer),
    RareCorrelatedWithin(BondInterval),
    NotRareCorrelated,
    FrequentCorrelated(ExactAnswer),
    NotFrequentCorrelated,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exact = |f: &mut fmt::Formatter<'_>, tag: &str, a: &ExactAnswer| {
            write!(
                f,
                "{tag} conj={} disj={} neg={} bond={}",
                a.record.conj,
                a.record.disj,
                a.neg,
                fmt_ratio(&a.record.bond)
            )
        };
        match self {
            Answer::RareCorrelated(a) => exact(f, "RARE_CORRELATED", a),
            Answer::FrequentCorrelated(a) => exact(f, "FREQUENT_CORRELATED", a),
            Answer::RareCorrelatedWithin(iv) => write!(
                f,
                "RARE_CORRELATED conj=[{},{}] disj=[{},{}] bond=[{},{}]",
                iv.conj_lo,
                iv.conj_hi,
                iv.disj_lo,
                iv.disj_hi,
                fmt_ratio(&iv.bond_lo),
                fmt_ratio(&iv.bond_hi)
            ),
            Answer::NotRareCorrelated => f.write_str("NOT_RARE_CORRELATED"),
            Answer::NotFrequentCorrelated => f.write_str("NOT_FREQUENT_CORRELATED"),
        }
    }
}

fn query_itemset(itemset: &[Item]) -> Result<Itemset> {
    let it = normalize(itemset.iter().copied());
    if it.is_empty() {
        return Err(Error::EmptyItemset);
    }
    Ok(it)
}

fn exact(rep: &CondensedRepresentation, itemset: Itemset, conj: u64, disj: u64) -> ExactAnswer {
    ExactAnswer {
        record: PatternRecord::new(itemset, conj, disj),
        neg: rep.transaction_count - disj,
    }
}

/// Exact query against an RCPR or MinMCR: members answer with their record,
/// bracketed itemsets take the values of their least closed cover.
pub fn query(rep: &CondensedRepresentation, itemset: &[Item]) -> Result<Option<ExactAnswer>> {
    rep.expect_kind(&[RepresentationKind::Rcpr, RepresentationKind::MinMcr])?;
    let it = query_itemset(itemset)?;
    if let Some(r) = rep.find(&it) {
        return Ok(Some(exact(rep, it, r.conj, r.disj)));
    }
    if !rep.brackets(&it) {
        return Ok(None);
    }
    Ok(closure_in(&rep.closed_part, &it).map(|f| exact(rep, it.clone(), f.conj, f.disj)))
}

/// Exact query against an MMaxCR: a bracketed non-member takes the smallest
/// conj and bond among the representation elements below it.
pub fn query_mmaxcr(rep: &CondensedRepresentation, itemset: &[Item]) -> Result<Option<ExactAnswer>> {
    rep.expect_kind(&[RepresentationKind::MMaxCr])?;
    let it = query_itemset(itemset)?;
    if let Some(r) = rep.find(&it) {
        return Ok(Some(exact(rep, it, r.conj, r.disj)));
    }
    if !rep.brackets(&it) {
        return Ok(None);
    }
    let below: Vec<&PatternRecord> = rep
        .minimal_part
        .iter()
        .chain(&rep.closed_part)
        .filter(|r| is_subset(&r.itemset, &it))
        .collect();
    let conj = below.iter().map(|r| r.conj).min().unwrap();
    let bond = below.iter().map(|r| r.bond).min().unwrap();
    let disj = Ratio::from_integer(conj) / bond;
    if !disj.is_integer() {
        return Err(Error::InvalidConfig(format!(
            "inconsistent representation: conj {conj} and bond {bond} for {it:?}"
        )));
    }
    Ok(Some(exact(rep, it, conj, disj.to_integer())))
}

/// Interval query against a MinMMaxCR. Members get a degenerate interval.
pub fn query_approx(rep: &CondensedRepresentation, itemset: &[Item]) -> Result<Option<BondInterval>> {
    rep.expect_kind(&[RepresentationKind::MinMMaxCr])?;
    let it = query_itemset(itemset)?;
    if let Some(r) = rep.find(&it) {
        return Ok(Some(BondInterval::exact(r)));
    }
    if !rep.brackets(&it) {
        return Ok(None);
    }
    let above: Vec<&PatternRecord> = rep.closed_part.iter().filter(|r| is_subset(&it, &r.itemset)).collect();
    let below: Vec<&PatternRecord> = rep.minimal_part.iter().filter(|r| is_subset(&r.itemset, &it)).collect();
    if above.is_empty() || below.is_empty() {
        return Ok(None);
    }
    let r1 = above.iter().map(|r| r.conj).max().unwrap();
    let r2 = below.iter().map(|r| r.conj).min().unwrap();
    let r3 = above.iter().map(|r| r.disj).min().unwrap();
    let r4 = below.iter().map(|r| r.disj).max().unwrap();
    let (conj_lo, conj_hi) = (r1.min(r2), r1.max(r2));
    let (disj_lo, disj_hi) = (r3.min(r4), r3.max(r4));
    Ok(Some(BondInterval {
        conj_lo,
        conj_hi,
        disj_lo,
        disj_hi,
        bond_lo: Ratio::new(conj_lo, disj_hi),
        bond_hi: Ratio::new(conj_hi, disj_lo),
    }))
}

/// Exact query against an RFCCP: an itemset is frequent correlated iff some
/// frequent closed correlated pattern contains it, and shares the values of
/// the least such pattern.
pub fn query_rfccp(rep: &CondensedRepresentation, itemset: &[Item]) -> Result<Option<ExactAnswer>> {
    rep.expect_kind(&[RepresentationKind::Rfccp])?;
    let it = query_itemset(itemset)?;
    Ok(closure_in(&rep.closed_part, &it).map(|f| exact(rep, it.clone(), f.conj, f.disj)))
}

/// Dispatches to the query matching the representation kind.
pub fn answer(rep: &CondensedRepresentation, itemset: &[Item]) -> Result<Answer> {
    Ok(match rep.kind {
        RepresentationKind::Rcpr | RepresentationKind::MinMcr => {
            query(rep, itemset)?.map_or(Answer::NotRareCorrelated, Answer::RareCorrelated)
        }
        RepresentationKind::MMaxCr => {
            query_mmaxcr(rep, itemset)?.map_or(Answer::NotRareCorrelated, Answer::RareCorrelated)
        }
        RepresentationKind::MinMMaxCr => {
            query_approx(rep, itemset)?.map_or(Answer::NotRareCorrelated, Answer::RareCorrelatedWithin)
        }
        RepresentationKind::Rfccp => {
            query_rfccp(rep, itemset)?.map_or(Answer::NotFrequentCorrelated, Answer::FrequentCorrelated)
        }
    })
}

/// Rebuilds the full rare correlated set from an RCPR: every itemset between a
/// minimal pattern and its closure, carrying the closure's supports.
pub fn regenerate_rcp(rep: &CondensedRepresentation) -> Result<Vec<PatternRecord>> {
    rep.expect_kind(&[RepresentationKind::Rcpr])?;
    let mut out: HashMap<Itemset, PatternRecord> = HashMap::new();
    for r in rep.minimal_part.iter().chain(&rep.closed_part) {
        out.insert(r.itemset.clone(), r.clone());
    }
    for m in &rep.minimal_part {
        let Some(f) = closure_in(&rep.closed_part, &m.itemset) else {
            continue;
        };
        for x in interval(&m.itemset, &f.itemset) {
            out.entry(x.clone())
                .or_insert_with(|| PatternRecord::new(x, f.conj, f.disj));
        }
    }
    let mut v: Vec<PatternRecord> = out.into_values().collect();
    sort_records(&mut v);
    Ok(v)
}

/// `1 - distinct / full`.
pub fn compactness_rate(distinct: usize, full_set_size: usize) -> Result<Ratio<u64>> {
    if full_set_size == 0 || distinct > full_set_size {
        return Err(Error::InvalidConfig(format!(
            "compactness needs 0 < {distinct} <= {full_set_size}"
        )));
    }
    Ok(Ratio::from_integer(1) - Ratio::new(distinct as u64, full_set_size as u64))
}

pub fn compactness(rep: &CondensedRepresentation, full_set_size: usize) -> Result<Ratio<u64>> {
    compactness_rate(rep.distinct_count(), full_set_size)
}

/// Splits a pattern set into the members with no equal-key immediate subset
/// and those with no equal-key immediate superset.
fn minimal_and_closed(records: &[PatternRecord]) -> (Vec<PatternRecord>, Vec<PatternRecord>) {
    let keys: HashMap<&[Item], (u64, u64)> = records.iter().map(|r| (r.itemset.as_slice(), r.key())).collect();
    let mut not_closed: HashSet<Itemset> = HashSet::new();
    let mut minimals = Vec::new();
    for r in records {
        let mut minimal = true;
        if r.itemset.len() > 1 {
            for p in 0..r.itemset.len() {
                let sub = without_index(&r.itemset, p);
                if keys.get(sub.as_slice()) == Some(&r.key()) {
                    minimal = false;
                    not_closed.insert(sub);
                }
            }
        }
        if minimal {
            minimals.push(r.clone());
        }
    }
    let closeds = records
        .iter()
        .filter(|r| !not_closed.contains(&r.itemset))
        .cloned()
        .collect();
    (minimals, closeds)
}

/// RCPR of a complete rare correlated set.
pub fn rcpr_from_rcp(rcp: &[PatternRecord], transaction_count: u64, thresholds: Thresholds) -> CondensedRepresentation {
    let (minimals, closeds) = minimal_and_closed(rcp);
    CondensedRepresentation {
        kind: RepresentationKind::Rcpr,
        minimal_part: minimals,
        closed_part: closeds,
        generators: Vec::new(),
        transaction_count,
        thresholds,
    }
    .sorted()
}

/// RFCCP of a complete frequent correlated set.
pub fn rfccp_from_fcp(fcp: &[PatternRecord], transaction_count: u64, thresholds: Thresholds) -> CondensedRepresentation {
    let (generators, closeds) = minimal_and_closed(fcp);
    CondensedRepresentation {
        kind: RepresentationKind::Rfccp,
        minimal_part: Vec::new(),
        closed_part: closeds,
        generators,
        transaction_count,
        thresholds,
    }
    .sorted()
}
