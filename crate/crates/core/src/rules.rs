//! Generic association rules and a best-rule associative classifier.
//!
//! A generic rule links a minimal generator `g` to a closed pattern `F ⊇ g` as
//! `g ⇒ F \ g`, with support `conj(F)` and confidence `conj(F) / conj(g)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::itemset::{canonical_cmp, difference, is_proper_subset, is_subset, union, Item, Itemset};
use crate::representations::{closure_in, fmt_ratio, CondensedRepresentation, RepresentationKind};

pub type Confidence = Ratio<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AssociationRule {
    pub premise: Itemset,
    pub conclusion: Itemset,
    pub support: u64,
    pub confidence: Confidence,
    pub exact: bool,
    pub class_label: Option<Item>,
}

impl AssociationRule {
    pub fn new(premise: Itemset, conclusion: Itemset, support: u64, premise_support: u64) -> Self {
        assert!(support > 0 && support <= premise_support);
        let confidence = Ratio::new(support, premise_support);
        AssociationRule {
            premise,
            conclusion,
            support,
            confidence,
            exact: support == premise_support,
            class_label: None,
        }
    }

    /// `premise ∪ conclusion`, the closed pattern the rule was drawn from.
    pub fn closed(&self) -> Itemset {
        union(&self.premise, &self.conclusion)
    }
}

fn ids(items: &[Item]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for AssociationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ⇒ {};{};{};{}",
            ids(&self.premise),
            ids(&self.conclusion),
            self.support,
            fmt_ratio(&self.confidence),
            if self.exact { "exact" } else { "approx" }
        )?;
        if let Some(label) = self.class_label {
            write!(f, ";{label}")?;
        }
        Ok(())
    }
}

/// Which closed patterns a generator is paired with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RulePairing {
    /// Every closed pattern containing the generator. Yields exact rules
    /// within a class and approximate rules across classes.
    #[default]
    ContainingClosures,
    /// Only the generator's own closure. Every rule is exact.
    OwnClosure,
}

fn sort_rules(rules: &mut [AssociationRule]) {
    rules.sort_by(|a, b| {
        canonical_cmp(&a.premise, &b.premise).then_with(|| canonical_cmp(&a.conclusion, &b.conclusion))
    });
}

/// Generic rules `g ⇒ F \ g` of an RCPR or RFCCP with confidence at least `minconf`.
pub fn generate_generic_rules(
    rep: &CondensedRepresentation,
    minconf: Confidence,
    pairing: RulePairing,
) -> Result<Vec<AssociationRule>> {
    if *minconf.numer() == 0 || minconf > Ratio::from_integer(1) {
        return Err(Error::InvalidConfig(format!("minconf {minconf} outside (0, 1]")));
    }
    let generators = match rep.kind {
        RepresentationKind::Rcpr => &rep.minimal_part,
        RepresentationKind::Rfccp => &rep.generators,
        other => {
            return Err(Error::KindMismatch {
                expected: "RCPR or RFCCP".into(),
                found: other.name().into(),
            })
        }
    };
    let mut rules = Vec::new();
    for g in generators {
        let closeds: Vec<_> = match pairing {
            RulePairing::OwnClosure => closure_in(&rep.closed_part, &g.itemset).into_iter().collect(),
            RulePairing::ContainingClosures => rep
                .closed_part
                .iter()
                .filter(|f| is_subset(&g.itemset, &f.itemset))
                .collect(),
        };
        for f in closeds {
            if f.itemset == g.itemset || f.conj == 0 {
                continue;
            }
            let rule = AssociationRule::new(g.itemset.clone(), difference(&f.itemset, &g.itemset), f.conj, g.conj);
            if rule.confidence >= minconf {
                rules.push(rule);
            }
        }
    }
    sort_rules(&mut rules);
    Ok(rules)
}

/// Keeps, for each closed pattern, only the rules whose premise contains no
/// other confident premise for the same closed pattern.
pub fn filter_igb(rules: &[AssociationRule]) -> Vec<AssociationRule> {
    let mut by_closed: HashMap<Itemset, Vec<&AssociationRule>> = HashMap::new();
    for r in rules {
        by_closed.entry(r.closed()).or_default().push(r);
    }
    let mut out: Vec<AssociationRule> = rules
        .iter()
        .filter(|r| {
            !by_closed[&r.closed()]
                .iter()
                .any(|o| is_proper_subset(&o.premise, &r.premise))
        })
        .cloned()
        .collect();
    sort_rules(&mut out);
    out
}

/// Rules concluding on exactly one class item, labelled with it. Rules naming
/// several class items are dropped with a warning.
pub fn classification_rules(rules: &[AssociationRule], class_items: &[Item]) -> Result<Vec<AssociationRule>> {
    if class_items.is_empty() {
        return Err(Error::InvalidConfig("no class items given".into()));
    }
    let mut out = Vec::new();
    for r in rules {
        if r.premise.iter().any(|i| class_items.contains(i)) {
            continue;
        }
        let labels: Vec<Item> = r.conclusion.iter().copied().filter(|i| class_items.contains(i)).collect();
        match labels.as_slice() {
            [] => {}
            [label] => {
                let mut r = r.clone();
                r.class_label = Some(*label);
                out.push(r);
            }
            _ => log::warn!("rule {r} concludes on several classes {labels:?}, dropped"),
        }
    }
    Ok(out)
}

/// Label of the best labelled rule firing on `transaction`: highest
/// confidence, then support, then shortest premise, then smallest premise.
pub fn classify(rules: &[AssociationRule], transaction: &[Item], default_label: Item) -> Item {
    let mut tx = transaction.to_vec();
    tx.sort_unstable();
    rules
        .iter()
        .filter(|r| r.class_label.is_some() && is_subset(&r.premise, &tx))
        .min_by(|a, b| {
            b.confidence
                .cmp(&a.confidence)
                .then(b.support.cmp(&a.support))
                .then_with(|| canonical_cmp(&a.premise, &b.premise))
        })
        .and_then(|r| r.class_label)
        .unwrap_or(default_label)
}

/// Most frequent label, smallest id on ties.
pub fn majority_label(labels: impl IntoIterator<Item = Item>) -> Option<Item> {
    let mut counts: BTreeMap<Item, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_default() += 1;
    }
    counts
        .into_iter()
        .max_by(|(la, ca), (lb, cb)| ca.cmp(cb).then(lb.cmp(la)))
        .map(|(l, _)| l)
}

/// Splits transactions into (features, label) for those holding exactly one
/// class item. Returns the number of transactions skipped.
pub fn split_labeled(transactions: &[Itemset], class_items: &[Item]) -> (Vec<(Itemset, Item)>, usize) {
    let mut out = Vec::new();
    let mut skipped = 0;
    for tx in transactions {
        let labels: Vec<Item> = tx.iter().copied().filter(|i| class_items.contains(i)).collect();
        if let [label] = labels.as_slice() {
            let features = tx.iter().copied().filter(|i| !class_items.contains(i)).collect();
            out.push((features, *label));
        } else {
            skipped += 1;
        }
    }
    (out, skipped)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub label: Item,
    pub n: usize,
    pub correct: usize,
}

impl ClassReport {
    /// Share of this class classified correctly, the detection rate.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.correct as u64, self.n.max(1) as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub correct: usize,
    pub total: usize,
    pub per_class: Vec<ClassReport>,
}

impl Evaluation {
    pub fn accuracy(&self) -> Ratio<u64> {
        Ratio::new(self.correct as u64, self.total.max(1) as u64)
    }

    /// CSV with columns class, n, correct, rate.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "class,n,correct,rate")?;
        for c in &self.per_class {
            writeln!(out, "{},{},{},{}", c.label, c.n, c.correct, decimal(c.rate()))?;
        }
        writeln!(out, "all,{},{},{}", self.total, self.correct, decimal(self.accuracy()))
    }
}

fn decimal(r: Ratio<u64>) -> String {
    format!("{:.6}", *r.numer() as f64 / *r.denom() as f64)
}

pub fn evaluate(rules: &[AssociationRule], labeled: &[(Itemset, Item)], default_label: Item) -> Evaluation {
    let mut per: BTreeMap<Item, ClassReport> = BTreeMap::new();
    let mut correct = 0;
    for (tx, label) in labeled {
        let entry = per.entry(*label).or_insert(ClassReport {
            label: *label,
            n: 0,
            correct: 0,
        });
        entry.n += 1;
        if classify(rules, tx, default_label) == *label {
            entry.correct += 1;
            correct += 1;
        }
    }
    Evaluation {
        correct,
        total: labeled.len(),
        per_class: per.into_values().collect(),
    }
}

pub fn write_rules<W: Write>(rules: &[AssociationRule], mut out: W) -> std::io::Result<()> {
    for r in rules {
        writeln!(out, "{r}")?;
    }
    Ok(())
}

/// Parses the rule lines written by [`write_rules`].
pub fn parse_rules(text: &str) -> Result<Vec<AssociationRule>> {
    let mut rules = Vec::new();
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let err = |message: &str| Error::Format {
            line: n + 1,
            message: message.to_string(),
        };
        let cols: Vec<&str> = line.split(';').collect();
        if cols.len() != 4 && cols.len() != 5 {
            return Err(err("expected 4 or 5 fields"));
        }
        let (lhs, rhs) = cols[0].split_once('⇒').ok_or_else(|| err("missing ⇒"))?;
        let parse_ids = |s: &str| -> Result<Itemset> {
            s.split_whitespace()
                .map(|t| t.parse::<Item>().map_err(|_| err("bad item id")))
                .collect()
        };
        let premise = parse_ids(lhs)?;
        let conclusion = parse_ids(rhs)?;
        if premise.is_empty() || conclusion.is_empty() || premise.iter().any(|i| conclusion.contains(i)) {
            return Err(err("premise and conclusion must be non-empty and disjoint"));
        }
        let support: u64 = cols[1].parse().map_err(|_| err("bad support"))?;
        let (num, den) = cols[2]
            .split_once('/')
            .and_then(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)))
            .filter(|&(a, b)| a > 0 && b >= a)
            .ok_or_else(|| err("bad confidence"))?;
        let confidence = Ratio::new(num, den);
        if (num, den) != (*confidence.numer(), *confidence.denom()) {
            return Err(err("confidence not in lowest terms"));
        }
        let exact = match cols[3] {
            "exact" => true,
            "approx" => false,
            _ => return Err(err("expected exact or approx")),
        };
        if exact != (num == den) {
            return Err(err("exact flag disagrees with confidence"));
        }
        let class_label = match cols.get(4) {
            Some(l) if !l.is_empty() => Some(l.parse::<Item>().map_err(|_| err("bad label"))?),
            _ => None,
        };
        rules.push(AssociationRule {
            premise,
            conclusion,
            support,
            confidence,
            exact,
            class_label,
        });
    }
    Ok(rules)
}
