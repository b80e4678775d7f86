//! Conjunctive, disjunctive and negative supports, the bond measure and the
//! inclusion-exclusion links between supports.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;

use crate::bitset::BitSet;
use crate::corpus::TransactionDb;
use crate::error::{Error, Result};
use crate::itemset::{is_strictly_sorted, Item, Itemset};

/// Exact bond value, always stored in lowest terms.
pub type Bond = Ratio<u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Supports {
    pub conj: u64,
    pub disj: u64,
    pub neg: u64,
}

/// An itemset with its supports and exact bond.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternRecord {
    pub itemset: Itemset,
    pub conj: u64,
    pub disj: u64,
    pub bond: Bond,
}

impl PatternRecord {
    /// Panics if `disj == 0` or `conj > disj`.
    pub fn new(itemset: Itemset, conj: u64, disj: u64) -> Self {
        assert!(disj > 0 && conj <= disj, "invalid supports {conj}/{disj}");
        debug_assert!(!itemset.is_empty() && is_strictly_sorted(&itemset));
        PatternRecord {
            itemset,
            conj,
            disj,
            bond: Ratio::new(conj, disj),
        }
    }

    pub fn neg(&self, transaction_count: u64) -> u64 {
        transaction_count - self.disj
    }

    pub fn key(&self) -> (u64, u64) {
        (self.conj, self.disj)
    }
}

impl fmt::Display for PatternRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.itemset.iter().map(|i| i.to_string()).collect();
        write!(f, "({}, {}, {})", ids.join(" "), self.conj, self.bond)
    }
}

/// `conj / disj >= minbond`, decided by cross-multiplication.
pub fn meets_minbond(conj: u64, disj: u64, minbond: Bond) -> bool {
    conj as u128 * *minbond.denom() as u128 >= *minbond.numer() as u128 * disj as u128
}

/// Supports of a set of dense item indices, via AND/OR over the bitsets.
pub(crate) fn supports_dense(db: &TransactionDb, dense: &[u32]) -> Supports {
    let (and, or) = and_or(db, dense);
    let disj = or.count();
    Supports {
        conj: and.count(),
        disj,
        neg: db.transaction_count() as u64 - disj,
    }
}

/// Conjunctive, disjunctive and negative support of `itemset` (original ids).
pub fn supports(db: &TransactionDb, itemset: &[Item]) -> Result<Supports> {
    if itemset.is_empty() {
        return Err(Error::EmptyItemset);
    }
    let dense = db.to_dense(itemset)?;
    Ok(supports_dense(db, &dense))
}

pub fn bond(db: &TransactionDb, itemset: &[Item]) -> Result<Bond> {
    let s = supports(db, itemset)?;
    if s.disj == 0 {
        return Err(Error::UndefinedBond(itemset.to_vec()));
    }
    Ok(Ratio::new(s.conj, s.disj))
}

/// Record for `itemset` computed directly from the bitsets.
pub fn record(db: &TransactionDb, itemset: &[Item]) -> Result<PatternRecord> {
    let s = supports(db, itemset)?;
    if s.disj == 0 {
        return Err(Error::UndefinedBond(itemset.to_vec()));
    }
    let mut sorted = itemset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(PatternRecord::new(sorted, s.conj, s.disj))
}

/// True when the ratio of the smallest to the largest single-item support is
/// below `minbond`, which certifies `bond(itemset) < minbond`.
pub fn cross_support_violates(db: &TransactionDb, itemset: &[Item], minbond: Bond) -> Result<bool> {
    let dense = db.to_dense(itemset)?;
    let (lo, hi) = dense
        .iter()
        .map(|&d| db.support_of(d))
        .fold((u64::MAX, 0), |(lo, hi), s| (lo.min(s), hi.max(s)));
    Ok(support_ratio_below(lo, hi, minbond))
}

pub(crate) fn support_ratio_below(min_supp: u64, max_supp: u64, minbond: Bond) -> bool {
    (min_supp as u128) * (*minbond.denom() as u128) < (*minbond.numer() as u128) * (max_supp as u128)
}

/// Disjunctive support from the conjunctive supports of every non-empty
/// subset, by inclusion-exclusion.
pub fn disj_from_conj(itemset: &[Item], conj_table: &HashMap<Itemset, u64>) -> Result<u64> {
    alternating_sum(itemset, conj_table)
}

/// Conjunctive support from the disjunctive supports of every non-empty
/// subset, by inclusion-exclusion.
pub fn conj_from_disj(itemset: &[Item], disj_table: &HashMap<Itemset, u64>) -> Result<u64> {
    alternating_sum(itemset, disj_table)
}

fn alternating_sum(itemset: &[Item], table: &HashMap<Itemset, u64>) -> Result<u64> {
    if itemset.is_empty() {
        return Err(Error::EmptyItemset);
    }
    assert!(itemset.len() < 64);
    let mut total: i128 = 0;
    for mask in 1u64..1 << itemset.len() {
        let subset: Itemset = itemset
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        let value = *table
            .get(&subset)
            .ok_or_else(|| Error::MissingSubset(subset.clone()))? as i128;
        if mask.count_ones() % 2 == 1 {
            total += value;
        } else {
            total -= value;
        }
    }
    Ok(total as u64)
}

/// AND and OR of the presence bitsets of dense items.
pub(crate) fn and_or(db: &TransactionDb, dense: &[u32]) -> (BitSet, BitSet) {
    let mut and = db.presence(dense[0]).clone();
    let mut or = and.clone();
    for &d in &dense[1..] {
        and.and_assign(db.presence(d));
        or.or_assign(db.presence(d));
    }
    (and, or)
}
