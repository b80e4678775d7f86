//! Brute-force reference over the whole itemset lattice of a small context.
//!
//! Everything here follows the definitions literally: closures are computed
//! item by item, minimality and maximality by scanning every proper subset or
//! superset. It is exponential and meant for tests and debugging.

use std::fmt::Write as _;

use num_rational::Ratio;

use crate::bitset::BitSet;
use crate::config::Thresholds;
use crate::corpus::TransactionDb;
use crate::error::{Error, Result};
use crate::itemset::{Item, Itemset};
use crate::measures::{meets_minbond, Bond, PatternRecord};

pub const DEFAULT_ORACLE_CAP: usize = 20;
pub const ORACLE_CAP_ENV: &str = "BONDMINER_ORACLE_CAP";

/// Item limit for lattice enumeration, overridable through the environment.
pub fn oracle_cap() -> usize {
    std::env::var(ORACLE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
}

/// Items (original ids) common to every listed transaction (0-based indices).
pub fn galois_g(db: &TransactionDb, transactions: &[usize]) -> Itemset {
    let mut out: Itemset = (0..db.item_count() as u32)
        .filter(|&d| transactions.iter().all(|&t| db.presence(d).contains(t)))
        .map(|d| db.original_id(d))
        .collect();
    out.sort_unstable();
    out
}

/// Transactions (0-based indices) containing every listed item.
pub fn galois_h(db: &TransactionDb, itemset: &[Item]) -> Result<Vec<usize>> {
    let dense = db.to_dense(itemset)?;
    let mut cover = BitSet::full(db.transaction_count());
    for d in dense {
        cover.and_assign(db.presence(d));
    }
    Ok(cover.ones().collect())
}

/// `I ∪ {i ∉ I : bond(I ∪ {i}) = bond(I)}`.
pub fn f_bond_closure(db: &TransactionDb, itemset: &[Item]) -> Result<Itemset> {
    let base = crate::measures::supports(db, itemset)?;
    if base.disj == 0 {
        return Err(Error::UndefinedBond(itemset.to_vec()));
    }
    let bond = Ratio::new(base.conj, base.disj);
    let mut out: Itemset = itemset.to_vec();
    for &id in db.original_ids() {
        if itemset.contains(&id) {
            continue;
        }
        let mut ext = itemset.to_vec();
        ext.push(id);
        if crate::measures::bond(db, &ext)? == bond {
            out.push(id);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Supports and closures of every non-empty itemset of a context.
///
/// Bit `k` of a mask stands for the `k`-th smallest original item id.
#[derive(Clone, Debug)]
pub struct Lattice {
    items: Vec<Item>,
    transaction_count: u64,
    conj: Vec<u32>,
    disj: Vec<u32>,
    closure: Vec<u32>,
}

impl Lattice {
    pub fn build(db: &TransactionDb) -> Result<Self> {
        let cap = oracle_cap();
        let n = db.item_count();
        if n > cap || n > 30 {
            return Err(Error::OracleCapExceeded { cap, items: n });
        }
        let mut items = db.original_ids().to_vec();
        items.sort_unstable();
        let presence: Vec<&BitSet> = items
            .iter()
            .map(|&id| db.presence(db.dense_id(id).unwrap()))
            .collect();

        let size = 1usize << n;
        let mut conj = vec![0u32; size];
        let mut disj = vec![0u32; size];
        let t = db.transaction_count();
        conj[0] = t as u32;
        let mut stack = vec![(0usize, 0usize, BitSet::full(t), BitSet::new(t))];
        while let Some((start, mask, and, or)) = stack.pop() {
            for (k, &bits) in presence.iter().enumerate().skip(start) {
                let m = mask | 1 << k;
                let a = and.and(bits);
                let mut o = or.clone();
                o.or_assign(bits);
                conj[m] = a.count() as u32;
                disj[m] = o.count() as u32;
                stack.push((k + 1, m, a, o));
            }
        }

        let mut closure = vec![0u32; size];
        for mask in 1..size {
            let mut c = mask as u32;
            for k in 0..n {
                let m = mask | 1 << k;
                if m != mask && same_bond(conj[mask], disj[mask], conj[m], disj[m]) {
                    c |= 1 << k;
                }
            }
            closure[mask] = c;
        }

        Ok(Lattice {
            items,
            transaction_count: t as u64,
            conj,
            disj,
            closure,
        })
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn transaction_count(&self) -> u64 {
        self.transaction_count
    }

    /// Every non-empty mask.
    pub fn masks(&self) -> impl Iterator<Item = u32> {
        1..(1u32 << self.items.len())
    }

    pub fn itemset(&self, mask: u32) -> Itemset {
        (0..self.items.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| self.items[k])
            .collect()
    }

    pub fn mask_of(&self, itemset: &[Item]) -> Result<u32> {
        itemset.iter().try_fold(0u32, |m, id| {
            self.items
                .binary_search(id)
                .map(|k| m | 1 << k)
                .map_err(|_| Error::UnknownItem(*id))
        })
    }

    pub fn conj(&self, mask: u32) -> u64 {
        self.conj[mask as usize] as u64
    }

    pub fn disj(&self, mask: u32) -> u64 {
        self.disj[mask as usize] as u64
    }

    pub fn bond(&self, mask: u32) -> Bond {
        Ratio::new(self.conj(mask), self.disj(mask))
    }

    pub fn closure(&self, mask: u32) -> u32 {
        self.closure[mask as usize]
    }

    pub fn record(&self, mask: u32) -> PatternRecord {
        PatternRecord::new(self.itemset(mask), self.conj(mask), self.disj(mask))
    }

    pub fn is_correlated(&self, mask: u32, th: &Thresholds) -> bool {
        mask != 0 && meets_minbond(self.conj(mask), self.disj(mask), th.minbond)
    }

    pub fn is_frequent(&self, mask: u32, th: &Thresholds) -> bool {
        self.conj(mask) >= th.minsupp
    }

    pub fn is_rare_correlated(&self, mask: u32, th: &Thresholds) -> bool {
        self.is_correlated(mask, th) && !self.is_frequent(mask, th)
    }

    fn proper_submasks(mask: u32) -> impl Iterator<Item = u32> {
        let mut sub = mask;
        std::iter::from_fn(move || {
            if sub == 0 {
                return None;
            }
            sub = (sub - 1) & mask;
            (sub != 0).then_some(sub)
        })
    }

    fn proper_supermasks(&self, mask: u32) -> impl Iterator<Item = u32> {
        let full = (1u32 << self.items.len()) - 1;
        let free = full & !mask;
        let mut extra = 0u32;
        std::iter::from_fn(move || {
            extra = extra.wrapping_sub(free) & free;
            (extra != 0).then_some(mask | extra)
        })
    }

    /// Closed: the closure adds nothing.
    pub fn is_closed(&self, mask: u32) -> bool {
        self.closure(mask) == mask
    }

    /// Minimal: no non-empty proper subset shares the closure.
    pub fn is_minimal(&self, mask: u32) -> bool {
        let c = self.closure(mask);
        Self::proper_submasks(mask).all(|s| self.closure(s) != c)
    }

    pub fn families(&self, th: &Thresholds) -> Families {
        let mut f = Families::default();
        for mask in self.masks() {
            if !self.is_correlated(mask, th) {
                continue;
            }
            let rec = self.record(mask);
            let frequent = self.is_frequent(mask, th);
            let closed = self.is_closed(mask);
            let minimal = self.is_minimal(mask);
            let maximal = !self
                .proper_supermasks(mask)
                .any(|s| self.is_correlated(s, th));
            f.cp.push(rec.clone());
            if maximal {
                f.maxcp.push(rec.clone());
            }
            if closed {
                f.ccp.push(rec.clone());
            }
            if minimal {
                f.mcp.push(rec.clone());
            }
            if frequent {
                f.fcp.push(rec.clone());
                if closed {
                    f.fccp.push(rec.clone());
                }
                if minimal {
                    f.fmcp.push(rec.clone());
                }
            } else {
                f.rcp.push(rec.clone());
                let min_rare = Self::proper_submasks(mask).all(|s| self.is_frequent(s, th));
                if closed {
                    f.crcp.push(rec.clone());
                    if maximal {
                        f.maxcrcp.push(rec.clone());
                    }
                }
                if minimal {
                    f.mrcp.push(rec.clone());
                    if min_rare {
                        f.minmrcp.push(rec.clone());
                    }
                }
            }
        }
        f.minrp = self
            .masks()
            .filter(|&m| !self.is_frequent(m, th))
            .filter(|&m| Self::proper_submasks(m).all(|s| self.is_frequent(s, th)))
            .map(|m| self.record(m))
            .collect();
        f.sort();
        f
    }

    /// Classes of itemsets sharing an f_bond closure, restricted to bond > 0.
    pub fn equivalence_classes(&self) -> Vec<EquivalenceClass> {
        let mut by_closure: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for mask in self.masks().filter(|&m| self.conj(m) > 0) {
            by_closure.entry(self.closure(mask)).or_default().push(mask);
        }
        let mut out: Vec<EquivalenceClass> = by_closure
            .into_iter()
            .map(|(closed, members)| {
                let minimals = members
                    .iter()
                    .filter(|&&m| !members.iter().any(|&o| o != m && o & m == o))
                    .map(|&m| self.itemset(m))
                    .collect();
                let mut member_sets: Vec<Itemset> =
                    members.iter().map(|&m| self.itemset(m)).collect();
                member_sets.sort_by(|a, b| crate::itemset::canonical_cmp(a, b));
                EquivalenceClass {
                    closed: self.itemset(closed),
                    minimals,
                    conj: self.conj(closed),
                    disj: self.disj(closed),
                    bond: self.bond(closed),
                    members: member_sets,
                }
            })
            .collect();
        out.sort_by(|a, b| crate::itemset::canonical_cmp(&a.closed, &b.closed));
        out
    }

    /// Graphviz rendering of the lattice, coloured by family membership.
    pub fn to_dot(&self, th: &Thresholds) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box, style=filled];\n");
        let fam = self.families(th);
        let holds = |set: &[PatternRecord], m: u32| {
            let it = self.itemset(m);
            set.iter().any(|r| r.itemset == it)
        };
        for m in self.masks() {
            let colour = if !self.is_correlated(m, th) {
                "white"
            } else if self.is_frequent(m, th) {
                "lightblue"
            } else if holds(&fam.mrcp, m) && holds(&fam.crcp, m) {
                "orange"
            } else if holds(&fam.mrcp, m) {
                "gold"
            } else if holds(&fam.crcp, m) {
                "salmon"
            } else {
                "lightpink"
            };
            let ids: Vec<String> = self.itemset(m).iter().map(|i| i.to_string()).collect();
            let _ = writeln!(
                out,
                "  n{m} [label=\"{}\\n{}/{}\", fillcolor={colour}];",
                ids.join(" "),
                self.conj(m),
                self.disj(m)
            );
        }
        for m in self.masks() {
            for k in 0..self.items.len() {
                let sub = m & !(1 << k);
                if sub != m && sub != 0 {
                    let _ = writeln!(out, "  n{sub} -> n{m};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn same_bond(c1: u32, d1: u32, c2: u32, d2: u32) -> bool {
    c1 as u64 * d2 as u64 == c2 as u64 * d1 as u64
}

/// One f_bond class: its closed pattern, minimal generators and shared values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub closed: Itemset,
    pub minimals: Vec<Itemset>,
    pub conj: u64,
    pub disj: u64,
    pub bond: Bond,
    pub members: Vec<Itemset>,
}

/// Every pattern family of one threshold pair, canonically sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Families {
    pub cp: Vec<PatternRecord>,
    pub fcp: Vec<PatternRecord>,
    pub rcp: Vec<PatternRecord>,
    pub ccp: Vec<PatternRecord>,
    pub mcp: Vec<PatternRecord>,
    pub crcp: Vec<PatternRecord>,
    pub mrcp: Vec<PatternRecord>,
    pub maxcp: Vec<PatternRecord>,
    pub minrp: Vec<PatternRecord>,
    pub maxcrcp: Vec<PatternRecord>,
    pub minmrcp: Vec<PatternRecord>,
    pub fccp: Vec<PatternRecord>,
    pub fmcp: Vec<PatternRecord>,
}

impl Families {
    fn sort(&mut self) {
        for v in [
            &mut self.cp,
            &mut self.fcp,
            &mut self.rcp,
            &mut self.ccp,
            &mut self.mcp,
            &mut self.crcp,
            &mut self.mrcp,
            &mut self.maxcp,
            &mut self.minrp,
            &mut self.maxcrcp,
            &mut self.minmrcp,
            &mut self.fccp,
            &mut self.fmcp,
        ] {
            crate::representations::sort_records(v);
        }
    }
}

pub fn enumerate_families(db: &TransactionDb, minsupp: u64, minbond: Bond) -> Result<Families> {
    let th = Thresholds::new(minsupp, minbond)?;
    Ok(Lattice::build(db)?.families(&th))
}

pub fn equivalence_classes(db: &TransactionDb) -> Result<Vec<EquivalenceClass>> {
    Ok(Lattice::build(db)?.equivalence_classes())
}

pub fn lattice_dot(db: &TransactionDb, minsupp: u64, minbond: Bond) -> Result<String> {
    let th = Thresholds::new(minsupp, minbond)?;
    Ok(Lattice::build(db)?.to_dot(&th))
}
