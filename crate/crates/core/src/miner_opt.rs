//! Support-ordered depth-first miner.
//!
//! Items are ranked by ascending support and the search tree is walked depth
//! first, each node extending its parent with a later-ranked item. A node that
//! is not correlated, or has no common transaction, takes its whole subtree
//! with it. Frequent correlated nodes stay in the tree in the rare scenarios
//! because they can have rare supersets.

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::config::{MiningConfig, Scenario, Thresholds};
use crate::corpus::TransactionDb;
use crate::error::{Error, Result};
use crate::measures::{meets_minbond, PatternRecord};
use crate::representations::{rcpr_from_rcp, rfccp_from_fcp, MiningOutput};

/// One node of the search tree.
#[derive(Clone, Debug)]
pub struct SearchNode {
    /// Internal item indices, in rank order.
    pub itemset: Vec<u32>,
    pub cover: BitSet,
    pub conj: u64,
    pub disj: u64,
}

/// Internal item indices sorted by ascending support, ties by original id.
pub fn support_order(db: &TransactionDb) -> Vec<u32> {
    let mut order: Vec<u32> = (0..db.item_count() as u32)
        .filter(|&d| db.support_of(d) > 0)
        .collect();
    order.sort_by_key(|&d| (db.support_of(d), db.original_id(d)));
    order
}

struct Walk<'a> {
    db: &'a TransactionDb,
    th: Thresholds,
    frequent_side: bool,
    out: Vec<PatternRecord>,
}

impl Walk<'_> {
    fn emit(&mut self, node: &SearchNode) {
        if (node.conj >= self.th.minsupp) == self.frequent_side {
            self.out.push(PatternRecord::new(
                self.db.to_original(&node.itemset),
                node.conj,
                node.disj,
            ));
        }
    }

    fn extendable(&self, node: &SearchNode) -> bool {
        !self.frequent_side || node.conj >= self.th.minsupp
    }

    /// Visits `node`, whose surviving right siblings are `tail`.
    fn visit(&mut self, node: &SearchNode, tail: &[u32]) {
        self.emit(node);
        if !self.extendable(node) {
            return;
        }
        let mut children = Vec::new();
        for &j in tail {
            let cover = node.cover.and(self.db.presence(j));
            let conj = cover.count();
            if conj == 0 {
                continue;
            }
            let mut itemset = node.itemset.clone();
            itemset.push(j);
            let (_, or) = crate::measures::and_or(self.db, &itemset);
            let disj = or.count();
            if !meets_minbond(conj, disj, self.th.minbond) {
                continue;
            }
            children.push(SearchNode {
                itemset,
                cover,
                conj,
                disj,
            });
        }
        let ranks: Vec<u32> = children.iter().map(|c| *c.itemset.last().unwrap()).collect();
        for (k, child) in children.iter().enumerate() {
            self.visit(child, &ranks[k + 1..]);
        }
    }
}

fn walk_root(db: &TransactionDb, th: &Thresholds, frequent_side: bool, order: &[u32], k: usize) -> Vec<PatternRecord> {
    let i = order[k];
    let root = SearchNode {
        itemset: vec![i],
        cover: db.presence(i).clone(),
        conj: db.support_of(i),
        disj: db.support_of(i),
    };
    let mut walk = Walk {
        db,
        th: *th,
        frequent_side,
        out: Vec::new(),
    };
    walk.visit(&root, &order[k + 1..]);
    walk.out
}

/// Frequent correlated (`frequent_side`) or rare correlated patterns.
pub fn mine_patterns(db: &TransactionDb, th: &Thresholds, frequent_side: bool, workers: usize) -> Result<Vec<PatternRecord>> {
    if workers == 0 {
        return Err(Error::InvalidConfig("worker count must be at least 1".into()));
    }
    let order = support_order(db);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let parts: Vec<Vec<PatternRecord>> = pool.install(|| {
        (0..order.len())
            .into_par_iter()
            .map(|k| walk_root(db, th, frequent_side, &order, k))
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

pub fn mine_opt(db: &TransactionDb, config: &MiningConfig, workers: usize) -> Result<MiningOutput> {
    let th = config.resolve(db.transaction_count() as u64)?;
    mine_opt_with(db, &th, config.scenario, workers)
}

pub fn mine_opt_with(db: &TransactionDb, th: &Thresholds, scenario: Scenario, workers: usize) -> Result<MiningOutput> {
    let t = db.transaction_count() as u64;
    let records = mine_patterns(db, th, scenario.is_frequent(), workers)?;
    Ok(match scenario {
        Scenario::Fcp | Scenario::Rcp => MiningOutput::patterns(scenario, records, t, *th),
        Scenario::Rfccp => MiningOutput::Representation(rfccp_from_fcp(&records, t, *th)),
        Scenario::Rcpr => MiningOutput::Representation(rcpr_from_rcp(&records, t, *th)),
    })
}
