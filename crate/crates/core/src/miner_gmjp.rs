//! Per-item level-wise miner.
//!
//! Item `i` owns every itemset whose smallest internal index is `i`. Its
//! subproblem grows candidates from the items co-occurring with `i`, prunes by
//! cross-support and by the order ideal of correlated patterns, and spots
//! minimal and closed patterns by comparing `(conj, disj)` keys with immediate
//! subsets and supersets. Patterns whose witness lies outside the subproblem
//! are settled by the global filter once all subproblems are merged.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::config::{MiningConfig, Scenario, Thresholds};
use crate::corpus::TransactionDb;
use crate::error::{Error, Result};
use crate::itemset::without_index;
use crate::measures::{meets_minbond, support_ratio_below, PatternRecord};
use crate::representations::MiningOutput;

pub type Key = (u64, u64);

/// Itemsets of one size, indexed by their `(conj, disj)` pair.
#[derive(Clone, Debug, Default)]
pub struct LevelStore {
    map: HashMap<Key, HashSet<Vec<u32>>>,
}

impl LevelStore {
    pub fn insert(&mut self, key: Key, itemset: Vec<u32>) {
        self.map.entry(key).or_default().insert(itemset);
    }

    pub fn contains(&self, key: Key, itemset: &[u32]) -> bool {
        self.map.get(&key).is_some_and(|s| s.contains(itemset))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Key, &Vec<u32>)> {
        self.map
            .iter()
            .flat_map(|(&k, set)| set.iter().map(move |s| (k, s)))
    }

    pub fn len(&self) -> usize {
        self.map.values().map(HashSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// A pattern in internal indices with its support pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Local {
    pub items: Vec<u32>,
    pub key: Key,
}

struct Node {
    items: Vec<u32>,
    and: BitSet,
    or: BitSet,
    min_supp: u64,
    max_supp: u64,
}

/// What one subproblem hands back to the merge step.
#[derive(Debug, Default)]
pub struct SubproblemResult {
    pub patterns: Vec<Local>,
    pub local_minimals: Vec<Local>,
    pub local_closeds: Vec<Local>,
}

/// Candidates of size `n` that have no in-scope immediate subset with an equal
/// key. Position 0 holds the subproblem item and is never dropped; at size 2
/// the other singleton is checked too, since its key is just its support.
pub fn find_local_minimal(db: &TransactionDb, level: &[Local], previous: &LevelStore) -> Vec<Local> {
    level
        .iter()
        .filter(|c| {
            if c.items.len() == 1 {
                return true;
            }
            if c.items.len() == 2 {
                let s = db.support_of(c.items[1]);
                if c.key == (s, s) {
                    return false;
                }
            }
            (1..c.items.len()).all(|p| !previous.contains(c.key, &without_index(&c.items, p)))
        })
        .cloned()
        .collect()
}

/// Size `n - 1` patterns with no immediate superset of equal key at size `n`.
pub fn find_local_closed(previous: &LevelStore, current: &LevelStore) -> Vec<Local> {
    let mut covered: HashSet<&[u32]> = HashSet::new();
    for (key, sup) in current.iter() {
        for p in 1..sup.len() {
            let sub = without_index(sup, p);
            if let Some(set) = previous.map.get(&key) {
                if let Some(hit) = set.get(&sub) {
                    covered.insert(hit.as_slice());
                }
            }
        }
    }
    previous
        .iter()
        .filter(|(_, s)| !covered.contains(s.as_slice()))
        .map(|(key, s)| Local {
            items: s.clone(),
            key,
        })
        .collect()
}

/// Drops local minimals with an equal-key immediate subset among all local
/// minimals, and local closeds with an equal-key immediate superset among all
/// local closeds. Inputs use sorted internal indices.
pub fn global_filter(local_minimals: Vec<Local>, local_closeds: Vec<Local>) -> (Vec<Local>, Vec<Local>) {
    let minimal_keys: HashMap<Vec<u32>, Key> = local_minimals
        .into_iter()
        .map(|l| (sorted(l.items), l.key))
        .collect();
    let minimals = minimal_keys
        .iter()
        .filter(|(items, &key)| {
            items.len() == 1
                || (0..items.len()).all(|p| minimal_keys.get(&without_index(items, p)) != Some(&key))
        })
        .map(|(items, &key)| Local {
            items: items.clone(),
            key,
        })
        .collect();

    let closed_keys: HashMap<Vec<u32>, Key> = local_closeds
        .into_iter()
        .map(|l| (sorted(l.items), l.key))
        .collect();
    let mut dominated: HashSet<Vec<u32>> = HashSet::new();
    for (items, &key) in &closed_keys {
        if items.len() < 2 {
            continue;
        }
        for p in 0..items.len() {
            let sub = without_index(items, p);
            if closed_keys.get(&sub) == Some(&key) {
                dominated.insert(sub);
            }
        }
    }
    let closeds = closed_keys
        .into_iter()
        .filter(|(items, _)| !dominated.contains(items))
        .map(|(items, key)| Local { items, key })
        .collect();
    (minimals, closeds)
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

/// Runs the subproblem owned by internal item `i`.
pub fn mine_subproblem(db: &TransactionDb, i: u32, th: &Thresholds, scenario: Scenario) -> SubproblemResult {
    let frequent_side = scenario.is_frequent();
    let wants_reps = matches!(scenario, Scenario::Rfccp | Scenario::Rcpr);
    let satisfies = |conj: u64| (conj >= th.minsupp) == frequent_side;
    let extendable = |conj: u64| !frequent_side || conj >= th.minsupp;

    let mut out = SubproblemResult::default();
    let s_i = db.support_of(i);
    if s_i == 0 {
        return out;
    }

    let root = Node {
        items: vec![i],
        and: db.presence(i).clone(),
        or: db.presence(i).clone(),
        min_supp: s_i,
        max_supp: s_i,
    };
    let mut previous = LevelStore::default();
    if satisfies(s_i) {
        let l = Local {
            items: vec![i],
            key: (s_i, s_i),
        };
        previous.insert(l.key, l.items.clone());
        out.patterns.push(l.clone());
        if wants_reps {
            out.local_minimals.push(l);
        }
    }
    if !extendable(s_i) {
        if wants_reps {
            out.local_closeds.extend(find_local_closed(&previous, &LevelStore::default()));
        }
        return out;
    }

    let partners: Vec<u32> = db.co_occurrence(i).iter().copied().filter(|&j| j > i).collect();
    let mut frontier: Vec<Node> = vec![root];
    let mut n = 1;
    loop {
        n += 1;
        let retained: HashSet<&[u32]> = frontier.iter().map(|f| f.items.as_slice()).collect();
        let mut next: Vec<Node> = Vec::new();
        let mut level: Vec<Local> = Vec::new();
        let mut current = LevelStore::default();

        let mut consider = |base: &Node, j: u32| {
            let s_j = db.support_of(j);
            let (lo, hi) = (base.min_supp.min(s_j), base.max_supp.max(s_j));
            if support_ratio_below(lo, hi, th.minbond) {
                return;
            }
            let mut items = base.items.clone();
            items.push(j);
            if n >= 3 {
                // Subsets missing items[n-1] or items[n-2] are the join parents.
                let ideal = (1..n - 2).all(|p| retained.contains(without_index(&items, p).as_slice()));
                if !ideal {
                    return;
                }
            }
            let conj = base.and.and_count(db.presence(j));
            if conj == 0 {
                return;
            }
            let mut or = base.or.clone();
            or.or_assign(db.presence(j));
            let disj = or.count();
            if !meets_minbond(conj, disj, th.minbond) {
                return;
            }
            if satisfies(conj) {
                current.insert((conj, disj), items.clone());
                level.push(Local {
                    items: items.clone(),
                    key: (conj, disj),
                });
            }
            if extendable(conj) {
                next.push(Node {
                    items,
                    and: base.and.and(db.presence(j)),
                    or,
                    min_supp: lo,
                    max_supp: hi,
                });
            }
        };

        if n == 2 {
            for &j in &partners {
                consider(&frontier[0], j);
            }
        } else {
            for (a, left) in frontier.iter().enumerate() {
                for right in &frontier[a + 1..] {
                    if left.items[..n - 2] != right.items[..n - 2] {
                        break;
                    }
                    consider(left, right.items[n - 2]);
                }
            }
        }

        if wants_reps {
            out.local_minimals.extend(find_local_minimal(db, &level, &previous));
            out.local_closeds.extend(find_local_closed(&previous, &current));
        }
        out.patterns.extend(level);
        next.sort_by(|a, b| a.items.cmp(&b.items));
        frontier = next;
        previous = current;
        if frontier.is_empty() {
            if wants_reps {
                out.local_closeds.extend(find_local_closed(&previous, &LevelStore::default()));
            }
            return out;
        }
    }
}

/// Mines `db` for the scenario of `config` on `workers` threads.
pub fn mine(db: &TransactionDb, config: &MiningConfig, workers: usize) -> Result<MiningOutput> {
    let th = config.resolve(db.transaction_count() as u64)?;
    mine_with(db, &th, config.scenario, workers)
}

pub fn mine_with(db: &TransactionDb, th: &Thresholds, scenario: Scenario, workers: usize) -> Result<MiningOutput> {
    if workers == 0 {
        return Err(Error::InvalidConfig("worker count must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let results: Vec<SubproblemResult> = pool.install(|| {
        (0..db.item_count() as u32)
            .into_par_iter()
            .map(|i| mine_subproblem(db, i, th, scenario))
            .collect()
    });

    let to_records = |locals: Vec<Local>| -> Vec<PatternRecord> {
        locals
            .into_iter()
            .map(|l| PatternRecord::new(db.to_original(&l.items), l.key.0, l.key.1))
            .collect()
    };
    let t = db.transaction_count() as u64;
    match scenario {
        Scenario::Fcp | Scenario::Rcp => {
            let all = results.into_iter().flat_map(|r| r.patterns).collect();
            Ok(MiningOutput::patterns(scenario, to_records(all), t, *th))
        }
        Scenario::Rfccp | Scenario::Rcpr => {
            let mut minimals = Vec::new();
            let mut closeds = Vec::new();
            for r in results {
                minimals.extend(r.local_minimals);
                closeds.extend(r.local_closeds);
            }
            let (minimals, closeds) = global_filter(minimals, closeds);
            Ok(MiningOutput::condensed(
                scenario,
                to_records(minimals),
                to_records(closeds),
                t,
                *th,
            ))
        }
    }
}
