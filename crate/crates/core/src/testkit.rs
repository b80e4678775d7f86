use proptest::prelude::*;

use crate::corpus::TransactionDb;
use crate::itemset::{Item, Itemset};

/// The five-transaction running example with A..E as ids 1..5.
pub fn toy() -> TransactionDb {
    TransactionDb::parse_str("1 3 4\n2 3 5\n1 2 3 5\n2 5\n1 2 3 5\n").unwrap()
}

/// Random dense-ish contexts with ids `1..=items`.
pub fn arb_db(max_items: usize, max_tx: usize) -> impl Strategy<Value = TransactionDb> {
    (1..=max_items, 1..=max_tx, 10u32..=90)
        .prop_flat_map(|(items, txs, density)| {
            proptest::collection::vec(
                proptest::collection::vec(0u32..100, items),
                txs,
            )
            .prop_map(move |cells| {
                let mut rows: Vec<Vec<Item>> = cells
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(_, &c)| c < density)
                            .map(|(i, _)| i as Item + 1)
                            .collect()
                    })
                    .collect();
                if rows.iter().all(|r| r.is_empty()) {
                    rows[0].push(1);
                }
                TransactionDb::from_transactions(rows).unwrap()
            })
        })
}

/// Every non-empty subset of `items` with at most `max_len` elements.
pub fn subsets_of(items: &[Item], max_len: usize) -> Vec<Itemset> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    (1u64..1 << sorted.len())
        .filter(|m| m.count_ones() as usize <= max_len)
        .map(|m| {
            sorted
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}
