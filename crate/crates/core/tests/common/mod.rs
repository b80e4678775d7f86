#![allow(dead_code)]

use bondminer_core::{Bond, Item, PatternRecord, Thresholds, TransactionDb};
use num_rational::Ratio;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const TOY: &str = "1 3 4\n2 3 5\n1 2 3 5\n2 5\n1 2 3 5\n";

pub fn toy() -> TransactionDb {
    TransactionDb::parse_str(TOY).unwrap()
}

pub fn toy_thresholds() -> Thresholds {
    Thresholds::new(4, Ratio::new(1, 5)).unwrap()
}

/// Letter itemset such as "ABE" to item ids, A = 1.
pub fn ids(letters: &str) -> Vec<Item> {
    letters.bytes().map(|b| (b - b'A' + 1) as Item).collect()
}

pub fn rec(letters: &str, conj: u64, disj: u64) -> PatternRecord {
    PatternRecord::new(ids(letters), conj, disj)
}

pub fn sorted(mut v: Vec<PatternRecord>) -> Vec<PatternRecord> {
    bondminer_core::representations::sort_records(&mut v);
    v
}

/// Random context over items 1..=n with a per-context density.
pub fn random_db(rng: &mut ChaCha8Rng, max_items: usize, max_tx: usize) -> TransactionDb {
    loop {
        let n = rng.gen_range(1..=max_items);
        let t = rng.gen_range(1..=max_tx);
        let density: f64 = rng.gen_range(0.1..=0.9);
        let rows: Vec<Vec<Item>> = (0..t)
            .map(|_| (1..=n as Item).filter(|_| rng.gen_bool(density)).collect())
            .collect();
        if let Ok(db) = TransactionDb::from_transactions(rows) {
            return db;
        }
    }
}

pub fn random_thresholds(rng: &mut ChaCha8Rng, db: &TransactionDb) -> Thresholds {
    let t = db.transaction_count() as u64;
    let minsupp = rng.gen_range(1..=t);
    let den = rng.gen_range(1..=10u64);
    let num = rng.gen_range(1..=den);
    Thresholds::new(minsupp, Bond::new(num, den)).unwrap()
}
