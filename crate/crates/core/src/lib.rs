//! Correlated pattern mining under the bond measure.
//!
//! The bond of an itemset is the ratio of its conjunctive support (transactions
//! containing every item) to its disjunctive support (transactions containing
//! at least one item). This crate mines frequent correlated and rare correlated
//! itemsets, builds their condensed representations, answers queries against
//! those representations, regenerates the full pattern sets from them and
//! derives generic association rules for an associative classifier.
//!
//! Module map:
//!
//! - [`corpus`]: transaction databases (FIMI input, bitsets, co-occurrence lists, discretizer)
//! - [`measures`]: supports, bond, inclusion-exclusion and the cross-support test
//! - [`oracle`]: brute-force lattice enumeration used as ground truth
//! - [`miner_gmjp`]: per-item level-wise miner with local/global minimal and closed filtering
//! - [`miner_opt`]: support-ordered depth-first miner
//! - [`representations`]: RCPR, MMaxCR, MinMCR, MinMMaxCR and RFCCP, queries and regeneration
//! - [`rules`]: generic association rules and the associative classifier

pub mod bitset;
pub mod config;
pub mod corpus;
mod error;
pub mod itemset;
pub mod measures;
pub mod miner_gmjp;
pub mod miner_opt;
pub mod oracle;
pub mod representations;
pub mod rules;

pub use config::{MinSupport, MiningConfig, Scenario, Thresholds};
pub use corpus::TransactionDb;
pub use error::{Error, Result};
pub use itemset::{Item, Itemset};
pub use measures::{Bond, PatternRecord};
pub use representations::{CondensedRepresentation, RepresentationKind};

#[cfg(test)]
pub(crate) mod testkit;
