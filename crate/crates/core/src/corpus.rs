//! Transaction databases: FIMI parsing, bitset codification and the
//! z-score discretizer for continuous matrices.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::itemset::{Item, Itemset};

/// A codified extraction context.
///
/// Items get dense internal indices in order of first appearance; every public
/// operation that takes or returns itemsets uses the original ids.
#[derive(Clone, Debug)]
pub struct TransactionDb {
    transaction_count: usize,
    presence: Vec<BitSet>,
    co_occurrence: Vec<Vec<u32>>,
    original_ids: Vec<Item>,
    index: HashMap<Item, u32>,
    item_names: Option<Vec<String>>,
}

impl TransactionDb {
    /// Builds a database from transactions of original item ids. Duplicates
    /// within a transaction collapse and empty transactions are skipped.
    pub fn from_transactions<T, I>(transactions: T) -> Result<Self>
    where
        T: IntoIterator<Item = I>,
        I: IntoIterator<Item = Item>,
    {
        let mut index: HashMap<Item, u32> = HashMap::new();
        let mut original_ids = Vec::new();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for tx in transactions {
            let mut row: Vec<u32> = tx
                .into_iter()
                .map(|id| {
                    *index.entry(id).or_insert_with(|| {
                        original_ids.push(id);
                        (original_ids.len() - 1) as u32
                    })
                })
                .collect();
            row.sort_unstable();
            row.dedup();
            if !row.is_empty() {
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return Err(Error::EmptyDatabase);
        }

        let n = rows.len();
        let mut presence = vec![BitSet::new(n); original_ids.len()];
        for (t, row) in rows.iter().enumerate() {
            for &i in row {
                presence[i as usize].insert(t);
            }
        }

        // Second scan: pairs sharing a transaction.
        let m = original_ids.len();
        let mut seen = vec![BitSet::new(m); m];
        for row in &rows {
            for &a in row {
                for &b in row {
                    if a != b {
                        seen[a as usize].insert(b as usize);
                    }
                }
            }
        }
        let co_occurrence = seen
            .iter()
            .map(|s| s.ones().map(|j| j as u32).collect())
            .collect();

        Ok(TransactionDb {
            transaction_count: n,
            presence,
            co_occurrence,
            original_ids,
            index,
            item_names: None,
        })
    }

    /// Parses FIMI text: one transaction per line, whitespace-separated ids.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|source| Error::Io {
                path: "<input>".into(),
                source,
            })?;
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<Item>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        token: tok.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_transactions(rows)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        Self::from_reader(text.as_bytes())
    }

    pub fn load_fimi(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(file).map_err(|e| match e {
            Error::Io { source, .. } => Error::Io {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }

    /// Writes the database back as FIMI lines of original ids.
    pub fn write_fimi<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for tx in self.transactions() {
            let line: Vec<String> = tx.iter().map(|id| id.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    /// Transactions as sorted original-id itemsets.
    pub fn transactions(&self) -> Vec<Itemset> {
        let mut rows = vec![Vec::new(); self.transaction_count];
        for (i, bits) in self.presence.iter().enumerate() {
            for t in bits.ones() {
                rows[t].push(self.original_ids[i]);
            }
        }
        for row in rows.iter_mut() {
            row.sort_unstable();
        }
        rows
    }

    pub fn item_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn transaction_count(&self) -> usize {
        self.transaction_count
    }

    /// Presence bitset of the item with dense index `dense`.
    pub fn presence(&self, dense: u32) -> &BitSet {
        &self.presence[dense as usize]
    }

    /// Dense indices of items sharing at least one transaction with `dense`.
    pub fn co_occurrence(&self, dense: u32) -> &[u32] {
        &self.co_occurrence[dense as usize]
    }

    pub fn support_of(&self, dense: u32) -> u64 {
        self.presence[dense as usize].count()
    }

    pub fn original_id(&self, dense: u32) -> Item {
        self.original_ids[dense as usize]
    }

    pub fn original_ids(&self) -> &[Item] {
        &self.original_ids
    }

    pub fn dense_id(&self, original: Item) -> Option<u32> {
        self.index.get(&original).copied()
    }

    /// Maps original ids to dense indices, failing on unknown ids.
    pub fn to_dense(&self, items: &[Item]) -> Result<Vec<u32>> {
        items
            .iter()
            .map(|&id| self.dense_id(id).ok_or(Error::UnknownItem(id)))
            .collect()
    }

    /// Maps dense indices back to a sorted original-id itemset.
    pub fn to_original(&self, dense: &[u32]) -> Itemset {
        let mut out: Itemset = dense.iter().map(|&d| self.original_id(d)).collect();
        out.sort_unstable();
        out
    }

    pub fn item_names(&self) -> Option<&[String]> {
        self.item_names.as_deref()
    }

    pub fn with_item_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.item_count());
        self.item_names = Some(names);
        self
    }
}

/// Cutoffs for z-score discretization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscretizationConfig {
    pub over_cutoff: f64,
    pub under_cutoff: f64,
    /// Id shift for under-expressed cells; defaults to the column count.
    pub item_offset: Option<u32>,
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        DiscretizationConfig {
            over_cutoff: 1.96,
            under_cutoff: -1.96,
            item_offset: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Discretized {
    pub db: TransactionDb,
    /// Rows with no expressed cell.
    pub dropped_rows: usize,
    /// Columns with zero variance.
    pub skipped_columns: Vec<usize>,
}

/// Turns a real matrix into transactions: column `j` contributes item `j`
/// when its z-score is at least `over_cutoff`, and item `j + M` when it is at
/// most `under_cutoff`. Standard deviation is the population one.
pub fn discretize(matrix: &[Vec<f64>], config: &DiscretizationConfig) -> Result<Discretized> {
    if config.under_cutoff >= config.over_cutoff {
        return Err(Error::InvalidConfig(format!(
            "under cutoff {} must be below over cutoff {}",
            config.under_cutoff, config.over_cutoff
        )));
    }
    let Some(first) = matrix.first() else {
        return Err(Error::EmptyDatabase);
    };
    let cols = first.len();
    for (r, row) in matrix.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::RaggedRow {
                row: r,
                expected: cols,
                found: row.len(),
            });
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: r, column: c });
        }
    }
    let offset = config.item_offset.unwrap_or(cols as u32);
    let n = matrix.len() as f64;

    let mut stats = Vec::with_capacity(cols);
    let mut skipped_columns = Vec::new();
    for c in 0..cols {
        let mean = matrix.iter().map(|row| row[c]).sum::<f64>() / n;
        let var = matrix.iter().map(|row| (row[c] - mean).powi(2)).sum::<f64>() / n;
        if var > 0.0 {
            stats.push(Some((mean, var.sqrt())));
        } else {
            log::warn!("column {c} has zero variance, skipped");
            skipped_columns.push(c);
            stats.push(None);
        }
    }

    let mut rows = Vec::new();
    let mut dropped_rows = 0;
    for row in matrix {
        let mut tx = Vec::new();
        for (c, (&v, stat)) in row.iter().zip(&stats).enumerate() {
            let Some((mean, sd)) = *stat else { continue };
            let z = (v - mean) / sd;
            if z >= config.over_cutoff {
                tx.push(c as u32);
            } else if z <= config.under_cutoff {
                tx.push(c as u32 + offset);
            }
        }
        if tx.is_empty() {
            dropped_rows += 1;
        } else {
            rows.push(tx);
        }
    }
    if dropped_rows > 0 {
        log::warn!("{dropped_rows} rows had no expressed cell and were dropped");
    }
    Ok(Discretized {
        db: TransactionDb::from_transactions(rows)?,
        dropped_rows,
        skipped_columns,
    })
}

/// Reads a CSV of reals, optionally skipping a header row.
pub fn read_matrix_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path.as_ref())
        .map_err(|e| Error::Csv(e.to_string()))?;
    let mut out = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        let row = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Csv(format!("row {r}, column {c}: not a number: {field:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(row);
    }
    Ok(out)
}
