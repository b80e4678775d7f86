//! Sorted-vector itemsets and the set operations the miners need.

use std::cmp::Ordering;

pub type Item = u32;

/// A strictly increasing list of item ids.
pub type Itemset = Vec<Item>;

/// Sorts and deduplicates arbitrary ids into an itemset.
pub fn normalize(items: impl IntoIterator<Item = Item>) -> Itemset {
    let mut v: Itemset = items.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn is_strictly_sorted(items: &[Item]) -> bool {
    items.windows(2).all(|w| w[0] < w[1])
}

/// `a ⊆ b` for sorted slices.
pub fn is_subset(a: &[Item], b: &[Item]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

pub fn is_proper_subset(a: &[Item], b: &[Item]) -> bool {
    a.len() < b.len() && is_subset(a, b)
}

/// `a \ b` for sorted slices.
pub fn difference(a: &[Item], b: &[Item]) -> Itemset {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

pub fn union(a: &[Item], b: &[Item]) -> Itemset {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// The itemset with position `index` removed.
pub fn without_index(items: &[Item], index: usize) -> Itemset {
    let mut out = Vec::with_capacity(items.len().saturating_sub(1));
    out.extend_from_slice(&items[..index]);
    out.extend_from_slice(&items[index + 1..]);
    out
}

/// Canonical order for output: by length, then lexicographically.
pub fn canonical_cmp(a: &[Item], b: &[Item]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Every itemset `X` with `lower ⊆ X ⊆ upper`, in canonical order.
pub fn interval(lower: &[Item], upper: &[Item]) -> Vec<Itemset> {
    let free = difference(upper, lower);
    assert!(free.len() < 64, "interval too wide to enumerate");
    let mut out: Vec<Itemset> = (0u64..1 << free.len())
        .map(|mask| {
            let extra = free
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &x)| x);
            normalize(lower.iter().copied().chain(extra))
        })
        .collect();
    out.sort_by(|a, b| canonical_cmp(a, b));
    out
}

/// Keeps only the ⊆-maximal itemsets of `sets`.
pub fn maximal_elements<'a>(sets: impl IntoIterator<Item = &'a Itemset> + Clone) -> Vec<Itemset> {
    let all: Vec<&Itemset> = sets.into_iter().collect();
    all.iter()
        .filter(|s| !all.iter().any(|t| is_proper_subset(s, t)))
        .map(|s| (*s).clone())
        .collect()
}

/// Keeps only the ⊆-minimal itemsets of `sets`.
pub fn minimal_elements<'a>(sets: impl IntoIterator<Item = &'a Itemset> + Clone) -> Vec<Itemset> {
    let all: Vec<&Itemset> = sets.into_iter().collect();
    all.iter()
        .filter(|s| !all.iter().any(|t| is_proper_subset(t, s)))
        .map(|s| (*s).clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_checks() {
        assert!(is_subset(&[], &[1, 2]));
        assert!(is_subset(&[1, 3], &[1, 2, 3]));
        assert!(!is_subset(&[1, 4], &[1, 2, 3]));
        assert!(is_proper_subset(&[2], &[2, 3]));
        assert!(!is_proper_subset(&[2, 3], &[2, 3]));
    }

    #[test]
    fn set_algebra() {
        assert_eq!(union(&[1, 3, 5], &[2, 3, 6]), vec![1, 2, 3, 5, 6]);
        assert_eq!(difference(&[1, 2, 3, 4], &[2, 4]), vec![1, 3]);
        assert_eq!(without_index(&[1, 2, 3], 1), vec![1, 3]);
        assert_eq!(normalize([3, 1, 3, 2]), vec![1, 2, 3]);
    }

    #[test]
    fn interval_enumerates_all_between() {
        let iv = interval(&[1], &[1, 2, 3]);
        assert_eq!(iv, vec![vec![1], vec![1, 2], vec![1, 3], vec![1, 2, 3]]);
        assert_eq!(interval(&[4], &[4]), vec![vec![4]]);
    }

    #[test]
    fn extremal_elements() {
        let sets = vec![vec![1], vec![1, 2], vec![3], vec![1, 2, 4]];
        assert_eq!(maximal_elements(&sets), vec![vec![3], vec![1, 2, 4]]);
        assert_eq!(minimal_elements(&sets), vec![vec![1], vec![3]]);
    }
}
