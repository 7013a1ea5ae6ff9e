//! Exhaustive enumeration of small lattices, up to isomorphism.

use std::collections::BTreeMap;

use super::canon::CanonicalForm;
use super::{canonical_form, FiniteLattice, FinitePoset};
use crate::error::{Error, Result};

/// Largest `max_size` accepted by the enumerators.
pub const MAX_ENUMERATION_SIZE: usize = 8;

/// All down-closed subsets of a poset given by its principal down-sets
/// (`below[i]` contains `i`), sorted by size then mask.
pub(crate) fn downsets(below: &[u64]) -> Vec<u64> {
    let p = below.len();
    let mut out = vec![0u64];
    // grow down-sets one element at a time in a linear extension order
    let order = linear_extension(below);
    for &i in &order {
        let mut extra = Vec::new();
        for &d in &out {
            let strict = below[i] & !(1 << i);
            if d & strict == strict {
                extra.push(d | 1 << i);
            }
        }
        out.extend(extra);
    }
    debug_assert!(out.iter().all(|&d| (0..p).all(|i| d >> i & 1 == 0 || d & below[i] == below[i])));
    out.sort_by_key(|d| (d.count_ones(), *d));
    out
}

fn linear_extension(below: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..below.len()).collect();
    order.sort_by_key(|&i| below[i].count_ones());
    order
}

/// All naturally labelled posets on `size` points (`i < j` in the poset only
/// if `i < j` as integers), as principal down-set masks. Every poset appears
/// at least once up to isomorphism.
pub fn naturally_labeled_posets(size: usize) -> Vec<Vec<u64>> {
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for j in 0..size {
        let mut next = Vec::new();
        for below in &layer {
            for d in downsets(below) {
                let mut b = below.clone();
                b.push(d | 1 << j);
                next.push(b);
            }
        }
        layer = next;
    }
    layer
}

fn poset_from_masks(below: &[u64]) -> FinitePoset {
    let p = below.len();
    let leq = (0..p).map(|i| (0..p).map(|j| below[j] >> i & 1 == 1).collect()).collect();
    FinitePoset::from_matrix((0..p).map(|i| ((b'a' + i as u8) as char).to_string()).collect(), leq).expect("square")
}

fn check_size(max_size: usize) -> Result<()> {
    if max_size > MAX_ENUMERATION_SIZE {
        return Err(Error::SizeCap { requested: max_size, max: MAX_ENUMERATION_SIZE });
    }
    Ok(())
}

fn collect(found: BTreeMap<(usize, CanonicalForm), FiniteLattice>) -> Vec<FiniteLattice> {
    found.into_values().collect()
}

/// One representative of every isomorphism class of lattices with
/// `2..=max_size` elements, ordered by size then canonical form.
pub fn enumerate_lattices(max_size: usize) -> Result<Vec<FiniteLattice>> {
    check_size(max_size)?;
    let mut found = BTreeMap::new();
    for size in 2..=max_size {
        for inner in naturally_labeled_posets(size - 2) {
            // bottom, inner poset shifted by one, top
            let k = inner.len();
            let mut names = vec!["0".to_string()];
            names.extend((0..k).map(|i| format!("x{}", i + 1)));
            names.push("1".to_string());
            let mut leq = vec![vec![false; size]; size];
            for i in 0..size {
                leq[0][i] = true;
                leq[i][size - 1] = true;
            }
            for (j, &mask) in inner.iter().enumerate() {
                for i in 0..k {
                    if mask >> i & 1 == 1 {
                        leq[i + 1][j + 1] = true;
                    }
                }
            }
            let poset = FinitePoset::from_matrix(names, leq)?;
            if let Ok(lat) = FiniteLattice::from_poset(&poset) {
                found.entry((size, canonical_form(&lat))).or_insert(lat);
            }
        }
    }
    Ok(collect(found))
}

/// One representative of every isomorphism class of distributive lattices
/// with `2..=max_size` elements, built as down-set lattices of their posets
/// of join-irreducibles.
pub fn enumerate_distributive_lattices(max_size: usize) -> Result<Vec<FiniteLattice>> {
    check_size(max_size)?;
    let mut found = BTreeMap::new();
    // grow posets point by point, pruning once the down-set count is too big
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for below in &layer {
            let j = below.len();
            for d in downsets(below) {
                let mut b = below.clone();
                b.push(d | 1 << j);
                if downsets(&b).len() <= max_size {
                    let lat = FiniteLattice::of_downsets(&poset_from_masks(&b))?;
                    found.entry((lat.len(), canonical_form(&lat))).or_insert(lat);
                    next.push(b);
                }
            }
        }
        layer = next;
    }
    Ok(collect(found))
}
