//! Finite permutation structures: `N` points carrying `n` linear orders.
//!
//! [`encode_orders`] turns an ordered Λ-ultrametric structure into such a
//! tuple of orders together with a codebook expressing every relation and
//! subquotient order as a union of orientation types; [`decode_relations`]
//! recovers the equivalence relations that are unions of orientation types.

mod cameron;
mod decode;
mod encode;

use std::collections::BTreeMap;

use rand::seq::index::sample;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seeded_rng;

pub use cameron::{cameron_enumeration, CameronEntry, CameronReport, LevelChoice};
pub use decode::{decode_relations, exhaustive_relations, DecodedRelation, DecodedRelations};
pub use encode::{codebook_mismatches, encode_orders, Codebook, CoverChoice, Encoding, MaskSet};

/// `orders[i][x]` is the rank (0-based) of point `x` in the `i`-th order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermStructure {
    orders: Vec<Vec<u32>>,
    points: usize,
}

impl PermStructure {
    /// Checks that every row is a permutation of `0..N`.
    pub fn new(orders: Vec<Vec<u32>>) -> Result<Self> {
        let points = orders.first().map_or(0, Vec::len);
        for (i, o) in orders.iter().enumerate() {
            if o.len() != points {
                return Err(Error::InvalidPerm(format!("order {i} has {} points, expected {points}", o.len())));
            }
            let mut seen = vec![false; points];
            for &r in o {
                if r as usize >= points || std::mem::replace(&mut seen[r as usize], true) {
                    return Err(Error::InvalidPerm(format!("order {i} is not a permutation of 0..{points}")));
                }
            }
        }
        if orders.len() > 32 {
            return Err(Error::InvalidPerm("at most 32 orders are supported".into()));
        }
        Ok(PermStructure { orders, points })
    }

    /// `N` points, every order the identity.
    pub fn identity(n: usize, points: usize) -> Self {
        PermStructure { orders: vec![(0..points as u32).collect(); n], points }
    }

    /// Number of orders.
    pub fn dimension(&self) -> usize {
        self.orders.len()
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    pub fn orders(&self) -> &[Vec<u32>] {
        &self.orders
    }

    pub fn rank(&self, order: usize, x: usize) -> u32 {
        self.orders[order][x]
    }

    /// Orientation of the ordered pair `(x, y)`: bit `i` is set iff `x <_i y`.
    #[inline]
    pub fn orientation(&self, x: usize, y: usize) -> u32 {
        self.orders.iter().enumerate().fold(0, |m, (i, o)| m | ((o[x] < o[y]) as u32) << i)
    }

    /// Mask with all `n` bits set; `orientation(y, x) == orientation(x, y) ^ full_mask()`.
    pub fn full_mask(&self) -> u32 {
        if self.orders.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.orders.len()) - 1
        }
    }

    /// The substructure on the given points, re-ranked.
    pub fn restrict(&self, points: &[usize]) -> PermStructure {
        let orders = self.orders.iter().map(|o| relative_pattern(points.iter().map(|&x| o[x]))).collect();
        PermStructure { orders, points: points.len() }
    }
}

/// Ranks of the values among themselves.
fn relative_pattern(values: impl Iterator<Item = u32>) -> Vec<u32> {
    let values: Vec<u32> = values.collect();
    let mut sorted = values.clone();
    sorted.sort_unstable();
    values.iter().map(|v| sorted.binary_search(v).expect("present") as u32).collect()
}

/// Largest `k` profiled over all ordered tuples; above it tuples are sampled.
pub const EXHAUSTIVE_PROFILE_K: usize = 4;
/// Tuples drawn per profile in sampled mode.
pub const PROFILE_SAMPLES: usize = 100_000;

/// Counts of labelled `k`-point patterns: for every ordered `k`-tuple of
/// distinct points, the relative order of the tuple in each linear order
/// (written `"021|210"`, one block per order).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub k: usize,
    pub sampled: bool,
    pub tuples: u64,
    pub counts: BTreeMap<String, u64>,
}

impl Profile {
    /// The patterns that occur, without multiplicities.
    pub fn support(&self) -> Vec<&str> {
        self.counts.keys().map(String::as_str).collect()
    }
}

fn pattern(p: &PermStructure, tuple: &[usize]) -> String {
    p.orders
        .iter()
        .map(|o| {
            relative_pattern(tuple.iter().map(|&x| o[x]))
                .iter()
                .map(|r| char::from_digit(*r, 36).unwrap_or('?'))
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("|")
}

/// Pattern counts over all ordered `k`-tuples (`k ≤ 4`), or over a fixed
/// seeded sample of tuples for larger `k`.
pub fn profile(p: &PermStructure, k: usize) -> Profile {
    let n = p.len();
    let mut out = Profile { k, sampled: false, tuples: 0, counts: BTreeMap::new() };
    if k > n {
        return out;
    }
    let add = |t: &[usize], out: &mut Profile| {
        *out.counts.entry(pattern(p, t)).or_insert(0) += 1;
        out.tuples += 1;
    };
    if k <= EXHAUSTIVE_PROFILE_K {
        let mut tuple = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, tuple: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if tuple.len() == k {
                f(tuple);
                return;
            }
            for x in 0..n {
                if !tuple.contains(&x) {
                    tuple.push(x);
                    rec(n, k, tuple, f);
                    tuple.pop();
                }
            }
        }
        rec(n, k, &mut tuple, &mut |t| add(t, &mut out));
    } else {
        out.sampled = true;
        let mut rng = seeded_rng(0);
        for _ in 0..PROFILE_SAMPLES {
            let t: Vec<usize> = sample(&mut rng, n, k).into_vec();
            add(&t, &mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_permutations() {
        assert!(PermStructure::new(vec![vec![0, 0]]).is_err());
        assert!(PermStructure::new(vec![vec![0, 1], vec![0]]).is_err());
        assert!(PermStructure::new(vec![vec![1, 0, 2]]).is_ok());
    }

    #[test]
    fn orientation_reversal_is_complement() {
        let p = PermStructure::new(vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                if x != y {
                    assert_eq!(p.orientation(x, y) ^ p.full_mask(), p.orientation(y, x));
                }
            }
        }
    }

    #[test]
    fn identity_has_two_pair_patterns() {
        let prof = profile(&PermStructure::identity(2, 10), 2);
        assert_eq!(prof.support(), vec!["01|01", "10|10"]);
        assert_eq!(prof.tuples, 90);
    }

    #[test]
    fn reversal_differs_from_identity() {
        let rev = PermStructure::new(vec![(0..6).collect(), (0..6).rev().collect()]).unwrap();
        let a = profile(&rev, 2);
        let b = profile(&PermStructure::identity(2, 6), 2);
        assert_ne!(a.support(), b.support());
    }

    #[test]
    fn sampled_profile_is_deterministic() {
        let p = PermStructure::new(vec![vec![3, 1, 4, 0, 5, 2]; 2]).unwrap();
        let a = profile(&p, 5);
        assert!(a.sampled);
        assert_eq!(a, profile(&p, 5));
    }
}
