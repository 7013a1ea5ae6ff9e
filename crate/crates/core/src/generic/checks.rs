//! Saturation and homogeneity diagnostics for finite structures.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{count_one_point_types, enumerate_one_point_types, type_of, OnePointType};
use crate::sqorder::OrderedLambdaStructure;
use crate::ultrametric::{LambdaSpace, PointId};

/// Cap on listed missing types and failure examples.
pub const REPORT_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MissingType {
    pub over: Vec<PointId>,
    pub distances: Vec<String>,
    pub positions: Vec<Option<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub k: usize,
    pub subsets: u64,
    pub total_types: u64,
    pub realized_types: u64,
    /// `realized_types / total_types` (1 when there is nothing to realize).
    pub ratio: f64,
    /// The first few unrealized types, in subset order.
    pub missing: Vec<MissingType>,
}

impl ExtensionReport {
    pub fn saturated(&self) -> bool {
        self.realized_types == self.total_types
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..k.min(n) {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&l: &usize| l + 1);
            for x in start..n {
                let mut t: Vec<usize> = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn describe(s: &OrderedLambdaStructure, t: &OnePointType) -> MissingType {
    let lat = s.space.lattice();
    MissingType {
        over: t.over.iter().map(|&a| s.space.points()[a]).collect(),
        distances: t.distances.iter().map(|&d| lat.name(d).to_string()).collect(),
        positions: t.positions.clone(),
    }
}

/// For every subset `A` with `|A| ≤ k` and every consistent one-point type
/// over `A`, whether some point outside `A` realizes it.
pub fn extension_property_check(s: &OrderedLambdaStructure, k: usize) -> ExtensionReport {
    let n = s.len();
    let all = subsets(n, k);
    let per_subset: Vec<(u64, u64, Vec<MissingType>)> = all
        .par_iter()
        .map(|over| {
            let total = count_one_point_types(s, over).expect("valid subset");
            let realized: HashSet<OnePointType> =
                (0..n).filter(|x| over.binary_search(x).is_err()).map(|x| type_of(s, over, x)).collect();
            let got = realized.len() as u64;
            let mut missing = Vec::new();
            if got < total {
                for t in enumerate_one_point_types(s, over).expect("valid subset") {
                    if missing.len() == REPORT_CAP {
                        break;
                    }
                    if !realized.contains(&t) {
                        missing.push(describe(s, &t));
                    }
                }
            }
            (total, got, missing)
        })
        .collect();
    let mut report = ExtensionReport {
        k,
        subsets: all.len() as u64,
        total_types: 0,
        realized_types: 0,
        ratio: 1.0,
        missing: Vec::new(),
    };
    for (total, got, missing) in per_subset {
        report.total_types += total;
        report.realized_types += got;
        let room = REPORT_CAP - report.missing.len();
        report.missing.extend(missing.into_iter().take(room));
    }
    if report.total_types > 0 {
        report.ratio = report.realized_types as f64 / report.total_types as f64;
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityFailure {
    /// Tuple whose extension by `witness` has no counterpart over `to`.
    pub from: Vec<PointId>,
    pub to: Vec<PointId>,
    pub witness: PointId,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomogeneityReport {
    pub m: usize,
    /// Ordered tuples of distinct points examined.
    pub tuples: u64,
    /// Pairs of tuples with the same quantifier-free type.
    pub isomorphic_pairs: u64,
    /// Triples `(ā, b̄, c)` where `ā ↦ b̄` is an isomorphism and no point
    /// extends it to `c`.
    pub failures: u64,
    pub examples: Vec<HomogeneityFailure>,
}

/// Bits per point in a packed tuple description: the distance index (6 bits)
/// plus 2 bits per order.
fn bits_per_entry(orders: usize) -> usize {
    6 + 2 * orders
}

/// 0: incomparable, 1: same class, 2: `i < j`, 3: `i > j`.
#[inline]
fn comparison(s: &OrderedLambdaStructure, o: usize, i: usize, j: usize) -> u128 {
    let (a, b) = (s.orders[o].key(i), s.orders[o].key(j));
    if a.scale != b.scale {
        0
    } else if a.rank == b.rank {
        1
    } else if a.rank < b.rank {
        2
    } else {
        3
    }
}

#[inline]
fn pair_code(s: &OrderedLambdaStructure, i: usize, j: usize) -> u128 {
    let mut code = s.space.dist(i, j).0 as u128;
    for o in 0..s.orders.len() {
        code = code << 2 | comparison(s, o, i, j);
    }
    code
}

/// Quantifier-free type of an ordered tuple.
fn tuple_code(s: &OrderedLambdaStructure, t: &[usize]) -> u128 {
    let width = bits_per_entry(s.orders.len());
    let mut code = 0u128;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            code = code << width | pair_code(s, t[i], t[j]);
        }
    }
    code
}

/// Type of `c` over an ordered tuple.
fn extension_code(s: &OrderedLambdaStructure, t: &[usize], c: usize) -> u128 {
    let width = bits_per_entry(s.orders.len());
    t.iter().fold(0u128, |code, &a| code << width | pair_code(s, c, a))
}

fn ordered_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for t in &out {
            for x in 0..n {
                if !t.contains(&x) {
                    let mut u = t.clone();
                    u.push(x);
                    next.push(u);
                }
            }
        }
        out = next;
    }
    out
}

/// Per extension type over a tuple: how many points have it, and the first.
type ExtensionCounts = BTreeMap<u128, (u64, usize)>;

/// One-point back-and-forth test: for every pair of isomorphic ordered tuples
/// `ā`, `b̄` of size `1..=m` and every point `c` outside `ā`, whether some
/// point `d` makes `ā c ↦ b̄ d` an isomorphism.
///
/// # Panics
/// If the tuple description does not fit in 128 bits (more than about 16
/// orders at `m = 3`).
pub fn homogeneity_check(s: &OrderedLambdaStructure, m: usize) -> HomogeneityReport {
    let n = s.len();
    let width = bits_per_entry(s.orders.len());
    assert!(m * width <= 128 && m * m.saturating_sub(1) / 2 * width <= 128, "too many orders for packed tuple types");
    let mut report = HomogeneityReport { m, tuples: 0, isomorphic_pairs: 0, failures: 0, examples: Vec::new() };
    for r in 1..=m.min(n) {
        let tuples = ordered_tuples(n, r);
        // per tuple: its type and, per extension type, (count, first witness)
        let described: Vec<(u128, ExtensionCounts)> = tuples
            .par_iter()
            .map(|t| {
                let mut ext: BTreeMap<u128, (u64, usize)> = BTreeMap::new();
                for c in (0..n).filter(|c| !t.contains(c)) {
                    let e = ext.entry(extension_code(s, t, c)).or_insert((0, c));
                    e.0 += 1;
                }
                (tuple_code(s, t), ext)
            })
            .collect();
        let mut groups: BTreeMap<u128, Vec<usize>> = BTreeMap::new();
        for (i, (code, _)) in described.iter().enumerate() {
            groups.entry(*code).or_default().push(i);
        }
        report.tuples += tuples.len() as u64;
        for members in groups.values() {
            let g = members.len() as u64;
            report.isomorphic_pairs += g * g;
            // extension type -> (total count over the group, tuples having it)
            let mut totals: BTreeMap<u128, (u64, u64)> = BTreeMap::new();
            for &i in members {
                for (&e, &(count, _)) in &described[i].1 {
                    let t = totals.entry(e).or_insert((0, 0));
                    t.0 += count;
                    t.1 += 1;
                }
            }
            for (&e, &(count, having)) in &totals {
                if having == g {
                    continue;
                }
                report.failures += count * (g - having);
                if report.examples.len() < REPORT_CAP {
                    let from = *members.iter().find(|&&i| described[i].1.contains_key(&e)).expect("some tuple has it");
                    let to = *members.iter().find(|&&i| !described[i].1.contains_key(&e)).expect("some tuple lacks it");
                    let id = |i: usize| s.space.points()[i];
                    report.examples.push(HomogeneityFailure {
                        from: tuples[from].iter().map(|&i| id(i)).collect(),
                        to: tuples[to].iter().map(|&i| id(i)).collect(),
                        witness: id(described[from].1[&e].1),
                    });
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    /// Pairs of distinct lattice elements whose relations coincide.
    pub equal: Vec<(String, String)>,
    /// Pairs whose relations' intersection differs from the relation of
    /// their meet.
    pub meet_mismatches: Vec<(String, String)>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.equal.is_empty() && self.meet_mismatches.is_empty()
    }
}

/// Whether the relations `E_λ` of the space are pairwise distinct and
/// intersect according to the lattice meet.
pub fn relation_distinctness(space: &LambdaSpace) -> RelationReport {
    let lat = space.lattice();
    let parts: Vec<Vec<u32>> = lat.elements().map(|l| space.partition(l)).collect();
    let mut report = RelationReport { equal: Vec::new(), meet_mismatches: Vec::new() };
    let n = space.len();
    for a in lat.elements() {
        for b in lat.elements().filter(|&b| b > a) {
            let name = |e| lat.name(e).to_string();
            if parts[a.index()] == parts[b.index()] {
                report.equal.push((name(a), name(b)));
            }
            let m = parts[lat.meet(a, b).index()].as_slice();
            let (pa, pb) = (&parts[a.index()], &parts[b.index()]);
            let agrees = (0..n).all(|i| (i + 1..n).all(|j| (m[i] == m[j]) == (pa[i] == pa[j] && pb[i] == pb[j])));
            if !agrees {
                report.meet_mismatches.push((name(a), name(b)));
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCuttingFailure {
    pub a: String,
    pub b: String,
    /// Least point id of the `a ∨ b`-class where some `a`-class misses some
    /// `b`-class.
    pub class: PointId,
}

/// For incomparable `a`, `b`: inside every `a ∨ b`-class, every `a`-class
/// meets every `b`-class.
pub fn cross_cutting_check(space: &LambdaSpace) -> Vec<CrossCuttingFailure> {
    let lat = space.lattice();
    let mut out = Vec::new();
    for a in lat.elements() {
        for b in lat.elements().filter(|&b| b > a) {
            if lat.leq(a, b) || lat.leq(b, a) {
                continue;
            }
            let (pa, pb, pj) = (space.partition(a), space.partition(b), space.partition(lat.join(a, b)));
            // per join class: a-labels, b-labels, (a, b) pairs met, least id
            type Seen = (HashSet<u32>, HashSet<u32>, HashSet<(u32, u32)>, PointId);
            let mut classes: BTreeMap<u32, Seen> = BTreeMap::new();
            for i in 0..space.len() {
                let e = classes
                    .entry(pj[i])
                    .or_insert_with(|| (HashSet::new(), HashSet::new(), HashSet::new(), PointId::MAX));
                e.0.insert(pa[i]);
                e.1.insert(pb[i]);
                e.2.insert((pa[i], pb[i]));
                e.3 = e.3.min(space.points()[i]);
            }
            for (xa, xb, pairs, rep) in classes.values() {
                if pairs.len() != xa.len() * xb.len() {
                    out.push(CrossCuttingFailure { a: lat.name(a).into(), b: lat.name(b).into(), class: *rep });
                }
            }
        }
    }
    out
}

/// Number of distinct labelled orientation patterns, a quick diagnostic used
/// by tests: how many different `(distance, comparisons)` codes occur among
/// ordered pairs of distinct points.
pub fn pair_type_count(s: &OrderedLambdaStructure) -> usize {
    let n = s.len();
    let mut seen = HashSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                seen.insert(pair_code(s, i, j));
            }
        }
    }
    seen.len()
}
