//! Recovering the equivalence relations that are unions of orientation types.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::PermStructure;
use crate::lattice::{FiniteLattice, FinitePoset, SublatticeWitness, MAX_ELEMENTS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodedRelation {
    pub name: String,
    /// Orientation masks `m` (with `m < m ^ full`) whose pairs are related;
    /// the reversed orientation is implied.
    pub classes: Vec<u32>,
    /// Number of related unordered pairs of distinct points.
    pub pairs: usize,
    /// Number of equivalence classes on the sample.
    pub blocks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecodedRelations {
    pub sample_size: usize,
    pub orders: usize,
    /// Orientation types occurring in the sample (one per reversal pair).
    pub realized_classes: Vec<u32>,
    /// All relations, from equality up to the full relation.
    pub relations: Vec<DecodedRelation>,
    /// Covering pairs `(lower, upper)` of the refinement order, as indices.
    pub hasse: Vec<(usize, usize)>,
    pub distributive: Option<bool>,
    pub witness: Option<SublatticeWitness>,
    /// For each relation that is meet-irreducible in the recovered lattice:
    /// `(relation index, number of orders for which it is convex)`.
    pub convex_counts: Vec<(usize, usize)>,
    /// The relations under refinement; `None` above the lattice size cap.
    #[serde(skip)]
    pub lattice: Option<FiniteLattice>,
}

/// Pair structure shared by the closure and the sweep.
struct Pairs {
    n: usize,
    /// Realized symmetric orientation classes, by their smaller mask.
    classes: Vec<u32>,
    /// Class index of each unordered pair `x < y`, row-major.
    class_of: Vec<usize>,
}

impl Pairs {
    fn new(p: &PermStructure) -> Self {
        let n = p.len();
        let full = p.full_mask();
        let mut index: BTreeMap<u32, usize> = BTreeMap::new();
        let mut raw = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for x in 0..n {
            for y in x + 1..n {
                let m = p.orientation(x, y);
                let key = m.min(m ^ full);
                index.entry(key).or_insert(0);
                raw.push(key);
            }
        }
        for (i, v) in index.values_mut().enumerate() {
            *v = i;
        }
        let classes = index.keys().copied().collect();
        let class_of = raw.iter().map(|k| index[k]).collect();
        Pairs { n, classes, class_of }
    }

    fn pair(&self, x: usize, y: usize) -> usize {
        // index of (x, y), x < y, in row-major upper-triangle order
        x * (2 * self.n - x - 1) / 2 + (y - x - 1)
    }

    /// Components of the graph whose edges are pairs with classes in `set`.
    fn components(&self, set: &[bool]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for x in 0..self.n {
            for y in x + 1..self.n {
                if set[self.class_of[self.pair(x, y)]] {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..self.n).map(|x| find(&mut parent, x)).collect()
    }

    /// Smallest set of classes containing `set` whose pairs form an
    /// equivalence relation (with the diagonal).
    fn closure(&self, mut set: Vec<bool>) -> Vec<bool> {
        loop {
            let comp = self.components(&set);
            let mut grew = false;
            for x in 0..self.n {
                for y in x + 1..self.n {
                    let c = self.class_of[self.pair(x, y)];
                    if comp[x] == comp[y] && !set[c] {
                        set[c] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    /// Whether the pairs of `set` plus the diagonal form an equivalence.
    fn is_equivalence(&self, set: &[bool]) -> bool {
        let comp = self.components(set);
        (0..self.n).all(|x| (x + 1..self.n).all(|y| (comp[x] == comp[y]) == set[self.class_of[self.pair(x, y)]]))
    }

    fn describe(&self, set: &[bool], name: String) -> DecodedRelation {
        let comp = self.components(set);
        let pairs = self.class_of.iter().filter(|&&c| set[c]).count();
        let blocks = (0..self.n).filter(|&x| comp[x] == x).count();
        let classes = self.classes.iter().zip(set).filter(|(_, &s)| s).map(|(&m, _)| m).collect();
        DecodedRelation { name, classes, pairs, blocks }
    }
}

/// Every equivalence relation on the sample that is a union of orientation
/// types, found by closing sets of types under transitivity. These relations
/// are closed under intersection, so ordered by refinement they form a
/// lattice, whose distributivity is reported.
pub fn decode_relations(p: &PermStructure) -> DecodedRelations {
    let pairs = Pairs::new(p);
    let c = pairs.classes.len();
    let mut found: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut queue = vec![pairs.closure(vec![false; c])];
    while let Some(set) = queue.pop() {
        if !found.insert(set.clone()) {
            continue;
        }
        for i in 0..c {
            if !set[i] {
                let mut bigger = set.clone();
                bigger[i] = true;
                let closed = pairs.closure(bigger);
                if !found.contains(&closed) {
                    queue.push(closed);
                }
            }
        }
    }
    finish(p, &pairs, found.into_iter().collect())
}

/// The same family by testing every set of orientation types directly;
/// exponential in the number of realized types, meant as a cross-check.
pub fn exhaustive_relations(p: &PermStructure) -> DecodedRelations {
    let pairs = Pairs::new(p);
    let c = pairs.classes.len();
    assert!(c <= 20, "too many orientation types for an exhaustive sweep");
    let sets = (0u64..1 << c)
        .map(|bits| (0..c).map(|i| bits >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|s| pairs.is_equivalence(s))
        .collect();
    finish(p, &pairs, sets)
}

fn finish(p: &PermStructure, pairs: &Pairs, mut sets: Vec<Vec<bool>>) -> DecodedRelations {
    let count = |s: &Vec<bool>| pairs.class_of.iter().filter(|&&c| s[c]).count();
    sets.sort_by_key(|s| (count(s), s.iter().rev().map(|&b| !b).collect::<Vec<_>>()));
    let relations: Vec<DecodedRelation> =
        sets.iter().enumerate().map(|(i, s)| pairs.describe(s, format!("R{i}"))).collect();
    let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(&x, &y)| !x || y);
    let k = sets.len();
    let leq: Vec<Vec<bool>> = (0..k).map(|i| (0..k).map(|j| subset(&sets[i], &sets[j])).collect()).collect();
    let poset =
        FinitePoset::from_matrix(relations.iter().map(|r| r.name.clone()).collect(), leq).expect("square matrix");
    let hasse = poset.covering_pairs();
    let lattice = if k <= MAX_ELEMENTS { FiniteLattice::from_poset(&poset).ok() } else { None };
    let (distributive, witness) = match &lattice {
        Some(l) => (Some(l.is_distributive()), l.distributivity().witness),
        None => (None, None),
    };
    let convex_counts = match &lattice {
        Some(l) => l
            .elements()
            .filter(|&e| l.is_meet_irreducible(e))
            .map(|e| {
                let comp = pairs.components(&sets[e.index()]);
                let convex = p.orders().iter().filter(|o| is_convex(o, &comp)).count();
                (e.index(), convex)
            })
            .collect(),
        None => Vec::new(),
    };
    DecodedRelations {
        sample_size: p.len(),
        orders: p.dimension(),
        realized_classes: pairs.classes.clone(),
        relations,
        hasse,
        distributive,
        witness,
        convex_counts,
        lattice,
    }
}

/// Every block of `comp` occupies consecutive ranks of `order`.
fn is_convex(order: &[u32], comp: &[usize]) -> bool {
    let mut span: BTreeMap<usize, (u32, u32, u32)> = BTreeMap::new();
    for (x, &c) in comp.iter().enumerate() {
        let e = span.entry(c).or_insert((u32::MAX, 0, 0));
        e.0 = e.0.min(order[x]);
        e.1 = e.1.max(order[x]);
        e.2 += 1;
    }
    span.values().all(|&(lo, hi, size)| hi - lo + 1 == size)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_only_trivial_relations() {
        let d = decode_relations(&PermStructure::identity(2, 8));
        assert_eq!(d.relations.len(), 2);
        assert_eq!(d.relations[0].pairs, 0);
        assert_eq!(d.relations[1].pairs, 28);
        assert_eq!(d.distributive, Some(true));
    }

    #[test]
    fn block_structure_is_found() {
        // blocks {0,1,2} {3,4,5}: second order reverses inside blocks
        let p = PermStructure::new(vec![vec![0, 1, 2, 3, 4, 5], vec![2, 1, 0, 5, 4, 3]]).unwrap();
        let d = decode_relations(&p);
        assert_eq!(d.relations.len(), 3);
        assert_eq!(d.relations[1].blocks, 2);
        assert_eq!(d.hasse, vec![(0, 1), (1, 2)]);
        let e = exhaustive_relations(&p);
        assert_eq!(d.relations, e.relations);
    }

    #[test]
    fn pair_index_is_row_major() {
        let p = PermStructure::identity(1, 5);
        let pairs = Pairs::new(&p);
        let mut k = 0;
        for x in 0..5 {
            for y in x + 1..5 {
                assert_eq!(pairs.pair(x, y), k);
                k += 1;
            }
        }
    }
}
