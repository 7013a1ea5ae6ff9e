//! Finite posets and lattices.
//!
//! Lattices are tiny here (a few dozen elements at most), so everything is
//! stored as dense tables: the order relation as a boolean matrix and meet and
//! join as lookup tables. Tables are computed and validated once, on
//! construction.

mod canon;
pub mod chains;
mod enumerate;

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use chains::{dimension_bounds, lambda_zero, min_chain_cover, ChainCover, DimensionBounds, EXHAUSTIVE_COVER_LIMIT};
pub use enumerate::{
    enumerate_distributive_lattices, enumerate_lattices, naturally_labeled_posets, MAX_ENUMERATION_SIZE,
};

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest number of elements a [`FiniteLattice`] may have.
pub const MAX_ELEMENTS: usize = 64;

/// Index of an element of a poset or lattice.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Elem(pub u8);

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A finite set with a (candidate) reflexive order relation.
///
/// The matrix is not required to satisfy the order axioms; see
/// [`FinitePoset::violations`] and [`validate_lattice`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    leq: Vec<bool>,
}

impl FinitePoset {
    /// Builds a poset from an explicit `leq` matrix, without checking axioms.
    pub fn from_matrix(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("order matrix must be {n}x{n} to match the element list")));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::SizeCap { requested: n, max: MAX_ELEMENTS });
        }
        Ok(FinitePoset { names, leq: leq.into_iter().flatten().collect() })
    }

    /// Reflexive-transitive closure of the given relation pairs `(lower, upper)`.
    pub fn from_relation(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(Error::SizeCap { requested: n, max: MAX_ELEMENTS });
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Shape(format!("relation pair ({a}, {b}) out of range")));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Ok(FinitePoset { names, leq })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// The induced subposet on `keep`, in the given order.
    pub fn subposet(&self, keep: &[usize]) -> FinitePoset {
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        let mut leq = Vec::with_capacity(keep.len() * keep.len());
        for &a in keep {
            for &b in keep {
                leq.push(self.leq(a, b));
            }
        }
        FinitePoset { names, leq }
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Order-axiom violations, each with the lexicographically first witness.
    pub fn violations(&self) -> Vec<LatticeViolation> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            if !self.leq(a, a) {
                out.push(LatticeViolation::NotReflexive { a });
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.leq(a, b) && self.leq(b, a) {
                    out.push(LatticeViolation::NotAntisymmetric { a, b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) || a == b {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        out.push(LatticeViolation::NotTransitive { a, b, c });
                    }
                }
            }
        }
        out
    }

    fn lower_bounds(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.leq(c, a) && self.leq(c, b)).collect()
    }

    fn upper_bounds(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.leq(a, c) && self.leq(b, c)).collect()
    }

    fn greatest(&self, set: &[usize]) -> Option<usize> {
        set.iter().copied().find(|&c| set.iter().all(|&d| self.leq(d, c)))
    }

    fn least(&self, set: &[usize]) -> Option<usize> {
        set.iter().copied().find(|&c| set.iter().all(|&d| self.leq(c, d)))
    }

    fn maximal(&self, set: &[usize]) -> Vec<usize> {
        set.iter().copied().filter(|&c| !set.iter().any(|&d| self.lt(c, d))).collect()
    }

    fn minimal(&self, set: &[usize]) -> Vec<usize> {
        set.iter().copied().filter(|&c| !set.iter().any(|&d| self.lt(d, c))).collect()
    }
}

/// One reason a candidate fails to be a lattice. Indices refer to the
/// candidate's element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeViolation {
    Empty,
    NotReflexive {
        a: usize,
    },
    NotAntisymmetric {
        a: usize,
        b: usize,
    },
    NotTransitive {
        a: usize,
        b: usize,
        c: usize,
    },
    /// `a` and `b` have no greatest lower bound; `candidates` are the maximal
    /// lower bounds (empty when there is none at all).
    NoMeet {
        a: usize,
        b: usize,
        candidates: Vec<usize>,
    },
    /// `a` and `b` have no least upper bound; `candidates` are the minimal
    /// upper bounds.
    NoJoin {
        a: usize,
        b: usize,
        candidates: Vec<usize>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub elements: usize,
    pub violations: Vec<LatticeViolation>,
}

impl LatticeReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for LatticeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid lattice on {} elements", self.elements);
        }
        write!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            write!(f, " {v:?};")?;
        }
        Ok(())
    }
}

/// Checks the order axioms and the existence of all pairwise meets and joins.
pub fn validate_lattice(candidate: &FinitePoset) -> LatticeReport {
    let n = candidate.len();
    let mut report = LatticeReport { elements: n, violations: Vec::new() };
    if n == 0 {
        report.violations.push(LatticeViolation::Empty);
        return report;
    }
    report.violations = candidate.violations();
    if !report.violations.is_empty() {
        return report;
    }
    for a in 0..n {
        for b in a + 1..n {
            let lower = candidate.lower_bounds(a, b);
            if candidate.greatest(&lower).is_none() {
                report.violations.push(LatticeViolation::NoMeet { a, b, candidates: candidate.maximal(&lower) });
            }
            let upper = candidate.upper_bounds(a, b);
            if candidate.least(&upper).is_none() {
                report.violations.push(LatticeViolation::NoJoin { a, b, candidates: candidate.minimal(&upper) });
            }
        }
    }
    report
}

/// Which forbidden sublattice witnessed a failure of distributivity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForbiddenSublattice {
    /// Diamond: bottom, three pairwise incomparable atoms, top.
    M3,
    /// Pentagon: bottom, `low < high` on one side, `side` on the other, top.
    N5,
}

/// Five elements `[bottom, x, y, z, top]` forming a copy of M₃ or N₅.
///
/// For M₃, `x`, `y`, `z` are the three middle elements in increasing id order.
/// For N₅, `x < y` is the two-element side and `z` the lone middle element.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SublatticeWitness {
    pub kind: ForbiddenSublattice,
    pub elements: [Elem; 5],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distributivity {
    pub distributive: bool,
    pub witness: Option<SublatticeWitness>,
}

/// A finite lattice with explicit order, meet and join tables.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    names: Vec<String>,
    n: usize,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    distributivity: OnceLock<Distributivity>,
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.leq == other.leq
    }
}

impl Eq for FiniteLattice {}

impl FiniteLattice {
    /// Computes the meet and join tables of a poset, failing with the full
    /// validation report if it is not a lattice.
    pub fn from_poset(poset: &FinitePoset) -> Result<Self> {
        let report = validate_lattice(poset);
        if !report.is_valid() {
            return Err(Error::InvalidLattice(report));
        }
        let n = poset.len();
        let mut meet = vec![Elem(0); n * n];
        let mut join = vec![Elem(0); n * n];
        for a in 0..n {
            for b in 0..n {
                let m = poset.greatest(&poset.lower_bounds(a, b)).expect("validated");
                let j = poset.least(&poset.upper_bounds(a, b)).expect("validated");
                meet[a * n + b] = Elem(m as u8);
                join[a * n + b] = Elem(j as u8);
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let bottom = poset.least(&all).expect("lattices are bounded");
        let top = poset.greatest(&all).expect("lattices are bounded");
        Ok(FiniteLattice {
            names: poset.names.clone(),
            n,
            leq: poset.leq.clone(),
            meet,
            join,
            bottom: Elem(bottom as u8),
            top: Elem(top as u8),
            distributivity: OnceLock::new(),
        })
    }

    /// Lattice from element names and covering pairs given by name.
    pub fn from_covers(names: Vec<String>, covers: &[(String, String)]) -> Result<Self> {
        let index = |s: &str| names.iter().position(|n| n == s).ok_or_else(|| Error::UnknownElement(s.to_string()));
        let pairs = covers.iter().map(|(a, b)| Ok((index(a)?, index(b)?))).collect::<Result<Vec<_>>>()?;
        FiniteLattice::from_poset(&FinitePoset::from_relation(names, &pairs)?)
    }

    /// The chain `0 < e1 < ... < 1` with `len` elements.
    pub fn chain(len: usize) -> Self {
        assert!(len >= 1, "a chain needs at least one element");
        let names = (0..len)
            .map(|i| match i {
                0 => "0".to_string(),
                i if i == len - 1 => "1".to_string(),
                i => format!("e{i}"),
            })
            .collect();
        let pairs: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_poset(&FinitePoset::from_relation(names, &pairs).expect("in range")).expect("chains are lattices")
    }

    /// The Boolean lattice of subsets of `atoms` atoms (named `a`, `b`, ...).
    pub fn boolean(atoms: usize) -> Self {
        assert!(atoms <= 6, "boolean lattice too large");
        let n = 1usize << atoms;
        let mut masks: Vec<usize> = (0..n).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let names = masks
            .iter()
            .map(|&m| match m {
                0 => "0".to_string(),
                m if m == n - 1 => "1".to_string(),
                m => (0..atoms).filter(|i| m >> i & 1 == 1).map(|i| (b'a' + i as u8) as char).collect(),
            })
            .collect();
        let mut leq = vec![vec![false; n]; n];
        for (i, &a) in masks.iter().enumerate() {
            for (j, &b) in masks.iter().enumerate() {
                leq[i][j] = a & b == a;
            }
        }
        Self::from_poset(&FinitePoset::from_matrix(names, leq).expect("square")).expect("powersets are lattices")
    }

    /// The diamond `M₃`.
    pub fn m3() -> Self {
        let names = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)];
        Self::from_poset(&FinitePoset::from_relation(names, &pairs).expect("in range")).expect("M3 is a lattice")
    }

    /// The pentagon `N₅`: `0 < a < c < 1` and `0 < b < 1`.
    pub fn n5() -> Self {
        let names = ["0", "a", "c", "b", "1"].map(String::from).to_vec();
        let pairs = [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)];
        Self::from_poset(&FinitePoset::from_relation(names, &pairs).expect("in range")).expect("N5 is a lattice")
    }

    /// The lattice of down-sets of `poset`, ordered by inclusion.
    ///
    /// Every finite distributive lattice arises this way from its poset of
    /// join-irreducibles. Elements are named by their members, `0` and `1`
    /// standing for the empty and the full down-set.
    pub fn of_downsets(poset: &FinitePoset) -> Result<Self> {
        let p = poset.len();
        if p >= 63 {
            return Err(Error::SizeCap { requested: p, max: 62 });
        }
        let below: Vec<u64> =
            (0..p).map(|i| (0..p).filter(|&j| poset.leq(j, i)).fold(0u64, |m, j| m | 1 << j)).collect();
        let downsets = enumerate::downsets(&below);
        if downsets.len() > MAX_ELEMENTS {
            return Err(Error::SizeCap { requested: downsets.len(), max: MAX_ELEMENTS });
        }
        let full = if p == 0 { 0 } else { u64::MAX >> (64 - p) };
        let names = downsets
            .iter()
            .map(|&d| match d {
                0 => "0".to_string(),
                d if d == full => "1".to_string(),
                d => (0..p).filter(|i| d >> i & 1 == 1).map(|i| poset.names()[i].clone()).collect::<Vec<_>>().join(""),
            })
            .collect::<Vec<_>>();
        let names = dedupe_names(names);
        let leq = downsets.iter().map(|&a| downsets.iter().map(|&b| a & b == a).collect()).collect();
        Self::from_poset(&FinitePoset::from_matrix(names, leq)?)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + Clone {
        (0..self.n as u8).map(Elem)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e.index()]
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name).map(|i| Elem(i as u8))
    }

    /// Like [`FiniteLattice::elem`], with an error for unknown names.
    pub fn parse_elem(&self, name: &str) -> Result<Elem> {
        self.elem(name).ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    #[inline]
    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    #[inline]
    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.index() * self.n + b.index()]
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a.index() * self.n + b.index()]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a.index() * self.n + b.index()]
    }

    /// Meet of all elements of `items`; the top for an empty iterator.
    pub fn meet_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.top, |acc, e| self.meet(acc, e))
    }

    /// Join of all elements of `items`; the bottom for an empty iterator.
    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.bottom, |acc, e| self.join(acc, e))
    }

    pub fn poset(&self) -> FinitePoset {
        FinitePoset { names: self.names.clone(), leq: self.leq.clone() }
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: Elem) -> Vec<Elem> {
        self.elements().filter(|&y| self.lt(x, y) && !self.elements().any(|z| self.lt(x, z) && self.lt(z, y))).collect()
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: Elem) -> Vec<Elem> {
        self.elements().filter(|&y| self.lt(y, x) && !self.elements().any(|z| self.lt(y, z) && self.lt(z, x))).collect()
    }

    /// The unique cover `x⁺` of a meet-irreducible `x`.
    pub fn unique_cover(&self, x: Elem) -> Option<Elem> {
        match self.upper_covers(x).as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }

    pub fn is_meet_irreducible(&self, x: Elem) -> bool {
        x != self.top && self.unique_cover(x).is_some()
    }

    pub fn is_join_irreducible(&self, x: Elem) -> bool {
        x != self.bottom && self.lower_covers(x).len() == 1
    }

    /// Whether the lattice has no copy of M₃ or N₅; cached after the first call.
    pub fn distributivity(&self) -> &Distributivity {
        self.distributivity.get_or_init(|| {
            let witness = find_forbidden_sublattice(self);
            Distributivity { distributive: witness.is_none(), witness }
        })
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity().distributive
    }

    /// Renames elements; `names` must have one distinct entry per element.
    pub fn with_names(&self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n {
            return Err(Error::Shape("wrong number of element names".into()));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(Error::Shape("element names must be distinct".into()));
        }
        let mut out = self.clone();
        out.names = names;
        Ok(out)
    }
}

fn dedupe_names(mut names: Vec<String>) -> Vec<String> {
    for i in 0..names.len() {
        let mut k = 1;
        while names[..i].contains(&names[i]) {
            names[i] = format!("{}_{k}", names[i]);
            k += 1;
        }
    }
    names
}

/// Lexicographically first copy of M₃ or N₅, scanning tuples
/// `(bottom, x, y, z, top)` in element-id order.
fn find_forbidden_sublattice(lat: &FiniteLattice) -> Option<SublatticeWitness> {
    let els: Vec<Elem> = lat.elements().collect();
    for &o in &els {
        for &x in &els {
            if !lat.lt(o, x) {
                continue;
            }
            for &y in &els {
                if y == x || !lat.lt(o, y) {
                    continue;
                }
                for &z in &els {
                    if z == x || z == y || !lat.lt(o, z) {
                        continue;
                    }
                    for &i in &els {
                        if !(lat.lt(x, i) && lat.lt(y, i) && lat.lt(z, i)) {
                            continue;
                        }
                        let pair = |a, b| lat.meet(a, b) == o && lat.join(a, b) == i;
                        if x < y && y < z && pair(x, y) && pair(y, z) && pair(x, z) {
                            return Some(SublatticeWitness {
                                kind: ForbiddenSublattice::M3,
                                elements: [o, x, y, z, i],
                            });
                        }
                        if lat.lt(x, y) && pair(x, z) && pair(y, z) {
                            return Some(SublatticeWitness {
                                kind: ForbiddenSublattice::N5,
                                elements: [o, x, y, z, i],
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Distributivity check with the lexicographically first M₃/N₅ witness.
pub fn is_distributive(lat: &FiniteLattice) -> Distributivity {
    lat.distributivity().clone()
}

/// All meet-irreducible elements: `x ≠ ⊤` with exactly one upper cover.
pub fn meet_irreducibles(lat: &FiniteLattice) -> Vec<Elem> {
    lat.elements().filter(|&x| lat.is_meet_irreducible(x)).collect()
}

/// The cover map `x ↦ x⁺` restricted to meet-irreducibles.
pub fn cover_map(lat: &FiniteLattice) -> Vec<(Elem, Elem)> {
    meet_irreducibles(lat).into_iter().map(|x| (x, lat.unique_cover(x).expect("meet-irreducible"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_chain_is_valid() {
        let p = FinitePoset::from_relation(names(&["0", "1"]), &[(0, 1)]).unwrap();
        assert!(validate_lattice(&p).is_valid());
    }

    #[test]
    fn m3_is_a_lattice_but_not_distributive() {
        let m3 = FiniteLattice::m3();
        assert!(validate_lattice(&m3.poset()).is_valid());
        let d = is_distributive(&m3);
        assert!(!d.distributive);
        let w = d.witness.unwrap();
        assert_eq!(w.kind, ForbiddenSublattice::M3);
        assert_eq!(w.elements, [Elem(0), Elem(1), Elem(2), Elem(3), Elem(4)]);
    }

    #[test]
    fn n5_is_not_distributive() {
        let d = is_distributive(&FiniteLattice::n5());
        assert!(!d.distributive);
        assert_eq!(d.witness.unwrap().kind, ForbiddenSublattice::N5);
    }

    #[test]
    fn boolean_lattice_is_distributive() {
        assert!(FiniteLattice::boolean(2).is_distributive());
        assert!(FiniteLattice::boolean(3).is_distributive());
    }

    #[test]
    fn missing_upper_bound_is_reported() {
        // 0 < a, 0 < b with no common upper bound
        let p = FinitePoset::from_relation(names(&["0", "a", "b"]), &[(0, 1), (0, 2)]).unwrap();
        let report = validate_lattice(&p);
        assert_eq!(report.violations, vec![LatticeViolation::NoJoin { a: 1, b: 2, candidates: vec![] },]);
        // two minimal upper bounds
        let p = FinitePoset::from_relation(
            names(&["0", "a", "b", "c", "d"]),
            &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4)],
        )
        .unwrap();
        let report = validate_lattice(&p);
        assert!(report.violations.contains(&LatticeViolation::NoJoin { a: 1, b: 2, candidates: vec![3, 4] }));
    }

    #[test]
    fn cycles_break_antisymmetry() {
        let p = FinitePoset::from_relation(names(&["a", "b"]), &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(validate_lattice(&p).violations, vec![LatticeViolation::NotAntisymmetric { a: 0, b: 1 }]);
    }

    #[test]
    fn meet_irreducibles_of_small_lattices() {
        let c3 = FiniteLattice::chain(3);
        assert_eq!(meet_irreducibles(&c3), vec![Elem(0), Elem(1)]);
        let b2 = FiniteLattice::boolean(2);
        let mi: Vec<_> = meet_irreducibles(&b2).iter().map(|&e| b2.name(e).to_string()).collect();
        assert_eq!(mi, vec!["a", "b"]);
        let m3 = FiniteLattice::m3();
        assert_eq!(meet_irreducibles(&m3), vec![Elem(1), Elem(2), Elem(3)]);
        assert_eq!(cover_map(&c3), vec![(Elem(0), Elem(1)), (Elem(1), Elem(2))]);
    }

    #[test]
    fn downset_lattice_of_two_antichain_is_boolean() {
        let p = FinitePoset::from_relation(names(&["a", "b"]), &[]).unwrap();
        let lat = FiniteLattice::of_downsets(&p).unwrap();
        assert_eq!(lat.names(), &names(&["0", "a", "b", "1"])[..]);
        assert!(is_isomorphic(&lat, &FiniteLattice::boolean(2)));
    }

    #[test]
    fn elements_are_meets_of_meet_irreducibles_above() {
        for lat in enumerate_distributive_lattices(8).unwrap() {
            let mi = meet_irreducibles(&lat);
            for x in lat.elements() {
                let above = mi.iter().copied().filter(|&m| lat.leq(x, m));
                assert_eq!(lat.meet_all(above), x);
            }
            for &m in &mi {
                assert_eq!(lat.upper_covers(m).len(), 1);
            }
        }
    }
}
