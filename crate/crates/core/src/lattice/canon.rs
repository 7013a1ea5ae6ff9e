//! Canonical forms of small posets: colour refinement on the order relation,
//! then backtracking over the remaining ties.

use super::{FiniteLattice, FinitePoset};

/// Order matrix under a canonical relabelling; equal forms mean isomorphic
/// posets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    size: usize,
    bits: Vec<u64>,
}

impl CanonicalForm {
    pub fn size(&self) -> usize {
        self.size
    }
}

/// Canonical form of a lattice (determined by its order alone).
pub fn canonical_form(lat: &FiniteLattice) -> CanonicalForm {
    poset_canonical_form(&lat.poset())
}

pub fn is_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    a.len() == b.len() && canonical_form(a) == canonical_form(b)
}

/// Canonical form of an arbitrary finite poset.
pub fn poset_canonical_form(p: &FinitePoset) -> CanonicalForm {
    let n = p.len();
    let init: Vec<u32> = (0..n)
        .map(|i| {
            let down = (0..n).filter(|&j| p.lt(j, i)).count() as u32;
            let up = (0..n).filter(|&j| p.lt(i, j)).count() as u32;
            down << 16 | up
        })
        .collect();
    let colors = refine(p, relabel(&init));
    let mut best: Option<Vec<u64>> = None;
    search(p, colors, &mut best);
    CanonicalForm { size: n, bits: best.unwrap_or_default() }
}

/// Maps arbitrary keys to dense colours ordered by key.
fn relabel<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("present") as u32).collect()
}

fn refine(p: &FinitePoset, mut colors: Vec<u32>) -> Vec<u32> {
    let n = p.len();
    loop {
        let keys: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..n)
            .map(|i| {
                let mut down: Vec<u32> = (0..n).filter(|&j| p.lt(j, i)).map(|j| colors[j]).collect();
                let mut up: Vec<u32> = (0..n).filter(|&j| p.lt(i, j)).map(|j| colors[j]).collect();
                down.sort_unstable();
                up.sort_unstable();
                (colors[i], down, up)
            })
            .collect();
        let next = relabel(&keys);
        let before = distinct(&colors);
        let after = distinct(&next);
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(p: &FinitePoset, colors: Vec<u32>, best: &mut Option<Vec<u64>>) {
    let n = p.len();
    if distinct(&colors) == n {
        // colour = position in the canonical labelling
        let mut order = vec![0usize; n];
        for (i, &c) in colors.iter().enumerate() {
            order[c as usize] = i;
        }
        let mut bits = vec![0u64; (n * n).div_ceil(64)];
        for (a, &ia) in order.iter().enumerate() {
            for (b, &ib) in order.iter().enumerate() {
                if p.leq(ia, ib) {
                    let k = a * n + b;
                    bits[k / 64] |= 1 << (k % 64);
                }
            }
        }
        if best.as_ref().is_none_or(|b| bits < *b) {
            *best = Some(bits);
        }
        return;
    }
    // individualise each member of the first (smallest-colour) non-singleton cell
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    let cell = (0..n).find(|&c| counts[c] > 1).expect("not discrete") as u32;
    for v in (0..n).filter(|&v| colors[v] == cell) {
        let split: Vec<u64> = colors
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let c = (c as u64) * 2;
                if i == v {
                    c
                } else if colors[i] == cell {
                    c + 1
                } else {
                    c
                }
            })
            .collect();
        search(p, refine(p, relabel(&split)), best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_lattices_share_a_form() {
        let n5 = FiniteLattice::n5();
        // same pentagon with a different element order
        let names = ["0", "b", "a", "c", "1"].map(String::from).to_vec();
        let p = FinitePoset::from_relation(names, &[(0, 1), (1, 4), (0, 2), (2, 3), (3, 4)]).unwrap();
        let other = FiniteLattice::from_poset(&p).unwrap();
        assert!(is_isomorphic(&n5, &other));
        assert!(!is_isomorphic(&n5, &FiniteLattice::m3()));
        assert!(!is_isomorphic(&FiniteLattice::chain(4), &FiniteLattice::boolean(2)));
    }

    #[test]
    fn symmetric_lattices_terminate() {
        let b4 = FiniteLattice::boolean(4);
        assert_eq!(canonical_form(&b4).size(), 16);
    }
}
