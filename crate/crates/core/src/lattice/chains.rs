//! Chain covers of posets (Dilworth) and the order-count bounds built on
//! chain covers of the meet-irreducibles.

use serde::Serialize;

use super::{meet_irreducibles, Elem, FiniteLattice, FinitePoset};
use crate::error::{Error, Result};

/// Above this many meet-irreducibles the upper bound is only evaluated on a
/// minimum-cardinality cover.
pub const EXHAUSTIVE_COVER_LIMIT: usize = 12;

/// A family of chains covering a poset. Each chain is listed bottom-up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCover {
    pub chains: Vec<Vec<Elem>>,
}

impl ChainCover {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// `|𝓛| + Σ ⌈log₂(|L|+1)⌉`, the number of linear orders the chain-based
    /// encoding emits for this cover.
    pub fn order_cost(&self) -> usize {
        self.chains.iter().map(|c| 1 + companion_count(c.len())).sum()
    }

    /// Checks that every chain is totally ordered in `poset` (indices are
    /// poset positions) and that together they cover `members`.
    pub fn check(&self, poset: &FinitePoset, members: &[usize]) -> Result<()> {
        for chain in &self.chains {
            for (i, a) in chain.iter().enumerate() {
                if !members.contains(&a.index()) {
                    return Err(Error::InvalidCover(format!("{a} is not in the covered set")));
                }
                for b in &chain[i + 1..] {
                    if !poset.lt(a.index(), b.index()) {
                        return Err(Error::InvalidCover(format!("chain is not increasing at {a} / {b}")));
                    }
                }
            }
        }
        for &m in members {
            if !self.chains.iter().flatten().any(|e| e.index() == m) {
                return Err(Error::InvalidCover(format!("#{m} is not covered")));
            }
        }
        Ok(())
    }
}

/// Companion orders needed to tell apart the `len + 1` levels of a chain.
pub fn companion_count(len: usize) -> usize {
    ceil_log2(len + 1)
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Minimum chain cover via maximum bipartite matching (Dilworth). The number
/// of chains equals the width of the poset.
pub fn min_chain_cover(p: &FinitePoset) -> ChainCover {
    let n = p.len();
    // match_right[v] = u means u -> v is a chain link
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        let mut seen = vec![false; n];
        augment(p, u, &mut seen, &mut match_right);
    }
    let mut next = vec![None; n];
    let mut has_prev = vec![false; n];
    for (v, m) in match_right.iter().enumerate() {
        if let Some(u) = *m {
            next[u] = Some(v);
            has_prev[v] = true;
        }
    }
    let mut chains = Vec::new();
    for start in (0..n).filter(|&i| !has_prev[i]) {
        let mut chain = vec![Elem(start as u8)];
        let mut cur = start;
        while let Some(v) = next[cur] {
            chain.push(Elem(v as u8));
            cur = v;
        }
        chains.push(chain);
    }
    ChainCover { chains }
}

fn augment(p: &FinitePoset, u: usize, seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
    for v in 0..p.len() {
        if p.lt(u, v) && !seen[v] {
            seen[v] = true;
            if match_right[v].is_none_or(|w| augment(p, w, seen, match_right)) {
                match_right[v] = Some(u);
                return true;
            }
        }
    }
    false
}

/// Meet-irreducibles of the lattice other than `0` (the poset `Λ₀`).
pub fn lambda_zero(lat: &FiniteLattice) -> Vec<Elem> {
    meet_irreducibles(lat).into_iter().filter(|&e| e != lat.bottom()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionBounds {
    /// Twice the width of `Λ₀`.
    pub lower: usize,
    /// Least value of `|𝓛| + Σ ⌈log₂(|L|+1)⌉` over the covers examined.
    pub upper: usize,
    /// Width of `Λ₀`.
    pub width: usize,
    /// A cover attaining `upper`, in lattice elements.
    pub cover: ChainCover,
    /// Whether every chain partition of `Λ₀` was examined.
    pub exhaustive: bool,
    pub notes: Vec<String>,
}

/// Lower and upper bounds on the number of linear orders needed for a
/// homogeneous structure whose definable equivalence relations form `lat`.
pub fn dimension_bounds(lat: &FiniteLattice) -> Result<DimensionBounds> {
    if let Some(w) = lat.distributivity().witness {
        return Err(Error::NonDistributive(w));
    }
    let members = lambda_zero(lat);
    let idx: Vec<usize> = members.iter().map(|e| e.index()).collect();
    let sub = lat.poset().subposet(&idx);
    let dilworth = min_chain_cover(&sub);
    let width = dilworth.len();
    let to_lattice = |cover: ChainCover| ChainCover {
        chains: cover.chains.into_iter().map(|c| c.into_iter().map(|e| members[e.index()]).collect()).collect(),
    };
    let mut notes = Vec::new();
    if members.is_empty() {
        notes.push(
            "no meet-irreducibles besides 0: the bound concerns the lattice only; \
             presenting a structure with orders still needs at least one order"
                .to_string(),
        );
    }
    let (cover, exhaustive) = if members.len() <= EXHAUSTIVE_COVER_LIMIT {
        (best_partition(&sub), true)
    } else {
        notes.push(format!(
            "{} meet-irreducibles: upper bound taken over a minimum-cardinality cover only",
            members.len()
        ));
        (dilworth, false)
    };
    let cover = to_lattice(cover);
    Ok(DimensionBounds { lower: 2 * width, upper: cover.order_cost(), width, cover, exhaustive, notes })
}

/// Chain partition minimising the order cost, by dynamic programming over
/// subsets. Overlapping covers never cost less than the partition obtained by
/// dropping repeats, so partitions suffice.
fn best_partition(p: &FinitePoset) -> ChainCover {
    let n = p.len();
    let full = (1usize << n) - 1;
    let is_chain: Vec<bool> = (0..=full)
        .map(|m| (0..n).all(|a| m >> a & 1 == 0 || (0..n).all(|b| m >> b & 1 == 0 || p.comparable(a, b))))
        .collect();
    let mut cost = vec![usize::MAX; full + 1];
    let mut pick = vec![0usize; full + 1];
    cost[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // enumerate chains containing the lowest member
        let mut sub = rest;
        loop {
            let chain = sub | low;
            if is_chain[chain] {
                let c = 1 + companion_count(chain.count_ones() as usize) + cost[mask ^ chain];
                // ties go to the numerically smallest chain mask
                if c < cost[mask] || (c == cost[mask] && chain < pick[mask]) {
                    cost[mask] = c;
                    pick[mask] = chain;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut chains = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let chain = pick[mask];
        let mut members: Vec<usize> = (0..n).filter(|&i| chain >> i & 1 == 1).collect();
        members.sort_by(|&a, &b| {
            if p.lt(a, b) {
                std::cmp::Ordering::Less
            } else if p.lt(b, a) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        chains.push(members.into_iter().map(|i| Elem(i as u8)).collect());
        mask ^= chain;
    }
    ChainCover { chains }
}
