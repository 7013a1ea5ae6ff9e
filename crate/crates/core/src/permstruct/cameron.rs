//! Sweep over the catalog structures that need only two linear orders.
//!
//! Two lattices can be presented with two orders: `{0, 1}` (the second order
//! equals, reverses, or is independent of the first) and the 3-chain
//! `0 < E < 1` (the second order keeps, reverses, or replaces the step order
//! at each of the two levels). Every combination is instantiated on a
//! generated sample and kept when decoding gives back the lattice it came
//! from; the kept samples are then compared by their 3-point profiles.

use std::sync::Arc;

use serde::Serialize;

use super::{decode_relations, profile, PermStructure};
use crate::error::Result;
use crate::generic::{generate_generic, GenerationConfig};
use crate::lattice::{is_isomorphic, FiniteLattice};
use crate::sqorder::{compose_lex, SubquotientOrder};
use crate::ultrametric::LambdaSpace;

/// What the second order does at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelChoice {
    Keep,
    Reverse,
    Independent,
}

const CHOICES: [LevelChoice; 3] = [LevelChoice::Keep, LevelChoice::Reverse, LevelChoice::Independent];

#[derive(Clone, Debug, Serialize)]
pub struct CameronEntry {
    pub lattice: String,
    pub pattern: Vec<LevelChoice>,
    /// Relations found by decoding the two-order sample.
    pub decoded_relations: usize,
    /// Decoding gave back a lattice isomorphic to the source.
    pub kept: bool,
    /// Labelled 3-point patterns occurring in the sample.
    pub profile: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CameronReport {
    pub sample_size: usize,
    pub entries: Vec<CameronEntry>,
    pub kept: usize,
    /// Number of pairwise distinct profiles among kept entries.
    pub distinct_profiles: usize,
}

fn linear(o: &SubquotientOrder) -> Vec<u32> {
    o.keys().iter().map(|k| k.rank).collect()
}

fn pick(base: &SubquotientOrder, other: &SubquotientOrder, c: LevelChoice) -> SubquotientOrder {
    match c {
        LevelChoice::Keep => base.clone(),
        LevelChoice::Reverse => base.reversed(),
        LevelChoice::Independent => other.clone(),
    }
}

fn entry(
    lattice: &FiniteLattice,
    name: &str,
    pattern: Vec<LevelChoice>,
    first: Vec<u32>,
    second: Vec<u32>,
) -> Result<CameronEntry> {
    let p = PermStructure::new(vec![first, second])?;
    let decoded = decode_relations(&p);
    let kept = decoded.lattice.as_ref().is_some_and(|l| is_isomorphic(l, lattice));
    Ok(CameronEntry {
        lattice: name.into(),
        pattern,
        decoded_relations: decoded.relations.len(),
        kept,
        profile: profile(&p, 3).counts.into_keys().collect(),
    })
}

/// Runs the sweep on samples of `sample_size` points generated from `seed`.
pub fn cameron_enumeration(sample_size: usize, seed: u64) -> Result<CameronReport> {
    let cfg = GenerationConfig { seed, target_size: sample_size, saturation_depth: 2 };
    let mut entries = Vec::new();

    let two = Arc::new(FiniteLattice::chain(2));
    let (b, t) = (two.bottom(), two.top());
    let g = generate_generic(two.clone(), &[(b, t), (b, t)], cfg)?.structure;
    for c in CHOICES {
        let second = pick(&g.orders[0], &g.orders[1], c);
        entries.push(entry(&two, "2-chain", vec![c], linear(&g.orders[0]), linear(&second))?);
    }

    let three = Arc::new(FiniteLattice::chain(3));
    let (b, e, t) = (three.bottom(), three.elem("e1").expect("middle element"), three.top());
    let g = generate_generic(three.clone(), &[(b, e), (e, t), (b, e), (e, t)], cfg)?.structure;
    let lex = |space: &LambdaSpace, lo: &SubquotientOrder, hi: &SubquotientOrder| {
        linear(&compose_lex(space, lo, hi).expect("levels match"))
    };
    let first = lex(&g.space, &g.orders[0], &g.orders[1]);
    for c1 in CHOICES {
        for c2 in CHOICES {
            let lo = pick(&g.orders[0], &g.orders[2], c1);
            let hi = pick(&g.orders[1], &g.orders[3], c2);
            entries.push(entry(&three, "3-chain", vec![c1, c2], first.clone(), lex(&g.space, &lo, &hi))?);
        }
    }

    let kept: Vec<&CameronEntry> = entries.iter().filter(|e| e.kept).collect();
    let mut profiles: Vec<&Vec<String>> = kept.iter().map(|e| &e.profile).collect();
    profiles.sort();
    profiles.dedup();
    Ok(CameronReport { sample_size, kept: kept.len(), distinct_profiles: profiles.len(), entries })
}
