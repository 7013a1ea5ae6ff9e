//! Plain-text file formats.
//!
//! All formats are line based; `#` starts a comment and blank lines are
//! ignored. Element names and point ids are whitespace-free tokens.
//!
//! - **lattice**: `elements: 0 a b 1` followed by `cover: x < y` lines.
//! - **space**: either `lattice: PATH` (relative to the space file) or an
//!   inline lattice (`elements:`/`cover:` lines), then `points: 0 1 2 ...`
//!   and one `d: x y λ` line per unordered pair of distinct points.
//! - **structure**: a space followed by order blocks, each `sq: BOTTOM TOP`
//!   and then `rank: REP INT` lines, one per `BOTTOM`-class (`REP` is any
//!   point of the class; writers use the smallest id).
//! - **perm**: a header line `n N` (orders, points) followed by `N` lines of
//!   `n` ranks each.
//! - **cover**: `chain: a b c` lines, one per chain.
//!
//! Writers are deterministic: the same value always gives the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{ChainCover, Elem, FiniteLattice};
use crate::permstruct::PermStructure;
use crate::sqorder::SubquotientOrder;
use crate::ultrametric::{LambdaSpace, PointId};

/// A space with its orders, exactly as read; nothing is validated beyond
/// the shape of the file.
#[derive(Clone, Debug)]
pub struct StructureFile {
    pub space: LambdaSpace,
    pub orders: Vec<SubquotientOrder>,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Splits `key: rest` into its parts.
fn keyed(line: &str) -> Option<(&str, &str)> {
    let (k, rest) = line.split_once(':')?;
    Some((k.trim(), rest.trim()))
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| err(line, format!("expected an integer, found `{tok}`")))
}

fn parse_elem(lat: &FiniteLattice, line: usize, tok: &str) -> Result<Elem> {
    lat.elem(tok).ok_or_else(|| err(line, format!("unknown lattice element `{tok}`")))
}

/// Reads a whole file, naming it in the error.
pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::File { path: path.to_path_buf(), source })
}

// ---------------------------------------------------------------- lattice

#[derive(Default)]
struct LatticeLines {
    names: Option<(usize, Vec<String>)>,
    covers: Vec<(String, String)>,
}

impl LatticeLines {
    /// Consumes `elements:`/`cover:` lines; returns `false` for other keys.
    fn take(&mut self, line: usize, key: &str, rest: &str) -> Result<bool> {
        match key {
            "elements" => {
                if self.names.is_some() {
                    return Err(err(line, "duplicate `elements:` line"));
                }
                self.names = Some((line, rest.split_whitespace().map(String::from).collect()));
            }
            "cover" => {
                let (a, b) = rest.split_once('<').ok_or_else(|| err(line, "expected `cover: x < y`"))?;
                let (a, b) = (a.trim(), b.trim());
                if a.is_empty() || b.is_empty() || a.contains(char::is_whitespace) || b.contains(char::is_whitespace) {
                    return Err(err(line, "expected `cover: x < y`"));
                }
                self.covers.push((a.into(), b.into()));
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn present(&self) -> bool {
        self.names.is_some() || !self.covers.is_empty()
    }

    fn build(self) -> Result<FiniteLattice> {
        let (line, names) = self.names.ok_or_else(|| err(1, "missing `elements:` line"))?;
        if names.is_empty() {
            return Err(err(line, "a lattice needs at least one element"));
        }
        let mut sorted = names.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(err(line, format!("duplicate element `{}`", w[0])));
        }
        FiniteLattice::from_covers(names, &self.covers)
    }
}

/// Parses a lattice file.
pub fn parse_lattice(text: &str) -> Result<FiniteLattice> {
    let mut l = LatticeLines::default();
    for (n, line) in lines(text) {
        let (key, rest) = keyed(line).ok_or_else(|| err(n, "expected `key: value`"))?;
        if !l.take(n, key, rest)? {
            return Err(err(n, format!("unexpected `{key}:` in a lattice file")));
        }
    }
    l.build()
}

/// Lattice file text: elements in index order, covers sorted by index.
pub fn write_lattice(lat: &FiniteLattice) -> String {
    let mut out = String::new();
    write_lattice_lines(&mut out, lat);
    out
}

fn write_lattice_lines(out: &mut String, lat: &FiniteLattice) {
    let _ = writeln!(out, "elements: {}", lat.names().join(" "));
    for (a, b) in lat.poset().covering_pairs() {
        let _ = writeln!(out, "cover: {} < {}", lat.names()[a], lat.names()[b]);
    }
}

pub fn read_lattice(path: &Path) -> Result<FiniteLattice> {
    parse_lattice(&read_text(path)?)
}

// ------------------------------------------------------------------ space

/// Parses a space (and any order blocks). `base` resolves `lattice: PATH`
/// references; without it only inline lattices are accepted.
pub fn parse_structure(text: &str, base: Option<&Path>) -> Result<StructureFile> {
    let mut lat_lines = LatticeLines::default();
    let mut lattice: Option<Arc<FiniteLattice>> = None;
    let mut points: Option<(usize, Vec<PointId>)> = None;
    let mut dists: Vec<(usize, PointId, PointId, String)> = Vec::new();
    // (line, bottom, top, [(line, rep, rank)])
    type Block = (usize, String, String, Vec<(usize, PointId, i64)>);
    let mut blocks: Vec<Block> = Vec::new();

    for (n, line) in lines(text) {
        let (key, rest) = keyed(line).ok_or_else(|| err(n, "expected `key: value`"))?;
        if !blocks.is_empty() && !matches!(key, "sq" | "rank") {
            return Err(err(n, format!("`{key}:` after the first order block")));
        }
        if lat_lines.take(n, key, rest)? {
            continue;
        }
        let toks: Vec<&str> = rest.split_whitespace().collect();
        match key {
            "lattice" => {
                if lattice.is_some() {
                    return Err(err(n, "duplicate `lattice:` line"));
                }
                let base = base.ok_or_else(|| err(n, "lattice references need a file location"))?;
                let path = base.join(rest);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| err(n, format!("cannot read {}: {e}", path.display())))?;
                lattice = Some(Arc::new(parse_lattice(&text)?));
            }
            "points" => {
                if points.is_some() {
                    return Err(err(n, "duplicate `points:` line"));
                }
                let ids = toks.iter().map(|t| parse_num(n, t)).collect::<Result<Vec<PointId>>>()?;
                points = Some((n, ids));
            }
            "d" => {
                let [x, y, v] = toks[..] else {
                    return Err(err(n, "expected `d: x y λ`"));
                };
                dists.push((n, parse_num(n, x)?, parse_num(n, y)?, v.to_string()));
            }
            "sq" => {
                let [b, t] = toks[..] else {
                    return Err(err(n, "expected `sq: BOTTOM TOP`"));
                };
                blocks.push((n, b.into(), t.into(), Vec::new()));
            }
            "rank" => {
                let [p, r] = toks[..] else {
                    return Err(err(n, "expected `rank: REP INT`"));
                };
                let block = blocks.last_mut().ok_or_else(|| err(n, "`rank:` outside an order block"))?;
                block.3.push((n, parse_num(n, p)?, parse_num(n, r)?));
            }
            _ => return Err(err(n, format!("unknown key `{key}`"))),
        }
    }

    let lattice = match (lattice, lat_lines.present()) {
        (Some(_), true) => return Err(err(1, "both a lattice reference and an inline lattice")),
        (Some(l), false) => l,
        (None, true) => Arc::new(lat_lines.build()?),
        (None, false) => return Err(err(1, "missing lattice (`lattice: PATH` or `elements:`)")),
    };
    let (pline, ids) = points.ok_or_else(|| err(1, "missing `points:` line"))?;
    let index: BTreeMap<PointId, usize> = ids.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    if index.len() != ids.len() {
        return Err(err(pline, "duplicate point id"));
    }
    let lookup =
        |line: usize, p: PointId| index.get(&p).copied().ok_or_else(|| err(line, format!("unknown point {p}")));

    let k = ids.len();
    let mut d: Vec<Option<Elem>> = vec![None; k * k];
    for i in 0..k {
        d[i * k + i] = Some(lattice.bottom());
    }
    for (n, x, y, v) in dists {
        let (i, j) = (lookup(n, x)?, lookup(n, y)?);
        let v = parse_elem(&lattice, n, &v)?;
        if i == j {
            d[i * k + i] = Some(v);
            continue;
        }
        for (a, b) in [(i, j), (j, i)] {
            if d[a * k + b].is_some_and(|old| old != v) {
                return Err(err(n, format!("conflicting distance for {x} {y}")));
            }
            d[a * k + b] = Some(v);
        }
    }
    if let Some(pos) = d.iter().position(Option::is_none) {
        return Err(err(pline, format!("missing `d:` line for {} {}", ids[pos / k], ids[pos % k])));
    }
    let space = LambdaSpace::new(lattice.clone(), ids, d.into_iter().map(Option::unwrap).collect())?;

    let mut orders = Vec::with_capacity(blocks.len());
    for (n, b, t, ranks) in blocks {
        let (bottom, top) = (parse_elem(&lattice, n, &b)?, parse_elem(&lattice, n, &t)?);
        let classes = space.partition(bottom);
        let mut by_class: BTreeMap<u32, i64> = BTreeMap::new();
        for (rn, p, r) in ranks {
            let c = classes[lookup(rn, p)?];
            if by_class.insert(c, r).is_some() {
                return Err(err(rn, format!("second rank for the class of point {p}")));
            }
        }
        let per_point = classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                by_class
                    .get(c)
                    .copied()
                    .ok_or_else(|| err(n, format!("no rank for the class of point {}", space.points()[i])))
            })
            .collect::<Result<Vec<i64>>>()?;
        orders.push(SubquotientOrder::from_ranks(&space, bottom, top, &per_point)?);
    }
    Ok(StructureFile { space, orders })
}

/// Parses a space file; order blocks are rejected.
pub fn parse_space(text: &str, base: Option<&Path>) -> Result<LambdaSpace> {
    let f = parse_structure(text, base)?;
    if !f.orders.is_empty() {
        return Err(err(1, "order blocks in a space file"));
    }
    Ok(f.space)
}

pub fn read_space(path: &Path) -> Result<LambdaSpace> {
    parse_space(&read_text(path)?, path.parent())
}

pub fn read_structure(path: &Path) -> Result<StructureFile> {
    parse_structure(&read_text(path)?, path.parent())
}

/// Self-contained space text (the lattice is written inline).
pub fn write_space(space: &LambdaSpace) -> String {
    write_structure(space, &[])
}

/// Self-contained structure text; points keep their stored order.
pub fn write_structure(space: &LambdaSpace, orders: &[SubquotientOrder]) -> String {
    let lat = space.lattice();
    let mut out = String::new();
    write_lattice_lines(&mut out, lat);
    let ids = space.points();
    let _ = writeln!(out, "points: {}", ids.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "));
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let _ = writeln!(out, "d: {} {} {}", ids[i], ids[j], lat.name(space.dist(i, j)));
        }
    }
    for o in orders {
        let _ = writeln!(out, "sq: {} {}", lat.name(o.bottom()), lat.name(o.top()));
        let classes = space.partition(o.bottom());
        let mut reps: BTreeMap<u32, (PointId, u32)> = BTreeMap::new();
        for (i, &c) in classes.iter().enumerate() {
            let e = reps.entry(c).or_insert((ids[i], o.key(i).rank));
            if ids[i] < e.0 {
                *e = (ids[i], o.key(i).rank);
            }
        }
        let mut rows: Vec<(PointId, u32)> = reps.into_values().collect();
        rows.sort_unstable();
        for (p, r) in rows {
            let _ = writeln!(out, "rank: {p} {r}");
        }
    }
    out
}

// ------------------------------------------------------------------- perm

pub fn parse_perm(text: &str) -> Result<PermStructure> {
    let mut it = lines(text);
    let (hn, header) = it.next().ok_or_else(|| err(1, "missing `n N` header"))?;
    let [n, count] = header.split_whitespace().collect::<Vec<_>>()[..] else {
        return Err(err(hn, "expected header `n N`"));
    };
    let (n, count): (usize, usize) = (parse_num(hn, n)?, parse_num(hn, count)?);
    let mut orders = vec![Vec::with_capacity(count); n];
    let mut last = hn;
    for (ln, line) in it {
        last = ln;
        let ranks = line.split_whitespace().map(|t| parse_num::<u32>(ln, t)).collect::<Result<Vec<_>>>()?;
        if ranks.len() != n {
            return Err(err(ln, format!("expected {n} ranks, found {}", ranks.len())));
        }
        if orders.first().is_some_and(|o| o.len() == count) {
            return Err(err(ln, format!("more than {count} points")));
        }
        for (o, r) in orders.iter_mut().zip(ranks) {
            o.push(r);
        }
    }
    if n > 0 && orders[0].len() != count {
        return Err(err(last, format!("expected {count} points, found {}", orders[0].len())));
    }
    if n == 0 && count > 0 {
        return Err(err(hn, "points without orders"));
    }
    PermStructure::new(orders)
}

pub fn write_perm(p: &PermStructure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", p.dimension(), p.len());
    for x in 0..p.len() {
        let row: Vec<String> = (0..p.dimension()).map(|i| p.rank(i, x).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_perm(path: &Path) -> Result<PermStructure> {
    parse_perm(&read_text(path)?)
}

// ------------------------------------------------------------------ cover

pub fn parse_cover(text: &str, lat: &FiniteLattice) -> Result<ChainCover> {
    let mut chains = Vec::new();
    for (n, line) in lines(text) {
        match keyed(line) {
            Some(("chain", rest)) => {
                chains.push(rest.split_whitespace().map(|t| parse_elem(lat, n, t)).collect::<Result<Vec<_>>>()?)
            }
            _ => return Err(err(n, "expected `chain: a b c`")),
        }
    }
    Ok(ChainCover { chains })
}

pub fn write_cover(cover: &ChainCover, lat: &FiniteLattice) -> String {
    let mut out = String::new();
    for c in &cover.chains {
        let names: Vec<&str> = c.iter().map(|&e| lat.name(e)).collect();
        let _ = writeln!(out, "chain: {}", names.join(" "));
    }
    out
}

pub fn read_cover(path: &Path, lat: &FiniteLattice) -> Result<ChainCover> {
    parse_cover(&read_text(path)?, lat)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N5: &str =
        "# pentagon\nelements: 0 a b c 1\ncover: 0 < a\ncover: a < b\ncover: b < 1\ncover: 0 < c\ncover: c < 1\n";

    #[test]
    fn lattice_round_trip() {
        let l = parse_lattice(N5).unwrap();
        assert_eq!(l.len(), 5);
        assert!(!l.is_distributive());
        let text = write_lattice(&l);
        assert_eq!(write_lattice(&parse_lattice(&text).unwrap()), text);
    }

    #[test]
    fn lattice_errors_carry_line_numbers() {
        let e = parse_lattice("elements: 0 1\ncover 0 < 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(parse_lattice("elements: 0 0\n").is_err());
        assert!(parse_lattice("elements: 0 1\ncover: 0 < 2\n").is_err());
    }

    fn sample_structure() -> String {
        "elements: 0 e 1\ncover: 0 < e\ncover: e < 1\npoints: 0 1 2\n\
         d: 0 1 e\nd: 0 2 1\nd: 1 2 1\nsq: 0 e\nrank: 0 1\nrank: 1 0\nrank: 2 0\nsq: e 1\nrank: 0 0\nrank: 2 1\n"
            .to_string()
    }

    #[test]
    fn structure_round_trip() {
        let f = parse_structure(&sample_structure(), None).unwrap();
        assert_eq!(f.space.len(), 3);
        assert_eq!(f.orders.len(), 2);
        assert!(f.orders[0].less(1, 0));
        assert!(f.orders[1].less(1, 2));
        let text = write_structure(&f.space, &f.orders);
        assert_eq!(text, sample_structure());
    }

    #[test]
    fn missing_distance_is_reported() {
        let text = "elements: 0 1\ncover: 0 < 1\npoints: 0 1 2\nd: 0 1 1\nd: 0 2 1\n";
        assert!(matches!(parse_space(text, None), Err(Error::Parse { .. })));
    }

    #[test]
    fn missing_rank_is_reported() {
        let text = "elements: 0 1\ncover: 0 < 1\npoints: 0 1\nd: 0 1 1\nsq: 0 1\nrank: 0 0\n";
        assert!(parse_structure(text, None).is_err());
    }

    #[test]
    fn perm_round_trip() {
        let p = PermStructure::new(vec![vec![2, 0, 1], vec![0, 1, 2]]).unwrap();
        let text = write_perm(&p);
        assert_eq!(text, "2 3\n2 0\n0 1\n1 2\n");
        assert_eq!(parse_perm(&text).unwrap(), p);
        assert!(parse_perm("2 3\n0 0\n1 1\n").is_err());
        assert!(parse_perm("1 2\n0\n0\n").is_err());
    }

    #[test]
    fn cover_round_trip() {
        let l = FiniteLattice::boolean(2);
        let text = "chain: a\nchain: b\n";
        let c = parse_cover(text, &l).unwrap();
        assert_eq!(write_cover(&c, &l), text);
    }
}
