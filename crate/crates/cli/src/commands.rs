//! One function per subcommand.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use permlat_core::generic::{extension_property_check, generate_generic, homogeneity_check, GenerationConfig};
use permlat_core::io::{
    parse_lattice, read_cover, read_lattice, read_perm, read_space, read_structure, read_text, write_lattice,
    write_perm, write_space, write_structure,
};
use permlat_core::lattice::{
    dimension_bounds, enumerate_distributive_lattices, enumerate_lattices, lambda_zero, meet_irreducibles,
    SublatticeWitness,
};
use permlat_core::permstruct::{
    cameron_enumeration, codebook_mismatches, decode_relations, encode_orders, profile, CoverChoice,
};
use permlat_core::sqorder::{compose_lex, split_convex_linear, validate_sqorder};
use permlat_core::ultrametric::{amalgamation_failure_probe_with, canonical_amalgam, validate_space};
use permlat_core::{Elem, FiniteLattice, OrderedLambdaStructure};
use serde_json::{json, Value};

use crate::manifest::{digest_file, sha256_hex, FileDigest, RunManifest};
use crate::{CheckCmd, Cli, Command, LatticeCmd, Outcome, SpaceCmd, SqCmd};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] permlat_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("replay: {0}")]
    Replay(String),
}

type Result<T> = std::result::Result<T, CliError>;

/// Per-invocation settings shared by the command functions.
struct Ctx {
    json: bool,
    /// Suppress reports (used when replaying).
    quiet: bool,
    argv: Vec<String>,
    config: Value,
}

impl Ctx {
    /// Prints a report: JSON with `--json`, the human text otherwise.
    fn report(&self, value: Value, human: &str) {
        if self.quiet {
            return;
        }
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        } else {
            print!("{human}");
        }
    }

    /// Writes a generated artifact to `out` (plus its manifest) or to
    /// standard output, then the report. When the artifact goes to standard
    /// output the human summary goes to standard error; with `--json` the
    /// artifact is embedded in the report instead.
    fn artifact(
        &self,
        command: &str,
        out: Option<&Path>,
        text: String,
        mut report: Value,
        summary: &str,
        inputs: &[&Path],
    ) -> Result<()> {
        match out {
            Some(path) => {
                std::fs::write(path, &text)?;
                let manifest = RunManifest {
                    command: command.into(),
                    argv: self.argv.clone(),
                    cwd: std::env::current_dir()?.display().to_string(),
                    config: self.config.clone(),
                    version: env!("CARGO_PKG_VERSION").into(),
                    inputs: inputs.iter().map(|p| digest_file(p)).collect::<Result<_>>()?,
                    output: FileDigest { path: path.display().to_string(), sha256: sha256_hex(text.as_bytes()) },
                };
                manifest.write(path)?;
                self.report(report, summary);
            }
            None if self.json => {
                report["artifact"] = Value::String(text);
                self.report(report, "");
            }
            None => {
                print!("{text}");
                if !self.quiet {
                    eprint!("{summary}");
                }
            }
        }
        Ok(())
    }
}

pub fn run(cli: Cli, argv: &[String]) -> Result<Outcome> {
    let ctx = Ctx { json: cli.json, quiet: false, argv: argv.to_vec(), config: serde_json::to_value(&cli.command)? };
    dispatch(&ctx, cli.command)
}

fn dispatch(ctx: &Ctx, command: Command) -> Result<Outcome> {
    match command {
        Command::Lattice(LatticeCmd::Check { file }) => lattice_check(ctx, &file),
        Command::Lattice(LatticeCmd::Bounds { file }) => lattice_bounds(ctx, &file),
        Command::Lattice(LatticeCmd::Enum { max, distributive, list }) => lattice_enum(ctx, max, distributive, list),
        Command::Space(SpaceCmd::Check { file }) => space_check(ctx, &file),
        Command::Space(SpaceCmd::Amalgam { base, first, second, out }) => {
            space_amalgam(ctx, &base, &first, &second, out.as_deref())
        }
        Command::Space(SpaceCmd::Probe { lattice, max_base, max_new }) => space_probe(ctx, &lattice, max_base, max_new),
        Command::Sq(SqCmd::Check { file }) => sq_check(ctx, &file),
        Command::Sq(SqCmd::Compose { file, lo, hi, out }) => sq_compose(ctx, &file, lo, hi, out.as_deref()),
        Command::Sq(SqCmd::Split { file, order, at, out }) => sq_split(ctx, &file, order, &at, out.as_deref()),
        Command::Gen(a) => gen(ctx, &a),
        Command::Check(CheckCmd::Ext(a)) => check_ext(ctx, &a.input, a.k),
        Command::Check(CheckCmd::Hom(a)) => check_hom(ctx, &a.input, a.k),
        Command::Encode(a) => encode(ctx, &a),
        Command::Decode(a) => decode(ctx, &a.input),
        Command::Profile(a) => profile_cmd(ctx, &a.input, a.k),
        Command::Cameron(a) => cameron(ctx, a.size, a.seed),
        Command::Replay { manifest } => replay(ctx, &manifest),
    }
}

fn names(lat: &FiniteLattice, elems: impl IntoIterator<Item = Elem>) -> Vec<String> {
    elems.into_iter().map(|e| lat.name(e).to_string()).collect()
}

fn witness_json(lat: &FiniteLattice, w: &SublatticeWitness) -> Value {
    json!({ "kind": w.kind, "elements": names(lat, w.elements) })
}

fn describe_witness(lat: &FiniteLattice, w: &SublatticeWitness) -> String {
    format!("{:?} on {}", w.kind, names(lat, w.elements).join(" "))
}

// ---------------------------------------------------------------- lattice

fn lattice_check(ctx: &Ctx, file: &Path) -> Result<Outcome> {
    let text = read_text(file)?;
    let lat = match parse_lattice(&text) {
        Ok(l) => l,
        Err(permlat_core::Error::InvalidLattice(report)) => {
            ctx.report(
                json!({ "lattice": false, "distributive": false, "report": report }),
                &format!("not a lattice\n{report}\n"),
            );
            return Ok(Outcome::Failed);
        }
        Err(e) => return Err(e.into()),
    };
    let d = lat.distributivity();
    let mi = names(&lat, meet_irreducibles(&lat));
    let mut human = format!("lattice with {} elements\n", lat.len());
    match &d.witness {
        Some(w) => {
            let _ = writeln!(human, "not distributive: {}", describe_witness(&lat, w));
        }
        None => {
            let _ = writeln!(human, "distributive");
        }
    }
    let _ = writeln!(human, "meet-irreducible: {}", mi.join(" "));
    ctx.report(
        json!({
            "lattice": true,
            "elements": lat.names(),
            "distributive": d.distributive,
            "witness": d.witness.as_ref().map(|w| witness_json(&lat, w)),
            "meet_irreducibles": mi,
            "lambda_zero": names(&lat, lambda_zero(&lat)),
        }),
        &human,
    );
    Ok(if d.distributive { Outcome::Ok } else { Outcome::Failed })
}

fn lattice_bounds(ctx: &Ctx, file: &Path) -> Result<Outcome> {
    let lat = read_lattice(file)?;
    let b = dimension_bounds(&lat)?;
    let cover: Vec<Vec<String>> = b.cover.chains.iter().map(|c| names(&lat, c.iter().copied())).collect();
    let mut human = format!("width {}\nlower bound {}\nupper bound {}\n", b.width, b.lower, b.upper);
    for c in &cover {
        let _ = writeln!(human, "chain: {}", c.join(" "));
    }
    for n in &b.notes {
        let _ = writeln!(human, "note: {n}");
    }
    ctx.report(
        json!({
            "width": b.width,
            "lower": b.lower,
            "upper": b.upper,
            "cover": cover,
            "exhaustive": b.exhaustive,
            "notes": b.notes,
        }),
        &human,
    );
    Ok(Outcome::Ok)
}

fn lattice_enum(ctx: &Ctx, max: usize, distributive: bool, list: bool) -> Result<Outcome> {
    let all = if distributive { enumerate_distributive_lattices(max)? } else { enumerate_lattices(max)? };
    let mut counts = vec![0usize; max + 1];
    for l in &all {
        counts[l.len()] += 1;
    }
    let mut human = String::new();
    for (size, c) in counts.iter().enumerate().skip(2) {
        let _ = writeln!(human, "size {size}: {c}");
    }
    let listed: Vec<String> = if list { all.iter().map(write_lattice).collect() } else { Vec::new() };
    for t in &listed {
        let _ = write!(human, "\n{t}");
    }
    let counts_json: Vec<Value> =
        counts.iter().enumerate().skip(2).map(|(size, c)| json!({ "size": size, "count": c })).collect();
    ctx.report(
        json!({ "max": max, "distributive_only": distributive, "counts": counts_json, "total": all.len(), "lattices": listed }),
        &human,
    );
    Ok(Outcome::Ok)
}

// ------------------------------------------------------------------ space

fn space_check(ctx: &Ctx, file: &Path) -> Result<Outcome> {
    let space = read_space(file)?;
    let report = validate_space(&space);
    let valid = report.is_valid();
    let human = if valid { format!("valid space with {} points\n", space.len()) } else { format!("{report}\n") };
    ctx.report(json!({ "valid": valid, "report": report }), &human);
    Ok(if valid { Outcome::Ok } else { Outcome::Failed })
}

fn space_amalgam(ctx: &Ctx, base: &Path, first: &Path, second: &Path, out: Option<&Path>) -> Result<Outcome> {
    let (b, f1, f2) = (read_space(base)?, read_space(first)?, read_space(second)?);
    let a = canonical_amalgam(&b, &f1, &f2)?;
    let valid = a.space.is_valid();
    let mut summary = format!("amalgam with {} points\n", a.space.len());
    for (p2, p1) in &a.identified {
        let _ = writeln!(summary, "identified {p2} with {p1}");
    }
    let report = json!({ "points": a.space.len(), "identified": a.identified, "valid": valid });
    ctx.artifact("space amalgam", out, write_space(&a.space), report, &summary, &[base, first, second])?;
    Ok(if valid { Outcome::Ok } else { Outcome::Failed })
}

fn space_probe(ctx: &Ctx, lattice: &Path, max_base: usize, max_new: usize) -> Result<Outcome> {
    let lat = Arc::new(read_lattice(lattice)?);
    match amalgamation_failure_probe_with(&lat, max_base, max_new) {
        None => {
            ctx.report(
                json!({ "failure": Value::Null, "max_base": max_base, "max_new": max_new }),
                &format!("no amalgamation failure with at most {max_base} base and {max_new} new points\n"),
            );
            Ok(Outcome::Ok)
        }
        Some(inst) => {
            let (b, f1, f2) = (write_space(&inst.base), write_space(&inst.f1), write_space(&inst.f2));
            ctx.report(
                json!({ "failure": { "base": b, "first": f1, "second": f2 }, "max_base": max_base, "max_new": max_new }),
                &format!("amalgamation fails\n# base\n{b}# first\n{f1}# second\n{f2}"),
            );
            Ok(Outcome::Failed)
        }
    }
}

// --------------------------------------------------------------------- sq

fn sq_check(ctx: &Ctx, file: &Path) -> Result<Outcome> {
    let f = read_structure(file)?;
    let space_report = validate_space(&f.space);
    let reports: Vec<_> = f.orders.iter().map(|o| validate_sqorder(&f.space, o)).collect();
    let valid = space_report.is_valid() && reports.iter().all(|r| r.is_valid());
    let mut human = String::new();
    if !space_report.is_valid() {
        let _ = writeln!(human, "{space_report}");
    }
    for (i, r) in reports.iter().enumerate() {
        let _ = writeln!(human, "order {i}: {}", if r.is_valid() { "valid".to_string() } else { r.to_string() });
    }
    ctx.report(json!({ "valid": valid, "space": space_report, "orders": reports }), &human);
    Ok(if valid { Outcome::Ok } else { Outcome::Failed })
}

fn order_index(len: usize, i: usize) -> Result<usize> {
    if i < len {
        Ok(i)
    } else {
        Err(CliError::Usage(format!("order index {i} out of range (file has {len} orders)")))
    }
}

fn sq_compose(ctx: &Ctx, file: &Path, lo: usize, hi: usize, out: Option<&Path>) -> Result<Outcome> {
    let f = read_structure(file)?;
    let (lo, hi) = (order_index(f.orders.len(), lo)?, order_index(f.orders.len(), hi)?);
    let c = compose_lex(&f.space, &f.orders[lo], &f.orders[hi])?;
    let lat = f.space.lattice();
    let summary = format!("composed order from {} to {}\n", lat.name(c.bottom()), lat.name(c.top()));
    let report = json!({ "bottom": lat.name(c.bottom()), "top": lat.name(c.top()) });
    ctx.artifact("sq compose", out, write_structure(&f.space, &[c]), report, &summary, &[file])?;
    Ok(Outcome::Ok)
}

fn sq_split(ctx: &Ctx, file: &Path, order: usize, at: &str, out: Option<&Path>) -> Result<Outcome> {
    let f = read_structure(file)?;
    let i = order_index(f.orders.len(), order)?;
    let lat = f.space.lattice().clone();
    let e = lat.parse_elem(at)?;
    let (within, between) = split_convex_linear(&f.space, &f.orders[i], e)?;
    let summary = format!(
        "split into {}:{} and {}:{}\n",
        lat.name(within.bottom()),
        lat.name(within.top()),
        lat.name(between.bottom()),
        lat.name(between.top())
    );
    let report = json!({
        "within": [lat.name(within.bottom()), lat.name(within.top())],
        "between": [lat.name(between.bottom()), lat.name(between.top())],
    });
    ctx.artifact("sq split", out, write_structure(&f.space, &[within, between]), report, &summary, &[file])?;
    Ok(Outcome::Ok)
}

// ---------------------------------------------------------------- generic

fn parse_signature(lat: &FiniteLattice, list: &str) -> Result<Vec<(Elem, Elem)>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (b, t) =
                pair.split_once(':').ok_or_else(|| CliError::Usage(format!("expected BOTTOM:TOP, found `{pair}`")))?;
            Ok((lat.parse_elem(b.trim())?, lat.parse_elem(t.trim())?))
        })
        .collect()
}

fn gen(ctx: &Ctx, a: &crate::GenArgs) -> Result<Outcome> {
    let lat = Arc::new(read_lattice(&a.lattice)?);
    let signature = parse_signature(&lat, &a.orders)?;
    let cfg = GenerationConfig { seed: a.seed, target_size: a.size, saturation_depth: a.depth };
    let g = generate_generic(lat, &signature, cfg)?;
    let ext = &g.report.extension;
    let mut summary = format!(
        "{} points ({} scheduled, {} filler); depth {}: {}/{} one-point types realized\n",
        g.structure.len(),
        g.report.scheduled_points,
        g.report.filler_points,
        ext.k,
        ext.realized_types,
        ext.total_types
    );
    for l in &g.lints {
        let _ = writeln!(summary, "lint: {l}");
    }
    let report = json!({ "config": cfg, "report": g.report, "lints": g.lints });
    let text = write_structure(&g.structure.space, &g.structure.orders);
    ctx.artifact("gen", a.out.as_deref(), text, report, &summary, &[&a.lattice])?;
    Ok(Outcome::Ok)
}

fn load_structure(path: &Path) -> Result<OrderedLambdaStructure> {
    let f = read_structure(path)?;
    Ok(OrderedLambdaStructure::new(f.space, f.orders)?)
}

fn check_ext(ctx: &Ctx, input: &Path, k: usize) -> Result<Outcome> {
    let s = load_structure(input)?;
    let r = extension_property_check(&s, k);
    let mut human = format!(
        "k = {}: {}/{} one-point types realized over {} subsets (ratio {:.6})\n",
        r.k, r.realized_types, r.total_types, r.subsets, r.ratio
    );
    for m in &r.missing {
        let _ = writeln!(human, "missing over {:?}: distances {:?}, positions {:?}", m.over, m.distances, m.positions);
    }
    let ok = r.saturated();
    ctx.report(json!({ "saturated": ok, "report": r }), &human);
    Ok(if ok { Outcome::Ok } else { Outcome::Failed })
}

fn check_hom(ctx: &Ctx, input: &Path, k: usize) -> Result<Outcome> {
    let s = load_structure(input)?;
    let r = homogeneity_check(&s, k);
    let mut human = format!(
        "m = {}: {} tuples, {} isomorphic pairs, {} unextendable\n",
        r.m, r.tuples, r.isomorphic_pairs, r.failures
    );
    for f in &r.examples {
        let _ = writeln!(human, "{:?} -> {:?} does not extend to {}", f.from, f.to, f.witness);
    }
    let ok = r.failures == 0;
    ctx.report(json!({ "homogeneous": ok, "report": r }), &human);
    Ok(if ok { Outcome::Ok } else { Outcome::Failed })
}

// ------------------------------------------------------------ permutation

fn encode(ctx: &Ctx, a: &crate::EncodeArgs) -> Result<Outcome> {
    let s = load_structure(&a.input)?;
    let mut inputs: Vec<&Path> = vec![&a.input];
    let cover_path = PathBuf::from(&a.cover);
    let cover = if a.cover == "auto" {
        CoverChoice::Auto
    } else {
        inputs.push(&cover_path);
        CoverChoice::Given(read_cover(&cover_path, s.space.lattice())?)
    };
    let enc = encode_orders(&s, &cover, a.seed)?;
    let mismatches = codebook_mismatches(&s, &enc);
    let mut summary = format!("{} orders on {} points (bound {})\n", enc.perm.dimension(), enc.perm.len(), enc.bound);
    for (i, r) in enc.roles.iter().enumerate() {
        let _ = writeln!(summary, "order {i}: {r}");
    }
    for m in &mismatches {
        let _ = writeln!(summary, "mismatch: {m}");
    }
    let report = json!({
        "orders": enc.perm.dimension(),
        "points": enc.perm.len(),
        "bound": enc.bound,
        "cover": enc.cover,
        "roles": enc.roles,
        "codebook": enc.codebook,
        "mismatches": mismatches,
    });
    ctx.artifact("encode", a.out.as_deref(), write_perm(&enc.perm), report, &summary, &inputs)?;
    Ok(if mismatches.is_empty() { Outcome::Ok } else { Outcome::Failed })
}

fn decode(ctx: &Ctx, input: &Path) -> Result<Outcome> {
    let p = read_perm(input)?;
    let d = decode_relations(&p);
    let mut human = format!(
        "{} points, {} orders, {} orientation classes realized\n{} relations:\n",
        d.sample_size,
        d.orders,
        d.realized_classes.len(),
        d.relations.len()
    );
    for r in &d.relations {
        let _ = writeln!(human, "  {}: {} blocks, {} pairs, masks {:?}", r.name, r.blocks, r.pairs, r.classes);
    }
    let edges: Vec<String> = d.hasse.iter().map(|(a, b)| format!("R{a} < R{b}")).collect();
    let _ = writeln!(human, "covers: {}", edges.join(", "));
    match d.distributive {
        Some(true) => human.push_str("distributive\n"),
        Some(false) => human.push_str("not distributive\n"),
        None => human.push_str("too many relations to build the lattice\n"),
    }
    for (r, c) in &d.convex_counts {
        let _ = writeln!(human, "  R{r} is convex for {c} of {} orders", d.orders);
    }
    ctx.report(serde_json::to_value(&d)?, &human);
    Ok(Outcome::Ok)
}

fn profile_cmd(ctx: &Ctx, input: &Path, k: usize) -> Result<Outcome> {
    let p = read_perm(input)?;
    let prof = profile(&p, k);
    let mut human = format!(
        "k = {}: {} patterns over {} {} tuples\n",
        prof.k,
        prof.counts.len(),
        prof.tuples,
        if prof.sampled { "sampled" } else { "ordered" }
    );
    for (pattern, c) in &prof.counts {
        let _ = writeln!(human, "{pattern} {c}");
    }
    ctx.report(serde_json::to_value(&prof)?, &human);
    Ok(Outcome::Ok)
}

fn cameron(ctx: &Ctx, size: usize, seed: u64) -> Result<Outcome> {
    let r = cameron_enumeration(size, seed)?;
    let mut human = String::new();
    for e in &r.entries {
        let _ = writeln!(
            human,
            "{} {:?}: {} relations, {}, {} patterns",
            e.lattice,
            e.pattern,
            e.decoded_relations,
            if e.kept { "kept" } else { "dropped" },
            e.profile.len()
        );
    }
    let _ = writeln!(human, "kept {}, distinct profiles {}", r.kept, r.distinct_profiles);
    ctx.report(serde_json::to_value(&r)?, &human);
    Ok(Outcome::Ok)
}

// ----------------------------------------------------------------- replay

fn replay(ctx: &Ctx, path: &Path) -> Result<Outcome> {
    let m = RunManifest::read(path)?;
    let version = env!("CARGO_PKG_VERSION");
    if m.version != version {
        return Err(CliError::Replay(format!("manifest from version {}, this is {version}", m.version)));
    }
    let cwd = PathBuf::from(&m.cwd);
    if cwd.is_dir() {
        std::env::set_current_dir(&cwd)?;
    }
    let mut problems = Vec::new();
    for input in &m.inputs {
        match digest_file(Path::new(&input.path)) {
            Ok(d) if d.sha256 == input.sha256 => {}
            Ok(_) => problems.push(format!("input {} changed", input.path)),
            Err(e) => problems.push(format!("input {}: {e}", input.path)),
        }
    }
    let tmp = std::env::temp_dir().join(format!("permlat-replay-{}-{}", std::process::id(), m.output.sha256));
    let argv = m.argv_with_out(&tmp)?;
    let mut full = vec!["permlat".to_string()];
    full.extend(argv.iter().cloned());
    let cli = <Cli as clap::Parser>::try_parse_from(&full).map_err(|e| CliError::Replay(e.to_string()))?;
    let inner = Ctx { json: false, quiet: true, argv, config: serde_json::to_value(&cli.command)? };
    let ran = dispatch(&inner, cli.command);
    let produced = std::fs::read(&tmp).ok();
    let _ = std::fs::remove_file(&tmp);
    let _ = std::fs::remove_file(crate::manifest::manifest_path(&tmp));
    ran?;
    let sha = produced.as_deref().map(sha256_hex);
    let identical = sha.as_deref() == Some(m.output.sha256.as_str());
    if !identical {
        problems.push(format!("output differs from {}", m.output.path));
    }
    let human = if problems.is_empty() {
        format!("reproduced {} byte for byte\n", m.output.path)
    } else {
        problems.iter().map(|p| format!("{p}\n")).collect()
    };
    ctx.report(
        json!({ "command": m.command, "identical": identical, "expected": m.output.sha256, "actual": sha, "problems": problems }),
        &human,
    );
    Ok(if problems.is_empty() { Outcome::Ok } else { Outcome::Failed })
}
