//! Command-line front end: a workspace of named declarations and a fixed set
//! of verbs with line-oriented, deterministic output.
//!
//! Exit codes: 0 on success, 1 on a domain error (unknown name, invalid input
//! for the engine), 2 on a usage error (unknown verb, malformed arguments).

mod workspace;

pub use workspace::{parse_partition, parse_workspace, ParseError, Workspace};

use std::fmt::Write as _;

use crate::backforth::{check_nadel_finite, equiv_alpha, friedberg_enumerate, iso, orbits, scott_rank, scott_sentence};
use crate::logic::{diagram, enumerate_structures, substructure, Elem, FinStructure, Signature};
use crate::operators::{
    apply_operator, check_monotone, field_arith, field_edge_root, flo_to_fvs, fvs_dimension, graph_to_field, graph_to_lo,
    tree_to_graph, ArithOp, Budget, EnumOperator, FactSet, FieldElement,
};
use crate::pgroups::{group_length, ulm_bruteforce, ulm_from_partition, ulm_theorem_check, Partition};
use crate::trees::{
    build_rank_homogeneous, homogeneity_report, is_thin_profile, iso_by_profile, kb_order, rank_profile,
    FinTree, LevelRankProfile,
};

pub const DEFAULT_BUDGET: u32 = 3;

/// Every verb, in the order they are documented.
pub const VERBS: &[&str] = &[
    "rank",
    "iso",
    "orbits",
    "scott-sentence",
    "enumerate",
    "embed",
    "edge-root",
    "ulm",
    "ulm-check",
    "kb",
    "tree-rank",
    "thin",
    "homog",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedKind {
    FloFvs,
    GraphField,
    GraphLo,
    TreeGraph,
}

impl EmbedKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "flo-fvs" => EmbedKind::FloFvs,
            "graph-field" => EmbedKind::GraphField,
            "graph-lo" => EmbedKind::GraphLo,
            "tree-graph" => EmbedKind::TreeGraph,
            _ => return None,
        })
    }

    fn operator(self) -> Box<dyn EnumOperator> {
        match self {
            EmbedKind::FloFvs => Box::new(flo_to_fvs()),
            EmbedKind::GraphField => Box::new(graph_to_field()),
            EmbedKind::GraphLo => Box::new(graph_to_lo()),
            EmbedKind::TreeGraph => Box::new(tree_to_graph()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Rank(String),
    Iso(String, String),
    Orbits(String, usize),
    ScottSentence(String),
    Enumerate { sig: String, max_size: usize, limit: Option<usize> },
    Embed { kind: EmbedKind, name: String, budget: u32 },
    EdgeRoot { graph: String, i: Elem, j: Elem, budget: u32 },
    Ulm(Partition),
    UlmCheck { p: u64, max_log: u32 },
    Kb(String),
    TreeRank(String),
    /// A profile file, optionally with a witness count and depth to build a tree from it.
    Thin { path: String, build: Option<(u64, usize)> },
    /// A tree and witness count, optionally compared by profile against a second tree.
    Homog { tree: String, k: u64, against: Option<String> },
}

/// What a command printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub text: String,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { code: 0, text }
    }

    fn domain(msg: impl std::fmt::Display) -> Self {
        Report { code: 1, text: format!("error: {msg}\n") }
    }

    pub fn usage(msg: impl std::fmt::Display) -> Self {
        Report { code: 2, text: format!("usage error: {msg}\n") }
    }
}

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("{what} must be a natural number, got `{s}`"))
}

/// Splits positional arguments from `--flag value` pairs, rejecting flags
/// not in `allowed`.
fn split_flags<'a>(args: &'a [String], allowed: &[&str]) -> Result<(Vec<&'a str>, Vec<(&'a str, &'a str)>), String> {
    let mut pos = Vec::new();
    let mut flags = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if let Some(flag) = a.strip_prefix("--") {
            if !allowed.contains(&flag) {
                return Err(format!("unknown flag `--{flag}`"));
            }
            let v = it.next().ok_or_else(|| format!("flag `--{flag}` needs a value"))?;
            flags.push((flag, v.as_str()));
        } else {
            pos.push(a.as_str());
        }
    }
    Ok((pos, flags))
}

fn flag<'a>(flags: &[(&str, &'a str)], name: &str) -> Option<&'a str> {
    flags.iter().rev().find(|(f, _)| *f == name).map(|(_, v)| *v)
}

fn key_value<'a>(arg: &'a str, key: &str) -> Result<&'a str, String> {
    arg.strip_prefix(key).and_then(|r| r.strip_prefix('=')).ok_or_else(|| format!("expected `{key}=…`, got `{arg}`"))
}

impl Command {
    /// Parses a verb and its arguments.
    pub fn parse(args: &[String]) -> Result<Command, String> {
        let (verb, rest) = args.split_first().ok_or("missing verb")?;
        let allowed: &[&str] = match verb.as_str() {
            "enumerate" => &["limit"],
            "embed" | "edge-root" => &["budget"],
            "thin" => &["k", "depth"],
            "homog" => &["k", "against"],
            _ => &[],
        };
        let (pos, flags) = split_flags(rest, allowed)?;
        let arity = |n: usize| {
            if pos.len() == n {
                Ok(())
            } else {
                Err(format!("`{verb}` takes {n} argument(s), got {}", pos.len()))
            }
        };
        let budget = || flag(&flags, "budget").map_or(Ok(DEFAULT_BUDGET), |b| number(b, "budget"));
        let cmd = match verb.as_str() {
            "rank" => {
                arity(1)?;
                Command::Rank(pos[0].into())
            }
            "iso" => {
                arity(2)?;
                Command::Iso(pos[0].into(), pos[1].into())
            }
            "orbits" => {
                arity(2)?;
                Command::Orbits(pos[0].into(), number(pos[1], "tuple length")?)
            }
            "scott-sentence" => {
                arity(1)?;
                Command::ScottSentence(pos[0].into())
            }
            "enumerate" => {
                arity(2)?;
                let limit = flag(&flags, "limit").map(|l| number(l, "limit")).transpose()?;
                Command::Enumerate { sig: pos[0].into(), max_size: number(pos[1], "max size")?, limit }
            }
            "embed" => {
                arity(2)?;
                let kind = EmbedKind::parse(pos[0])
                    .ok_or_else(|| format!("unknown operator `{}` (flo-fvs, graph-field, graph-lo, tree-graph)", pos[0]))?;
                Command::Embed { kind, name: pos[1].into(), budget: budget()? }
            }
            "edge-root" => {
                arity(3)?;
                Command::EdgeRoot {
                    graph: pos[0].into(),
                    i: number(pos[1], "vertex")?,
                    j: number(pos[2], "vertex")?,
                    budget: budget()?,
                }
            }
            "ulm" => {
                arity(2)?;
                let text = pos.join(" ");
                Command::Ulm(parse_partition(&text).ok_or_else(|| format!("bad partition `{text}`"))?)
            }
            "ulm-check" => {
                arity(2)?;
                Command::UlmCheck {
                    p: number(key_value(pos[0], "p")?, "p")?,
                    max_log: number(key_value(pos[1], "max-log")?, "max-log")?,
                }
            }
            "kb" => {
                arity(1)?;
                Command::Kb(pos[0].into())
            }
            "tree-rank" => {
                arity(1)?;
                Command::TreeRank(pos[0].into())
            }
            "thin" => {
                arity(1)?;
                let build = match (flag(&flags, "k"), flag(&flags, "depth")) {
                    (None, None) => None,
                    (Some(k), Some(d)) => Some((number(k, "k")?, number(d, "depth")?)),
                    _ => return Err("`--k` and `--depth` go together".into()),
                };
                Command::Thin { path: pos[0].into(), build }
            }
            "homog" => {
                arity(1)?;
                let k = flag(&flags, "k").ok_or("`homog` needs `--k K`")?;
                Command::Homog { tree: pos[0].into(), k: number(k, "k")?, against: flag(&flags, "against").map(Into::into) }
            }
            other => return Err(format!("unknown verb `{other}`")),
        };
        Ok(cmd)
    }
}

fn tuple(t: &[Elem]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn structure<'a>(ws: &'a Workspace, name: &str) -> Result<&'a FinStructure, Report> {
    ws.structure(name).ok_or_else(|| Report::domain(format!("unknown structure `{name}`")))
}

fn tree<'a>(ws: &'a Workspace, name: &str) -> Result<&'a FinTree, Report> {
    ws.trees.get(name).ok_or_else(|| Report::domain(format!("unknown tree `{name}`")))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Diagrams of the substructures on `{0}`, `{0,1}`, … in turn.
fn prefix_chain(a: &FinStructure) -> Vec<FactSet> {
    (1..=a.size())
        .map(|n| {
            let (sub, _) = substructure(a, &(0..n).collect()).expect("prefix is a subset");
            FactSet::from_facts(a.signature().clone(), diagram(&sub)).expect("a diagram is consistent")
        })
        .collect()
}

/// Runs a command against a workspace.
pub fn run(cmd: &Command, ws: &Workspace) -> Report {
    match execute(cmd, ws) {
        Ok(text) => Report::ok(text),
        Err(r) => r,
    }
}

fn execute(cmd: &Command, ws: &Workspace) -> Result<String, Report> {
    let mut out = String::new();
    match cmd {
        Command::Rank(name) => {
            let a = structure(ws, name)?;
            let report = scott_rank(a);
            writeln!(out, "scott rank {name}: {}", report.structure_rank).unwrap();
            writeln!(out, "back-and-forth matches orbits: {}", yes(check_nadel_finite(a))).unwrap();
            writeln!(out, "tuple ranks:").unwrap();
            for (t, r) in &report.tuple_ranks {
                writeln!(out, "{} {r}", tuple(t)).unwrap();
            }
        }
        Command::Iso(x, y) => {
            let (a, b) = (structure(ws, x)?, structure(ws, y)?);
            match iso(a, b).map_err(Report::domain)? {
                Some(w) => writeln!(out, "isomorphic: {w}").unwrap(),
                None => {
                    writeln!(out, "not isomorphic").unwrap();
                    // the empty tuples agree at level 0 and must part by the time the relations settle
                    let bound = a.size().max(b.size()) + 2;
                    match (1..=bound).find(|&l| !equiv_alpha(a, &[], b, &[], l).unwrap_or(false)) {
                        Some(l) => writeln!(out, "separated at back-and-forth level {l}").unwrap(),
                        None => writeln!(out, "not separated up to back-and-forth level {bound}").unwrap(),
                    }
                }
            }
        }
        Command::Orbits(name, k) => {
            let a = structure(ws, name)?;
            let classes = orbits(a, *k);
            writeln!(out, "orbits of {k}-tuples in {name}: {}", classes.len()).unwrap();
            for c in classes {
                let members: Vec<String> = c.iter().map(|t| tuple(t)).collect();
                writeln!(out, "{}", members.join(" ")).unwrap();
            }
        }
        Command::ScottSentence(name) => {
            writeln!(out, "{}", scott_sentence(structure(ws, name)?)).unwrap();
        }
        Command::Enumerate { sig, max_size, limit } => {
            let s = ws.signatures.get(sig).ok_or_else(|| Report::domain(format!("unknown signature `{sig}`")))?;
            let stream = (0..=*max_size).flat_map(|n| enumerate_structures(s, n));
            let reps = friedberg_enumerate(stream, limit.unwrap_or(usize::MAX));
            writeln!(out, "representatives over {sig} up to size {max_size}: {}", reps.len()).unwrap();
            let mut listing = Workspace::default();
            for (i, r) in reps.into_iter().enumerate() {
                listing.structures.insert(format!("R{i:03}"), (sig.clone(), r));
            }
            write!(out, "{listing}").unwrap();
        }
        Command::Embed { kind, name, budget } => {
            let op = kind.operator();
            let source: FinStructure = match kind {
                EmbedKind::TreeGraph => tree(ws, name)?.to_structure().0,
                _ => structure(ws, name)?.clone(),
            };
            let input = FactSet::from_structure(&source);
            let b = Budget(*budget);
            let image = apply_operator(op.as_ref(), &input, b).map_err(Report::domain)?;
            let chain = prefix_chain(&source);
            let monotone = check_monotone(op.as_ref(), &chain, b).map_err(Report::domain)?;
            writeln!(out, "embed {} {name} budget {budget}", op.name()).unwrap();
            writeln!(out, "input facts: {}", input.len()).unwrap();
            writeln!(out, "image elements: {}", image.universe().len()).unwrap();
            writeln!(out, "image facts: {}", image.len()).unwrap();
            if *kind == EmbedKind::FloFvs {
                writeln!(out, "dimension: {}", fvs_dimension(&image, b).map_err(Report::domain)?).unwrap();
            }
            writeln!(out, "monotone on prefix chain: {}", yes(monotone)).unwrap();
            write!(out, "{image}").unwrap();
        }
        Command::EdgeRoot { graph, i, j, budget } => {
            let g = structure(ws, graph)?;
            if g.signature() != &Signature::graph() {
                return Err(Report::domain(format!("`{graph}` is not a graph")));
            }
            if *i >= g.size() || *j >= g.size() {
                return Err(Report::domain(format!("vertex out of range for `{graph}` (size {})", g.size())));
            }
            let root = field_edge_root(g, *i, *j, Budget(*budget)).map_err(Report::domain)?;
            writeln!(out, "edge-root {graph} {i} {j} budget {budget}: {}", yes(root.is_some())).unwrap();
            if let Some(r) = root {
                let square = field_arith(&r, &r, ArithOp::Mul).map_err(Report::domain)?;
                let target = FieldElement::var(*i as u128).add(&FieldElement::var(*j as u128));
                writeln!(out, "witness {r}, squares to x{i} + x{j}: {}", yes(square == target)).unwrap();
            }
        }
        Command::Ulm(p) => {
            let u = ulm_from_partition(p);
            let brute = ulm_bruteforce(&p.explicit()).map_err(Report::domain)?;
            let vals: Vec<String> = u.u.iter().map(|x| x.to_string()).collect();
            writeln!(out, "u = {}", vals.join(",")).unwrap();
            writeln!(out, "length = {}", group_length(p)).unwrap();
            writeln!(out, "socle computation agrees: {}", yes(brute == u)).unwrap();
        }
        Command::UlmCheck { p, max_log } => {
            let ok = ulm_theorem_check(*p, *max_log).map_err(Report::domain)?;
            let n = Partition::all_up_to(*p, *max_log).map_err(Report::domain)?.len();
            writeln!(out, "ulm check p={p} max-log={max_log}: {} groups, {}", n, if ok { "pass" } else { "fail" })
                .unwrap();
            if !ok {
                return Err(Report { code: 1, text: out });
            }
        }
        Command::Kb(name) => {
            let kb = kb_order(tree(ws, name)?).map_err(Report::domain)?;
            let listing: Vec<String> = kb.listing().iter().map(|n| n.to_string()).collect();
            writeln!(out, "{}", listing.join(" < ")).unwrap();
        }
        Command::TreeRank(name) => {
            let t = tree(ws, name)?;
            writeln!(out, "rank {name}: {}", t.rank().map_err(Report::domain)?).unwrap();
            for n in t.nodes() {
                writeln!(out, "{n} {}", t.rank_of(n).map_err(Report::domain)?).unwrap();
            }
            writeln!(out, "profile:").unwrap();
            write!(out, "{}", rank_profile(t)).unwrap();
        }
        Command::Thin { path, build } => {
            let text = std::fs::read_to_string(path).map_err(|e| Report::domain(format!("{path}: {e}")))?;
            let profile: LevelRankProfile = text.parse().map_err(Report::domain)?;
            let thin = is_thin_profile(&profile).map_err(Report::domain)?;
            for (n, level) in profile.levels.iter().enumerate() {
                writeln!(out, "level {n}: order type {}", level.order_type()).unwrap();
            }
            writeln!(out, "thin: {}", yes(thin)).unwrap();
            if let Some((k, depth)) = build {
                let t = build_rank_homogeneous(&profile, *k, *depth).map_err(Report::domain)?;
                writeln!(out, "built tree (k={k}, depth {depth}): {} nodes", t.len()).unwrap();
                write!(out, "{t}").unwrap();
            }
        }
        Command::Homog { tree: name, k, against } => {
            let t = tree(ws, name)?;
            let r = homogeneity_report(t, *k).map_err(Report::domain)?;
            match &r.violation {
                None => writeln!(out, "rank-homogeneous {name} k={k}: yes").unwrap(),
                Some((node, rank)) => writeln!(
                    out,
                    "rank-homogeneous {name} k={k}: no ({node} has fewer than {k} children of rank {rank})"
                )
                .unwrap(),
            }
            if let Some(other) = against {
                let u = tree(ws, other)?;
                let cmp = iso_by_profile(t, u, *k).map_err(Report::domain)?;
                writeln!(out, "same profile as {other} (k={}): {}", cmp.k, yes(cmp.matches)).unwrap();
            }
        }
    }
    Ok(out)
}

/// Parses the verb and arguments, then runs them.
pub fn run_args(args: &[String], ws: &Workspace) -> Report {
    match Command::parse(args) {
        Ok(cmd) => run(&cmd, ws),
        Err(msg) => Report::usage(msg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WS: &str = "\
signature G { E/2 }
structure A : G { size 2; E 0 1 }
structure B : G { size 2; E 1 0 }
tree T { .; 0; 1 }
";

    fn go(line: &str) -> Report {
        let ws = parse_workspace(WS).unwrap();
        let args: Vec<String> = line.split_whitespace().map(String::from).collect();
        run_args(&args, &ws)
    }

    #[test]
    fn iso_prints_witness() {
        let r = go("iso A B");
        assert_eq!(r.code, 0);
        assert_eq!(r.text, "isomorphic: 0->1 1->0\n");
    }

    #[test]
    fn ulm_prints_sequence() {
        let r = go("ulm p=2 parts=2,1");
        assert_eq!(r.code, 0);
        assert!(r.text.starts_with("u = 1,1\n"), "{}", r.text);
    }

    #[test]
    fn kb_lists_order() {
        assert_eq!(go("kb T").text, "0 < 1 < .\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go("rank Z").code, 1);
        assert_eq!(go("frobnicate A").code, 2);
        assert_eq!(go("iso A").code, 2);
        assert_eq!(go("embed graph-field A --budget x").code, 2);
        assert_eq!(go("embed flo-fvs A").code, 1);
        assert_eq!(go("homog T").code, 2);
        assert_eq!(go("ulm-check p=4 max-log=2").code, 1);
    }

    #[test]
    fn budget_defaults_and_is_echoed() {
        let r = go("embed tree-graph T");
        assert_eq!(r.code, 0, "{}", r.text);
        assert!(r.text.starts_with("embed tree-graph T budget 3\n"));
    }
}
