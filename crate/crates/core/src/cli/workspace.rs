//! Workspace files: named signatures, structures, graphs, trees and partitions.
//!
//! ```text
//! # comments run to the end of the line
//! signature G { E/2 }
//! structure A : G { size 2; E 0 1; E 1 0 }
//! graph H { size 3; 0 1; 1 2 }
//! tree T { .; 0; 1; 0/1 }
//! partition P { p=2 parts=2,1 }
//! ```
//!
//! Inside braces, items are separated by `;` or newlines. Structure facts are
//! positive and everything unlisted is false. Graph lines list undirected edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::logic::{validate_structure, AtomicFact, FinStructure, Signature};
use crate::pgroups::Partition;
use crate::trees::{FinTree, Node};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Workspace {
    pub signatures: BTreeMap<String, Signature>,
    /// Structure name to (signature name, structure).
    pub structures: BTreeMap<String, (String, FinStructure)>,
    pub graphs: BTreeMap<String, FinStructure>,
    pub trees: BTreeMap<String, FinTree>,
    pub partitions: BTreeMap<String, Partition>,
}

impl Workspace {
    /// A structure or graph by name.
    pub fn structure(&self, name: &str) -> Option<&FinStructure> {
        self.structures.get(name).map(|(_, s)| s).or_else(|| self.graphs.get(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(u64),
    Sym(char),
    Newline,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap();
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (ln + 1, i + 1);
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| ParseError { line, col, msg: format!("number `{s}` too large") })?;
                out.push(Token { tok: Tok::Num(n), line, col });
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Word(chars[start..i].iter().collect()), line, col });
            } else if c == '<' {
                out.push(Token { tok: Tok::Word("<".into()), line, col });
                i += 1;
            } else if "{}:;/=,.".contains(c) {
                out.push(Token { tok: Tok::Sym(c), line, col });
                i += 1;
            } else {
                return Err(ParseError { line, col, msg: format!("unexpected character `{c}`") });
            }
        }
        out.push(Token { tok: Tok::Newline, line: ln + 1, col: chars.len() + 1 });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col));
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn skip_newlines(&mut self) {
        while self.peek() == Some(&Tok::Newline) {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn word(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.err("expected a name"),
        }
    }

    fn num(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(&Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    /// Items of a `{ … }` block: token runs split at `;` and newlines, each
    /// tagged with the index of its first token.
    fn block(&mut self) -> Result<Vec<(usize, Vec<Tok>)>, ParseError> {
        self.skip_newlines();
        self.sym('{')?;
        let mut items = Vec::new();
        let mut cur: Vec<Tok> = Vec::new();
        let mut start = self.pos;
        loop {
            match self.next() {
                None => {
                    self.pos -= 1;
                    return self.err("unclosed `{`");
                }
                Some(Tok::Sym('}')) => break,
                Some(Tok::Sym(';')) | Some(Tok::Newline) => {
                    if !cur.is_empty() {
                        items.push((start, std::mem::take(&mut cur)));
                    }
                    start = self.pos;
                }
                Some(t) => {
                    if cur.is_empty() {
                        start = self.pos - 1;
                    }
                    cur.push(t);
                }
            }
        }
        if !cur.is_empty() {
            items.push((start, cur));
        }
        Ok(items)
    }

    fn err_at<T>(&self, at: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        let t = &self.toks[at];
        Err(ParseError { line: t.line, col: t.col, msg: msg.into() })
    }
}

fn nums(items: &[Tok]) -> Option<Vec<u64>> {
    items.iter().map(|t| if let Tok::Num(n) = t { Some(*n) } else { None }).collect()
}

fn size_item(items: &[Tok]) -> Option<usize> {
    match items {
        [Tok::Word(w), Tok::Num(n)] if w == "size" => Some(*n as usize),
        _ => None,
    }
}

pub fn parse_workspace(text: &str) -> Result<Workspace, ParseError> {
    let toks = lex(text)?;
    let end = toks.last().map_or((1, 1), |t| (t.line, t.col));
    let mut p = Parser { toks, pos: 0, end };
    let mut ws = Workspace::default();
    loop {
        p.skip_newlines();
        if p.peek().is_none() {
            break;
        }
        let kw_at = p.pos;
        let kw = p.word()?;
        let name_at = p.pos;
        let name = p.word()?;
        let dup = |taken: bool, p: &Parser| {
            if taken {
                p.err_at(name_at, format!("duplicate {kw} name `{name}`"))
            } else {
                Ok(())
            }
        };
        match kw.as_str() {
            "signature" => {
                dup(ws.signatures.contains_key(&name), &p)?;
                p.skip_newlines();
                p.sym('{')?;
                let mut rels = Vec::new();
                loop {
                    p.skip_newlines();
                    if p.peek() == Some(&Tok::Sym('}')) {
                        p.pos += 1;
                        break;
                    }
                    let rel = p.word()?;
                    p.sym('/')?;
                    let arity = p.num()? as usize;
                    rels.push((rel, arity));
                    p.skip_newlines();
                    if p.peek() == Some(&Tok::Sym(',')) || p.peek() == Some(&Tok::Sym(';')) {
                        p.pos += 1;
                    }
                }
                let sig = Signature::new(rels).or_else(|e| p.err_at(name_at, e.to_string()))?;
                ws.signatures.insert(name, sig);
            }
            "structure" => {
                dup(ws.structures.contains_key(&name), &p)?;
                p.sym(':')?;
                let sig_at = p.pos;
                let sig_name = p.word()?;
                let Some(sig) = ws.signatures.get(&sig_name).cloned() else {
                    return p.err_at(sig_at, format!("unknown signature `{sig_name}`"));
                };
                let items = p.block()?;
                let mut size = None;
                let mut facts = Vec::new();
                for (at, item) in &items {
                    if let Some(n) = size_item(item) {
                        size = Some(n);
                        continue;
                    }
                    match item.split_first() {
                        Some((Tok::Word(rel), args)) => match nums(args) {
                            Some(args) => facts.push(AtomicFact::pos(rel, args.into_iter().map(u128::from))),
                            None => return p.err_at(*at, "fact arguments must be numbers"),
                        },
                        _ => return p.err_at(*at, "expected `size N` or a fact `R a1 a2 …`"),
                    }
                }
                let Some(size) = size else {
                    return p.err_at(name_at, "structure needs `size N`");
                };
                let st = validate_structure(&sig, size, &facts).or_else(|e| p.err_at(name_at, e.to_string()))?;
                ws.structures.insert(name, (sig_name, st));
            }
            "graph" => {
                dup(ws.graphs.contains_key(&name), &p)?;
                let items = p.block()?;
                let mut size = None;
                let mut table = BTreeSet::new();
                for (at, item) in &items {
                    if let Some(n) = size_item(item) {
                        size = Some(n);
                        continue;
                    }
                    match nums(item).as_deref() {
                        Some(&[a, b]) if a != b => {
                            table.insert(vec![a as usize, b as usize]);
                            table.insert(vec![b as usize, a as usize]);
                        }
                        Some(&[_, _]) => return p.err_at(*at, "graphs have no loops"),
                        _ => return p.err_at(*at, "expected `size N` or an edge `a b`"),
                    }
                }
                let Some(size) = size else {
                    return p.err_at(name_at, "graph needs `size N`");
                };
                if let Some(t) = table.iter().find(|t| t.iter().any(|&x| x >= size)) {
                    return p.err_at(name_at, format!("edge {} {} outside size {size}", t[0], t[1]));
                }
                let g = FinStructure::from_tables(Signature::graph(), size, vec![table])
                    .or_else(|e| p.err_at(name_at, e.to_string()))?;
                ws.graphs.insert(name, g);
            }
            "tree" => {
                dup(ws.trees.contains_key(&name), &p)?;
                let items = p.block()?;
                let mut nodes = Vec::new();
                for (at, item) in &items {
                    let lit: String = item
                        .iter()
                        .map(|t| match t {
                            Tok::Num(n) => n.to_string(),
                            Tok::Sym(c) => c.to_string(),
                            Tok::Word(w) => w.clone(),
                            Tok::Newline => String::new(),
                        })
                        .collect();
                    match lit.parse::<Node>() {
                        Ok(n) => nodes.push(n),
                        Err(e) => return p.err_at(*at, e.to_string()),
                    }
                }
                let t = FinTree::new(nodes).or_else(|e| p.err_at(name_at, e.to_string()))?;
                ws.trees.insert(name, t);
            }
            "partition" => {
                dup(ws.partitions.contains_key(&name), &p)?;
                let items = p.block()?;
                let flat: Vec<Tok> = items.into_iter().flat_map(|(_, t)| t).collect();
                let (pr, parts) = parse_partition_tokens(&flat).ok_or(()).or_else(|_| {
                    p.err_at(name_at, "expected `p=P parts=a,b,…`")
                })?;
                let part = Partition::new(pr, parts).or_else(|e| p.err_at(name_at, e.to_string()))?;
                ws.partitions.insert(name, part);
            }
            other => return p.err_at(kw_at, format!("unknown declaration `{other}`")),
        }
    }
    Ok(ws)
}

fn parse_partition_tokens(toks: &[Tok]) -> Option<(u64, Vec<u32>)> {
    match toks {
        [Tok::Word(pw), Tok::Sym('='), Tok::Num(p), Tok::Word(kw), Tok::Sym('='), rest @ ..]
            if pw == "p" && kw == "parts" =>
        {
            let mut parts = Vec::new();
            for (i, t) in rest.iter().enumerate() {
                match (i % 2, t) {
                    (0, Tok::Num(n)) => parts.push(u32::try_from(*n).ok()?),
                    (1, Tok::Sym(',')) => {}
                    _ => return None,
                }
            }
            (rest.len() % 2 == 1 || rest.is_empty()).then_some((*p, parts))
        }
        _ => None,
    }
}

/// Parses `p=P parts=a,b,…` as written on the command line.
pub fn parse_partition(text: &str) -> Option<Partition> {
    let toks: Vec<Tok> = lex(text).ok()?.into_iter().map(|t| t.tok).filter(|t| *t != Tok::Newline).collect();
    let (p, parts) = parse_partition_tokens(&toks)?;
    Partition::new(p, parts).ok()
}

impl fmt::Display for Workspace {
    /// Canonical text that parses back to an equal workspace.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, sig) in &self.signatures {
            let rels: Vec<String> = sig.relations().iter().map(|r| format!("{}/{}", r.name, r.arity)).collect();
            writeln!(f, "signature {name} {{ {} }}", rels.join(", "))?;
        }
        for (name, (sig, st)) in &self.structures {
            write!(f, "structure {name} : {sig} {{ size {}", st.size())?;
            for fact in st.positive_facts() {
                write!(f, "; {fact}")?;
            }
            writeln!(f, " }}")?;
        }
        for (name, g) in &self.graphs {
            write!(f, "graph {name} {{ size {}", g.size())?;
            for t in g.table(0).iter().filter(|t| t[0] < t[1]) {
                write!(f, "; {} {}", t[0], t[1])?;
            }
            writeln!(f, " }}")?;
        }
        for (name, t) in &self.trees {
            let nodes: Vec<String> = t.nodes().map(|n| n.to_string()).collect();
            writeln!(f, "tree {name} {{ {} }}", nodes.join("; "))?;
        }
        for (name, p) in &self.partitions {
            writeln!(f, "partition {name} {{ {p} }}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample
signature G { E/2 }
signature L { </2 }
structure A : G { size 2; E 0 1; E 1 0 }
structure C : G {
  size 3
  E 0 1
}
graph H { size 3; 0 1; 1 2 }
tree T { .; 0; 1; 0/1 }
partition P { p=2 parts=2,1 }
";

    #[test]
    fn parses_every_kind() {
        let ws = parse_workspace(SAMPLE).unwrap();
        assert_eq!(ws.signatures.len(), 2);
        assert_eq!(ws.structure("A").unwrap().table(0).len(), 2);
        assert_eq!(ws.structure("C").unwrap().size(), 3);
        assert_eq!(ws.graphs["H"].table(0).len(), 4);
        assert_eq!(ws.trees["T"].len(), 4);
        assert_eq!(ws.partitions["P"].parts(), &[2, 1]);
    }

    #[test]
    fn printing_round_trips() {
        let ws = parse_workspace(SAMPLE).unwrap();
        let again = parse_workspace(&ws.to_string()).unwrap();
        assert_eq!(again, ws);
        assert_eq!(again.to_string(), ws.to_string());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_workspace("signature G { E/ }").unwrap_err();
        assert_eq!((e.line, e.col), (1, 18));
        let e = parse_workspace("signature G { E/2 }\nstructure A : G { size 2; E 0 5 }").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("out-of-range"), "{}", e.msg);
        let e = parse_workspace("graph H { size 2; 0 1 }\ngraph H { size 1 }").unwrap_err();
        assert!(e.msg.contains("duplicate"));
        let e = parse_workspace("tree T { 0 }").unwrap_err();
        assert!(e.msg.contains("prefixes"));
        let e = parse_workspace("widget W { }").unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
        assert!(parse_workspace("signature G { E/2 }\nstructure A : F { size 1 }").is_err());
    }

    #[test]
    fn command_line_partitions() {
        let p = parse_partition("p=3 parts=3,3,1").unwrap();
        assert_eq!(p.parts(), &[3, 3, 1]);
        assert!(parse_partition("p=4 parts=1").is_none());
        assert!(parse_partition("p=2 parts=1,,2").is_none());
    }
}
