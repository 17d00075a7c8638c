use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{Elem, FinStructure, LogicError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(Elem),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "#{c}"),
        }
    }
}

/// Finitary first-order formulas over a relational signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atomic(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: &str, args: impl IntoIterator<Item = Term>) -> Formula {
        Formula::Atomic(rel.to_string(), args.into_iter().collect())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(v: impl Into<String>, f: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(f))
    }

    pub fn forall(v: impl Into<String>, f: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(f))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn term(t: &Term, bound: &[&str], out: &mut BTreeSet<String>) {
            if let Term::Var(v) = t {
                if !bound.contains(&v.as_str()) {
                    out.insert(v.clone());
                }
            }
        }
        fn go<'a>(f: &'a Formula, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atomic(_, args) => args.iter().for_each(|t| term(t, bound, out)),
                Formula::Eq(a, b) => {
                    term(a, bound, out);
                    term(b, bound, out);
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, bound, out)),
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    bound.push(v);
                    go(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atomic(..) | Formula::Eq(..) => 1,
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => 1 + g.size(),
            Formula::And(gs) | Formula::Or(gs) => 1 + gs.iter().map(Formula::size).sum::<usize>(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atomic(r, args) => {
                write!(f, "{r}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => write!(f, "~{g}"),
            Formula::And(gs) if gs.is_empty() => write!(f, "true"),
            Formula::Or(gs) if gs.is_empty() => write!(f, "false"),
            Formula::And(gs) | Formula::Or(gs) => {
                let op = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                write!(f, "(")?;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
            Formula::Exists(v, g) => write!(f, "exists {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "forall {v}. {g}"),
        }
    }
}

// Compiled form: relation names resolved, variables turned into stack slots.
enum Node {
    Atomic(usize, Vec<Slot>),
    False,
    Eq(Slot, Slot),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Exists(Box<Node>),
    Forall(Box<Node>),
}

#[derive(Clone, Copy)]
enum Slot {
    Stack(usize),
    Const(Elem),
}

struct Compiler<'a> {
    a: &'a FinStructure,
    scope: Vec<String>,
}

impl Compiler<'_> {
    fn slot(&self, t: &Term) -> Result<Slot, LogicError> {
        match t {
            Term::Const(c) => Ok(Slot::Const(*c)),
            Term::Var(v) => self
                .scope
                .iter()
                .rposition(|s| s == v)
                .map(Slot::Stack)
                .ok_or_else(|| LogicError::UnboundVariable(v.clone())),
        }
    }

    fn compile(&mut self, f: &Formula) -> Result<Node, LogicError> {
        Ok(match f {
            Formula::Atomic(r, args) => {
                let rel = self.a.signature().index_of(r).ok_or(LogicError::SignatureMismatch)?;
                if self.a.signature().arity(rel) != args.len() {
                    return Err(LogicError::SignatureMismatch);
                }
                let slots = args.iter().map(|t| self.slot(t)).collect::<Result<Vec<_>, _>>()?;
                // a constant outside the universe never satisfies anything
                if slots.iter().any(|s| matches!(s, Slot::Const(c) if *c >= self.a.size())) {
                    Node::False
                } else {
                    Node::Atomic(rel, slots)
                }
            }
            Formula::Eq(x, y) => Node::Eq(self.slot(x)?, self.slot(y)?),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::And(gs) => Node::And(gs.iter().map(|g| self.compile(g)).collect::<Result<_, _>>()?),
            Formula::Or(gs) => Node::Or(gs.iter().map(|g| self.compile(g)).collect::<Result<_, _>>()?),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                self.scope.push(v.clone());
                let body = self.compile(g);
                self.scope.pop();
                let body = Box::new(body?);
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(body)
                } else {
                    Node::Forall(body)
                }
            }
        })
    }
}

fn eval(a: &FinStructure, node: &Node, stack: &mut Vec<Elem>, buf: &mut Vec<Elem>) -> bool {
    let get = |s: Slot, stack: &[Elem]| match s {
        Slot::Stack(i) => stack[i],
        Slot::Const(c) => c,
    };
    match node {
        Node::Atomic(rel, slots) => {
            let start = buf.len();
            buf.extend(slots.iter().map(|&s| get(s, stack)));
            let r = a.holds(*rel, &buf[start..]);
            buf.truncate(start);
            r
        }
        Node::False => false,
        Node::Eq(x, y) => get(*x, stack) == get(*y, stack),
        Node::Not(g) => !eval(a, g, stack, buf),
        Node::And(gs) => gs.iter().all(|g| eval(a, g, stack, buf)),
        Node::Or(gs) => gs.iter().any(|g| eval(a, g, stack, buf)),
        Node::Exists(g) => (0..a.size()).any(|e| {
            stack.push(e);
            let r = eval(a, g, stack, buf);
            stack.pop();
            r
        }),
        Node::Forall(g) => (0..a.size()).all(|e| {
            stack.push(e);
            let r = eval(a, g, stack, buf);
            stack.pop();
            r
        }),
    }
}

/// Tarskian satisfaction over the finite universe of `a`.
pub fn satisfies(
    a: &FinStructure,
    phi: &Formula,
    env: &HashMap<String, Elem>,
) -> Result<bool, LogicError> {
    let free = phi.free_vars();
    let mut names: Vec<String> = Vec::new();
    let mut stack = Vec::new();
    for v in &free {
        let val = *env.get(v).ok_or_else(|| LogicError::UnboundVariable(v.clone()))?;
        names.push(v.clone());
        stack.push(val);
    }
    let mut c = Compiler { a, scope: names };
    let node = c.compile(phi)?;
    Ok(eval(a, &node, &mut stack, &mut Vec::new()))
}
