//! Datalog programs: rules with negation and comparison built-ins, safety,
//! stratification, and the `.asp` text format.

use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::terms::{GroundTerm, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatalogError {
    #[error("unsafe rule: {0}")]
    UnsafeRule(String),
    #[error("invalid variable name {name:?} in rule: {rule}")]
    InvalidVariable { name: String, rule: String },
    #[error("fact is not ground: {0}")]
    NonGroundFact(String),
    #[error("program is not stratified: negation cycle through {}", .0.predicates.join(", "))]
    NotStratified(CycleReport),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(GroundTerm),
    Var(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

pub fn is_valid_variable(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    /// Atom whose arguments are all variables.
    pub fn vars(predicate: impl Into<String>, vars: &[&str]) -> Self {
        Atom::new(predicate, vars.iter().map(|v| Term::var(*v)).collect())
    }

    pub fn ground(predicate: impl Into<String>, args: Vec<GroundTerm>) -> Self {
        Atom::new(predicate, args.into_iter().map(Term::Const).collect())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CmpOp::Lt => ord == Less,
            CmpOp::Le => ord != Greater,
            CmpOp::Gt => ord == Greater,
            CmpOp::Ge => ord != Less,
            CmpOp::Eq => ord == Equal,
            CmpOp::Ne => ord != Equal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyLiteral {
    Pos(Atom),
    Neg(Atom),
    Builtin(Term, CmpOp, Term),
}

impl BodyLiteral {
    pub fn builtin(left: &str, op: CmpOp, right: &str) -> Self {
        BodyLiteral::Builtin(Term::var(left), op, Term::var(right))
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            BodyLiteral::Pos(a) | BodyLiteral::Neg(a) => a.args.iter().collect(),
            BodyLiteral::Builtin(l, _, r) => vec![l, r],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<BodyLiteral>,
}

impl Rule {
    pub fn new(head: Atom, body: Vec<BodyLiteral>) -> Self {
        Rule { head, body }
    }

    /// All variables of the rule, in order of first occurrence (head first).
    pub fn variables(&self) -> IndexSet<String> {
        let mut out: IndexSet<String> = self.head.variables().map(str::to_string).collect();
        for lit in &self.body {
            out.extend(lit.terms().into_iter().filter_map(Term::as_var).map(str::to_string));
        }
        out
    }

    pub fn positive_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|l| match l {
            BodyLiteral::Pos(a) => Some(a),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub facts: Vec<Atom>,
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn extend(&mut self, other: Program) {
        self.rules.extend(other.rules);
        self.facts.extend(other.facts);
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.facts.is_empty()
    }

    /// Every predicate name mentioned, in order of first occurrence.
    pub fn predicates(&self) -> IndexSet<String> {
        let mut out = IndexSet::new();
        for rule in &self.rules {
            out.insert(rule.head.predicate.clone());
            for lit in &rule.body {
                if let BodyLiteral::Pos(a) | BodyLiteral::Neg(a) = lit {
                    out.insert(a.predicate.clone());
                }
            }
        }
        for fact in &self.facts {
            out.insert(fact.predicate.clone());
        }
        out
    }
}

/// Safe iff every variable occurs in some positive body atom.
pub fn check_safety(rule: &Rule) -> bool {
    let covered: HashSet<&str> = rule.positive_atoms().flat_map(Atom::variables).collect();
    rule.variables().iter().all(|v| covered.contains(v.as_str()))
}

/// Predicates on a cycle that goes through negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    pub predicates: Vec<String>,
}

/// Predicates grouped by stratum, lowest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strata {
    pub strata: Vec<Vec<String>>,
}

impl Strata {
    pub fn level_of(&self) -> HashMap<&str, usize> {
        let mut out = HashMap::new();
        for (level, preds) in self.strata.iter().enumerate() {
            for p in preds {
                out.insert(p.as_str(), level);
            }
        }
        out
    }
}

pub fn stratify(program: &Program) -> Result<Strata, CycleReport> {
    let preds = program.predicates();
    let mut graph: DiGraph<usize, bool> = DiGraph::new();
    let nodes: Vec<NodeIndex> = (0..preds.len()).map(|i| graph.add_node(i)).collect();
    let idx = |p: &str| nodes[preds.get_index_of(p).expect("predicate collected")];
    for rule in &program.rules {
        let head = idx(&rule.head.predicate);
        for lit in &rule.body {
            match lit {
                BodyLiteral::Pos(a) => {
                    graph.add_edge(idx(&a.predicate), head, false);
                }
                BodyLiteral::Neg(a) => {
                    graph.add_edge(idx(&a.predicate), head, true);
                }
                BodyLiteral::Builtin(..) => {}
            }
        }
    }

    // tarjan_scc yields components in reverse topological order
    let mut sccs = tarjan_scc(&graph);
    sccs.reverse();
    let mut component = vec![0usize; nodes.len()];
    for (c, scc) in sccs.iter().enumerate() {
        for n in scc {
            component[n.index()] = c;
        }
    }
    for edge in graph.edge_indices() {
        let (from, to) = graph.edge_endpoints(edge).expect("edge exists");
        if graph[edge] && component[from.index()] == component[to.index()] {
            let mut members: Vec<usize> = sccs[component[from.index()]]
                .iter()
                .map(|n| graph[*n])
                .collect();
            members.sort_unstable();
            return Err(CycleReport {
                predicates: members.into_iter().map(|i| preds[i].clone()).collect(),
            });
        }
    }

    let mut level = vec![0usize; sccs.len()];
    for (c, scc) in sccs.iter().enumerate() {
        for n in scc {
            for edge in graph.edges_directed(*n, petgraph::Direction::Incoming) {
                use petgraph::visit::EdgeRef;
                let source = component[edge.source().index()];
                if source != c {
                    let step = usize::from(*edge.weight());
                    level[c] = level[c].max(level[source] + step);
                }
            }
        }
    }
    let height = level.iter().copied().max().map_or(0, |m| m + 1);
    let mut strata = vec![Vec::new(); height];
    for (i, pred) in preds.iter().enumerate() {
        strata[level[component[i]]].push(pred.clone());
    }
    Ok(Strata { strata })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => f.write_str(&c.to_asp()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for BodyLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyLiteral::Pos(a) => write!(f, "{a}"),
            BodyLiteral::Neg(a) => write!(f, "not {a}"),
            BodyLiteral::Builtin(l, op, r) => write!(f, "{l} {} {r}", op.symbol()),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, lit) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{lit}")?;
            }
        }
        f.write_str(".")
    }
}

/// Prefix map and predicate symbols recorded in the header of an emitted
/// program.
#[derive(Debug, Clone, Copy)]
pub struct Header<'a> {
    pub prefixes: &'a IndexMap<String, String>,
    pub symbols: &'a SymbolTable,
}

/// Renders `program` in the `.asp` format: header comment lines starting
/// with `% `, then one rule per line, then one fact per line.
pub fn serialize_program(program: &Program, header: Header<'_>) -> Result<String, DatalogError> {
    for rule in &program.rules {
        if !check_safety(rule) {
            return Err(DatalogError::UnsafeRule(rule.to_string()));
        }
        if let Some(bad) = rule.variables().into_iter().find(|v| !is_valid_variable(v)) {
            return Err(DatalogError::InvalidVariable {
                name: bad,
                rule: rule.to_string(),
            });
        }
    }
    if let Some(fact) = program.facts.iter().find(|f| !f.is_ground()) {
        return Err(DatalogError::NonGroundFact(fact.to_string()));
    }

    let mut out = String::new();
    out.push_str("% generated by rl2dl\n");
    for (prefix, iri) in header.prefixes {
        out.push_str(&format!("% prefix {prefix}: <{iri}>\n"));
    }
    let used = program.predicates();
    for (iri, name) in header.symbols.iter() {
        if used.contains(name) {
            out.push_str(&format!("% symbol {name} <{iri}>\n"));
        }
    }
    for rule in &program.rules {
        out.push_str(&rule.to_string());
        out.push('\n');
    }
    for fact in &program.facts {
        out.push_str(&format!("{fact}.\n"));
    }
    Ok(out)
}
