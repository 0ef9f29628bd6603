//! Equality without the unique name assumption: the rules that link every
//! member of a sameAs clique to its least member through `sameComp`, and
//! the relaxation of join variables through `sameComp`.

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::datalog::{Atom, BodyLiteral, CmpOp, Program, Rule, Term};

pub const SAME_AS: &str = "sameAs";
pub const SAME_COMP: &str = "sameComp";
pub const NO_START: &str = "noStart";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SameAsError {
    #[error("non-UNA mode requires an ontology or a query")]
    NothingToRewrite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqualityConfig {
    /// Longest sameAs path checked by the `noStart` rules.
    pub n: usize,
    /// Rules with more join variables than this get a single fully relaxed
    /// variant instead of one per subset.
    pub join_threshold: usize,
}

impl Default for EqualityConfig {
    fn default() -> Self {
        EqualityConfig::with_n(2)
    }
}

impl EqualityConfig {
    pub fn with_n(n: usize) -> Self {
        EqualityConfig { n, join_threshold: 3 }
    }
}

fn pos(pred: &str, vars: &[&str]) -> BodyLiteral {
    BodyLiteral::Pos(Atom::vars(pred, vars))
}

/// Symmetric closure of sameAs, the `noStart` rules for paths of length
/// 1..=n, and the `sameComp` rules.
pub fn equality_rules(cfg: EqualityConfig) -> Vec<Rule> {
    let mut rules = vec![Rule::new(Atom::vars(SAME_AS, &["X", "Y"]), vec![pos(SAME_AS, &["Y", "X"])])];
    for k in 1..=cfg.n {
        let xs: Vec<String> = (0..=k).map(|i| format!("X{i}")).collect();
        let mut body: Vec<BodyLiteral> =
            xs.windows(2).map(|w| pos(SAME_AS, &[&w[0], &w[1]])).collect();
        body.push(BodyLiteral::builtin("X0", CmpOp::Lt, &xs[k]));
        rules.push(Rule::new(Atom::vars(NO_START, &[&xs[k]]), body));
    }
    rules.push(Rule::new(
        Atom::vars(SAME_COMP, &["X", "Y"]),
        vec![
            pos(SAME_AS, &["X", "Y"]),
            BodyLiteral::Neg(Atom::vars(NO_START, &["X"])),
            BodyLiteral::builtin("X", CmpOp::Lt, "Y"),
        ],
    ));
    rules.push(Rule::new(
        Atom::vars(SAME_COMP, &["X", "Z"]),
        vec![
            pos(SAME_COMP, &["X", "Y"]),
            pos(SAME_AS, &["Y", "Z"]),
            BodyLiteral::builtin("X", CmpOp::Lt, "Y"),
            BodyLiteral::builtin("X", CmpOp::Lt, "Z"),
        ],
    ));
    rules.push(Rule::new(Atom::vars(SAME_COMP, &["X", "X"]), vec![pos(SAME_COMP, &["X", "Y"])]));
    rules
}

fn relaxable(lit: &BodyLiteral) -> Option<&Atom> {
    match lit {
        BodyLiteral::Pos(a) if ![SAME_AS, SAME_COMP, NO_START].contains(&a.predicate.as_str()) => Some(a),
        _ => None,
    }
}

fn occurrence_counts(rule: &Rule) -> IndexMap<String, usize> {
    let mut counts: IndexMap<String, usize> = IndexMap::new();
    for atom in rule.body.iter().filter_map(relaxable) {
        for v in atom.variables() {
            *counts.entry(v.to_string()).or_default() += 1;
        }
    }
    counts
}

/// Variables occurring at least twice across the positive body atoms,
/// in order of first occurrence. Atoms over `sameAs`, `sameComp` and
/// `noStart` are not counted.
pub fn join_variables(rule: &Rule) -> IndexSet<String> {
    occurrence_counts(rule)
        .into_iter()
        .filter(|(_, n)| *n >= 2)
        .map(|(v, _)| v)
        .collect()
}

fn relax(rule: &Rule, vars: &[&String]) -> Rule {
    let mut taken = rule.variables();
    let mut fresh_for = |x: &str, i: usize| {
        let mut candidate = format!("{x}{i}");
        let mut k = 0;
        while taken.contains(&candidate) {
            k += 1;
            candidate = format!("{x}{i}_{k}");
        }
        taken.insert(candidate.clone());
        candidate
    };
    let mut seen: IndexMap<&str, Vec<String>> = vars.iter().map(|v| (v.as_str(), Vec::new())).collect();
    let mut body = Vec::with_capacity(rule.body.len());
    for lit in &rule.body {
        let BodyLiteral::Pos(atom) = lit else {
            body.push(lit.clone());
            continue;
        };
        if relaxable(lit).is_none() {
            body.push(lit.clone());
            continue;
        }
        let mut atom = atom.clone();
        for arg in &mut atom.args {
            if let Term::Var(v) = arg {
                if let Some(list) = seen.get_mut(v.as_str()) {
                    let fresh = fresh_for(v, list.len() + 1);
                    list.push(fresh.clone());
                    *arg = Term::Var(fresh);
                }
            }
        }
        body.push(BodyLiteral::Pos(atom));
    }
    let mut order: Vec<(&str, Vec<String>)> = seen.into_iter().collect();
    order.sort_by_key(|(v, _)| rule.variables().get_index_of(*v));
    for (x, fresh) in order {
        for xi in fresh {
            body.push(pos(SAME_COMP, &[x, &xi]));
        }
    }
    Rule::new(rule.head.clone(), body)
}

/// The rule itself followed by one relaxed variant per non-empty subset of
/// its join variables (subsets in bitmask order), or by the single fully
/// relaxed variant when there are more join variables than the threshold.
pub fn rewrite_rule_joins(rule: &Rule, cfg: EqualityConfig) -> Vec<Rule> {
    let joins: Vec<String> = join_variables(rule).into_iter().collect();
    let mut out = vec![rule.clone()];
    if joins.is_empty() {
        return out;
    }
    if joins.len() > cfg.join_threshold {
        let all: Vec<&String> = joins.iter().collect();
        out.push(relax(rule, &all));
        return out;
    }
    for mask in 1u32..(1 << joins.len()) {
        let subset: Vec<&String> = joins
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| v)
            .collect();
        out.push(relax(rule, &subset));
    }
    out
}

/// Equality rules plus the relaxation of every ontology and query rule.
/// Facts are kept as they are.
pub fn apply_non_una(
    program: &Program,
    query_rules: &[Rule],
    cfg: EqualityConfig,
) -> Result<Program, SameAsError> {
    if program.rules.is_empty() && query_rules.is_empty() {
        return Err(SameAsError::NothingToRewrite);
    }
    let equality = equality_rules(cfg);
    let mut rules: IndexSet<Rule> = equality.iter().cloned().collect();
    for rule in program.rules.iter().chain(query_rules) {
        if equality.contains(rule) {
            continue;
        }
        rules.extend(rewrite_rule_joins(rule, cfg));
    }
    Ok(Program {
        rules: rules.into_iter().collect(),
        facts: program.facts.clone(),
    })
}
