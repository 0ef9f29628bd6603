//! TBox and ABox to Datalog. CIs are classified first: direct ones go
//! through the ELI translation, the rest through structural transformation
//! and normalization before the table translation.

mod eli;
mod normalize;
mod table;

use std::collections::HashSet;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::datalog::{Atom, BodyLiteral, Program, Rule, Term};
use crate::dl::{classify_ci, ABox, Ci, CiClass, Concept, ConceptName, Role, TBox};
use crate::owl::{check_rl_profile, RlViolation, OWL_NOTHING};
use crate::terms::{mangle_predicate, GroundTerm, Iri, SymbolTable};

pub use eli::{translate_direct_ci, translate_eli};
pub use normalize::{normalize_fixups, structural_transform};
pub use table::{translate_normalized_ci, translate_role_axioms};

pub const TOP: &str = "top";
pub const INCONSISTENT: &str = "inconsistent";
pub const SAME_AS: &str = "sameAs";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("TBox is outside the RL profile: {}", first_violation(.0))]
    NotRl(Vec<RlViolation>),
    #[error("internal: not an ELI concept: {0}")]
    NotEli(Concept),
    #[error("internal: cannot normalize {0}")]
    NotNormalizable(Ci),
}

fn first_violation(v: &[RlViolation]) -> String {
    match v {
        [one] => one.to_string(),
        [first, rest @ ..] => format!("{first} (and {} more)", rest.len()),
        [] => String::new(),
    }
}

/// Assigns `aux_N` names to complex concepts, memoized on the canonical
/// form so that `B ⊓ C` and `C ⊓ B` share a name.
#[derive(Debug, Clone)]
pub struct FreshNamer {
    memo: IndexMap<Concept, usize>,
    enhanced: bool,
}

impl Default for FreshNamer {
    fn default() -> Self {
        Self::new()
    }
}

impl FreshNamer {
    /// ⊤, ⊥ and atomic concepts stand for themselves.
    pub fn new() -> Self {
        FreshNamer {
            memo: IndexMap::new(),
            enhanced: true,
        }
    }

    /// Every concept, atomic ones included, gets its own fresh name.
    pub fn unenhanced() -> Self {
        FreshNamer {
            memo: IndexMap::new(),
            enhanced: false,
        }
    }

    pub fn is_enhanced(&self) -> bool {
        self.enhanced
    }

    pub fn name(&mut self, c: &Concept) -> Concept {
        if self.enhanced && c.is_name_like() {
            return c.clone();
        }
        let key = c.canonical();
        let next = self.memo.len();
        let index = *self.memo.entry(key).or_insert(next);
        Concept::fresh(index)
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// The concept a fresh name stands for.
    pub fn concept_of(&self, index: usize) -> Option<&Concept> {
        self.memo.get_index(index).map(|(c, _)| c)
    }

    /// DL notation with each fresh name shown as `A[concept]`.
    pub fn render(&self, c: &Concept) -> String {
        let expanded = self.expand(c);
        expanded.to_string()
    }

    pub fn render_ci(&self, ci: &Ci) -> String {
        format!("{} ⊑ {}", self.render(&ci.sub), self.render(&ci.sup))
    }

    fn expand(&self, c: &Concept) -> Concept {
        let map = |c: &Concept| self.expand(c);
        match c {
            Concept::Atomic(ConceptName::Fresh(i)) => match self.concept_of(*i) {
                Some(inner) => {
                    let label = format!("A[{}]", self.render(inner)).replace(' ', "");
                    Iri::new(format!("urn:fresh#{label}"))
                        .map(Concept::atomic)
                        .unwrap_or_else(|_| c.clone())
                }
                None => c.clone(),
            },
            Concept::Not(d) => Concept::not(map(d)),
            Concept::And(cs) => Concept::And(cs.iter().map(map).collect()),
            Concept::Or(cs) => Concept::Or(cs.iter().map(map).collect()),
            Concept::All(r, d) => Concept::all(r.clone(), map(d)),
            Concept::Some(r, d) => Concept::some(r.clone(), map(d)),
            Concept::AtLeast(n, r, d) => Concept::at_least(*n, r.clone(), map(d)),
            Concept::AtMost(n, r, d) => Concept::at_most(*n, r.clone(), map(d)),
            leaf => leaf.clone(),
        }
    }
}

pub(crate) fn concept_predicate(name: &ConceptName, symbols: &mut SymbolTable) -> String {
    match name {
        ConceptName::Iri(iri) => mangle_predicate(iri, symbols),
        ConceptName::Fresh(i) => ConceptName::fresh_label(*i),
    }
}

/// `R(x, y)`, which is `r(y, x)` when `R = r⁻`.
pub(crate) fn role_atom(role: &Role, x: &str, y: &str, symbols: &mut SymbolTable) -> Atom {
    let pred = mangle_predicate(&role.name, symbols);
    if role.inverted {
        Atom::vars(pred, &[y, x])
    } else {
        Atom::vars(pred, &[x, y])
    }
}

/// Drops `top(V)` when another positive literal already binds `V`; the
/// top closure rules make it redundant there.
pub(crate) fn prune_top(body: &mut Vec<BodyLiteral>) {
    let bound_elsewhere = |v: &Term, body: &[BodyLiteral]| {
        body.iter().any(|l| matches!(l, BodyLiteral::Pos(a) if a.predicate != TOP && a.args.contains(v)))
    };
    let snapshot = body.clone();
    body.retain(|l| match l {
        BodyLiteral::Pos(a) if a.predicate == TOP => !bound_elsewhere(&a.args[0], &snapshot),
        _ => true,
    });
}

fn uses_top(rule: &Rule) -> bool {
    rule.positive_atoms().any(|a| a.predicate == TOP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteOptions {
    /// Skip fresh names for ⊤/⊥/atomic concepts and let direct and
    /// normalized CIs bypass the structural transformation.
    pub enhanced: bool,
}

impl Default for RewriteOptions {
    fn default() -> Self {
        RewriteOptions { enhanced: true }
    }
}

/// Incremental rewriter. Fresh names, symbols and already emitted rules
/// persist across calls so that several TBox files can be rewritten one at
/// a time into separate programs.
#[derive(Debug, Clone)]
pub struct Rewriter {
    pub symbols: SymbolTable,
    namer: FreshNamer,
    emitted_cis: HashSet<Ci>,
    emitted_rules: HashSet<Rule>,
    emitted_facts: HashSet<Atom>,
    concepts: IndexSet<Iri>,
    roles: IndexSet<Iri>,
    needs_top: bool,
}

impl Default for Rewriter {
    fn default() -> Self {
        Self::new(RewriteOptions::default(), SymbolTable::new())
    }
}

impl Rewriter {
    pub fn new(options: RewriteOptions, symbols: SymbolTable) -> Self {
        let namer = if options.enhanced {
            FreshNamer::new()
        } else {
            FreshNamer::unenhanced()
        };
        Rewriter {
            symbols,
            namer,
            emitted_cis: HashSet::new(),
            emitted_rules: HashSet::new(),
            emitted_facts: HashSet::new(),
            concepts: IndexSet::new(),
            roles: IndexSet::new(),
            needs_top: false,
        }
    }

    pub fn namer(&self) -> &FreshNamer {
        &self.namer
    }

    fn push_rule(&mut self, rule: Rule, out: &mut Program) {
        if self.emitted_rules.insert(rule.clone()) {
            self.needs_top |= uses_top(&rule);
            out.rules.push(rule);
        }
    }

    fn note_vocabulary(&mut self, tbox: &TBox) {
        let mut visit = |c: &Concept| {
            c.for_each_subconcept(&mut |d| match d {
                Concept::Atomic(ConceptName::Iri(iri)) => {
                    self.concepts.insert(iri.clone());
                }
                Concept::All(r, _) | Concept::Some(r, _) | Concept::AtLeast(_, r, _) | Concept::AtMost(_, r, _) => {
                    self.roles.insert(r.name.clone());
                }
                _ => {}
            })
        };
        for ci in &tbox.cis {
            visit(&ci.sub);
            visit(&ci.sup);
        }
        for ri in &tbox.ris {
            self.roles.insert(ri.sub.name.clone());
            self.roles.insert(ri.sup.name.clone());
        }
        for r in &tbox.trans {
            self.roles.insert(r.name.clone());
        }
    }

    /// Rules for one TBox. The caller is expected to have checked the RL
    /// profile of the whole TBox.
    pub fn rewrite_tbox(&mut self, tbox: &TBox) -> Result<Program, RewriteError> {
        self.note_vocabulary(tbox);
        let mut out = Program::new();
        let mut residue = Vec::new();
        for ci in &tbox.cis {
            let class = classify_ci(ci);
            match (class, self.namer.is_enhanced()) {
                (CiClass::TrivialDrop, _) => {}
                (CiClass::Direct, true) => {
                    for rule in translate_direct_ci(ci, &mut self.symbols)? {
                        self.push_rule(rule, &mut out);
                    }
                }
                (CiClass::Normalized, true) => {
                    if let Some(rule) = translate_normalized_ci(ci, &mut self.symbols) {
                        self.push_rule(rule, &mut out);
                    }
                }
                _ => residue.push(ci.clone()),
            }
        }
        let shallow: Vec<Ci> = structural_transform(&residue, &mut self.namer)
            .into_iter()
            .filter(|ci| self.emitted_cis.insert(ci.clone()))
            .collect();
        for ci in normalize_fixups(shallow)? {
            if let Some(rule) = translate_normalized_ci(&ci, &mut self.symbols) {
                self.push_rule(rule, &mut out);
            }
        }
        let ris: Vec<_> = tbox.ris.iter().cloned().collect();
        let trans: Vec<_> = tbox.trans.iter().cloned().collect();
        for rule in translate_role_axioms(&ris, &trans, &mut self.symbols) {
            self.push_rule(rule, &mut out);
        }
        Ok(out)
    }

    pub fn rewrite_abox(&mut self, abox: &ABox) -> Program {
        let facts = translate_abox(abox, &mut self.symbols);
        let facts = facts.into_iter().filter(|f| self.emitted_facts.insert(f.clone())).collect();
        Program {
            rules: Vec::new(),
            facts,
        }
    }

    /// `top` closure over the TBox vocabulary, empty unless some emitted
    /// rule has `top` in its body.
    pub fn top_closure(&mut self) -> Vec<Rule> {
        if !self.needs_top {
            return Vec::new();
        }
        let mut rules = Vec::new();
        for iri in self.concepts.clone() {
            let pred = mangle_predicate(&iri, &mut self.symbols);
            rules.push(Rule::new(Atom::vars(TOP, &["X"]), vec![BodyLiteral::Pos(Atom::vars(pred, &["X"]))]));
        }
        for iri in self.roles.clone() {
            let pred = mangle_predicate(&iri, &mut self.symbols);
            let body = vec![BodyLiteral::Pos(Atom::vars(pred, &["X", "Y"]))];
            rules.push(Rule::new(Atom::vars(TOP, &["X"]), body.clone()));
            rules.push(Rule::new(Atom::vars(TOP, &["Y"]), body));
        }
        rules.retain(|r| self.emitted_rules.insert(r.clone()));
        rules
    }
}

/// Facts for the assertions, plus `top(c)` for every individual `c`.
pub fn translate_abox(abox: &ABox, symbols: &mut SymbolTable) -> Vec<Atom> {
    let mut facts = IndexSet::new();
    for (class, a) in &abox.concept_asserts {
        if class.as_str() == OWL_NOTHING {
            facts.insert(Atom::ground(INCONSISTENT, Vec::new()));
        } else {
            facts.insert(Atom::ground(mangle_predicate(class, symbols), vec![a.clone()]));
        }
    }
    for (role, a, b) in &abox.role_asserts {
        facts.insert(Atom::ground(mangle_predicate(role, symbols), vec![a.clone(), b.clone()]));
    }
    for (a, b) in &abox.same_as {
        facts.insert(Atom::ground(
            SAME_AS,
            vec![GroundTerm::Individual(a.clone()), GroundTerm::Individual(b.clone())],
        ));
    }
    for c in abox.individuals() {
        facts.insert(Atom::ground(TOP, vec![GroundTerm::Individual(c)]));
    }
    facts.into_iter().collect()
}

/// The whole pipeline on one TBox and ABox. The RL profile is checked
/// first; `symbols` is extended with every predicate introduced.
pub fn rewrite_knowledge_base(
    tbox: &TBox,
    abox: &ABox,
    symbols: &mut SymbolTable,
) -> Result<Program, RewriteError> {
    rewrite_knowledge_base_with(tbox, abox, symbols, RewriteOptions::default())
}

pub fn rewrite_knowledge_base_with(
    tbox: &TBox,
    abox: &ABox,
    symbols: &mut SymbolTable,
    options: RewriteOptions,
) -> Result<Program, RewriteError> {
    let violations = check_rl_profile(tbox);
    if !violations.is_empty() {
        return Err(RewriteError::NotRl(violations));
    }
    let mut rewriter = Rewriter::new(options, std::mem::take(symbols));
    let result = rewriter.rewrite_tbox(tbox).map(|mut program| {
        program.rules.extend(rewriter.top_closure());
        program.extend(rewriter.rewrite_abox(abox));
        program
    });
    *symbols = rewriter.symbols;
    result
}
