//! Bottom-up evaluation: stratified semi-naive materialization, the outer
//! loop used when equality rules make a program non-stratifiable, a naive
//! reference evaluator, and query answers.

mod naive;
mod seminaive;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::datalog::{check_safety, Atom, CycleReport, Program, Rule, Term};
use crate::rewrite::INCONSISTENT;
use crate::sameas::{equality_rules, EqualityConfig, NO_START, SAME_AS, SAME_COMP};
use crate::terms::GroundTerm;

pub use naive::naive_materialize;

pub type Tuple = Vec<GroundTerm>;
pub type AnswerSet = BTreeSet<Tuple>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("program is not stratified: negation cycle through {}", .0.predicates.join(", "))]
    NotStratified(CycleReport),
    #[error("unsafe rule: {0}")]
    UnsafeRule(String),
    #[error("fact is not ground: {0}")]
    NonGroundFact(String),
    #[error("predicate {0} is used with different arities")]
    ArityMismatch(String),
    #[error("no query with index {0} in the model")]
    UnknownQuery(usize),
}

/// Every predicate of the program with its tuples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    relations: BTreeMap<String, BTreeSet<Tuple>>,
    /// Set when the 0-ary `inconsistent` atom is derived.
    pub inconsistent: bool,
}

impl Model {
    fn insert_relation(&mut self, name: &str, tuples: BTreeSet<Tuple>) {
        if name == INCONSISTENT && !tuples.is_empty() {
            self.inconsistent = true;
        }
        self.relations.entry(name.to_string()).or_default().extend(tuples);
    }

    pub fn relation(&self, predicate: &str) -> Option<&BTreeSet<Tuple>> {
        self.relations.get(predicate)
    }

    pub fn contains(&self, predicate: &str, tuple: &[GroundTerm]) -> bool {
        self.relations.get(predicate).is_some_and(|r| r.contains(tuple))
    }

    pub fn predicates(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &BTreeSet<Tuple>)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.relations.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Fixpoint iterations of each evaluated stratum, summed over rounds.
    pub iterations: Vec<usize>,
    /// Tuples derived beyond the input facts.
    pub derived: usize,
    /// Outer equality rounds; 0 for plain materialization.
    pub rounds: usize,
    pub elapsed: Duration,
}

impl fmt::Display for EvalStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stats strata={} iterations={} derived={} rounds={} elapsed_ms={}",
            self.iterations.len(),
            self.iterations.iter().sum::<usize>(),
            self.derived,
            self.rounds,
            self.elapsed.as_millis()
        )
    }
}

fn check_program(program: &Program) -> Result<(), EngineError> {
    if let Some(rule) = program.rules.iter().find(|r| !check_safety(r)) {
        return Err(EngineError::UnsafeRule(rule.to_string()));
    }
    if let Some(fact) = program.facts.iter().find(|f| !f.is_ground()) {
        return Err(EngineError::NonGroundFact(fact.to_string()));
    }
    Ok(())
}

/// Perfect model of a stratified program.
pub fn materialize(program: &Program) -> Result<Model, EngineError> {
    materialize_with_stats(program).map(|(m, _)| m)
}

pub fn materialize_with_stats(program: &Program) -> Result<(Model, EvalStats), EngineError> {
    let start = Instant::now();
    let (model, mut stats) = seminaive::evaluate(program)?;
    stats.elapsed = start.elapsed();
    Ok((model, stats))
}

fn same_as_facts(model: &Model) -> BTreeSet<Tuple> {
    model.relation(SAME_AS).cloned().unwrap_or_default()
}

fn facts_of<'a>(pred: &str, tuples: &'a BTreeSet<Tuple>) -> impl Iterator<Item = Atom> + 'a {
    let pred = pred.to_string();
    tuples.iter().map(move |t| Atom::ground(pred.clone(), t.clone()))
}

/// Materialization of a program with equality rules. Rounds alternate
/// between (a) `noStart`/`sameComp` from the current sameAs extension and
/// (b) every other rule with those two relations as input, until (b) stops
/// producing new sameAs tuples.
pub fn materialize_with_equality(
    program: &Program,
    cfg: EqualityConfig,
) -> Result<(Model, EvalStats), EngineError> {
    let start = Instant::now();
    check_program(program)?;
    let equality = equality_rules(cfg);
    let symmetric = equality[0].clone();
    let rest: Vec<Rule> = program
        .rules
        .iter()
        .filter(|r| !equality.contains(r) && r.head.predicate != NO_START && r.head.predicate != SAME_COMP)
        .cloned()
        .collect();

    let mut stats = EvalStats::default();
    let mut same_as: BTreeSet<Tuple> = program
        .facts
        .iter()
        .filter(|f| f.predicate == SAME_AS)
        .map(|f| {
            f.args
                .iter()
                .filter_map(|t| match t {
                    Term::Const(c) => Some(c.clone()),
                    Term::Var(_) => None,
                })
                .collect()
        })
        .collect();
    // Seeding with the symmetric closure saves a round when sameAs is only
    // asserted.
    let flipped: Vec<Tuple> = same_as.iter().map(|t| vec![t[1].clone(), t[0].clone()]).collect();
    same_as.extend(flipped);
    loop {
        stats.rounds += 1;
        let phase_a = Program {
            rules: equality.clone(),
            facts: facts_of(SAME_AS, &same_as).collect(),
        };
        let (eq_model, eq_stats) = seminaive::evaluate(&phase_a)?;
        let mut facts = program.facts.clone();
        facts.extend(facts_of(SAME_AS, &same_as));
        for pred in [NO_START, SAME_COMP] {
            if let Some(ts) = eq_model.relation(pred) {
                facts.extend(facts_of(pred, ts));
            }
        }
        let mut rules = rest.clone();
        rules.push(symmetric.clone());
        let phase_b = Program { rules, facts };
        let (mut model, b_stats) = seminaive::evaluate(&phase_b)?;
        merge_iterations(&mut stats.iterations, &eq_stats.iterations);
        merge_iterations(&mut stats.iterations, &b_stats.iterations);
        let next = same_as_facts(&model);
        if next == same_as {
            for pred in [SAME_AS, NO_START, SAME_COMP] {
                model.relations.entry(pred.to_string()).or_default();
            }
            stats.derived = model.len() - program.facts.len().min(model.len());
            stats.elapsed = start.elapsed();
            return Ok((model, stats));
        }
        same_as = next;
    }
}

fn merge_iterations(acc: &mut Vec<usize>, more: &[usize]) {
    for (i, n) in more.iter().enumerate() {
        match acc.get_mut(i) {
            Some(slot) => *slot += n,
            None => acc.push(*n),
        }
    }
}

/// sameAs cliques of the model as a map from each member to the sorted
/// clique.
pub fn same_as_cliques(model: &Model) -> HashMap<GroundTerm, std::rc::Rc<Vec<GroundTerm>>> {
    let mut parent: HashMap<GroundTerm, GroundTerm> = HashMap::new();
    fn find(parent: &mut HashMap<GroundTerm, GroundTerm>, x: &GroundTerm) -> GroundTerm {
        let p = parent.entry(x.clone()).or_insert_with(|| x.clone()).clone();
        if &p == x {
            return p;
        }
        let root = find(parent, &p);
        parent.insert(x.clone(), root.clone());
        root
    }
    if let Some(pairs) = model.relation(SAME_AS) {
        for t in pairs {
            let (a, b) = (find(&mut parent, &t[0]), find(&mut parent, &t[1]));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent.insert(hi, lo);
            }
        }
    }
    let members: Vec<GroundTerm> = parent.keys().cloned().collect();
    let mut groups: BTreeMap<GroundTerm, Vec<GroundTerm>> = BTreeMap::new();
    for m in members {
        let root = find(&mut parent, &m);
        groups.entry(root).or_default().push(m);
    }
    let mut out = HashMap::new();
    for (_, mut group) in groups {
        group.sort();
        let shared = std::rc::Rc::new(group);
        for m in shared.iter() {
            out.insert(m.clone(), shared.clone());
        }
    }
    out
}

/// Tuples of `ans_<index>`. With `expand`, every position is replaced by
/// each member of its sameAs clique.
pub fn answer_query(model: &Model, index: usize, expand: bool) -> Result<AnswerSet, EngineError> {
    let rel = model
        .relation(&format!("ans_{index}"))
        .ok_or(EngineError::UnknownQuery(index))?;
    if !expand {
        return Ok(rel.clone());
    }
    let cliques = same_as_cliques(model);
    let mut out = AnswerSet::new();
    for tuple in rel {
        let mut partial: Vec<Tuple> = vec![Vec::with_capacity(tuple.len())];
        for term in tuple {
            let options: Vec<GroundTerm> = match cliques.get(term) {
                Some(c) => c.to_vec(),
                None => vec![term.clone()],
            };
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    options.iter().map(move |o| {
                        let mut q = p.clone();
                        q.push(o.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    Ok(out)
}

/// One tuple per line, positions separated by tabs and written as `.asp`
/// constants.
pub fn answers_to_tsv(answers: &AnswerSet) -> String {
    let mut out = String::new();
    for tuple in answers {
        let cells: Vec<String> = tuple.iter().map(GroundTerm::to_asp).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datalog::{BodyLiteral, CmpOp};
    use crate::sameas::apply_non_una;

    fn ind(s: &str) -> GroundTerm {
        GroundTerm::individual(&format!("http://ex.org/{s}")).unwrap()
    }

    fn fact(p: &str, args: &[&str]) -> Atom {
        Atom::ground(p, args.iter().map(|a| ind(a)).collect())
    }

    fn rule(head: Atom, body: Vec<Atom>) -> Rule {
        Rule::new(head, body.into_iter().map(BodyLiteral::Pos).collect())
    }

    fn both(p: &Program) -> Model {
        let fast = materialize(p).unwrap();
        let slow = naive_materialize(p).unwrap();
        assert_eq!(fast, slow);
        fast
    }

    #[test]
    fn single_rule() {
        let p = Program {
            rules: vec![rule(Atom::vars("a", &["X"]), vec![Atom::vars("b", &["X"])])],
            facts: vec![Atom::ground("b", vec![GroundTerm::int(1)])],
        };
        let m = both(&p);
        assert!(m.contains("a", &[GroundTerm::int(1)]));
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn equality_rules_with_n0() {
        let p = Program {
            rules: equality_rules(EqualityConfig::with_n(0)),
            facts: vec![fact(SAME_AS, &["a", "b"])],
        };
        let m = both(&p);
        let comp: Vec<Tuple> = m.relation(SAME_COMP).unwrap().iter().cloned().collect();
        assert_eq!(comp, vec![vec![ind("a"), ind("a")], vec![ind("a"), ind("b")]]);
    }

    #[test]
    fn inconsistency_flag() {
        let p = Program {
            rules: vec![Rule::new(
                Atom::new(INCONSISTENT, vec![]),
                vec![BodyLiteral::Pos(Atom::vars("a1", &["X"])), BodyLiteral::Pos(Atom::vars("a2", &["X"]))],
            )],
            facts: vec![fact("a1", &["x"]), fact("a2", &["x"])],
        };
        assert!(both(&p).inconsistent);
    }

    #[test]
    fn transitive_closure_on_path() {
        let mut facts = Vec::new();
        for i in 0..9 {
            facts.push(Atom::ground("e", vec![GroundTerm::int(i), GroundTerm::int(i + 1)]));
        }
        let p = Program {
            rules: vec![
                rule(Atom::vars("t", &["X", "Y"]), vec![Atom::vars("e", &["X", "Y"])]),
                rule(
                    Atom::vars("t", &["X", "Z"]),
                    vec![Atom::vars("t", &["X", "Y"]), Atom::vars("t", &["Y", "Z"])],
                ),
            ],
            facts,
        };
        assert_eq!(both(&p).relation("t").unwrap().len(), 45);
    }

    #[test]
    fn empty_program() {
        assert!(both(&Program::new()).is_empty());
    }

    #[test]
    fn not_stratified_is_reported() {
        let p = Program {
            rules: vec![Rule::new(
                Atom::vars("p", &["X"]),
                vec![BodyLiteral::Pos(Atom::vars("q", &["X"])), BodyLiteral::Neg(Atom::vars("p", &["X"]))],
            )],
            facts: vec![],
        };
        assert!(matches!(materialize(&p), Err(EngineError::NotStratified(_))));
        assert!(matches!(naive_materialize(&p), Err(EngineError::NotStratified(_))));
    }

    #[test]
    fn negation_and_builtins() {
        let p = Program {
            rules: vec![Rule::new(
                Atom::vars("lonely", &["X", "Y"]),
                vec![
                    BodyLiteral::Builtin(Term::var("X"), CmpOp::Lt, Term::var("Y")),
                    BodyLiteral::Neg(Atom::vars("r", &["X", "Y"])),
                    BodyLiteral::Pos(Atom::vars("n", &["X"])),
                    BodyLiteral::Pos(Atom::vars("n", &["Y"])),
                ],
            )],
            facts: vec![
                Atom::ground("n", vec![GroundTerm::int(1)]),
                Atom::ground("n", vec![GroundTerm::int(2)]),
                Atom::ground("n", vec![GroundTerm::int(3)]),
                Atom::ground("r", vec![GroundTerm::int(1), GroundTerm::int(2)]),
            ],
        };
        let m = both(&p);
        assert_eq!(m.relation("lonely").unwrap().len(), 2);
    }

    fn example6() -> (Program, Rule) {
        let owner = rule(
            Atom::vars("dogOwner", &["X"]),
            vec![Atom::vars("hasPet", &["X", "Y"]), Atom::vars("dog", &["Y"])],
        );
        let query = rule(Atom::vars("ans_1", &["X"]), vec![Atom::vars("dogOwner", &["X"])]);
        let p = Program {
            rules: vec![owner],
            facts: vec![
                fact("hasPet", &["Peter", "Brian"]),
                fact("dog", &["BrianGriffin"]),
                fact(SAME_AS, &["Brian", "BrianGriffin"]),
            ],
        };
        (p, query)
    }

    #[test]
    fn example6_under_una_misses_the_owner() {
        let (mut p, q) = example6();
        p.rules.push(q);
        let m = materialize(&p).unwrap();
        assert!(answer_query(&m, 1, false).unwrap().is_empty());
    }

    #[test]
    fn example6_non_una() {
        for n in 0..=2 {
            let (p, q) = example6();
            let cfg = EqualityConfig::with_n(n);
            let p = apply_non_una(&p, &[q], cfg).unwrap();
            let (m, stats) = materialize_with_equality(&p, cfg).unwrap();
            assert_eq!(stats.rounds, 1);
            assert_eq!(answer_query(&m, 1, false).unwrap(), AnswerSet::from([vec![ind("Peter")]]));
        }
    }

    #[test]
    fn no_equalities_matches_plain_materialization() {
        let (mut p, q) = example6();
        p.facts.retain(|f| f.predicate != SAME_AS);
        let cfg = EqualityConfig::default();
        let p = apply_non_una(&p, &[q], cfg).unwrap();
        let (m, stats) = materialize_with_equality(&p, cfg).unwrap();
        assert_eq!(stats.rounds, 1);
        assert_eq!(m, both(&p));
    }

    #[test]
    fn expansion_and_unknown_query() {
        let mut m = Model::default();
        m.insert_relation("ans_1", BTreeSet::from([vec![ind("Brian")]]));
        m.insert_relation(SAME_AS, BTreeSet::from([vec![ind("Brian"), ind("BrianGriffin")]]));
        assert_eq!(
            answer_query(&m, 1, true).unwrap(),
            AnswerSet::from([vec![ind("Brian")], vec![ind("BrianGriffin")]])
        );
        assert_eq!(answer_query(&m, 2, false), Err(EngineError::UnknownQuery(2)));
        m.insert_relation("ans_3", BTreeSet::new());
        assert!(answer_query(&m, 3, true).unwrap().is_empty());
    }

    #[test]
    fn functional_merges_cascade() {
        // f is functional; a has f-successors b and c, which in turn have
        // f-successors d and e. Merging b and c makes d and e equal as well.
        let functional = Rule::new(
            Atom::vars(SAME_AS, &["Y1", "Y2"]),
            vec![
                BodyLiteral::Pos(Atom::vars("f", &["X", "Y1"])),
                BodyLiteral::Pos(Atom::vars("f", &["X", "Y2"])),
                BodyLiteral::builtin("Y1", CmpOp::Ne, "Y2"),
            ],
        );
        let p = Program {
            rules: vec![functional],
            facts: vec![fact("f", &["a", "b"]), fact("f", &["a", "c"]), fact("f", &["b", "d"]), fact("f", &["c", "e"])],
        };
        let cfg = EqualityConfig::default();
        let p = apply_non_una(&p, &[], cfg).unwrap();
        let (m, stats) = materialize_with_equality(&p, cfg).unwrap();
        assert!(m.contains(SAME_AS, &[ind("b"), ind("c")]));
        assert!(m.contains(SAME_AS, &[ind("d"), ind("e")]));
        assert!(stats.rounds >= 2);
        assert!(m.contains(SAME_COMP, &[ind("d"), ind("e")]));
    }

    #[test]
    fn tsv_output() {
        let answers = AnswerSet::from([vec![ind("x"), GroundTerm::int(3)], vec![ind("y"), GroundTerm::string("s")]]);
        assert_eq!(
            answers_to_tsv(&answers),
            "\"http://ex.org/x\"\t3\n\"http://ex.org/y\"\t\"s_s\"\n"
        );
    }
}
