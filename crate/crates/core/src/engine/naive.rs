//! Reference evaluator: stratum by stratum, every rule is re-applied to the
//! whole database until nothing changes. Slow, but small enough to trust.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::datalog::{stratify, Atom, BodyLiteral, Program, Rule, Term};
use crate::terms::{compare_terms, GroundTerm};

use super::{check_program, EngineError, Model, Tuple};

type Db = BTreeMap<String, BTreeSet<Tuple>>;
type Env = HashMap<String, GroundTerm>;

fn resolve(t: &Term, env: &Env) -> Option<GroundTerm> {
    match t {
        Term::Const(c) => Some(c.clone()),
        Term::Var(v) => env.get(v).cloned(),
    }
}

fn matches(atom: &Atom, tuple: &[GroundTerm], env: &Env) -> Option<Env> {
    let mut env = env.clone();
    for (arg, val) in atom.args.iter().zip(tuple) {
        match arg {
            Term::Const(c) if c != val => return None,
            Term::Const(_) => {}
            Term::Var(v) => match env.get(v) {
                Some(bound) if bound != val => return None,
                Some(_) => {}
                None => {
                    env.insert(v.clone(), val.clone());
                }
            },
        }
    }
    Some(env)
}

fn ground(atom: &Atom, env: &Env) -> Tuple {
    atom.args.iter().map(|a| resolve(a, env).expect("safe rule")).collect()
}

fn apply(rule: &Rule, db: &Db) -> Vec<Tuple> {
    let mut envs = vec![Env::new()];
    for lit in rule.body.iter().filter(|l| matches!(l, BodyLiteral::Pos(_))) {
        let BodyLiteral::Pos(atom) = lit else { unreachable!() };
        let Some(rel) = db.get(&atom.predicate) else {
            return Vec::new();
        };
        envs = envs
            .iter()
            .flat_map(|env| rel.iter().filter(|t| t.len() == atom.args.len()).filter_map(|t| matches(atom, t, env)))
            .collect();
    }
    envs.into_iter()
        .filter(|env| {
            rule.body.iter().all(|lit| match lit {
                BodyLiteral::Pos(_) => true,
                BodyLiteral::Neg(atom) => !db.get(&atom.predicate).is_some_and(|r| r.contains(&ground(atom, env))),
                BodyLiteral::Builtin(l, op, r) => {
                    let (l, r) = (resolve(l, env).expect("safe rule"), resolve(r, env).expect("safe rule"));
                    op.holds(compare_terms(&l, &r))
                }
            })
        })
        .map(|env| ground(&rule.head, &env))
        .collect()
}

/// Same result as `materialize`, computed without indexes or deltas.
pub fn naive_materialize(program: &Program) -> Result<Model, EngineError> {
    check_program(program)?;
    let strata = stratify(program).map_err(EngineError::NotStratified)?;
    let mut db = Db::new();
    let mut arity: HashMap<&str, usize> = HashMap::new();
    let atoms = program
        .facts
        .iter()
        .chain(program.rules.iter().flat_map(|r| {
            std::iter::once(&r.head).chain(r.body.iter().filter_map(|l| match l {
                BodyLiteral::Pos(a) | BodyLiteral::Neg(a) => Some(a),
                BodyLiteral::Builtin(..) => None,
            }))
        }));
    for atom in atoms {
        if *arity.entry(&atom.predicate).or_insert(atom.args.len()) != atom.args.len() {
            return Err(EngineError::ArityMismatch(atom.predicate.clone()));
        }
        db.entry(atom.predicate.clone()).or_default();
    }
    for fact in &program.facts {
        db.get_mut(&fact.predicate).unwrap().insert(ground(fact, &Env::new()));
    }
    for stratum in &strata.strata {
        let rules: Vec<&Rule> = program.rules.iter().filter(|r| stratum.contains(&r.head.predicate)).collect();
        loop {
            let mut changed = false;
            for rule in &rules {
                for t in apply(rule, &db) {
                    changed |= db.get_mut(&rule.head.predicate).unwrap().insert(t);
                }
            }
            if !changed {
                break;
            }
        }
    }
    let mut model = Model::default();
    for (name, tuples) in db {
        model.insert_relation(&name, tuples);
    }
    Ok(model)
}
