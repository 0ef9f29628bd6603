//! Indexed semi-naive evaluation over interned constants.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::datalog::{stratify, BodyLiteral, CmpOp, Program, Rule, Term};
use crate::terms::{compare_terms, GroundTerm};

use super::{check_program, EngineError, EvalStats, Model};

const UNBOUND: u32 = u32::MAX;

type Tuple = Box<[u32]>;

#[derive(Default)]
struct Relation {
    arity: usize,
    tuples: Vec<Tuple>,
    set: HashSet<Tuple>,
    /// Bound-position mask to key to ascending tuple positions.
    indexes: HashMap<u64, HashMap<Tuple, Vec<usize>>>,
}

fn project(t: &[u32], mask: u64) -> Tuple {
    t.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, v)| *v)
        .collect()
}

impl Relation {
    fn insert(&mut self, t: Tuple) -> bool {
        if self.set.contains(&t) {
            return false;
        }
        let pos = self.tuples.len();
        for (mask, index) in &mut self.indexes {
            index.entry(project(&t, *mask)).or_default().push(pos);
        }
        self.set.insert(t.clone());
        self.tuples.push(t);
        true
    }

    fn ensure_index(&mut self, mask: u64) {
        if mask == 0 || self.indexes.contains_key(&mask) {
            return;
        }
        let mut index: HashMap<Tuple, Vec<usize>> = HashMap::new();
        for (pos, t) in self.tuples.iter().enumerate() {
            index.entry(project(t, mask)).or_default().push(pos);
        }
        self.indexes.insert(mask, index);
    }

    fn positions(&self, mask: u64, key: &[u32], lo: usize, hi: usize) -> Positions<'_> {
        if mask == 0 {
            return Positions::Span(lo..hi);
        }
        match self.indexes.get(&mask).and_then(|ix| ix.get(key)) {
            Some(list) => {
                let a = list.partition_point(|p| *p < lo);
                let b = list.partition_point(|p| *p < hi);
                Positions::List(list[a..b].iter())
            }
            None => Positions::Span(0..0),
        }
    }
}

enum Positions<'a> {
    Span(std::ops::Range<usize>),
    List(std::slice::Iter<'a, usize>),
}

impl Iterator for Positions<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self {
            Positions::Span(r) => r.next(),
            Positions::List(it) => it.next().copied(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Src {
    Const(u32),
    Slot(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Range {
    /// Tuples present before the current delta.
    Old,
    Delta,
    All,
}

#[derive(Debug, Clone)]
enum Step {
    Scan {
        rel: usize,
        range: Range,
        mask: u64,
        key: Vec<Src>,
        binds: Vec<(usize, usize)>,
        same: Vec<(usize, usize)>,
    },
    Neg {
        rel: usize,
        args: Vec<Src>,
    },
    Cmp(Src, CmpOp, Src),
}

#[derive(Debug, Clone)]
struct Plan {
    head_rel: usize,
    head: Vec<Src>,
    slots: usize,
    steps: Vec<Step>,
    /// `cut[j] = Some(g)`: nothing from step `j` on reads a variable bound
    /// by steps `g..j`, so once step `j` has run, steps `g..j` need not
    /// look for further matches.
    cut: Vec<Option<usize>>,
    delta_rel: Option<usize>,
}

struct Db {
    rels: Vec<Relation>,
    pred_ids: HashMap<String, usize>,
    names: Vec<String>,
}

struct Interner {
    ids: HashMap<GroundTerm, u32>,
    terms: Vec<GroundTerm>,
}

impl Interner {
    fn new(program: &Program) -> Self {
        let mut all: BTreeSet<GroundTerm> = BTreeSet::new();
        for f in &program.facts {
            for t in &f.args {
                if let Term::Const(c) = t {
                    all.insert(c.clone());
                }
            }
        }
        for r in &program.rules {
            let head = r.head.args.iter();
            let body = r.body.iter().flat_map(|l| l.terms());
            for t in head.chain(body) {
                if let Term::Const(c) = t {
                    all.insert(c.clone());
                }
            }
        }
        let mut terms: Vec<GroundTerm> = all.into_iter().collect();
        terms.sort_by(compare_terms);
        let ids = terms.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        Interner { ids, terms }
    }

    fn id(&self, t: &GroundTerm) -> u32 {
        self.ids[t]
    }
}

fn compile(
    rule: &Rule,
    delta: Option<usize>,
    recursive: &dyn Fn(&str) -> bool,
    db: &Db,
    interner: &Interner,
) -> Plan {
    let vars: Vec<String> = rule.variables().into_iter().collect();
    let slot = |v: &str| vars.iter().position(|w| w == v).expect("rule variable");
    let src = |t: &Term| match t {
        Term::Const(c) => Src::Const(interner.id(c)),
        Term::Var(v) => Src::Slot(slot(v)),
    };
    let mut bound = vec![false; vars.len()];
    let mut placed = vec![false; rule.body.len()];
    let mut steps = Vec::new();

    let is_bound = |t: &Term, bound: &[bool]| match t {
        Term::Const(_) => true,
        Term::Var(v) => bound[slot(v)],
    };

    let place = |i: usize, steps: &mut Vec<Step>, bound: &mut Vec<bool>| {
        let BodyLiteral::Pos(atom) = &rule.body[i] else {
            unreachable!("only positive literals are scanned");
        };
        let range = if Some(i) == delta {
            Range::Delta
        } else if delta.is_some_and(|d| i < d) && recursive(&atom.predicate) {
            Range::Old
        } else {
            Range::All
        };
        let mut mask = 0u64;
        let mut key = Vec::new();
        let mut binds = Vec::new();
        let mut same = Vec::new();
        let mut first_pos: HashMap<usize, usize> = HashMap::new();
        for (pos, t) in atom.args.iter().enumerate() {
            if is_bound(t, bound) {
                mask |= 1 << pos;
                key.push(src(t));
            } else {
                let s = slot(t.as_var().expect("unbound term is a variable"));
                match first_pos.get(&s) {
                    Some(first) => same.push((*first, pos)),
                    None => {
                        first_pos.insert(s, pos);
                        binds.push((pos, s));
                    }
                }
            }
        }
        for (_, s) in &binds {
            bound[*s] = true;
        }
        steps.push(Step::Scan {
            rel: db.pred_ids[&atom.predicate],
            range,
            mask,
            key,
            binds,
            same,
        });
    };

    let flush = |steps: &mut Vec<Step>, bound: &[bool], placed: &mut Vec<bool>| {
        for (i, lit) in rule.body.iter().enumerate() {
            if placed[i] {
                continue;
            }
            match lit {
                BodyLiteral::Neg(a) if a.args.iter().all(|t| is_bound(t, bound)) => {
                    steps.push(Step::Neg {
                        rel: db.pred_ids[&a.predicate],
                        args: a.args.iter().map(src).collect(),
                    });
                    placed[i] = true;
                }
                BodyLiteral::Builtin(l, op, r) if is_bound(l, bound) && is_bound(r, bound) => {
                    steps.push(Step::Cmp(src(l), *op, src(r)));
                    placed[i] = true;
                }
                _ => {}
            }
        }
    };

    flush(&mut steps, &bound, &mut placed);
    if let Some(d) = delta {
        place(d, &mut steps, &mut bound);
        placed[d] = true;
        flush(&mut steps, &bound, &mut placed);
    }
    loop {
        let next = rule
            .body
            .iter()
            .enumerate()
            .filter(|(i, l)| !placed[*i] && matches!(l, BodyLiteral::Pos(_)))
            .max_by_key(|(i, l)| {
                let BodyLiteral::Pos(a) = l else { unreachable!() };
                let bound_args = a.args.iter().filter(|t| is_bound(t, &bound)).count();
                let all_bound = bound_args == a.args.len();
                (all_bound, bound_args, std::cmp::Reverse(*i))
            })
            .map(|(i, _)| i);
        let Some(i) = next else { break };
        place(i, &mut steps, &mut bound);
        placed[i] = true;
        flush(&mut steps, &bound, &mut placed);
    }
    debug_assert!(placed.iter().all(|p| *p), "safe rules place every literal");

    let head: Vec<Src> = rule.head.args.iter().map(src).collect();
    let cut = cut_points(&steps, &head, vars.len());
    Plan {
        head_rel: db.pred_ids[&rule.head.predicate],
        head,
        slots: vars.len(),
        steps,
        cut,
        delta_rel: delta.map(|d| match &rule.body[d] {
            BodyLiteral::Pos(a) => db.pred_ids[&a.predicate],
            _ => unreachable!(),
        }),
    }
}

fn cut_points(steps: &[Step], head: &[Src], slots: usize) -> Vec<Option<usize>> {
    let slots_of = |srcs: &mut dyn Iterator<Item = &Src>, into: &mut Vec<bool>| {
        for s in srcs {
            if let Src::Slot(i) = s {
                into[*i] = true;
            }
        }
    };
    let n = steps.len();
    let mut needed = vec![vec![false; slots]; n + 1];
    slots_of(&mut head.iter(), &mut needed[n]);
    for j in (0..n).rev() {
        let mut here = needed[j + 1].clone();
        match &steps[j] {
            Step::Scan { key, .. } => slots_of(&mut key.iter(), &mut here),
            Step::Neg { args, .. } => slots_of(&mut args.iter(), &mut here),
            Step::Cmp(l, _, r) => slots_of(&mut [l, r].into_iter(), &mut here),
        }
        needed[j] = here;
    }
    let binds = |step: &Step| -> Vec<usize> {
        match step {
            Step::Scan { binds, .. } => binds.iter().map(|(_, s)| *s).collect(),
            _ => Vec::new(),
        }
    };
    (0..=n)
        .map(|j| {
            let mut g = j;
            while g > 0 && binds(&steps[g - 1]).iter().all(|s| !needed[j][*s]) {
                g -= 1;
            }
            (g < j).then_some(g)
        })
        .collect()
}

fn value(s: Src, env: &[u32]) -> u32 {
    match s {
        Src::Const(c) => c,
        Src::Slot(i) => env[i],
    }
}

struct Exec<'a> {
    db: &'a Db,
    starts: &'a [usize],
    plan: &'a Plan,
    out: &'a mut Vec<Tuple>,
    seen: &'a mut HashSet<Tuple>,
}

const NO_CUT: usize = usize::MAX;

impl Exec<'_> {
    /// Returns the step to unwind to, or `NO_CUT`.
    fn run(&mut self, step: usize, env: &mut Vec<u32>) -> usize {
        let signal = self.plan.cut[step].unwrap_or(NO_CUT);
        let Some(s) = self.plan.steps.get(step) else {
            let t: Tuple = self.plan.head.iter().map(|s| value(*s, env)).collect();
            if !self.db.rels[self.plan.head_rel].set.contains(&t) && self.seen.insert(t.clone()) {
                self.out.push(t);
            }
            return signal;
        };
        let inner = match s {
            Step::Scan {
                rel,
                range,
                mask,
                key,
                binds,
                same,
            } => {
                let db = self.db;
                let r = &db.rels[*rel];
                let (lo, hi) = match range {
                    Range::All => (0, r.tuples.len()),
                    Range::Old => (0, self.starts[*rel]),
                    Range::Delta => (self.starts[*rel], r.tuples.len()),
                };
                let key: Vec<u32> = key.iter().map(|s| value(*s, env)).collect();
                let mut inner = NO_CUT;
                if lo < hi {
                    for pos in r.positions(*mask, &key, lo, hi) {
                        let t = &r.tuples[pos];
                        if same.iter().any(|(a, b)| t[*a] != t[*b]) {
                            continue;
                        }
                        for (p, slot) in binds {
                            env[*slot] = t[*p];
                        }
                        inner = self.run(step + 1, env);
                        if inner <= step {
                            break;
                        }
                    }
                }
                for (_, slot) in binds {
                    env[*slot] = UNBOUND;
                }
                inner
            }
            Step::Neg { rel, args } => {
                let t: Tuple = args.iter().map(|s| value(*s, env)).collect();
                if self.db.rels[*rel].set.contains(&t) {
                    NO_CUT
                } else {
                    self.run(step + 1, env)
                }
            }
            Step::Cmp(l, op, r) => {
                if op.holds(value(*l, env).cmp(&value(*r, env))) {
                    self.run(step + 1, env)
                } else {
                    NO_CUT
                }
            }
        };
        if inner < step {
            inner.min(signal)
        } else {
            signal
        }
    }
}

pub(super) fn evaluate(program: &Program) -> Result<(Model, EvalStats), EngineError> {
    check_program(program)?;
    let strata = stratify(program).map_err(EngineError::NotStratified)?;
    let interner = Interner::new(program);

    let mut db = Db {
        rels: Vec::new(),
        pred_ids: HashMap::new(),
        names: Vec::new(),
    };
    let declare = |db: &mut Db, name: &str, arity: usize| -> Result<usize, EngineError> {
        if let Some(&id) = db.pred_ids.get(name) {
            if db.rels[id].arity != arity {
                return Err(EngineError::ArityMismatch(name.to_string()));
            }
            return Ok(id);
        }
        let id = db.rels.len();
        db.rels.push(Relation {
            arity,
            ..Relation::default()
        });
        db.pred_ids.insert(name.to_string(), id);
        db.names.push(name.to_string());
        Ok(id)
    };
    for rule in &program.rules {
        declare(&mut db, &rule.head.predicate, rule.head.args.len())?;
        for lit in &rule.body {
            if let BodyLiteral::Pos(a) | BodyLiteral::Neg(a) = lit {
                declare(&mut db, &a.predicate, a.args.len())?;
            }
        }
    }
    for fact in &program.facts {
        let id = declare(&mut db, &fact.predicate, fact.args.len())?;
        let t: Tuple = fact
            .args
            .iter()
            .map(|a| match a {
                Term::Const(c) => interner.id(c),
                Term::Var(_) => unreachable!("facts are checked to be ground"),
            })
            .collect();
        db.rels[id].insert(t);
    }
    let facts_count: usize = db.rels.iter().map(|r| r.tuples.len()).sum();

    let mut stats = EvalStats::default();
    let mut starts = vec![0usize; db.rels.len()];
    for stratum in &strata.strata {
        let members: HashSet<&str> = stratum.iter().map(String::as_str).collect();
        let rules: Vec<&Rule> = program
            .rules
            .iter()
            .filter(|r| members.contains(r.head.predicate.as_str()))
            .collect();
        if rules.is_empty() {
            continue;
        }
        let recursive = |p: &str| members.contains(p);
        let mut base = Vec::new();
        let mut incremental = Vec::new();
        for rule in &rules {
            let rec: Vec<usize> = rule
                .body
                .iter()
                .enumerate()
                .filter(|(_, l)| matches!(l, BodyLiteral::Pos(a) if recursive(&a.predicate)))
                .map(|(i, _)| i)
                .collect();
            if rec.is_empty() {
                base.push(compile(rule, None, &recursive, &db, &interner));
            } else {
                for d in rec {
                    incremental.push(compile(rule, Some(d), &recursive, &db, &interner));
                }
            }
        }
        for plan in base.iter().chain(&incremental) {
            for step in &plan.steps {
                if let Step::Scan { rel, mask, .. } = step {
                    db.rels[*rel].ensure_index(*mask);
                }
            }
        }
        for id in members.iter().filter_map(|p| db.pred_ids.get(*p)) {
            starts[*id] = 0;
        }

        let mut iterations = 0;
        loop {
            let mut derived: BTreeMap<usize, (Vec<Tuple>, HashSet<Tuple>)> = BTreeMap::new();
            let plans: Vec<&Plan> = if iterations == 0 {
                base.iter().chain(&incremental).collect()
            } else {
                incremental.iter().collect()
            };
            for plan in plans {
                if let Some(d) = plan.delta_rel {
                    if starts[d] >= db.rels[d].tuples.len() {
                        continue;
                    }
                }
                let (out, seen) = derived.entry(plan.head_rel).or_default();
                let mut env = vec![UNBOUND; plan.slots];
                Exec {
                    db: &db,
                    starts: &starts,
                    plan,
                    out,
                    seen,
                }
                .run(0, &mut env);
            }
            iterations += 1;
            for id in members.iter().filter_map(|p| db.pred_ids.get(*p)) {
                starts[*id] = db.rels[*id].tuples.len();
            }
            let mut changed = false;
            for (rel, (tuples, _)) in derived {
                for t in tuples {
                    changed |= db.rels[rel].insert(t);
                }
            }
            if !changed {
                break;
            }
        }
        stats.iterations.push(iterations);
    }

    let total: usize = db.rels.iter().map(|r| r.tuples.len()).sum();
    stats.derived = total - facts_count;
    let mut model = Model::default();
    for (id, rel) in db.rels.iter().enumerate() {
        let set = rel
            .tuples
            .iter()
            .map(|t| t.iter().map(|i| interner.terms[*i as usize].clone()).collect())
            .collect();
        model.insert_relation(&db.names[id], set);
    }
    Ok((model, stats))
}
