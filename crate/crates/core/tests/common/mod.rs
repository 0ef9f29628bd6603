//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use rl2dl::datalog::{Atom, BodyLiteral, CmpOp, Program, Rule, Term};
use rl2dl::dl::{ABox, Concept, Role, TBox};
use rl2dl::engine::Model;
use rl2dl::terms::{compare_terms, GroundTerm, Iri};

pub const NS: &str = "http://ex.org/";

pub fn iri(local: &str) -> Iri {
    Iri::new(format!("{NS}{local}")).unwrap()
}

pub fn ind(local: &str) -> GroundTerm {
    GroundTerm::Individual(iri(local))
}

pub fn atomic(local: &str) -> Concept {
    Concept::atomic(iri(local))
}

pub fn role(local: &str) -> Role {
    Role::named(iri(local))
}

pub fn inv(local: &str) -> Role {
    Role::inverse_of(iri(local))
}

// ---------------------------------------------------------------------------
// Random RL knowledge bases

#[derive(Debug, Clone, Copy)]
pub struct KbShape {
    pub concepts: usize,
    pub roles: usize,
    pub max_axioms: usize,
    pub individuals: usize,
    pub max_facts: usize,
    pub at_most: bool,
}

fn gen_role(rng: &mut StdRng, shape: &KbShape) -> Role {
    let name = format!("r{}", rng.gen_range(0..shape.roles));
    if rng.gen_bool(0.3) {
        inv(&name)
    } else {
        role(&name)
    }
}

fn gen_atomic(rng: &mut StdRng, shape: &KbShape) -> Concept {
    atomic(&format!("C{}", rng.gen_range(0..shape.concepts)))
}

/// ⊤, A, C ⊓ D, C ⊔ D, ∃R.C, ≥1R.C
pub fn gen_sub(rng: &mut StdRng, shape: &KbShape, depth: usize) -> Concept {
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.05) { Concept::Top } else { gen_atomic(rng, shape) };
    }
    match rng.gen_range(0..4) {
        0 => Concept::And((0..rng.gen_range(2..=3)).map(|_| gen_sub(rng, shape, depth - 1)).collect()),
        1 => Concept::Or((0..2).map(|_| gen_sub(rng, shape, depth - 1)).collect()),
        2 => Concept::some(gen_role(rng, shape), gen_sub(rng, shape, depth - 1)),
        _ => Concept::at_least(1, gen_role(rng, shape), gen_sub(rng, shape, depth - 1)),
    }
}

/// ⊥, A, C ⊓ D, ∀R.C, ¬C, ≤1R.C
pub fn gen_super(rng: &mut StdRng, shape: &KbShape, depth: usize) -> Concept {
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.03) { Concept::Bottom } else { gen_atomic(rng, shape) };
    }
    let kinds = if shape.at_most { 5 } else { 4 };
    match rng.gen_range(0..kinds) {
        0 => Concept::And((0..2).map(|_| gen_super(rng, shape, depth - 1)).collect()),
        1 | 2 => Concept::all(gen_role(rng, shape), gen_super(rng, shape, depth - 1)),
        3 => {
            if rng.gen_bool(0.3) {
                Concept::not(gen_sub(rng, shape, depth - 1))
            } else {
                Concept::all(gen_role(rng, shape), gen_atomic(rng, shape))
            }
        }
        _ => Concept::at_most(1, gen_role(rng, shape), gen_sub(rng, shape, depth - 1)),
    }
}

pub fn gen_tbox(rng: &mut StdRng, shape: &KbShape) -> TBox {
    let mut tbox = TBox::new();
    let n = rng.gen_range(1..=shape.max_axioms);
    for _ in 0..n {
        match rng.gen_range(0..10) {
            0 => {
                let (a, b) = (gen_role(rng, shape), gen_role(rng, shape));
                tbox.add_ri(a, b);
            }
            1 if rng.gen_bool(0.3) => tbox.add_trans(gen_role(rng, shape)),
            _ => {
                let sub = gen_sub(rng, shape, 3);
                let sup = gen_super(rng, shape, 3);
                tbox.add_ci(sub, sup);
            }
        }
    }
    tbox
}

pub fn individual_name(i: usize) -> String {
    format!("i{i:03}")
}

/// Concept and role assertions over `shape.individuals` individuals.
pub fn gen_abox(rng: &mut StdRng, shape: &KbShape) -> ABox {
    let mut abox = ABox::new();
    let n = rng.gen_range(1..=shape.max_facts);
    let pick = |rng: &mut StdRng| ind(&individual_name(rng.gen_range(0..shape.individuals)));
    for _ in 0..n {
        if rng.gen_bool(0.5) {
            let c = iri(&format!("C{}", rng.gen_range(0..shape.concepts)));
            abox.concept_asserts.insert((c, pick(rng)));
        } else {
            let r = iri(&format!("r{}", rng.gen_range(0..shape.roles)));
            abox.role_asserts.insert((r, pick(rng), pick(rng)));
        }
    }
    abox
}

/// Partitions some individuals into cliques of 2..=max_size members, each
/// connected by a random spanning tree of sameAs assertions.
pub fn add_cliques(rng: &mut StdRng, abox: &mut ABox, individuals: usize, max_size: usize, budget: usize) {
    let mut pool: Vec<usize> = (0..individuals).collect();
    pool.shuffle(rng);
    let mut used = 0;
    while pool.len() >= 2 && used < budget {
        let size = rng.gen_range(2..=max_size.min(pool.len()));
        let members: Vec<usize> = pool.drain(..size).collect();
        for k in 1..members.len() {
            let other = members[rng.gen_range(0..k)];
            let (a, b) = if rng.gen_bool(0.5) { (members[k], other) } else { (other, members[k]) };
            abox.same_as.insert((iri(&individual_name(a)), iri(&individual_name(b))));
            used += 1;
        }
    }
}

/// A random SPARQL BGP over the generated vocabulary, without constants.
pub fn gen_sparql(rng: &mut StdRng, shape: &KbShape) -> String {
    let vars = ["?a", "?b", "?c", "?d"];
    let n = rng.gen_range(1..=3);
    let mut patterns = Vec::new();
    let mut seen: Vec<&str> = Vec::new();
    for _ in 0..n {
        let s = if seen.is_empty() { vars[0] } else { seen[rng.gen_range(0..seen.len())] };
        if rng.gen_bool(0.4) {
            patterns.push(format!("{s} a <{NS}C{}>", rng.gen_range(0..shape.concepts)));
        } else {
            let o = vars[rng.gen_range(0..vars.len())];
            let (s, o) = if rng.gen_bool(0.5) { (s, o) } else { (o, s) };
            patterns.push(format!("{s} <{NS}r{}> {o}", rng.gen_range(0..shape.roles)));
            for v in [s, o] {
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    let k = rng.gen_range(1..=seen.len());
    let select: Vec<&str> = seen.iter().take(k).copied().collect();
    format!("SELECT {} WHERE {{ {} }}", select.join(" "), patterns.join(" . "))
}

// ---------------------------------------------------------------------------
// Random stratified programs

fn gen_const(rng: &mut StdRng) -> GroundTerm {
    match rng.gen_range(0..6) {
        0..=2 => ind(&format!("c{}", rng.gen_range(0..5))),
        3 | 4 => GroundTerm::int(rng.gen_range(-2..4)),
        _ => GroundTerm::string(["", "a", "b"][rng.gen_range(0..3)]),
    }
}

const OPS: [CmpOp; 6] = [CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq, CmpOp::Ne];

/// Up to 20 safe rules and 200 facts. Predicates `p0..p7` have fixed
/// arities and levels; negated literals only use lower levels, so the
/// program is stratified by construction.
pub fn gen_program(rng: &mut StdRng) -> Program {
    let arity = [1, 2, 1, 2, 1, 2, 3, 0];
    let level = [0, 0, 1, 1, 2, 2, 3, 3];
    let pred = |i: usize| format!("p{i}");
    let mut program = Program::new();
    for _ in 0..rng.gen_range(0..=200) {
        let p = rng.gen_range(0..4);
        let args = (0..arity[p]).map(|_| gen_const(rng)).collect();
        program.facts.push(Atom::ground(pred(p), args));
    }
    let vars = ["X", "Y", "Z", "W"];
    for _ in 0..rng.gen_range(1..=20) {
        let head = rng.gen_range(2..8);
        let mut body = Vec::new();
        let mut bound: Vec<&str> = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let p = (0..8).filter(|&q| level[q] <= level[head]).collect::<Vec<_>>();
            let p = p[rng.gen_range(0..p.len())];
            let args: Vec<Term> = (0..arity[p])
                .map(|_| {
                    if rng.gen_bool(0.1) {
                        Term::Const(gen_const(rng))
                    } else {
                        let v = vars[rng.gen_range(0..vars.len())];
                        if !bound.contains(&v) {
                            bound.push(v);
                        }
                        Term::var(v)
                    }
                })
                .collect();
            body.push(BodyLiteral::Pos(Atom::new(pred(p), args)));
        }
        let pick = |rng: &mut StdRng| -> Term {
            if bound.is_empty() || rng.gen_bool(0.15) {
                Term::Const(gen_const(rng))
            } else {
                Term::var(bound[rng.gen_range(0..bound.len())])
            }
        };
        if rng.gen_bool(0.4) {
            let lower: Vec<usize> = (0..8).filter(|&q| level[q] < level[head]).collect();
            if !lower.is_empty() {
                let p = lower[rng.gen_range(0..lower.len())];
                let args = (0..arity[p]).map(|_| pick(rng)).collect();
                body.push(BodyLiteral::Neg(Atom::new(pred(p), args)));
            }
        }
        if rng.gen_bool(0.4) {
            let (l, r) = (pick(rng), pick(rng));
            body.push(BodyLiteral::Builtin(l, OPS[rng.gen_range(0..6)], r));
        }
        body.shuffle(rng);
        let head_args = (0..arity[head]).map(|_| pick(rng)).collect();
        program.rules.push(Rule::new(Atom::new(pred(head), head_args), body));
    }
    program
}

// ---------------------------------------------------------------------------
// Oracles

/// Rule instances whose body holds in `model` but whose head is missing.
pub fn closure_violations(program: &Program, model: &Model) -> Vec<Atom> {
    let mut missing = Vec::new();
    for rule in &program.rules {
        for env in body_matches(rule, model) {
            let head: Vec<GroundTerm> = rule.head.args.iter().map(|t| resolve(t, &env)).collect();
            if !model.contains(&rule.head.predicate, &head) {
                missing.push(Atom::ground(rule.head.predicate.clone(), head));
            }
        }
    }
    missing
}

type Env = HashMap<String, GroundTerm>;

fn resolve(t: &Term, env: &Env) -> GroundTerm {
    match t {
        Term::Const(c) => c.clone(),
        Term::Var(v) => env[v].clone(),
    }
}

fn body_matches(rule: &Rule, model: &Model) -> Vec<Env> {
    let mut envs = vec![Env::new()];
    for lit in &rule.body {
        let BodyLiteral::Pos(atom) = lit else { continue };
        let empty = BTreeSet::new();
        let rel = model.relation(&atom.predicate).unwrap_or(&empty);
        let mut next = Vec::new();
        for env in &envs {
            'tuples: for t in rel {
                let mut env = env.clone();
                for (a, v) in atom.args.iter().zip(t) {
                    match a {
                        Term::Const(c) if c != v => continue 'tuples,
                        Term::Const(_) => {}
                        Term::Var(x) => {
                            if let Some(old) = env.get(x) {
                                if old != v {
                                    continue 'tuples;
                                }
                            } else {
                                env.insert(x.clone(), v.clone());
                            }
                        }
                    }
                }
                next.push(env);
            }
        }
        envs = next;
    }
    envs.retain(|env| {
        rule.body.iter().all(|lit| match lit {
            BodyLiteral::Pos(_) => true,
            BodyLiteral::Neg(a) => {
                let t: Vec<GroundTerm> = a.args.iter().map(|x| resolve(x, env)).collect();
                !model.contains(&a.predicate, &t)
            }
            BodyLiteral::Builtin(l, op, r) => op.holds(compare_terms(&resolve(l, env), &resolve(r, env))),
        })
    });
    envs
}

/// Connected components of an undirected edge list, keyed by member.
pub fn components(edges: &[(GroundTerm, GroundTerm)]) -> BTreeMap<GroundTerm, BTreeSet<GroundTerm>> {
    let mut adj: BTreeMap<GroundTerm, Vec<GroundTerm>> = BTreeMap::new();
    for (a, b) in edges {
        adj.entry(a.clone()).or_default().push(b.clone());
        adj.entry(b.clone()).or_default().push(a.clone());
    }
    let mut out: BTreeMap<GroundTerm, BTreeSet<GroundTerm>> = BTreeMap::new();
    for start in adj.keys() {
        if out.contains_key(start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![start.clone()];
        while let Some(x) = stack.pop() {
            if comp.insert(x.clone()) {
                stack.extend(adj[&x].iter().cloned());
            }
        }
        for m in &comp {
            out.insert(m.clone(), comp.clone());
        }
    }
    out
}

/// Answers by the clique quotient: facts are rewritten onto clique minima,
/// the UNA program is materialized, and answers are expanded back over
/// clique members.
pub fn quotient_answers(una: &Program, same_as: &[(GroundTerm, GroundTerm)], query: usize) -> BTreeSet<Vec<GroundTerm>> {
    let comps = components(same_as);
    let rep = |t: &GroundTerm| comps.get(t).map_or(t.clone(), |c| c.iter().next().unwrap().clone());
    let mut program = Program {
        rules: una.rules.clone(),
        facts: Vec::new(),
    };
    for f in &una.facts {
        if f.predicate == "sameAs" {
            continue;
        }
        let args = f
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Term::Const(rep(c)),
                v => v.clone(),
            })
            .collect();
        program.facts.push(Atom::new(f.predicate.clone(), args));
    }
    let model = rl2dl::engine::naive_materialize(&program).expect("UNA program stratifies");
    let Some(rel) = model.relation(&format!("ans_{query}")) else {
        return BTreeSet::new();
    };
    let mut out = BTreeSet::new();
    for tuple in rel {
        let mut partial = vec![Vec::new()];
        for t in tuple {
            let members: Vec<GroundTerm> = comps.get(t).map_or(vec![t.clone()], |c| c.iter().cloned().collect());
            partial = partial
                .into_iter()
                .flat_map(|p: Vec<GroundTerm>| {
                    members.iter().map(move |m| {
                        let mut q = p.clone();
                        q.push(m.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

// ---------------------------------------------------------------------------
// Reading `.asp` text back

fn split_top(text: &str) -> Vec<String> {
    let (mut depth, mut quoted, mut escaped) = (0, false, false);
    let mut parts = vec![String::new()];
    for c in text.chars() {
        if quoted {
            quoted = escaped || c != '"';
            escaped = !escaped && c == '\\';
        } else {
            match c {
                '"' => quoted = true,
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(String::new());
                    continue;
                }
                _ => {}
            }
        }
        parts.last_mut().unwrap().push(c);
    }
    parts.into_iter().map(|p| p.trim().to_string()).collect()
}

fn parse_term(text: &str) -> Term {
    if text.starts_with(|c: char| c.is_ascii_uppercase()) {
        Term::var(text)
    } else {
        Term::Const(GroundTerm::parse_asp(text).unwrap_or_else(|e| panic!("{text}: {e}")))
    }
}

fn parse_atom(text: &str) -> Atom {
    match text.find('(') {
        None => Atom::new(text, vec![]),
        Some(i) => {
            let inner = &text[i + 1..text.len() - 1];
            Atom::new(&text[..i], split_top(inner).iter().map(|a| parse_term(a)).collect())
        }
    }
}

fn parse_literal(text: &str) -> BodyLiteral {
    if let Some(rest) = text.strip_prefix("not ") {
        return BodyLiteral::Neg(parse_atom(rest));
    }
    for op in [CmpOp::Ne, CmpOp::Le, CmpOp::Ge, CmpOp::Lt, CmpOp::Gt, CmpOp::Eq] {
        let sym = format!(" {} ", op.symbol());
        if let Some((l, r)) = text.split_once(&sym) {
            if !text.contains('(') {
                return BodyLiteral::Builtin(parse_term(l), op, parse_term(r));
            }
        }
    }
    BodyLiteral::Pos(parse_atom(text))
}

/// Reads the rule and fact lines of a serialized program.
pub fn read_asp(text: &str) -> Program {
    let mut program = Program::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%')) {
        let line = line.strip_suffix('.').expect("statements end with a dot");
        match line.split_once(" :- ") {
            Some((head, body)) => program
                .rules
                .push(Rule::new(parse_atom(head), split_top(body).iter().map(|l| parse_literal(l)).collect())),
            None => program.facts.push(parse_atom(line)),
        }
    }
    program
}
