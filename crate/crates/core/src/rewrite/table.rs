use crate::datalog::{Atom, BodyLiteral, CmpOp, Rule};
use crate::dl::{Ci, Concept, Ri, Role};
use crate::terms::{mangle_predicate, SymbolTable};

use super::{concept_predicate, prune_top, role_atom, INCONSISTENT, SAME_AS, TOP};

fn unary(c: &Concept, var: &str, symbols: &mut SymbolTable) -> Option<Atom> {
    match c {
        Concept::Atomic(name) => Some(Atom::vars(concept_predicate(name, symbols), &[var])),
        Concept::Top => Some(Atom::vars(TOP, &[var])),
        _ => None,
    }
}

/// Translates a CI in normalized form. Returns `None` for CIs that carry
/// no information (⊤ on the right, ⊥ among the left conjuncts) or are not
/// normalized.
pub fn translate_normalized_ci(ci: &Ci, symbols: &mut SymbolTable) -> Option<Rule> {
    let conjuncts = ci.sub.flat_conjuncts();
    if conjuncts.iter().any(|c| matches!(c, Concept::Bottom)) {
        return None;
    }
    let mut lhs = Vec::new();
    for c in &conjuncts {
        lhs.push(BodyLiteral::Pos(unary(c, "X", symbols)?));
    }
    let mut rule = match &ci.sup {
        Concept::Bottom => Rule::new(Atom::new(INCONSISTENT, Vec::new()), lhs),
        Concept::Atomic(_) => Rule::new(unary(&ci.sup, "X", symbols)?, lhs),
        Concept::All(role, filler) => {
            let mut body = vec![BodyLiteral::Pos(role_atom(role, "X", "Y", symbols))];
            body.extend(lhs);
            let head = match &**filler {
                Concept::Bottom => Atom::new(INCONSISTENT, Vec::new()),
                Concept::Atomic(_) => unary(filler, "Y", symbols)?,
                _ => return None,
            };
            Rule::new(head, body)
        }
        Concept::AtMost(1, role, filler) => {
            let mut body = lhs;
            body.push(BodyLiteral::Pos(role_atom(role, "X", "Y1", symbols)));
            body.push(BodyLiteral::Pos(role_atom(role, "X", "Y2", symbols)));
            if let Concept::Atomic(_) = **filler {
                body.push(BodyLiteral::Pos(unary(filler, "Y1", symbols)?));
                body.push(BodyLiteral::Pos(unary(filler, "Y2", symbols)?));
            } else if !matches!(**filler, Concept::Top) {
                return None;
            }
            body.push(BodyLiteral::builtin("Y1", CmpOp::Ne, "Y2"));
            Rule::new(Atom::vars(SAME_AS, &["Y1", "Y2"]), body)
        }
        _ => return None,
    };
    prune_top(&mut rule.body);
    Some(rule)
}

/// `R ⊑ S` gives `S(X,Y) :- R(X,Y)`; `trans(R)` gives the transitivity rule
/// on the underlying role name.
pub fn translate_role_axioms(ris: &[Ri], trans: &[Role], symbols: &mut SymbolTable) -> Vec<Rule> {
    let mut rules = Vec::new();
    for ri in ris {
        let head = role_atom(&ri.sup, "X", "Y", symbols);
        let body = role_atom(&ri.sub, "X", "Y", symbols);
        if head != body {
            rules.push(Rule::new(head, vec![BodyLiteral::Pos(body)]));
        }
    }
    for role in trans {
        let r = mangle_predicate(&role.name, symbols);
        rules.push(Rule::new(
            Atom::vars(r.clone(), &["X", "Z"]),
            vec![
                BodyLiteral::Pos(Atom::vars(r.clone(), &["X", "Y"])),
                BodyLiteral::Pos(Atom::vars(r, &["Y", "Z"])),
            ],
        ));
    }
    rules
}
