use crate::datalog::{Atom, BodyLiteral, Rule};
use crate::dl::{Ci, Concept};
use crate::terms::SymbolTable;

use super::{concept_predicate, prune_top, role_atom, RewriteError, TOP};

fn push(acc: &mut Vec<BodyLiteral>, atom: Atom) {
    let lit = BodyLiteral::Pos(atom);
    if !acc.contains(&lit) {
        acc.push(lit);
    }
}

/// Appends the body literals for the ELI concept `c` rooted at `var`.
///
/// Each existential clause gets the variable `var_k`, where `k` is `clause`
/// for a lone existential and its position among the existential conjuncts
/// for a conjunction. Nested conjunctions are flattened first.
pub fn translate_eli(
    c: &Concept,
    var: &str,
    clause: usize,
    acc: &mut Vec<BodyLiteral>,
    symbols: &mut SymbolTable,
) -> Result<(), RewriteError> {
    match c {
        Concept::Top => push(acc, Atom::vars(TOP, &[var])),
        Concept::Atomic(name) => push(acc, Atom::vars(concept_predicate(name, symbols), &[var])),
        Concept::And(_) => {
            let mut k = 0;
            for conjunct in c.flat_conjuncts() {
                let is_exists = matches!(conjunct, Concept::Some(..) | Concept::AtLeast(1, ..));
                if is_exists {
                    k += 1;
                }
                translate_eli(conjunct, var, if is_exists { k } else { 1 }, acc, symbols)?;
            }
        }
        Concept::Some(role, d) | Concept::AtLeast(1, role, d) => {
            let new_var = format!("{var}_{clause}");
            push(acc, role_atom(role, var, &new_var, symbols));
            translate_eli(d, &new_var, 1, acc, symbols)?;
        }
        other => return Err(RewriteError::NotEli(other.clone())),
    }
    Ok(())
}

/// `⊔Cⱼ ⊑ ⊓Aₖ` becomes one rule `Aₖ(X) :- body(Cⱼ)` per pair, head
/// conjuncts outermost.
pub fn translate_direct_ci(ci: &Ci, symbols: &mut SymbolTable) -> Result<Vec<Rule>, RewriteError> {
    let disjuncts: Vec<&Concept> = match &ci.sub {
        Concept::Or(cs) => cs.iter().collect(),
        c => vec![c],
    };
    let mut bodies = Vec::with_capacity(disjuncts.len());
    for d in disjuncts {
        let mut body = Vec::new();
        translate_eli(d, "X", 1, &mut body, symbols)?;
        prune_top(&mut body);
        bodies.push(body);
    }
    let mut rules = Vec::new();
    for head in ci.sup.flat_conjuncts() {
        let Concept::Atomic(name) = head else { continue };
        let head = Atom::vars(concept_predicate(name, symbols), &["X"]);
        for body in &bodies {
            rules.push(Rule::new(head.clone(), body.clone()));
        }
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::test_util::*;
    use crate::dl::Concept as C;

    fn body(c: &Concept) -> Vec<String> {
        let mut acc = Vec::new();
        translate_eli(c, "X", 1, &mut acc, &mut SymbolTable::new()).unwrap();
        acc.iter().map(|l| l.to_string()).collect()
    }

    fn example_concept() -> Concept {
        and(vec![
            C::some(r("r"), C::some(r("s"), and(vec![a("C"), a("D")]))),
            C::at_least(1, r("t"), and(vec![a("E"), C::some(inv("u"), a("F"))])),
        ])
    }

    #[test]
    fn worked_example() {
        assert_eq!(
            body(&example_concept()),
            ["r(X,X_1)", "s(X_1,X_1_1)", "c(X_1_1)", "d(X_1_1)", "t(X,X_2)", "e(X_2)", "u(X_2_1,X_2)", "f(X_2_1)"]
        );
    }

    #[test]
    fn base_cases() {
        assert_eq!(body(&a("A")), ["a(X)"]);
        assert_eq!(body(&C::some(inv("r"), a("B"))), ["r(X_1,X)", "b(X_1)"]);
        assert_eq!(body(&C::Top), ["top(X)"]);
    }

    #[test]
    fn nested_conjunctions_do_not_clash() {
        let c = and(vec![C::some(r("r"), a("A")), and(vec![C::some(r("s"), a("B"))])]);
        assert_eq!(body(&c), ["r(X,X_1)", "a(X_1)", "s(X,X_2)", "b(X_2)"]);
    }

    #[test]
    fn non_eli_is_rejected() {
        let mut acc = Vec::new();
        let err = translate_eli(&C::all(r("r"), a("A")), "X", 1, &mut acc, &mut SymbolTable::new());
        assert!(matches!(err, Err(RewriteError::NotEli(_))));
    }

    #[test]
    fn direct_cross_product() {
        let ci = ci(C::Or(vec![a("B"), a("C")]), and(vec![a("A1"), a("A2")]));
        let rules: Vec<String> = translate_direct_ci(&ci, &mut SymbolTable::new())
            .unwrap()
            .iter()
            .map(|r| r.to_string())
            .collect();
        assert_eq!(rules, ["a1(X) :- b(X).", "a1(X) :- c(X).", "a2(X) :- b(X).", "a2(X) :- c(X)."]);
    }

    #[test]
    fn direct_worked_example() {
        let rules = translate_direct_ci(&ci(example_concept(), a("A")), &mut SymbolTable::new()).unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(
            rules[0].to_string(),
            "a(X) :- r(X,X_1), s(X_1,X_1_1), c(X_1_1), d(X_1_1), t(X,X_2), e(X_2), u(X_2_1,X_2), f(X_2_1)."
        );
        let simple = translate_direct_ci(&ci(a("A"), a("B")), &mut SymbolTable::new()).unwrap();
        assert_eq!(simple[0].to_string(), "b(X) :- a(X).");
    }

    #[test]
    fn redundant_top_is_pruned() {
        let rules = translate_direct_ci(&ci(C::some(r("r"), C::Top), a("A")), &mut SymbolTable::new()).unwrap();
        assert_eq!(rules[0].to_string(), "a(X) :- r(X,X_1).");
        let rules = translate_direct_ci(&ci(C::Top, a("A")), &mut SymbolTable::new()).unwrap();
        assert_eq!(rules[0].to_string(), "a(X) :- top(X).");
    }
}
