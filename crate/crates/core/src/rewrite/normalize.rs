use indexmap::IndexSet;

use crate::dl::{child_polarity, inverse_role, is_normalized, Ci, Concept, Polarity};

use super::{FreshNamer, RewriteError};

/// `st(C)`: `C` with each direct sub-concept replaced by its name.
fn st(c: &Concept, namer: &mut FreshNamer) -> Concept {
    let mut name = |d: &Concept| namer.name(d);
    match c {
        Concept::Not(d) => Concept::not(name(d)),
        Concept::And(cs) => Concept::And(cs.iter().map(name).collect()),
        Concept::Or(cs) => Concept::Or(cs.iter().map(name).collect()),
        Concept::All(r, d) => Concept::all(r.clone(), name(d)),
        Concept::Some(r, d) => Concept::some(r.clone(), name(d)),
        Concept::AtLeast(n, r, d) => Concept::at_least(*n, r.clone(), name(d)),
        Concept::AtMost(n, r, d) => Concept::at_most(*n, r.clone(), name(d)),
        leaf => leaf.clone(),
    }
}

fn occurrence(c: &Concept, polarity: Polarity, namer: &mut FreshNamer, out: &mut IndexSet<Ci>) {
    if namer.is_enhanced() && c.is_name_like() {
        return;
    }
    let name = namer.name(c);
    let shallow = st(c, namer);
    if matches!(polarity, Polarity::Positive | Polarity::Both) {
        out.insert(Ci::new(name.clone(), shallow.clone()));
    }
    if matches!(polarity, Polarity::Negative | Polarity::Both) {
        out.insert(Ci::new(shallow, name));
    }
    let inner = child_polarity(c, polarity);
    for child in c.children() {
        occurrence(child, inner, namer, out);
    }
}

/// Structural transformation of `cis`: for each sub-concept occurrence
/// `A_C ⊑ st(C)` (positive) or `st(C) ⊑ A_C` (negative), and `A_C ⊑ A_D`
/// per CI. Fresh names are assigned in pre-order, left side first.
pub fn structural_transform(cis: &[Ci], namer: &mut FreshNamer) -> Vec<Ci> {
    let mut out = IndexSet::new();
    for ci in cis {
        let sub = ci.sub.canonical();
        let sup = ci.sup.canonical();
        for side in [&sub, &sup] {
            side.for_each_subconcept(&mut |d| {
                namer.name(d);
            });
        }
        occurrence(&sub, Polarity::Negative, namer, &mut out);
        occurrence(&sup, Polarity::Positive, namer, &mut out);
        out.insert(Ci::new(namer.name(&sub), namer.name(&sup)));
    }
    out.into_iter().collect()
}

fn is_name(c: &Concept) -> bool {
    matches!(c, Concept::Atomic(_) | Concept::Bottom | Concept::Top)
}

/// Conjunction of `a` and `b` with nested conjunctions spliced and ⊤
/// dropped.
fn conjoin(a: &Concept, b: &Concept) -> Concept {
    let mut parts: Vec<Concept> = a.flat_conjuncts().into_iter().chain(b.flat_conjuncts()).cloned().collect();
    parts.retain(|c| *c != Concept::Top);
    match parts.len() {
        0 => Concept::Top,
        1 => parts.pop().expect("one part"),
        _ => Concept::And(parts),
    }
}

/// Rewrites shallow CIs until all of them are in normalized form:
/// `A ⊑ ¬B` to `A ⊓ B ⊑ ⊥`, conjunctions on the right and disjunctions on
/// the left are split, and `∃R.B ⊑ A` / `≥1R.B ⊑ A` become `B ⊑ ∀R⁻.A`.
/// Trivial CIs are dropped along the way.
pub fn normalize_fixups(shallow: Vec<Ci>) -> Result<Vec<Ci>, RewriteError> {
    let mut out = IndexSet::new();
    let mut work: Vec<Ci> = shallow;
    work.reverse();
    while let Some(ci) = work.pop() {
        let Ci { sub, sup } = &ci;
        if sup.is_tautology() || sub.has_bottom_conjunct() || sub == sup {
            continue;
        }
        let mut next = Vec::new();
        match (sub, sup) {
            (_, Concept::And(cs)) => next.extend(cs.iter().map(|c| Ci::new(sub.clone(), c.clone()))),
            (_, Concept::Not(c)) => next.push(Ci::new(conjoin(sub, c), Concept::Bottom)),
            (Concept::Or(cs), _) => next.extend(cs.iter().map(|c| Ci::new(c.clone(), sup.clone()))),
            (Concept::Some(r, c) | Concept::AtLeast(1, r, c), a) if is_name(a) => {
                next.push(Ci::new((**c).clone(), Concept::all(inverse_role(r), a.clone())))
            }
            (Concept::And(cs), _) if cs.contains(&Concept::Top) && cs.len() > 1 => {
                next.push(Ci::new(conjoin(&Concept::Top, sub), sup.clone()))
            }
            _ if is_normalized(&ci) => {
                out.insert(ci);
                continue;
            }
            _ => return Err(RewriteError::NotNormalizable(ci)),
        }
        next.reverse();
        work.extend(next);
    }
    Ok(out.into_iter().collect())
}
