//! Description-logic model: roles, concepts, axioms, polarity of
//! occurrences, and the CI classification that drives the rewriting.

use std::fmt;

use indexmap::{IndexMap, IndexSet};

use crate::terms::{GroundTerm, Iri};

/// A role name, possibly inverted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Role {
    pub name: Iri,
    pub inverted: bool,
}

impl Role {
    pub fn named(name: Iri) -> Self {
        Role { name, inverted: false }
    }

    pub fn inverse_of(name: Iri) -> Self {
        Role { name, inverted: true }
    }
}

pub fn inverse_role(role: &Role) -> Role {
    Role {
        name: role.name.clone(),
        inverted: !role.inverted,
    }
}

/// An atomic concept: a vocabulary IRI or a name introduced by
/// normalization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptName {
    Iri(Iri),
    Fresh(usize),
}

impl ConceptName {
    pub fn fresh_label(index: usize) -> String {
        format!("aux_{index}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Atomic(ConceptName),
    Not(Box<Concept>),
    And(Vec<Concept>),
    Or(Vec<Concept>),
    All(Role, Box<Concept>),
    Some(Role, Box<Concept>),
    AtLeast(u32, Role, Box<Concept>),
    AtMost(u32, Role, Box<Concept>),
}

impl Concept {
    pub fn atomic(iri: Iri) -> Self {
        Concept::Atomic(ConceptName::Iri(iri))
    }

    pub fn fresh(index: usize) -> Self {
        Concept::Atomic(ConceptName::Fresh(index))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn all(r: Role, c: Concept) -> Self {
        Concept::All(r, Box::new(c))
    }

    pub fn some(r: Role, c: Concept) -> Self {
        Concept::Some(r, Box::new(c))
    }

    pub fn at_least(n: u32, r: Role, c: Concept) -> Self {
        Concept::AtLeast(n, r, Box::new(c))
    }

    pub fn at_most(n: u32, r: Role, c: Concept) -> Self {
        Concept::AtMost(n, r, Box::new(c))
    }

    /// Atomic concepts, ⊤ and ⊥.
    pub fn is_name_like(&self) -> bool {
        matches!(self, Concept::Top | Concept::Bottom | Concept::Atomic(_))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Concept::Atomic(_))
    }

    /// Direct sub-concepts, left to right.
    pub fn children(&self) -> Vec<&Concept> {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => Vec::new(),
            Concept::Not(c) => vec![c],
            Concept::And(cs) | Concept::Or(cs) => cs.iter().collect(),
            Concept::All(_, c) | Concept::Some(_, c) => vec![c],
            Concept::AtLeast(_, _, c) | Concept::AtMost(_, _, c) => vec![c],
        }
    }

    /// Conjuncts with nested conjunctions spliced in.
    pub fn flat_conjuncts(&self) -> Vec<&Concept> {
        fn walk<'a>(c: &'a Concept, out: &mut Vec<&'a Concept>) {
            match c {
                Concept::And(cs) => cs.iter().for_each(|c| walk(c, out)),
                other => out.push(other),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Structural canonical form: ⊓/⊔ operand lists are sorted and
    /// deduplicated, recursively.
    pub fn canonical(&self) -> Concept {
        let sorted = |cs: &[Concept]| {
            let mut v: Vec<Concept> = cs.iter().map(Concept::canonical).collect();
            v.sort();
            v.dedup();
            v
        };
        match self {
            Concept::And(cs) => Concept::And(sorted(cs)),
            Concept::Or(cs) => Concept::Or(sorted(cs)),
            Concept::Not(c) => Concept::not(c.canonical()),
            Concept::All(r, c) => Concept::all(r.clone(), c.canonical()),
            Concept::Some(r, c) => Concept::some(r.clone(), c.canonical()),
            Concept::AtLeast(n, r, c) => Concept::at_least(*n, r.clone(), c.canonical()),
            Concept::AtMost(n, r, c) => Concept::at_most(*n, r.clone(), c.canonical()),
            leaf => leaf.clone(),
        }
    }

    /// Semantically equivalent to ⊤ by a syntactic check.
    pub fn is_tautology(&self) -> bool {
        match self {
            Concept::Top => true,
            Concept::And(cs) => cs.iter().all(Concept::is_tautology),
            Concept::Or(cs) => cs.iter().any(Concept::is_tautology),
            Concept::All(_, c) => c.is_tautology(),
            Concept::Not(c) => matches!(**c, Concept::Bottom),
            Concept::AtMost(_, _, c) => matches!(**c, Concept::Bottom),
            _ => false,
        }
    }

    /// ⊥ itself or a conjunction with ⊥ among its top-level conjuncts.
    pub fn has_bottom_conjunct(&self) -> bool {
        self.flat_conjuncts()
            .iter()
            .any(|c| matches!(c, Concept::Bottom))
    }

    /// Visits every sub-concept occurrence, pre-order, left to right.
    pub fn for_each_subconcept<'a>(&'a self, f: &mut impl FnMut(&'a Concept)) {
        f(self);
        for c in self.children() {
            c.for_each_subconcept(f);
        }
    }
}

/// ELI: ⊤, atomic, ⊓, ∃R.C, ≥1R.C.
pub fn is_eli(c: &Concept) -> bool {
    match c {
        Concept::Top | Concept::Atomic(_) => true,
        Concept::And(cs) => cs.iter().all(is_eli),
        Concept::Some(_, d) | Concept::AtLeast(1, _, d) => is_eli(d),
        _ => false,
    }
}

/// Concept inclusion `sub ⊑ sup`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ci {
    pub sub: Concept,
    pub sup: Concept,
}

impl Ci {
    pub fn new(sub: Concept, sup: Concept) -> Self {
        Ci { sub, sup }
    }
}

/// Role inclusion `sub ⊑ sup`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ri {
    pub sub: Role,
    pub sup: Role,
}

/// Axiom sets keep insertion order and drop structural duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TBox {
    pub cis: IndexSet<Ci>,
    pub ris: IndexSet<Ri>,
    pub trans: IndexSet<Role>,
}

impl TBox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_ci(&mut self, sub: Concept, sup: Concept) {
        self.cis.insert(Ci::new(sub, sup));
    }

    pub fn add_ri(&mut self, sub: Role, sup: Role) {
        self.ris.insert(Ri { sub, sup });
    }

    pub fn add_trans(&mut self, role: Role) {
        self.trans.insert(role);
    }

    pub fn is_empty(&self) -> bool {
        self.cis.is_empty() && self.ris.is_empty() && self.trans.is_empty()
    }

    pub fn extend(&mut self, other: TBox) {
        self.cis.extend(other.cis);
        self.ris.extend(other.ris);
        self.trans.extend(other.trans);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ABox {
    pub concept_asserts: IndexSet<(Iri, GroundTerm)>,
    pub role_asserts: IndexSet<(Iri, GroundTerm, GroundTerm)>,
    /// Only individuals may be related by sameAs.
    pub same_as: IndexSet<(Iri, Iri)>,
}

impl ABox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.concept_asserts.is_empty() && self.role_asserts.is_empty() && self.same_as.is_empty()
    }

    pub fn len(&self) -> usize {
        self.concept_asserts.len() + self.role_asserts.len() + self.same_as.len()
    }

    pub fn extend(&mut self, other: ABox) {
        self.concept_asserts.extend(other.concept_asserts);
        self.role_asserts.extend(other.role_asserts);
        self.same_as.extend(other.same_as);
    }

    /// Individual constants in first-occurrence order.
    pub fn individuals(&self) -> IndexSet<Iri> {
        let mut out = IndexSet::new();
        let mut add = |t: &GroundTerm| {
            if let Some(iri) = t.as_iri() {
                out.insert(iri.clone());
            }
        };
        for (_, a) in &self.concept_asserts {
            add(a);
        }
        for (_, a, b) in &self.role_asserts {
            add(a);
            add(b);
        }
        for (a, b) in &self.same_as {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CiClass {
    TrivialDrop,
    Direct,
    Normalized,
    NeedsNormalization,
}

pub fn classify_ci(ci: &Ci) -> CiClass {
    if ci.sup.is_tautology() || ci.sub.has_bottom_conjunct() {
        CiClass::TrivialDrop
    } else if is_direct(ci) {
        CiClass::Direct
    } else if is_normalized(ci) {
        CiClass::Normalized
    } else {
        CiClass::NeedsNormalization
    }
}

/// `⊔Cᵢ ⊑ ⊓Aⱼ` with ELI disjuncts and atomic conjuncts (⊤ conjuncts are
/// tolerated and skipped at translation).
fn is_direct(ci: &Ci) -> bool {
    let lhs_ok = match &ci.sub {
        Concept::Or(cs) => cs.iter().all(is_eli),
        c => is_eli(c),
    };
    let conjuncts = ci.sup.flat_conjuncts();
    let rhs_ok = conjuncts.iter().all(|c| matches!(c, Concept::Atomic(_) | Concept::Top))
        && conjuncts.iter().any(|c| c.is_atomic());
    lhs_ok && rhs_ok
}

/// `⊓Aᵢ ⊑ C` with C one of ⊥, A, ∀R.A, ≤1R.A (A atomic). ⊤ may stand in
/// for an atomic conjunct on the left, ∀R.⊥ and ≤1R.⊤ are accepted on the
/// right.
pub fn is_normalized(ci: &Ci) -> bool {
    let lhs_ok = ci
        .sub
        .flat_conjuncts()
        .iter()
        .all(|c| matches!(c, Concept::Atomic(_) | Concept::Top));
    let rhs_ok = match &ci.sup {
        Concept::Bottom | Concept::Atomic(_) => true,
        Concept::All(_, a) => matches!(**a, Concept::Atomic(_) | Concept::Bottom),
        Concept::AtMost(1, _, a) => matches!(**a, Concept::Atomic(_) | Concept::Top),
        _ => false,
    };
    lhs_ok && rhs_ok
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Both,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            Polarity::Both => Polarity::Both,
        }
    }

    fn merge(self, other: Polarity) -> Polarity {
        if self == other {
            self
        } else {
            Polarity::Both
        }
    }
}

/// Polarity of the direct children of `c`, given the polarity of `c`.
pub fn child_polarity(c: &Concept, polarity: Polarity) -> Polarity {
    match c {
        Concept::Not(_) | Concept::AtMost(..) => polarity.flip(),
        _ => polarity,
    }
}

/// Calls `f` for each sub-concept occurrence of `c` with its polarity.
pub fn visit_occurrences<'a>(
    c: &'a Concept,
    polarity: Polarity,
    f: &mut impl FnMut(&'a Concept, Polarity),
) {
    f(c, polarity);
    let inner = child_polarity(c, polarity);
    for child in c.children() {
        visit_occurrences(child, inner, f);
    }
}

/// Polarity of every concept occurring in the CIs of `tbox`.
pub fn polarity_map(tbox: &TBox) -> IndexMap<Concept, Polarity> {
    let mut map: IndexMap<Concept, Polarity> = IndexMap::new();
    let mut record = |c: &Concept, p: Polarity| {
        map.entry(c.clone())
            .and_modify(|old| *old = old.merge(p))
            .or_insert(p);
    };
    for ci in &tbox.cis {
        visit_occurrences(&ci.sub, Polarity::Negative, &mut record);
        visit_occurrences(&ci.sup, Polarity::Positive, &mut record);
    }
    map
}

// Compact DL notation, used in diagnostics and tests.

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name.fragment())?;
        if self.inverted {
            write!(f, "⁻")?;
        }
        Ok(())
    }
}

impl fmt::Display for ConceptName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConceptName::Iri(iri) => f.write_str(iri.fragment()),
            ConceptName::Fresh(i) => f.write_str(&ConceptName::fresh_label(*i)),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &mut fmt::Formatter<'_>, c: &Concept) -> fmt::Result {
            if matches!(c, Concept::And(_) | Concept::Or(_)) {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        fn list(f: &mut fmt::Formatter<'_>, cs: &[Concept], sep: &str) -> fmt::Result {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                operand(f, c)?;
            }
            Ok(())
        }
        match self {
            Concept::Top => f.write_str("⊤"),
            Concept::Bottom => f.write_str("⊥"),
            Concept::Atomic(n) => write!(f, "{n}"),
            Concept::Not(c) => {
                f.write_str("¬")?;
                operand(f, c)
            }
            Concept::And(cs) => list(f, cs, " ⊓ "),
            Concept::Or(cs) => list(f, cs, " ⊔ "),
            Concept::All(r, c) => {
                write!(f, "∀{r}.")?;
                operand(f, c)
            }
            Concept::Some(r, c) => {
                write!(f, "∃{r}.")?;
                operand(f, c)
            }
            Concept::AtLeast(n, r, c) => {
                write!(f, "≥{n}{r}.")?;
                operand(f, c)
            }
            Concept::AtMost(n, r, c) => {
                write!(f, "≤{n}{r}.")?;
                operand(f, c)
            }
        }
    }
}

impl fmt::Display for Ci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊑ {}", self.sub, self.sup)
    }
}

impl fmt::Display for Ri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊑ {}", self.sub, self.sup)
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;

    pub fn iri(local: &str) -> Iri {
        Iri::new(format!("http://ex.org/onto#{local}")).unwrap()
    }

    pub fn a(local: &str) -> Concept {
        Concept::atomic(iri(local))
    }

    pub fn r(local: &str) -> Role {
        Role::named(iri(local))
    }

    pub fn inv(local: &str) -> Role {
        Role::inverse_of(iri(local))
    }

    pub fn and(cs: Vec<Concept>) -> Concept {
        Concept::And(cs)
    }

    pub fn ci(sub: Concept, sup: Concept) -> Ci {
        Ci::new(sub, sup)
    }
}
