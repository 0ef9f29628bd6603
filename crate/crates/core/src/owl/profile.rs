use std::fmt;

use crate::dl::{Ci, Concept, TBox};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RlReason {
    NotSubconceptExpression,
    NotSuperconceptExpression,
    /// A cardinality restriction other than `≥1` (left) or `≤1` (right).
    Cardinality,
    UnsupportedConstruct,
}

impl fmt::Display for RlReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RlReason::NotSubconceptExpression => "not a subconcept expression",
            RlReason::NotSuperconceptExpression => "not a superconcept expression",
            RlReason::Cardinality => "cardinality other than 1",
            RlReason::UnsupportedConstruct => "unsupported construct",
        })
    }
}

/// One CI outside the RL profile, with the offending sub-expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlViolation {
    /// Position of the CI in the TBox.
    pub index: usize,
    pub axiom: Ci,
    pub offending: Concept,
    pub reason: RlReason,
}

impl fmt::Display for RlViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom #{} `{}`: {} is {}", self.index + 1, self.axiom, self.offending, self.reason)
    }
}

type Found = Option<(Concept, RlReason)>;

/// Subconcept expressions: ⊤, ⊥, A, C ⊓ D, C ⊔ D, ∃R.C, ≥1R.C.
fn check_sub(c: &Concept) -> Found {
    match c {
        Concept::Top | Concept::Bottom | Concept::Atomic(_) => None,
        Concept::And(cs) | Concept::Or(cs) => cs.iter().find_map(check_sub),
        Concept::Some(_, d) | Concept::AtLeast(1, _, d) => check_sub(d),
        Concept::AtLeast(..) => Some((c.clone(), RlReason::Cardinality)),
        Concept::Not(_) | Concept::All(..) | Concept::AtMost(..) => {
            Some((c.clone(), RlReason::NotSubconceptExpression))
        }
    }
}

/// Superconcept expressions: ⊤, ⊥, A, C ⊓ D, ∀R.C, and ¬C / ≤1R.C whose
/// operand occurs negatively and must therefore be a subconcept expression.
fn check_super(c: &Concept) -> Found {
    match c {
        Concept::Top | Concept::Bottom | Concept::Atomic(_) => None,
        Concept::And(cs) => cs.iter().find_map(check_super),
        Concept::All(_, d) => check_super(d),
        Concept::Not(d) | Concept::AtMost(1, _, d) => check_sub(d),
        Concept::AtMost(..) => Some((c.clone(), RlReason::Cardinality)),
        Concept::Or(_) | Concept::Some(..) | Concept::AtLeast(..) => {
            Some((c.clone(), RlReason::NotSuperconceptExpression))
        }
    }
}

/// Returns one violation per CI whose left side is not a subconcept
/// expression or whose right side is not a superconcept expression.
pub fn check_rl_profile(tbox: &TBox) -> Vec<RlViolation> {
    tbox.cis
        .iter()
        .enumerate()
        .filter_map(|(index, ci)| {
            check_sub(&ci.sub)
                .or_else(|| check_super(&ci.sup))
                .map(|(offending, reason)| RlViolation {
                    index,
                    axiom: ci.clone(),
                    offending,
                    reason,
                })
        })
        .collect()
}
