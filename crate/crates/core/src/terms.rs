//! Ground terms, the global order on constants, and IRI to predicate-name
//! mangling shared by every emitter.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use num_bigint::BigInt;
use thiserror::Error;

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";

/// Predicate names that emitters reserve for themselves.
pub const RESERVED_PREDICATES: [&str; 6] =
    ["sameAs", "sameComp", "noStart", "top", "inconsistent", "ans"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI must not be empty")]
    EmptyIri,
    #[error("IRI contains whitespace: {0:?}")]
    WhitespaceInIri(String),
    #[error("invalid integer literal: {0:?}")]
    BadInteger(String),
    #[error("cannot parse constant: {0:?}")]
    BadConstant(String),
}

/// An absolute IRI. Compared byte-wise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if value.is_empty() {
            return Err(TermError::EmptyIri);
        }
        if value.chars().any(char::is_whitespace) {
            return Err(TermError::WhitespaceInIri(value));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `#` or `/`.
    pub fn fragment(&self) -> &str {
        match self.0.rfind(['#', '/']) {
            Some(pos) => &self.0[pos + 1..],
            None => &self.0,
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A typed literal restricted to `xsd:integer` and `xsd:string`.
///
/// Variant order matters: derived `Ord` puts integers before strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Integer(BigInt),
    Str(String),
}

impl Literal {
    pub fn integer(lexical: &str) -> Result<Self, TermError> {
        let trimmed = lexical.strip_prefix('+').unwrap_or(lexical);
        trimmed
            .parse::<BigInt>()
            .map(Literal::Integer)
            .map_err(|_| TermError::BadInteger(lexical.to_string()))
    }

    pub fn datatype(&self) -> &'static str {
        match self {
            Literal::Integer(_) => XSD_INTEGER,
            Literal::Str(_) => XSD_STRING,
        }
    }
}

/// A constant: an individual or a literal.
///
/// The derived order is the global total order used by comparison
/// built-ins: individuals (byte-wise IRI) < integers (numeric) < strings
/// (byte-wise).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundTerm {
    Individual(Iri),
    Literal(Literal),
}

impl GroundTerm {
    pub fn individual(iri: &str) -> Result<Self, TermError> {
        Iri::new(iri).map(GroundTerm::Individual)
    }

    pub fn int(value: i64) -> Self {
        GroundTerm::Literal(Literal::Integer(BigInt::from(value)))
    }

    pub fn string(value: impl Into<String>) -> Self {
        GroundTerm::Literal(Literal::Str(value.into()))
    }

    pub fn is_individual(&self) -> bool {
        matches!(self, GroundTerm::Individual(_))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            GroundTerm::Individual(iri) => Some(iri),
            GroundTerm::Literal(_) => None,
        }
    }

    /// Serialized form used in `.asp` output and answer files.
    pub fn to_asp(&self) -> String {
        match self {
            GroundTerm::Individual(iri) => format!("\"{}\"", escape(iri.as_str())),
            GroundTerm::Literal(Literal::Integer(n)) => n.to_string(),
            GroundTerm::Literal(Literal::Str(s)) => format!("\"s_{}\"", escape(s)),
        }
    }

    /// Inverse of [`GroundTerm::to_asp`].
    pub fn parse_asp(text: &str) -> Result<Self, TermError> {
        let bad = || TermError::BadConstant(text.to_string());
        if let Some(inner) = text.strip_prefix('"') {
            let inner = inner.strip_suffix('"').ok_or_else(bad)?;
            let raw = unescape(inner).ok_or_else(bad)?;
            match raw.strip_prefix("s_") {
                Some(s) => Ok(GroundTerm::string(s)),
                None => Iri::new(raw).map(GroundTerm::Individual).map_err(|_| bad()),
            }
        } else {
            Literal::integer(text)
                .map(GroundTerm::Literal)
                .map_err(|_| bad())
        }
    }
}

impl fmt::Display for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_asp())
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next()? {
                '"' => out.push('"'),
                '\\' => out.push('\\'),
                'n' => out.push('\n'),
                'r' => out.push('\r'),
                't' => out.push('\t'),
                _ => return None,
            },
            '"' => return None,
            c => out.push(c),
        }
    }
    Some(out)
}

/// Strict total order on constants.
pub fn compare_terms(a: &GroundTerm, b: &GroundTerm) -> Ordering {
    a.cmp(b)
}

/// Bijective IRI <-> predicate-name map. Insertion order is kept so that the
/// header of emitted programs is stable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    forward: IndexMap<Iri, String>,
    reverse: HashMap<String, Iri>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, iri: &Iri) -> Option<&str> {
        self.forward.get(iri).map(String::as_str)
    }

    pub fn resolve(&self, name: &str) -> Option<&Iri> {
        self.reverse.get(name)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Iri, &str)> {
        self.forward.iter().map(|(k, v)| (k, v.as_str()))
    }
}

/// Maps an IRI to its predicate name, assigning a fresh one on first sight.
pub fn mangle_predicate(iri: &Iri, table: &mut SymbolTable) -> String {
    if let Some(name) = table.forward.get(iri) {
        return name.clone();
    }
    let base = base_name(iri.fragment());
    let mut candidate = base.clone();
    let mut suffix = 2;
    while table.reverse.contains_key(&candidate) {
        candidate = format!("{base}_{suffix}");
        suffix += 1;
    }
    table.forward.insert(iri.clone(), candidate.clone());
    table.reverse.insert(candidate.clone(), iri.clone());
    candidate
}

fn base_name(fragment: &str) -> String {
    let mut name = String::with_capacity(fragment.len() + 2);
    for (i, c) in fragment.chars().enumerate() {
        let c = if i == 0 { lower_first(c) } else { c };
        if c.is_ascii_alphanumeric() || c == '_' {
            name.push(c);
        } else {
            name.push('_');
        }
    }
    let needs_prefix = match name.chars().next() {
        None => true,
        Some(c) => c.is_ascii_digit() || c == '_',
    } || is_reserved_name(&name);
    if needs_prefix {
        name.insert_str(0, "p_");
    }
    name
}

fn lower_first(c: char) -> char {
    let mut lower = c.to_lowercase();
    match (lower.next(), lower.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

/// Reserved predicates plus the generated families `ans_<n>` and `aux_<n>`.
pub fn is_reserved_name(name: &str) -> bool {
    if RESERVED_PREDICATES.contains(&name) {
        return true;
    }
    ["ans_", "aux_"].iter().any(|prefix| {
        name.strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn prefix_iri_is_smaller() {
        let brian = GroundTerm::individual("http://ex.org/Brian").unwrap();
        let griffin = GroundTerm::individual("http://ex.org/BrianGriffin").unwrap();
        assert_eq!(compare_terms(&brian, &griffin), Ordering::Less);
    }

    #[test]
    fn integers_compare_numerically() {
        assert_eq!(compare_terms(&GroundTerm::int(7), &GroundTerm::int(7)), Ordering::Equal);
        assert_eq!(compare_terms(&GroundTerm::int(10), &GroundTerm::int(9)), Ordering::Greater);
        assert_eq!(compare_terms(&GroundTerm::int(-3), &GroundTerm::int(2)), Ordering::Less);
    }

    #[test]
    fn kinds_are_ordered() {
        let ind = GroundTerm::individual("zzz:z").unwrap();
        let int = GroundTerm::int(-1000);
        let s = GroundTerm::string("");
        assert!(ind < int && int < s);
    }

    #[test]
    fn iri_rejects_whitespace_and_empty() {
        assert_eq!(Iri::new(""), Err(TermError::EmptyIri));
        assert!(matches!(Iri::new("http://a b"), Err(TermError::WhitespaceInIri(_))));
    }

    #[test]
    fn mangle_examples() {
        let mut table = SymbolTable::new();
        assert_eq!(mangle_predicate(&iri("http://ex.org/onto#DogOwner"), &mut table), "dogOwner");
        assert_eq!(mangle_predicate(&iri("http://ex.org/onto#sameAs"), &mut table), "p_sameAs");
        assert_eq!(mangle_predicate(&iri("http://ex.org/a#A"), &mut table), "a");
        assert_eq!(mangle_predicate(&iri("http://ex.org/b#A"), &mut table), "a_2");
        // already mapped IRIs keep their name
        assert_eq!(mangle_predicate(&iri("http://ex.org/a#A"), &mut table), "a");
        assert_eq!(table.resolve("a_2"), Some(&iri("http://ex.org/b#A")));
    }

    #[test]
    fn mangle_special_fragments() {
        let mut table = SymbolTable::new();
        assert_eq!(mangle_predicate(&iri("http://ex.org/9lives"), &mut table), "p_9lives");
        assert_eq!(mangle_predicate(&iri("http://ex.org/has-part"), &mut table), "has_part");
        assert_eq!(mangle_predicate(&iri("http://ex.org/ans_1"), &mut table), "p_ans_1");
        assert_eq!(mangle_predicate(&iri("http://ex.org/Aux_3"), &mut table), "p_aux_3");
        assert_eq!(mangle_predicate(&iri("http://ex.org/top"), &mut table), "p_top");
        assert_eq!(mangle_predicate(&iri("http://ex.org/"), &mut table), "p_");
        assert_eq!(mangle_predicate(&iri("urn:x/Ärger"), &mut table), "p__rger");
    }

    #[test]
    fn asp_constants_round_trip() {
        for t in [
            GroundTerm::individual("http://ex.org#Peter").unwrap(),
            GroundTerm::int(42),
            GroundTerm::string("s_ \"quoted\" \\ back"),
        ] {
            assert_eq!(GroundTerm::parse_asp(&t.to_asp()).unwrap(), t);
        }
        assert_eq!(GroundTerm::int(42).to_asp(), "42");
        assert_eq!(GroundTerm::string("hi").to_asp(), "\"s_hi\"");
    }

    fn arb_term() -> impl Strategy<Value = GroundTerm> {
        prop_oneof![
            "[a-z]{1,3}:[A-Za-z0-9#/]{0,6}".prop_map(|s| GroundTerm::individual(&s).unwrap()),
            any::<i64>().prop_map(GroundTerm::int),
            "[a-z]{0,4}".prop_map(GroundTerm::string),
            ".{0,6}".prop_map(GroundTerm::string),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn order_is_strict_total(a in arb_term(), b in arb_term(), c in arb_term()) {
            let ab = compare_terms(&a, &b);
            prop_assert_eq!(ab, compare_terms(&b, &a).reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            if ab == Ordering::Less && compare_terms(&b, &c) == Ordering::Less {
                prop_assert_eq!(compare_terms(&a, &c), Ordering::Less);
            }
        }

        #[test]
        fn serialization_round_trips(t in arb_term()) {
            prop_assert_eq!(GroundTerm::parse_asp(&t.to_asp()).unwrap(), t);
        }
    }

    proptest! {
        #[test]
        fn mangling_is_injective(frags in proptest::collection::vec("[A-Za-z0-9_\\-]{0,4}", 1..40)) {
            let mut table = SymbolTable::new();
            let mut seen = HashMap::new();
            for (i, frag) in frags.iter().enumerate() {
                let iri = iri(&format!("http://ex.org/{i}#{frag}"));
                let name = mangle_predicate(&iri, &mut table);
                if let Some(prev) = seen.insert(name.clone(), iri.clone()) {
                    prop_assert_eq!(prev, iri);
                }
                prop_assert!(!is_reserved_name(&name));
            }
        }
    }
}
