//! SELECT queries over basic graph patterns, translated into `ans_<i>`
//! rules.

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::datalog::{Atom, BodyLiteral, Rule, Term};
use crate::owl::{OWL_SAME_AS, OWL_THING, RDF_TYPE};
use crate::rewrite::TOP;
use crate::sameas::SAME_AS;
use crate::terms::{mangle_predicate, GroundTerm, Iri, Literal, SymbolTable, XSD_INTEGER, XSD_STRING};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SparqlError {
    #[error("SPARQL syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported SPARQL feature: {0}")]
    Unsupported(String),
    #[error("meta-reasoning unsupported: variable ?{0} in {1} position")]
    MetaReasoning(String, &'static str),
    #[error("select variable ?{0} does not occur in the WHERE clause")]
    UnboundSelectVariable(String),
    #[error("unsupported literal datatype {0}")]
    UnsupportedDatatype(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(String),
    Iri(Iri),
    Literal(Literal),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BgpQuery {
    pub select_vars: Vec<String>,
    pub patterns: Vec<TriplePattern>,
    pub prefixes: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Prefixed(String, String),
    Iri(String),
    Var(String),
    Blank(String),
    Str(String),
    Int(String),
    Decimal(String),
    Punct(char),
    Caret2,
    LangTag(String),
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

type Spanned = (Tok, usize, usize);

impl Lexer {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, SparqlError> {
        Err(SparqlError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| f(*c)) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, SparqlError> {
        let name_char = |c: char| c.is_alphanumeric() || c == '_' || c == '-';
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    self.take_while(|c| c != '\n');
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(c) = self.peek() else { return Ok(out) };
            let tok = match c {
                '<' if self.chars[self.pos + 1..]
                    .iter()
                    .take_while(|c| !c.is_whitespace())
                    .any(|c| *c == '>') =>
                {
                    self.bump();
                    let s = self.take_while(|c| c != '>');
                    self.bump();
                    Tok::Iri(s)
                }
                '?' | '$' => {
                    self.bump();
                    let s = self.take_while(|c| c.is_alphanumeric() || c == '_');
                    if s.is_empty() {
                        return self.err("empty variable name");
                    }
                    Tok::Var(s)
                }
                '"' | '\'' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            None | Some('\n') => return self.err("unterminated string"),
                            Some(q) if q == c => break,
                            Some('\\') => match self.bump() {
                                Some('n') => s.push('\n'),
                                Some('t') => s.push('\t'),
                                Some('r') => s.push('\r'),
                                Some(e @ ('"' | '\'' | '\\')) => s.push(e),
                                _ => return self.err("invalid escape"),
                            },
                            Some(ch) => s.push(ch),
                        }
                    }
                    Tok::Str(s)
                }
                '^' if self.chars.get(self.pos + 1) == Some(&'^') => {
                    self.bump();
                    self.bump();
                    Tok::Caret2
                }
                '@' => {
                    self.bump();
                    Tok::LangTag(self.take_while(|c| c.is_alphanumeric() || c == '-'))
                }
                '_' if self.chars.get(self.pos + 1) == Some(&':') => {
                    self.bump();
                    self.bump();
                    Tok::Blank(self.take_while(name_char))
                }
                c if c.is_ascii_digit() || ((c == '-' || c == '+') && self.chars.get(self.pos + 1).is_some_and(char::is_ascii_digit)) => {
                    let mut s = String::new();
                    s.push(c);
                    self.bump();
                    s.push_str(&self.take_while(|c| c.is_ascii_digit()));
                    if self.peek() == Some('.') && self.chars.get(self.pos + 1).is_some_and(char::is_ascii_digit) {
                        self.bump();
                        s.push('.');
                        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
                        Tok::Decimal(s)
                    } else {
                        Tok::Int(s)
                    }
                }
                c if c.is_alphabetic() || c == ':' => {
                    let word = self.take_while(name_char);
                    if self.peek() == Some(':') {
                        self.bump();
                        let mut local = String::new();
                        while let Some(c) = self.peek() {
                            let dot_inside = c == '.'
                                && self.chars.get(self.pos + 1).is_some_and(|n| name_char(*n));
                            if name_char(c) || dot_inside {
                                local.push(c);
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        Tok::Prefixed(word, local)
                    } else {
                        Tok::Word(word)
                    }
                }
                other => {
                    self.bump();
                    Tok::Punct(other)
                }
            };
            out.push((tok, line, column));
        }
    }
}

const UNSUPPORTED_KEYWORDS: [&str; 18] = [
    "OPTIONAL", "FILTER", "UNION", "MINUS", "BIND", "VALUES", "GRAPH", "SERVICE", "ASK", "CONSTRUCT",
    "DESCRIBE", "ORDER", "LIMIT", "OFFSET", "GROUP", "HAVING", "FROM", "EXISTS",
];

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    prefixes: IndexMap<String, String>,
    base: Option<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SparqlError> {
        let (line, column) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1));
        Err(SparqlError::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn is_word(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn check_unsupported(&self) -> Result<(), SparqlError> {
        if let Some(Tok::Word(w)) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED_KEYWORDS.contains(&upper.as_str()) {
                return Err(SparqlError::Unsupported(upper));
            }
        }
        Ok(())
    }

    fn expect_punct(&mut self, c: char) -> Result<(), SparqlError> {
        match self.peek() {
            Some(Tok::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            other => {
                let msg = format!("expected '{c}', found {other:?}");
                self.err(msg)
            }
        }
    }

    fn resolve(&self, raw: String) -> Result<Iri, SparqlError> {
        let full = match &self.base {
            Some(base) if !raw.contains(':') => format!("{base}{raw}"),
            _ => raw,
        };
        Iri::new(full).or_else(|e| self.err(e.to_string()))
    }

    fn queries(&mut self) -> Result<Vec<BgpQuery>, SparqlError> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            if self.is_word("PREFIX") {
                self.pos += 1;
                let Some(Tok::Prefixed(name, local)) = self.next() else {
                    return self.err("expected prefix name");
                };
                if !local.is_empty() {
                    return self.err("prefix name must end with ':'");
                }
                let Some(Tok::Iri(iri)) = self.next() else {
                    return self.err("expected IRI after prefix name");
                };
                self.prefixes.insert(name, iri);
            } else if self.is_word("BASE") {
                self.pos += 1;
                let Some(Tok::Iri(iri)) = self.next() else {
                    return self.err("expected IRI after BASE");
                };
                self.base = Some(iri);
            } else if self.is_word("SELECT") {
                self.pos += 1;
                out.push(self.select()?);
            } else {
                self.check_unsupported()?;
                return self.err("expected PREFIX or SELECT");
            }
        }
        Ok(out)
    }

    fn select(&mut self) -> Result<BgpQuery, SparqlError> {
        if self.is_word("DISTINCT") || self.is_word("REDUCED") {
            self.pos += 1;
        }
        let mut vars = Vec::new();
        let mut star = false;
        loop {
            match self.peek() {
                Some(Tok::Var(v)) => {
                    let v = v.clone();
                    self.pos += 1;
                    if !vars.contains(&v) {
                        vars.push(v);
                    }
                }
                Some(Tok::Punct('*')) if vars.is_empty() && !star => {
                    self.pos += 1;
                    star = true;
                }
                Some(Tok::Punct('(')) => return Err(SparqlError::Unsupported("projection expression".into())),
                _ => break,
            }
        }
        self.check_unsupported()?;
        if self.is_word("WHERE") {
            self.pos += 1;
        }
        self.expect_punct('{')?;
        let patterns = self.group()?;
        self.check_unsupported()?;
        if star {
            let mut seen = IndexSet::new();
            for p in &patterns {
                for t in [&p.subject, &p.predicate, &p.object] {
                    if let PatternTerm::Var(v) = t {
                        if !v.starts_with('_') {
                            seen.insert(v.clone());
                        }
                    }
                }
            }
            vars = seen.into_iter().collect();
        }
        if vars.is_empty() {
            return Err(SparqlError::Unsupported("query without answer variables (ASK)".into()));
        }
        let query = BgpQuery {
            select_vars: vars,
            patterns,
            prefixes: self.prefixes.clone(),
        };
        validate(&query)?;
        Ok(query)
    }

    fn group(&mut self) -> Result<Vec<TriplePattern>, SparqlError> {
        let mut patterns = Vec::new();
        loop {
            self.check_unsupported()?;
            match self.peek() {
                Some(Tok::Punct('}')) => {
                    self.pos += 1;
                    return Ok(patterns);
                }
                Some(Tok::Punct('{')) => return Err(SparqlError::Unsupported("nested group pattern".into())),
                Some(Tok::Punct('.')) => {
                    self.pos += 1;
                }
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("SELECT") => {
                    return Err(SparqlError::Unsupported("subquery".into()))
                }
                None => return self.err("unterminated WHERE block"),
                _ => self.triples(&mut patterns)?,
            }
        }
    }

    fn triples(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), SparqlError> {
        let subject = self.term()?;
        loop {
            let predicate = if self.is_word("a") {
                self.pos += 1;
                PatternTerm::Iri(Iri::new(RDF_TYPE).expect("constant IRI"))
            } else {
                self.term()?
            };
            if let Some(Tok::Punct(c @ ('/' | '|' | '*' | '+' | '^'))) = self.peek() {
                let _ = c;
                return Err(SparqlError::Unsupported("property path".into()));
            }
            loop {
                let object = self.term()?;
                out.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if matches!(self.peek(), Some(Tok::Punct(','))) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if matches!(self.peek(), Some(Tok::Punct(';'))) {
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Punct('.') | Tok::Punct('}'))) {
                    return Ok(());
                }
            } else {
                return Ok(());
            }
        }
    }

    fn term(&mut self) -> Result<PatternTerm, SparqlError> {
        self.check_unsupported()?;
        match self.next() {
            Some(Tok::Var(v)) => Ok(PatternTerm::Var(v)),
            Some(Tok::Blank(b)) => Ok(PatternTerm::Var(format!("_{b}"))),
            Some(Tok::Iri(s)) => self.resolve(s).map(PatternTerm::Iri),
            Some(Tok::Prefixed(p, local)) => match self.prefixes.get(&p) {
                Some(ns) => Iri::new(format!("{ns}{local}"))
                    .map(PatternTerm::Iri)
                    .or_else(|e| self.err(e.to_string())),
                None => {
                    self.pos -= 1;
                    self.err(format!("undeclared prefix {p:?}"))
                }
            },
            Some(Tok::Int(s)) => Literal::integer(&s)
                .map(PatternTerm::Literal)
                .or_else(|e| self.err(e.to_string())),
            Some(Tok::Decimal(_)) => Err(SparqlError::UnsupportedDatatype(format!("{}decimal", crate::owl::XSD_NS))),
            Some(Tok::Str(s)) => self.literal_suffix(s),
            Some(Tok::Punct('[')) => Err(SparqlError::Unsupported("blank node property list".into())),
            Some(Tok::Punct('(')) => Err(SparqlError::Unsupported("collection".into())),
            Some(Tok::Word(w)) if w == "true" || w == "false" => {
                Err(SparqlError::UnsupportedDatatype(format!("{}boolean", crate::owl::XSD_NS)))
            }
            other => {
                self.pos -= 1;
                self.err(format!("expected a term, found {other:?}"))
            }
        }
    }

    fn literal_suffix(&mut self, s: String) -> Result<PatternTerm, SparqlError> {
        match self.peek() {
            Some(Tok::LangTag(tag)) => Err(SparqlError::UnsupportedDatatype(format!("rdf:langString (@{tag})"))),
            Some(Tok::Caret2) => {
                self.pos += 1;
                let PatternTerm::Iri(dt) = self.term()? else {
                    return self.err("expected datatype IRI");
                };
                match dt.as_str() {
                    XSD_STRING => Ok(PatternTerm::Literal(Literal::Str(s))),
                    XSD_INTEGER => Literal::integer(s.trim())
                        .map(PatternTerm::Literal)
                        .or_else(|e| self.err(e.to_string())),
                    other => Err(SparqlError::UnsupportedDatatype(other.to_string())),
                }
            }
            _ => Ok(PatternTerm::Literal(Literal::Str(s))),
        }
    }
}

fn validate(q: &BgpQuery) -> Result<(), SparqlError> {
    for p in &q.patterns {
        if let PatternTerm::Var(v) = &p.predicate {
            return Err(SparqlError::MetaReasoning(v.clone(), "predicate"));
        }
        if matches!(&p.predicate, PatternTerm::Iri(i) if i.as_str() == RDF_TYPE) {
            match &p.object {
                PatternTerm::Var(v) => return Err(SparqlError::MetaReasoning(v.clone(), "class")),
                PatternTerm::Literal(_) => return Err(SparqlError::Unsupported("literal as class".into())),
                PatternTerm::Iri(_) => {}
            }
        }
        if let PatternTerm::Literal(_) = &p.predicate {
            return Err(SparqlError::Unsupported("literal in predicate position".into()));
        }
    }
    for v in &q.select_vars {
        let occurs = q
            .patterns
            .iter()
            .any(|p| [&p.subject, &p.object].iter().any(|t| matches!(t, PatternTerm::Var(w) if w == v)));
        if !occurs {
            return Err(SparqlError::UnboundSelectVariable(v.clone()));
        }
    }
    Ok(())
}

/// Parses one or more SELECT queries. Prefixes declared earlier in the
/// text stay in scope for later queries.
pub fn parse_sparql_bgp(text: &str) -> Result<Vec<BgpQuery>, SparqlError> {
    let toks = Lexer {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
    }
    .tokens()?;
    let mut parser = Parser {
        toks,
        pos: 0,
        prefixes: IndexMap::new(),
        base: None,
    };
    parser.queries()
}

/// Datalog variable for a SPARQL variable: first letter upper-cased,
/// blank nodes prefixed with `B`.
fn datalog_var(name: &str) -> String {
    let raw = name.strip_prefix('_').map(|b| format!("B_{b}")).unwrap_or_else(|| name.to_string());
    let mut chars = raw.chars();
    let mut out: String = match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => c.to_ascii_uppercase().to_string(),
        Some(c) => format!("V{}", if c.is_ascii_alphanumeric() { c } else { '_' }),
        None => "V".to_string(),
    };
    out.extend(chars.map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }));
    out
}

/// `ans_<index>(vars) :- body`, where `(s rdf:type C)` becomes `c(s)` and
/// `(s p o)` becomes `p(s,o)`.
pub fn translate_bgp(q: &BgpQuery, index: usize, symbols: &mut SymbolTable) -> Result<Rule, SparqlError> {
    validate(q)?;
    let mut names: IndexMap<String, String> = IndexMap::new();
    let mut used: IndexSet<String> = IndexSet::new();
    let mut var = |v: &str| -> String {
        if let Some(n) = names.get(v) {
            return n.clone();
        }
        let base = datalog_var(v);
        let mut candidate = base.clone();
        let mut k = 1;
        while used.contains(&candidate) {
            k += 1;
            candidate = format!("{base}_{k}");
        }
        used.insert(candidate.clone());
        names.insert(v.to_string(), candidate.clone());
        candidate
    };
    let mut term = |t: &PatternTerm| match t {
        PatternTerm::Var(v) => Term::Var(var(v)),
        PatternTerm::Iri(i) => Term::Const(GroundTerm::Individual(i.clone())),
        PatternTerm::Literal(l) => Term::Const(GroundTerm::Literal(l.clone())),
    };
    let head_args: Vec<Term> = q.select_vars.iter().map(|v| term(&PatternTerm::Var(v.clone()))).collect();
    let mut body: Vec<BodyLiteral> = Vec::new();
    for p in &q.patterns {
        let PatternTerm::Iri(pred) = &p.predicate else {
            unreachable!("validated");
        };
        let atom = if pred.as_str() == RDF_TYPE {
            let PatternTerm::Iri(class) = &p.object else {
                unreachable!("validated");
            };
            let name = if class.as_str() == OWL_THING {
                TOP.to_string()
            } else {
                mangle_predicate(class, symbols)
            };
            Atom::new(name, vec![term(&p.subject)])
        } else if pred.as_str() == OWL_SAME_AS {
            Atom::new(SAME_AS, vec![term(&p.subject), term(&p.object)])
        } else {
            Atom::new(mangle_predicate(pred, symbols), vec![term(&p.subject), term(&p.object)])
        };
        let lit = BodyLiteral::Pos(atom);
        if !body.contains(&lit) {
            body.push(lit);
        }
    }
    crate::rewrite::prune_top(&mut body);
    Ok(Rule::new(Atom::new(format!("ans_{index}"), head_args), body))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRE: &str = "PREFIX : <http://ex.org/onto#>\nPREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n";

    fn one(q: &str) -> BgpQuery {
        let mut qs = parse_sparql_bgp(&format!("{PRE}{q}")).unwrap();
        assert_eq!(qs.len(), 1);
        qs.pop().unwrap()
    }

    fn translate(q: &str) -> String {
        translate_bgp(&one(q), 1, &mut SymbolTable::new()).unwrap().to_string()
    }

    #[test]
    fn minimal_query() {
        let q = one("SELECT ?x WHERE { ?x rdf:type :DogOwner . }");
        assert_eq!(q.select_vars, ["x"]);
        assert_eq!(q.patterns.len(), 1);
        assert_eq!(q.patterns[0].object, PatternTerm::Iri(Iri::new("http://ex.org/onto#DogOwner").unwrap()));
    }

    #[test]
    fn translations() {
        assert_eq!(
            translate("SELECT ?x ?y WHERE { ?x :hasPet ?y . ?y rdf:type :Dog . }"),
            "ans_1(X,Y) :- hasPet(X,Y), dog(Y)."
        );
        assert_eq!(
            translate("SELECT ?x WHERE { ?x :linked :Rome . }"),
            "ans_1(X) :- linked(X,\"http://ex.org/onto#Rome\")."
        );
        assert_eq!(
            translate("SELECT ?x WHERE { ?x a :A ; :age 3 ; :name \"n\", 'm' }"),
            "ans_1(X) :- a(X), age(X,3), name(X,\"s_n\"), name(X,\"s_m\")."
        );
        assert_eq!(
            translate("SELECT * WHERE { ?x :r ?X . ?X <http://www.w3.org/2002/07/owl#sameAs> ?y }"),
            "ans_1(X,X_2,Y) :- r(X,X_2), sameAs(X_2,Y)."
        );
    }

    #[test]
    fn multiple_queries_in_file_order() {
        let qs = parse_sparql_bgp(&format!(
            "{PRE}SELECT ?x WHERE {{ ?x a :A }}\nSELECT DISTINCT ?y WHERE {{ ?y a :B }}"
        ))
        .unwrap();
        assert_eq!(qs.len(), 2);
        assert_eq!(qs[1].select_vars, ["y"]);
    }

    #[test]
    fn rejections() {
        let err = |q: &str| parse_sparql_bgp(&format!("{PRE}{q}")).unwrap_err();
        assert_eq!(
            err("SELECT ?x WHERE { ?x a :A . FILTER(?x != :b) }").to_string(),
            "unsupported SPARQL feature: FILTER"
        );
        assert!(matches!(err("SELECT ?x WHERE { ?x a :A OPTIONAL { ?x :r ?y } }"), SparqlError::Unsupported(f) if f == "OPTIONAL"));
        assert!(matches!(err("SELECT ?x WHERE { { ?x a :A } UNION { ?x a :B } }"), SparqlError::Unsupported(_)));
        assert!(matches!(err("ASK { ?x a :A }"), SparqlError::Unsupported(f) if f == "ASK"));
        assert!(matches!(err("SELECT ?x WHERE { ?x ?p :b }"), SparqlError::MetaReasoning(v, "predicate") if v == "p"));
        assert!(matches!(err("SELECT ?x WHERE { ?x a ?c }"), SparqlError::MetaReasoning(_, "class")));
        assert!(matches!(err("SELECT ?z WHERE { ?x a :A }"), SparqlError::UnboundSelectVariable(_)));
        assert!(matches!(err("SELECT ?x WHERE { ?x :p/:q ?y }"), SparqlError::Unsupported(_)));
        assert!(matches!(err("SELECT ?x WHERE { ?x :p 1.5 }"), SparqlError::UnsupportedDatatype(_)));
        assert!(matches!(err("SELECT ?x WHERE { ?x un:p ?y }"), SparqlError::Syntax { line: 3, .. }));
        assert!(matches!(err("SELECT WHERE { ?x :p ?y }"), SparqlError::Unsupported(_)));
        assert!(matches!(err("SELECT ?x WHERE { ?x :p ?y FILTER(?y < 3 && ?y > 1) }"), SparqlError::Unsupported(f) if f == "FILTER"));
    }

    #[test]
    fn variable_multiplicity_preserved() {
        let q = one("SELECT ?x WHERE { ?x :r ?y . ?y :s ?x . ?y a :C }");
        let rule = translate_bgp(&q, 1, &mut SymbolTable::new()).unwrap();
        let count = |v: &str| rule.body.iter().flat_map(|l| l.terms()).filter(|t| t.as_var() == Some(v)).count();
        assert_eq!(count("X"), 2);
        assert_eq!(count("Y"), 3);
    }
}
