use indexmap::IndexMap;

use super::{default_prefixes, ParseError, ParsedKb, OWL_NOTHING, OWL_THING, SKOLEM_PREFIX};
use crate::dl::{Concept, ConceptName, Role, TBox};
use crate::terms::{GroundTerm, Iri, Literal, XSD_INTEGER, XSD_STRING};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Equals,
    /// `<...>`
    FullIri(String),
    /// A bare word: keyword, prefixed name, or blank node label.
    Word(String),
    Str(String),
    Caret2,
    LangTag(String),
    Integer(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: &str| ParseError::Syntax {
        line,
        column,
        message: message.to_string(),
    };
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => push(Tok::Open),
            ')' => push(Tok::Close),
            '=' => push(Tok::Equals),
            '^' => {
                if chars.get(i + 1) != Some(&'^') {
                    return Err(err(line, col, "expected '^^'"));
                }
                push(Tok::Caret2);
                i += 2;
                col += 2;
                continue;
            }
            '<' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j] != '>' {
                    if chars[j].is_whitespace() {
                        return Err(err(line, col, "whitespace inside IRI"));
                    }
                    j += 1;
                }
                if j == chars.len() {
                    return Err(err(line, col, "unterminated IRI"));
                }
                push(Tok::FullIri(chars[i + 1..j].iter().collect()));
                col += j + 1 - i;
                i = j + 1;
                continue;
            }
            '"' => {
                let mut j = i + 1;
                let mut s = String::new();
                let (mut l, mut cc) = (line, col + 1);
                loop {
                    match chars.get(j) {
                        None => return Err(err(start_line, start_col, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => {
                            match chars.get(j + 1) {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                _ => return Err(err(l, cc, "invalid escape in string")),
                            }
                            j += 2;
                            cc += 2;
                        }
                        Some('\n') => {
                            s.push('\n');
                            j += 1;
                            l += 1;
                            cc = 1;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            j += 1;
                            cc += 1;
                        }
                    }
                }
                push(Tok::Str(s));
                i = j + 1;
                line = l;
                col = cc + 1;
                continue;
            }
            '@' => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '-') {
                    j += 1;
                }
                push(Tok::LangTag(chars[i + 1..j].iter().collect()));
                col += j - i;
                i = j;
                continue;
            }
            _ => {
                let mut j = i;
                while j < chars.len() && !chars[j].is_whitespace() && !"()=<>\"^@#".contains(chars[j]) {
                    j += 1;
                }
                if j == i {
                    return Err(err(line, col, &format!("unexpected character {c:?}")));
                }
                let word: String = chars[i..j].iter().collect();
                let is_int = word.trim_start_matches(['+', '-']).chars().all(|c| c.is_ascii_digit())
                    && word.chars().any(|c| c.is_ascii_digit());
                push(if is_int { Tok::Integer(word) } else { Tok::Word(word) });
                col += j - i;
                i = j;
                continue;
            }
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    prefixes: IndexMap<String, String>,
    declared: IndexMap<String, String>,
    kb: ParsedKb,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn location(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(s) => (s.line, s.column),
            None => (1, 1),
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> PResult<T> {
        let (line, column) = self.location();
        Err(ParseError::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn unsupported<T>(&self, construct: &str) -> PResult<T> {
        let (line, column) = self.location();
        Err(ParseError::Unsupported {
            construct: construct.to_string(),
            line,
            column,
        })
    }

    fn next(&mut self) -> PResult<Tok> {
        match self.toks.get(self.pos) {
            Some(s) => {
                self.pos += 1;
                Ok(s.tok.clone())
            }
            None => self.syntax("unexpected end of input"),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            other => {
                let msg = format!("expected {tok:?}, found {other:?}");
                self.syntax(msg)
            }
        }
    }

    fn at_close(&self) -> bool {
        matches!(self.peek(), Some(Tok::Close))
    }

    /// Skips one balanced parenthesised group starting at `(`.
    fn skip_group(&mut self) -> PResult<()> {
        self.expect(Tok::Open)?;
        let mut depth = 1;
        while depth > 0 {
            match self.next()? {
                Tok::Open => depth += 1,
                Tok::Close => depth -= 1,
                _ => {}
            }
        }
        Ok(())
    }

    fn keyword_ahead(&self) -> Option<&str> {
        match (self.peek(), self.toks.get(self.pos + 1).map(|s| &s.tok)) {
            (Some(Tok::Word(w)), Some(Tok::Open)) => Some(w.as_str()),
            _ => None,
        }
    }

    fn expand(&self, word: &str) -> PResult<Iri> {
        let Some((prefix, local)) = word.split_once(':') else {
            return self.syntax(format!("expected an IRI, found {word:?}"));
        };
        let Some(ns) = self.prefixes.get(prefix) else {
            return self.syntax(format!("undeclared prefix {prefix:?}"));
        };
        self.make_iri(format!("{ns}{local}"))
    }

    fn make_iri(&self, s: String) -> PResult<Iri> {
        match Iri::new(s) {
            Ok(iri) => Ok(iri),
            Err(e) => self.syntax(e.to_string()),
        }
    }

    fn iri(&mut self) -> PResult<Iri> {
        match self.peek().cloned() {
            Some(Tok::FullIri(s)) => {
                self.pos += 1;
                self.make_iri(s)
            }
            Some(Tok::Word(w)) if !w.starts_with("_:") => {
                let iri = self.expand(&w)?;
                self.pos += 1;
                Ok(iri)
            }
            other => self.syntax(format!("expected an IRI, found {other:?}")),
        }
    }

    fn document(&mut self) -> PResult<()> {
        while let Some(kw) = self.keyword_ahead() {
            match kw {
                "Prefix" => self.prefix_decl()?,
                "Ontology" => {
                    self.pos += 1;
                    self.expect(Tok::Open)?;
                    // optional ontology IRI and version IRI
                    for _ in 0..2 {
                        if matches!(self.peek(), Some(Tok::FullIri(_)))
                            || (matches!(self.peek(), Some(Tok::Word(_))) && self.keyword_ahead().is_none())
                        {
                            self.pos += 1;
                        }
                    }
                    while !self.at_close() {
                        self.axiom()?;
                    }
                    self.expect(Tok::Close)?;
                }
                _ => self.axiom()?,
            }
        }
        if self.peek().is_some() {
            return self.syntax("expected Prefix, Ontology or an axiom");
        }
        Ok(())
    }

    fn prefix_decl(&mut self) -> PResult<()> {
        self.pos += 1;
        self.expect(Tok::Open)?;
        let name = match self.next()? {
            Tok::Word(w) if w.ends_with(':') => w[..w.len() - 1].to_string(),
            _ => return self.syntax("expected prefix name ending in ':'"),
        };
        self.expect(Tok::Equals)?;
        let ns = match self.next()? {
            Tok::FullIri(s) => s,
            _ => return self.syntax("expected full IRI in prefix declaration"),
        };
        self.expect(Tok::Close)?;
        self.prefixes.insert(name.clone(), ns.clone());
        self.declared.insert(name, ns);
        Ok(())
    }

    fn skip_axiom_annotations(&mut self) -> PResult<()> {
        while self.keyword_ahead() == Some("Annotation") {
            self.pos += 1;
            self.skip_group()?;
        }
        Ok(())
    }

    fn axiom(&mut self) -> PResult<()> {
        let Some(kw) = self.keyword_ahead().map(str::to_string) else {
            return self.syntax("expected an axiom");
        };
        match kw.as_str() {
            "Declaration" | "Import" | "Annotation" | "AnnotationAssertion"
            | "SubAnnotationPropertyOf" | "AnnotationPropertyDomain" | "AnnotationPropertyRange" => {
                self.pos += 1;
                return self.skip_group();
            }
            _ => {}
        }
        let start = self.pos;
        self.pos += 1;
        self.expect(Tok::Open)?;
        self.skip_axiom_annotations()?;
        match kw.as_str() {
            "SubClassOf" => {
                let sub = self.class_expr()?;
                let sup = self.class_expr()?;
                self.kb.tbox.add_ci(sub, sup);
            }
            "EquivalentClasses" => {
                let cs = self.class_list(2)?;
                for other in &cs[1..] {
                    self.kb.tbox.add_ci(cs[0].clone(), other.clone());
                    self.kb.tbox.add_ci(other.clone(), cs[0].clone());
                }
            }
            "DisjointClasses" => {
                let cs = self.class_list(2)?;
                for i in 0..cs.len() {
                    for j in i + 1..cs.len() {
                        let both = Concept::And(vec![cs[i].clone(), cs[j].clone()]);
                        self.kb.tbox.add_ci(both, Concept::Bottom);
                    }
                }
            }
            "SubObjectPropertyOf" => {
                if self.keyword_ahead() == Some("ObjectPropertyChain") {
                    return self.unsupported("ObjectPropertyChain");
                }
                let sub = self.role()?;
                let sup = self.role()?;
                self.kb.tbox.add_ri(sub, sup);
            }
            "EquivalentObjectProperties" => {
                let mut roles = vec![self.role()?, self.role()?];
                while !self.at_close() {
                    roles.push(self.role()?);
                }
                for other in &roles[1..] {
                    self.kb.tbox.add_ri(roles[0].clone(), other.clone());
                    self.kb.tbox.add_ri(other.clone(), roles[0].clone());
                }
            }
            "InverseObjectProperties" => {
                let r = self.role()?;
                let s = self.role()?;
                self.kb.tbox.add_ri(r.clone(), crate::dl::inverse_role(&s));
                self.kb.tbox.add_ri(s, crate::dl::inverse_role(&r));
            }
            "TransitiveObjectProperty" => {
                let r = self.role()?;
                self.kb.tbox.add_trans(r);
            }
            "SymmetricObjectProperty" => {
                let r = self.role()?;
                self.kb.tbox.add_ri(r.clone(), crate::dl::inverse_role(&r));
            }
            "ObjectPropertyDomain" => {
                let r = self.role()?;
                let c = self.class_expr()?;
                self.kb.tbox.add_ci(Concept::some(r, Concept::Top), c);
            }
            "ObjectPropertyRange" => {
                let r = self.role()?;
                let c = self.class_expr()?;
                self.kb.tbox.add_ci(Concept::Top, Concept::all(r, c));
            }
            "FunctionalObjectProperty" => {
                let r = self.role()?;
                self.kb.tbox.add_ci(Concept::Top, Concept::at_most(1, r, Concept::Top));
            }
            "InverseFunctionalObjectProperty" => {
                let r = self.role()?;
                let inv = crate::dl::inverse_role(&r);
                self.kb.tbox.add_ci(Concept::Top, Concept::at_most(1, inv, Concept::Top));
            }
            "ClassAssertion" => {
                let c = self.class_expr()?;
                let a = self.individual()?;
                match c {
                    Concept::Atomic(ConceptName::Iri(iri)) => {
                        self.kb.abox.concept_asserts.insert((iri, GroundTerm::Individual(a)));
                    }
                    Concept::Top => {}
                    _ => {
                        self.pos = start;
                        return self.unsupported("ClassAssertion with a complex class expression");
                    }
                }
            }
            "ObjectPropertyAssertion" => {
                let r = self.role()?;
                let a = GroundTerm::Individual(self.individual()?);
                let b = GroundTerm::Individual(self.individual()?);
                let (a, b) = if r.inverted { (b, a) } else { (a, b) };
                self.kb.abox.role_asserts.insert((r.name, a, b));
            }
            "DataPropertyAssertion" => {
                let p = self.iri()?;
                let a = GroundTerm::Individual(self.individual()?);
                let lit = self.literal()?;
                self.kb.abox.role_asserts.insert((p, a, GroundTerm::Literal(lit)));
            }
            "SameIndividual" => {
                let first = self.individual()?;
                let mut any = false;
                while !self.at_close() {
                    let other = self.individual()?;
                    self.kb.abox.same_as.insert((first.clone(), other));
                    any = true;
                }
                if !any {
                    return self.syntax("SameIndividual needs at least two individuals");
                }
            }
            other => {
                self.pos = start;
                return self.unsupported(other);
            }
        }
        self.expect(Tok::Close)
    }

    fn class_list(&mut self, min: usize) -> PResult<Vec<Concept>> {
        let mut cs = Vec::new();
        while !self.at_close() {
            cs.push(self.class_expr()?);
        }
        if cs.len() < min {
            return self.syntax(format!("expected at least {min} class expressions"));
        }
        Ok(cs)
    }

    fn role(&mut self) -> PResult<Role> {
        if self.keyword_ahead() == Some("ObjectInverseOf") {
            self.pos += 1;
            self.expect(Tok::Open)?;
            let inner = self.role()?;
            self.expect(Tok::Close)?;
            return Ok(crate::dl::inverse_role(&inner));
        }
        if let Some(kw) = self.keyword_ahead() {
            let kw = kw.to_string();
            return self.unsupported(&kw);
        }
        Ok(Role::named(self.iri()?))
    }

    fn individual(&mut self) -> PResult<Iri> {
        match self.peek().cloned() {
            Some(Tok::Word(w)) if w.starts_with("_:") => {
                self.pos += 1;
                self.make_iri(format!("{SKOLEM_PREFIX}{}", &w[2..]))
            }
            _ => self.iri(),
        }
    }

    fn literal(&mut self) -> PResult<Literal> {
        let (line, column) = self.location();
        let lexical = match self.next()? {
            Tok::Str(s) => s,
            Tok::Integer(s) => {
                return Literal::integer(&s).or_else(|e| self.syntax(e.to_string()));
            }
            other => return self.syntax(format!("expected a literal, found {other:?}")),
        };
        match self.peek() {
            Some(Tok::Caret2) => {
                self.pos += 1;
                let dt = self.iri()?;
                match dt.as_str() {
                    XSD_STRING => Ok(Literal::Str(lexical)),
                    XSD_INTEGER => Literal::integer(lexical.trim()).or_else(|e| self.syntax(e.to_string())),
                    other => Err(ParseError::UnsupportedDatatype {
                        datatype: other.to_string(),
                        line,
                        column,
                    }),
                }
            }
            Some(Tok::LangTag(tag)) => Err(ParseError::UnsupportedDatatype {
                datatype: format!("rdf:langString (@{tag})"),
                line,
                column,
            }),
            _ => Ok(Literal::Str(lexical)),
        }
    }

    fn class_expr(&mut self) -> PResult<Concept> {
        let Some(kw) = self.keyword_ahead().map(str::to_string) else {
            let iri = self.iri()?;
            return Ok(match iri.as_str() {
                OWL_THING => Concept::Top,
                OWL_NOTHING => Concept::Bottom,
                _ => Concept::atomic(iri),
            });
        };
        let at = self.pos;
        self.pos += 1;
        self.expect(Tok::Open)?;
        let c = match kw.as_str() {
            "ObjectIntersectionOf" => Concept::And(self.class_list(2)?),
            "ObjectUnionOf" => Concept::Or(self.class_list(2)?),
            "ObjectComplementOf" => Concept::not(self.class_expr()?),
            "ObjectSomeValuesFrom" => {
                let r = self.role()?;
                Concept::some(r, self.class_expr()?)
            }
            "ObjectAllValuesFrom" => {
                let r = self.role()?;
                Concept::all(r, self.class_expr()?)
            }
            "ObjectMinCardinality" | "ObjectMaxCardinality" => {
                let n = match self.next()? {
                    Tok::Integer(s) => match s.parse::<u32>() {
                        Ok(n) => n,
                        Err(_) => return self.syntax("cardinality must be a non-negative integer"),
                    },
                    _ => return self.syntax("expected a cardinality"),
                };
                let r = self.role()?;
                let filler = if self.at_close() {
                    Concept::Top
                } else {
                    self.class_expr()?
                };
                if kw == "ObjectMinCardinality" {
                    if n == 0 {
                        Concept::Top
                    } else {
                        Concept::at_least(n, r, filler)
                    }
                } else {
                    Concept::at_most(n, r, filler)
                }
            }
            other => {
                self.pos = at;
                return self.unsupported(other);
            }
        };
        self.expect(Tok::Close)?;
        Ok(c)
    }
}

/// Parses an OWL 2 functional-syntax document restricted to the RL
/// constructs this crate rewrites.
pub fn parse_functional(text: &str) -> Result<ParsedKb, ParseError> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
        prefixes: default_prefixes(),
        declared: IndexMap::new(),
        kb: ParsedKb::default(),
    };
    parser.document()?;
    parser.kb.prefixes = parser.declared;
    Ok(parser.kb)
}

fn concept_fs(c: &Concept) -> String {
    let role = |r: &Role| {
        if r.inverted {
            format!("ObjectInverseOf(<{}>)", r.name)
        } else {
            format!("<{}>", r.name)
        }
    };
    let list = |cs: &[Concept]| cs.iter().map(concept_fs).collect::<Vec<_>>().join(" ");
    match c {
        Concept::Top => format!("<{OWL_THING}>"),
        Concept::Bottom => format!("<{OWL_NOTHING}>"),
        Concept::Atomic(ConceptName::Iri(iri)) => format!("<{iri}>"),
        Concept::Atomic(ConceptName::Fresh(i)) => format!("<urn:rl2dl:{}>", ConceptName::fresh_label(*i)),
        Concept::Not(d) => format!("ObjectComplementOf({})", concept_fs(d)),
        Concept::And(cs) => format!("ObjectIntersectionOf({})", list(cs)),
        Concept::Or(cs) => format!("ObjectUnionOf({})", list(cs)),
        Concept::All(r, d) => format!("ObjectAllValuesFrom({} {})", role(r), concept_fs(d)),
        Concept::Some(r, d) => format!("ObjectSomeValuesFrom({} {})", role(r), concept_fs(d)),
        Concept::AtLeast(n, r, d) => format!("ObjectMinCardinality({n} {} {})", role(r), concept_fs(d)),
        Concept::AtMost(n, r, d) => format!("ObjectMaxCardinality({n} {} {})", role(r), concept_fs(d)),
    }
}

/// Renders a TBox as a functional-syntax ontology using full IRIs.
pub fn tbox_to_functional(tbox: &TBox) -> String {
    let role = |r: &Role| {
        if r.inverted {
            format!("ObjectInverseOf(<{}>)", r.name)
        } else {
            format!("<{}>", r.name)
        }
    };
    let mut out = String::from("Ontology(\n");
    for ci in &tbox.cis {
        out.push_str(&format!("SubClassOf({} {})\n", concept_fs(&ci.sub), concept_fs(&ci.sup)));
    }
    for ri in &tbox.ris {
        out.push_str(&format!("SubObjectPropertyOf({} {})\n", role(&ri.sub), role(&ri.sup)));
    }
    for r in &tbox.trans {
        out.push_str(&format!("TransitiveObjectProperty({})\n", role(r)));
    }
    out.push_str(")\n");
    out
}
