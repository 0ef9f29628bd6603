//! Turtle reader covering the data-level subset of the language: prefix and
//! base directives, predicate-object lists, blank nodes, and string and
//! integer literals. Triples map onto ABox assertions; schema-level and
//! annotation triples are skipped with a warning.

use indexmap::IndexMap;

use super::{
    default_prefixes, ParseError, ParsedKb, OWL_NS, OWL_SAME_AS, OWL_THING, RDFS_NS, RDF_NS, RDF_TYPE,
    SKOLEM_PREFIX, XSD_NS,
};
use crate::terms::{GroundTerm, Iri, Literal, XSD_INTEGER, XSD_STRING};

#[derive(Debug, Clone)]
enum Node {
    Iri(Iri),
    Literal(Literal),
}

struct Reader<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    prefixes: IndexMap<String, String>,
    declared: IndexMap<String, String>,
    base: Option<String>,
    anon: usize,
    kb: ParsedKb,
    _text: &'a str,
}

type PResult<T> = Result<T, ParseError>;

impl Reader<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
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

    fn syntax<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while !matches!(self.peek(), None | Some('\n')) {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek();
            self.syntax(format!("expected {c:?}, found {found:?}"))
        }
    }

    fn starts_with_keyword(&self, kw: &str) -> bool {
        let n = kw.len();
        let word: String = self.chars[self.pos..].iter().take(n).collect();
        word.eq_ignore_ascii_case(kw)
            && !self
                .peek_at(n)
                .is_some_and(|c| c.is_alphanumeric() || c == ':' || c == '_')
    }

    fn document(&mut self) -> PResult<()> {
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else { return Ok(()) };
            if c == '@' {
                self.bump();
                let word = self.bare_word();
                match word.as_str() {
                    "prefix" => self.prefix_directive(true)?,
                    "base" => self.base_directive(true)?,
                    other => return self.syntax(format!("unknown directive @{other}")),
                }
            } else if self.starts_with_keyword("PREFIX") {
                self.bare_word();
                self.prefix_directive(false)?;
            } else if self.starts_with_keyword("BASE") {
                self.bare_word();
                self.base_directive(false)?;
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn bare_word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn prefix_directive(&mut self, dotted: bool) -> PResult<()> {
        self.skip_ws();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_alphanumeric() || c == '_' || c == '-' || c == '.') {
                return self.syntax("invalid prefix name");
            }
            name.push(c);
            self.bump();
        }
        self.expect(':')?;
        self.skip_ws();
        let ns = self.iri_ref()?;
        if dotted {
            self.expect('.')?;
        }
        self.prefixes.insert(name.clone(), ns.clone());
        self.declared.insert(name, ns);
        Ok(())
    }

    fn base_directive(&mut self, dotted: bool) -> PResult<()> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri);
        if dotted {
            self.expect('.')?;
        }
        Ok(())
    }

    fn resolve(&self, raw: String) -> String {
        match &self.base {
            Some(base) if !raw.contains(':') => format!("{base}{raw}"),
            _ => raw,
        }
    }

    /// `<...>` with `\u` escapes resolved; returns the resolved IRI text.
    fn iri_ref(&mut self) -> PResult<String> {
        if self.peek() != Some('<') {
            return self.syntax("expected '<'");
        }
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return self.syntax("unterminated IRI"),
                Some('>') => break,
                Some('\\') => s.push(self.unicode_escape()?),
                Some(c) if c.is_whitespace() => return self.syntax("whitespace inside IRI"),
                Some(c) => s.push(c),
            }
        }
        Ok(self.resolve(s))
    }

    fn unicode_escape(&mut self) -> PResult<char> {
        let digits = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.syntax("invalid escape"),
        };
        let mut code = 0u32;
        for _ in 0..digits {
            let Some(d) = self.bump().and_then(|c| c.to_digit(16)) else {
                return self.syntax("invalid unicode escape");
            };
            code = code * 16 + d;
        }
        match char::from_u32(code) {
            Some(c) => Ok(c),
            None => self.syntax("invalid unicode code point"),
        }
    }

    fn make_iri(&self, s: String) -> PResult<Iri> {
        match Iri::new(s) {
            Ok(iri) => Ok(iri),
            Err(e) => self.syntax(e.to_string()),
        }
    }

    fn prefixed_name(&mut self) -> PResult<Iri> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_alphanumeric() || c == '_' || c == '-' || c == '.') {
                return self.syntax(format!("unexpected character {c:?}"));
            }
            prefix.push(c);
            self.bump();
        }
        if self.bump() != Some(':') {
            return self.syntax("expected ':' in prefixed name");
        }
        let mut local = String::new();
        while let Some(c) = self.peek() {
            let trailing_dot = c == '.'
                && !self
                    .peek_at(1)
                    .is_some_and(|n| n.is_alphanumeric() || n == '_' || n == '-' || n == ':');
            if (c.is_alphanumeric() || "_-:.%".contains(c)) && !trailing_dot {
                local.push(c);
                self.bump();
            } else if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) => local.push(e),
                    None => return self.syntax("dangling escape"),
                }
            } else {
                break;
            }
        }
        let Some(ns) = self.prefixes.get(&prefix) else {
            return self.syntax(format!("undeclared prefix {prefix:?}"));
        };
        self.make_iri(format!("{ns}{local}"))
    }

    fn blank_label(&mut self) -> PResult<Iri> {
        self.bump();
        self.bump();
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if label.is_empty() {
            return self.syntax("empty blank node label");
        }
        self.make_iri(format!("{SKOLEM_PREFIX}{label}"))
    }

    fn fresh_blank(&mut self) -> PResult<Iri> {
        self.anon += 1;
        self.make_iri(format!("{SKOLEM_PREFIX}anon{}", self.anon))
    }

    /// Subject or object resource (not a literal).
    fn resource(&mut self) -> PResult<Iri> {
        self.skip_ws();
        match self.peek() {
            Some('<') => {
                let s = self.iri_ref()?;
                self.make_iri(s)
            }
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some('[') => {
                self.bump();
                let node = self.fresh_blank()?;
                if !self.eat(']') {
                    self.predicate_objects(&node)?;
                    self.expect(']')?;
                }
                Ok(node)
            }
            Some('(') => Err(ParseError::Unsupported {
                construct: "RDF collection".into(),
                line: self.line,
                column: self.column,
            }),
            Some(_) => self.prefixed_name(),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn triples(&mut self) -> PResult<()> {
        let subject = self.resource()?;
        self.skip_ws();
        // `[ ... ] .` is a complete statement on its own
        if self.peek() == Some('.') {
            return Ok(());
        }
        self.predicate_objects(&subject)
    }

    fn predicate_objects(&mut self, subject: &Iri) -> PResult<()> {
        loop {
            self.skip_ws();
            let predicate = if self.peek() == Some('a')
                && self.peek_at(1).is_some_and(|c| c.is_whitespace() || c == '<' || c == '[')
            {
                self.bump();
                self.make_iri(RDF_TYPE.to_string())?
            } else {
                self.resource()?
            };
            loop {
                let (line, column) = (self.line, self.column);
                let object = self.object()?;
                self.record(subject, &predicate, object, line, column);
                if !self.eat(',') {
                    break;
                }
            }
            if !self.eat(';') {
                return Ok(());
            }
            while self.eat(';') {}
            self.skip_ws();
            if matches!(self.peek(), Some('.') | Some(']') | None) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> PResult<Node> {
        self.skip_ws();
        match self.peek() {
            Some('"') | Some('\'') => self.literal().map(Node::Literal),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.number().map(Node::Literal),
            Some(_) if self.starts_with_keyword("true") || self.starts_with_keyword("false") => {
                Err(ParseError::UnsupportedDatatype {
                    datatype: format!("{XSD_NS}boolean"),
                    line: self.line,
                    column: self.column,
                })
            }
            _ => self.resource().map(Node::Iri),
        }
    }

    fn number(&mut self) -> PResult<Literal> {
        let (line, column) = (self.line, self.column);
        let mut s = String::new();
        while let Some(c) = self.peek() {
            let dot_continues = c == '.' && self.peek_at(1).is_some_and(|n| n.is_ascii_digit());
            if c.is_ascii_digit() || c == '+' || c == '-' || c == 'e' || c == 'E' || dot_continues {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.contains(['.', 'e', 'E']) {
            let dt = if s.contains(['e', 'E']) { "double" } else { "decimal" };
            return Err(ParseError::UnsupportedDatatype {
                datatype: format!("{XSD_NS}{dt}"),
                line,
                column,
            });
        }
        Literal::integer(&s).or_else(|e| self.syntax(e.to_string()))
    }

    fn literal(&mut self) -> PResult<Literal> {
        let (line, column) = (self.line, self.column);
        let quote = self.bump().expect("caller saw a quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return self.syntax("unterminated string literal"),
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.bump();
                        self.bump();
                        break;
                    }
                    s.push(c);
                }
                Some('\\') => match self.peek() {
                    Some('u') | Some('U') => s.push(self.unicode_escape()?),
                    Some(e) => {
                        self.bump();
                        s.push(match e {
                            't' => '\t',
                            'n' => '\n',
                            'r' => '\r',
                            'b' => '\u{8}',
                            'f' => '\u{c}',
                            '"' | '\'' | '\\' => e,
                            _ => return self.syntax(format!("invalid escape \\{e}")),
                        });
                    }
                    None => return self.syntax("dangling escape"),
                },
                Some('\n') if !long => return self.syntax("newline in short string literal"),
                Some(c) => s.push(c),
            }
        }
        if self.peek() == Some('@') {
            self.bump();
            let tag = self.bare_word();
            return Err(ParseError::UnsupportedDatatype {
                datatype: format!("rdf:langString (@{tag})"),
                line,
                column,
            });
        }
        if self.peek() == Some('^') && self.peek_at(1) == Some('^') {
            self.bump();
            self.bump();
            let dt = self.resource()?;
            return match dt.as_str() {
                XSD_STRING => Ok(Literal::Str(s)),
                XSD_INTEGER => Literal::integer(s.trim()).or_else(|e| self.syntax(e.to_string())),
                other => Err(ParseError::UnsupportedDatatype {
                    datatype: other.to_string(),
                    line,
                    column,
                }),
            };
        }
        Ok(Literal::Str(s))
    }

    fn warn(&mut self, line: usize, column: usize, message: String) {
        let message = format!("{line}:{column}: {message}");
        log::warn!("{message}");
        self.kb.warnings.push(message);
    }

    fn record(&mut self, s: &Iri, p: &Iri, o: Node, line: usize, column: usize) {
        let schema = |iri: &str| [RDF_NS, RDFS_NS, OWL_NS].iter().any(|ns| iri.starts_with(ns));
        match (p.as_str(), o) {
            (RDF_TYPE, Node::Iri(class)) => {
                if class.as_str() == OWL_THING {
                    return;
                }
                if schema(class.as_str()) {
                    self.warn(line, column, format!("ignoring schema triple: <{s}> a <{class}>"));
                    return;
                }
                self.kb
                    .abox
                    .concept_asserts
                    .insert((class, GroundTerm::Individual(s.clone())));
            }
            (OWL_SAME_AS, Node::Iri(other)) => {
                self.kb.abox.same_as.insert((s.clone(), other));
            }
            (pred, _) if schema(pred) => {
                self.warn(line, column, format!("ignoring triple with predicate <{pred}>"));
            }
            (_, Node::Iri(o)) => {
                self.kb.abox.role_asserts.insert((
                    p.clone(),
                    GroundTerm::Individual(s.clone()),
                    GroundTerm::Individual(o),
                ));
            }
            (_, Node::Literal(lit)) => {
                self.kb.abox.role_asserts.insert((
                    p.clone(),
                    GroundTerm::Individual(s.clone()),
                    GroundTerm::Literal(lit),
                ));
            }
        }
    }
}

pub fn parse_turtle(text: &str) -> Result<ParsedKb, ParseError> {
    let mut reader = Reader {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        prefixes: default_prefixes(),
        declared: IndexMap::new(),
        base: None,
        anon: 0,
        kb: ParsedKb::default(),
        _text: text,
    };
    reader.document()?;
    reader.kb.prefixes = reader.declared;
    Ok(reader.kb)
}

/// N-Triples is read with the Turtle reader, of which it is a subset.
pub fn parse_ntriples(text: &str) -> Result<ParsedKb, ParseError> {
    parse_turtle(text)
}
