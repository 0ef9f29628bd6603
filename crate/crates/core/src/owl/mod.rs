//! Knowledge-base frontends: OWL functional-style syntax for TBoxes and
//! ABoxes, Turtle and N-Triples for ABoxes, and the RL profile check.

mod functional;
mod profile;
mod turtle;

use indexmap::IndexMap;
use thiserror::Error;

use crate::dl::{ABox, TBox};

pub use functional::{parse_functional, tbox_to_functional};
pub use profile::{check_rl_profile, RlReason, RlViolation};
pub use turtle::{parse_ntriples, parse_turtle};

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const OWL_SAME_AS: &str = "http://www.w3.org/2002/07/owl#sameAs";
pub const OWL_THING: &str = "http://www.w3.org/2002/07/owl#Thing";
pub const OWL_NOTHING: &str = "http://www.w3.org/2002/07/owl#Nothing";

/// Blank nodes in data are skolemized into IRIs under this prefix.
pub const SKOLEM_PREFIX: &str = "urn:rl2dl:bnode:";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported construct {construct} at {line}:{column}")]
    Unsupported {
        construct: String,
        line: usize,
        column: usize,
    },
    #[error("unsupported literal datatype {datatype} at {line}:{column}")]
    UnsupportedDatatype {
        datatype: String,
        line: usize,
        column: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TboxFormat {
    Functional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AboxFormat {
    Functional,
    Turtle,
    NTriples,
}

impl AboxFormat {
    /// Format for a file extension (`owl`, `ofn`, `ttl`, `nt`).
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "owl" | "ofn" => Some(AboxFormat::Functional),
            "ttl" => Some(AboxFormat::Turtle),
            "nt" => Some(AboxFormat::NTriples),
            _ => None,
        }
    }
}

/// The result of parsing one source.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedKb {
    pub tbox: TBox,
    pub abox: ABox,
    pub prefixes: IndexMap<String, String>,
    pub warnings: Vec<String>,
}

impl ParsedKb {
    /// Unions another parse into this one. Prefixes already bound keep their
    /// first binding.
    pub fn merge(&mut self, other: ParsedKb) {
        self.tbox.extend(other.tbox);
        self.abox.extend(other.abox);
        for (k, v) in other.prefixes {
            self.prefixes.entry(k).or_insert(v);
        }
        self.warnings.extend(other.warnings);
    }
}

pub fn parse_tbox(text: &str, format: TboxFormat) -> Result<ParsedKb, ParseError> {
    match format {
        TboxFormat::Functional => parse_functional(text),
    }
}

pub fn parse_abox(text: &str, format: AboxFormat) -> Result<ParsedKb, ParseError> {
    match format {
        AboxFormat::Functional => parse_functional(text),
        AboxFormat::Turtle => parse_turtle(text),
        AboxFormat::NTriples => parse_ntriples(text),
    }
}

pub(crate) fn default_prefixes() -> IndexMap<String, String> {
    IndexMap::from([
        ("rdf".to_string(), RDF_NS.to_string()),
        ("rdfs".to_string(), RDFS_NS.to_string()),
        ("owl".to_string(), OWL_NS.to_string()),
        ("xsd".to_string(), XSD_NS.to_string()),
    ])
}
