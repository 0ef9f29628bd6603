//! File discovery, pipeline wiring and output emission for the `rl2dl`
//! binary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use indexmap::IndexMap;
use log::{info, warn};
use thiserror::Error;

use crate::datalog::{serialize_program, DatalogError, Header, Program, Rule};
use crate::engine::{answer_query, answers_to_tsv, materialize_with_equality, materialize_with_stats, EngineError};
use crate::owl::{check_rl_profile, parse_abox, parse_tbox, AboxFormat, ParseError, ParsedKb, RlViolation, TboxFormat};
use crate::rewrite::{RewriteError, RewriteOptions, Rewriter};
use crate::sameas::{apply_non_una, equality_rules, EqualityConfig, SameAsError};
use crate::sparql::{parse_sparql_bgp, translate_bgp, SparqlError};
use crate::terms::SymbolTable;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Sparql { path: PathBuf, source: SparqlError },
    #[error("TBox is not in OWL 2 RL:\n{}", render_violations(.0))]
    NotRl(Vec<RlViolation>),
    #[error(transparent)]
    Rewrite(RewriteError),
    #[error(transparent)]
    SameAs(#[from] SameAsError),
    #[error(transparent)]
    Datalog(#[from] DatalogError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Config(String),
}

fn render_violations(vs: &[RlViolation]) -> String {
    vs.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n")
}

impl From<RewriteError> for Error {
    fn from(e: RewriteError) -> Self {
        match e {
            RewriteError::NotRl(vs) => Error::NotRl(vs),
            other => Error::Rewrite(other),
        }
    }
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Datalog(_) => 2,
            Error::Parse { source, .. } => match source {
                ParseError::Syntax { .. } => 2,
                ParseError::Unsupported { .. } | ParseError::UnsupportedDatatype { .. } => 4,
            },
            Error::Sparql { source, .. } => match source {
                SparqlError::Syntax { .. } | SparqlError::UnboundSelectVariable(_) => 2,
                _ => 4,
            },
            Error::NotRl(_) => 3,
            Error::SameAs(_) | Error::Config(_) => 5,
            Error::Rewrite(_) | Error::Engine(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum EvalMode {
    #[default]
    None,
    Materialize,
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "rl2dl", version, about = "Rewrite OWL 2 RL ontologies, data and SPARQL queries into Datalog")]
pub struct RunConfig {
    /// TBox files or folders (.owl, .ofn)
    #[arg(long = "tbox", value_name = "PATH")]
    pub tbox_paths: Vec<PathBuf>,
    /// ABox files or folders (.owl, .ofn, .ttl, .nt)
    #[arg(long = "abox", value_name = "PATH")]
    pub abox_paths: Vec<PathBuf>,
    /// SPARQL file or folder (.sparql, .rq)
    #[arg(long = "query", value_name = "PATH")]
    pub query_path: Option<PathBuf>,
    #[arg(long = "out", value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,
    /// Drop the unique name assumption; N bounds the noStart chain length
    #[arg(long = "same-as", value_name = "N", num_args = 0..=1, default_missing_value = "2")]
    pub same_as: Option<usize>,
    #[arg(long = "eval", value_enum, default_value_t = EvalMode::None)]
    pub eval_mode: EvalMode,
    /// Close every answer position under sameAs
    #[arg(long = "expand-answers")]
    pub expand_answers: bool,
}

impl RunConfig {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            tbox_paths: Vec::new(),
            abox_paths: Vec::new(),
            query_path: None,
            out_dir: out_dir.into(),
            same_as: None,
            eval_mode: EvalMode::None,
            expand_answers: false,
        }
    }
}

/// What a run produced.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub written: Vec<PathBuf>,
    /// One line per evaluation, empty when nothing was evaluated.
    pub stats: Option<String>,
    pub inconsistent: bool,
}

const TBOX_EXT: &[&str] = &["owl", "ofn"];
const ABOX_EXT: &[&str] = &["owl", "ofn", "ttl", "nt"];
const QUERY_EXT: &[&str] = &["sparql", "rq"];

fn extension(path: &Path) -> String {
    path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Files named by `paths`, folders expanded to their recognized files in
/// name order.
fn discover(paths: &[PathBuf], exts: &[&str]) -> Result<Vec<PathBuf>, Error> {
    let mut files = Vec::new();
    for path in paths {
        let meta = fs::metadata(path).map_err(io_err(path))?;
        if meta.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(path)
                .map_err(io_err(path))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && exts.contains(&extension(p).as_str()))
                .collect();
            found.sort();
            files.extend(found);
        } else if exts.contains(&extension(path).as_str()) {
            files.push(path.clone());
        } else {
            return Err(Error::Config(format!(
                "{}: unrecognized extension (expected one of {})",
                path.display(),
                exts.join(", ")
            )));
        }
    }
    Ok(files)
}

fn stem(path: &Path) -> String {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("input").to_string()
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn log_warnings(path: &Path, kb: &ParsedKb) {
    for w in &kb.warnings {
        warn!("{}: {w}", path.display());
    }
}

struct Output {
    path: PathBuf,
    program: Program,
}

/// Runs the whole pipeline and writes every output file into
/// `cfg.out_dir`.
pub fn run(cfg: &RunConfig) -> Result<RunReport, Error> {
    if cfg.tbox_paths.is_empty() && cfg.abox_paths.is_empty() && cfg.query_path.is_none() {
        return Err(Error::Config("no input given: pass --tbox, --abox or --query".into()));
    }
    if cfg.same_as.is_some() && cfg.tbox_paths.is_empty() && cfg.query_path.is_none() {
        return Err(SameAsError::NothingToRewrite.into());
    }
    let tbox_files = discover(&cfg.tbox_paths, TBOX_EXT)?;
    let abox_files = discover(&cfg.abox_paths, ABOX_EXT)?;
    let query_files = discover(cfg.query_path.as_slice(), QUERY_EXT)?;

    let mut prefixes: IndexMap<String, String> = IndexMap::new();
    let mut tbox_kbs = Vec::new();
    let mut whole = crate::dl::TBox::new();
    for path in &tbox_files {
        let kb = parse_tbox(&read(path)?, TboxFormat::Functional).map_err(|source| Error::Parse {
            path: path.clone(),
            source,
        })?;
        log_warnings(path, &kb);
        whole.extend(kb.tbox.clone());
        for (k, v) in &kb.prefixes {
            prefixes.entry(k.clone()).or_insert(v.clone());
        }
        tbox_kbs.push((path, kb));
    }
    let violations = check_rl_profile(&whole);
    if !violations.is_empty() {
        return Err(Error::NotRl(violations));
    }

    let mut rewriter = Rewriter::new(RewriteOptions::default(), SymbolTable::new());
    let mut outputs: Vec<Output> = Vec::new();
    for (path, kb) in &tbox_kbs {
        let mut program = rewriter.rewrite_tbox(&kb.tbox)?;
        program.extend(rewriter.rewrite_abox(&kb.abox));
        outputs.push(Output {
            path: cfg.out_dir.join(format!("{}.tbox.asp", stem(path))),
            program,
        });
    }
    if let Some(last) = outputs.last_mut() {
        last.program.rules.extend(rewriter.top_closure());
    }

    for path in &abox_files {
        let format = AboxFormat::from_extension(&extension(path)).expect("discovered by extension");
        let kb = parse_abox(&read(path)?, format).map_err(|source| Error::Parse {
            path: path.clone(),
            source,
        })?;
        log_warnings(path, &kb);
        for (k, v) in &kb.prefixes {
            prefixes.entry(k.clone()).or_insert(v.clone());
        }
        let program = rewriter.rewrite_abox(&kb.abox);
        outputs.push(Output {
            path: cfg.out_dir.join(format!("{}.abox.asp", stem(path))),
            program,
        });
    }

    let mut query_rules: Vec<Rule> = Vec::new();
    for path in &query_files {
        let sparql_err = |source| Error::Sparql {
            path: path.clone(),
            source,
        };
        let queries = parse_sparql_bgp(&read(path)?).map_err(sparql_err)?;
        let mut program = Program::new();
        for q in &queries {
            let rule = translate_bgp(q, query_rules.len() + 1, &mut rewriter.symbols).map_err(sparql_err)?;
            for (k, v) in &q.prefixes {
                prefixes.entry(k.clone()).or_insert(v.clone());
            }
            query_rules.push(rule.clone());
            program.rules.push(rule);
        }
        outputs.push(Output {
            path: cfg.out_dir.join(format!("{}.query.asp", stem(path))),
            program,
        });
    }

    let mut combined = Program::new();
    for out in &outputs {
        combined.extend(out.program.clone());
    }

    let equality = cfg.same_as.map(EqualityConfig::with_n);
    if let Some(eq_cfg) = equality {
        let non_una = apply_non_una(&combined, &[], eq_cfg)?;
        let mut extra = Program::new();
        let base = equality_rules(eq_cfg);
        extra.rules.extend(base.iter().cloned());
        extra
            .rules
            .extend(non_una.rules.iter().filter(|r| !base.contains(r) && !combined.rules.contains(r)).cloned());
        let first = tbox_files.first().or(query_files.first()).map_or_else(|| "kb".to_string(), |p| stem(p));
        outputs.push(Output {
            path: cfg.out_dir.join(format!("{first}.eq.asp")),
            program: extra,
        });
        combined = non_una;
    }

    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    let mut report = RunReport::default();
    for out in &outputs {
        let header = Header {
            prefixes: &prefixes,
            symbols: &rewriter.symbols,
        };
        let text = serialize_program(&out.program, header)?;
        fs::write(&out.path, text).map_err(io_err(&out.path))?;
        info!("wrote {}", out.path.display());
        report.written.push(out.path.clone());
    }

    if cfg.eval_mode == EvalMode::Materialize {
        let (model, stats) = match equality {
            Some(eq_cfg) => materialize_with_equality(&combined, eq_cfg)?,
            None => materialize_with_stats(&combined)?,
        };
        if model.inconsistent {
            warn!("the knowledge base is inconsistent");
        }
        report.inconsistent = model.inconsistent;
        for i in 1..=query_rules.len() {
            let answers = answer_query(&model, i, cfg.expand_answers)?;
            let path = cfg.out_dir.join(format!("answers-{i}.tsv"));
            fs::write(&path, answers_to_tsv(&answers)).map_err(io_err(&path))?;
            report.written.push(path);
        }
        report.stats = Some(format!("{stats} inconsistent={}", model.inconsistent));
    }
    Ok(report)
}
