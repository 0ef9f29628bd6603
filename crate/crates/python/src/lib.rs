//! Python bindings. Build with `maturin develop -m crates/python/Cargo.toml`.

use clap::Parser;
use indexmap::IndexMap;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyTuple;

use rl2dl_core::cli::{self, RunConfig};
use rl2dl_core::datalog::{serialize_program, Header};
use rl2dl_core::dl::{ABox, TBox};
use rl2dl_core::engine::{self, answer_query};
use rl2dl_core::owl::{check_rl_profile, parse_abox, parse_tbox, AboxFormat, TboxFormat};
use rl2dl_core::rewrite::{RewriteOptions, Rewriter};
use rl2dl_core::sameas::{apply_non_una, EqualityConfig};
use rl2dl_core::sparql::{parse_sparql_bgp, translate_bgp};
use rl2dl_core::terms::{GroundTerm, Literal, SymbolTable};

create_exception!(rl2dl, RlViolationError, PyValueError);
create_exception!(rl2dl, UnsupportedError, PyValueError);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn term_to_py(py: Python<'_>, t: &GroundTerm) -> PyResult<Py<PyAny>> {
    Ok(match t {
        GroundTerm::Individual(iri) => iri.as_str().into_pyobject(py)?.into_any().unbind(),
        GroundTerm::Literal(Literal::Str(s)) => s.into_pyobject(py)?.into_any().unbind(),
        GroundTerm::Literal(Literal::Integer(n)) => py
            .import("builtins")?
            .getattr("int")?
            .call1((n.to_string(),))?
            .unbind(),
    })
}

fn tuples_to_py<'a>(
    py: Python<'_>,
    tuples: impl Iterator<Item = &'a Vec<GroundTerm>>,
) -> PyResult<Vec<Py<PyTuple>>> {
    tuples
        .map(|t| {
            let items = t.iter().map(|x| term_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            Ok(PyTuple::new(py, items)?.unbind())
        })
        .collect()
}

/// A Datalog program together with the predicate symbols it uses.
#[pyclass(module = "rl2dl")]
struct Program {
    inner: rl2dl_core::datalog::Program,
    symbols: SymbolTable,
    prefixes: IndexMap<String, String>,
    queries: usize,
    same_as: Option<usize>,
}

#[pymethods]
impl Program {
    fn rules(&self) -> Vec<String> {
        self.inner.rules.iter().map(|r| r.to_string()).collect()
    }

    fn facts(&self) -> Vec<String> {
        self.inner.facts.iter().map(|f| format!("{f}.")).collect()
    }

    #[getter]
    fn queries(&self) -> usize {
        self.queries
    }

    /// The program in `.asp` syntax.
    fn to_asp(&self) -> PyResult<String> {
        let header = Header {
            prefixes: &self.prefixes,
            symbols: &self.symbols,
        };
        serialize_program(&self.inner, header).map_err(value_err)
    }

    fn materialize(&self) -> PyResult<Model> {
        let (model, stats) = match self.same_as {
            Some(n) => engine::materialize_with_equality(&self.inner, EqualityConfig::with_n(n)),
            None => engine::materialize_with_stats(&self.inner),
        }
        .map_err(value_err)?;
        Ok(Model {
            inner: model,
            stats: stats.to_string(),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.rules.len() + self.inner.facts.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Program(rules={}, facts={}, queries={})",
            self.inner.rules.len(),
            self.inner.facts.len(),
            self.queries
        )
    }
}

#[pyclass(module = "rl2dl")]
struct Model {
    inner: engine::Model,
    stats: String,
}

#[pymethods]
impl Model {
    #[getter]
    fn inconsistent(&self) -> bool {
        self.inner.inconsistent
    }

    #[getter]
    fn stats(&self) -> &str {
        &self.stats
    }

    fn predicates(&self) -> Vec<String> {
        self.inner.predicates().map(str::to_string).collect()
    }

    /// Tuples of a predicate, sorted; empty for an unknown predicate.
    fn relation(&self, py: Python<'_>, predicate: &str) -> PyResult<Vec<Py<PyTuple>>> {
        match self.inner.relation(predicate) {
            Some(rel) => tuples_to_py(py, rel.iter()),
            None => Ok(Vec::new()),
        }
    }

    #[pyo3(signature = (index = 1, expand = false))]
    fn answers(&self, py: Python<'_>, index: usize, expand: bool) -> PyResult<Vec<Py<PyTuple>>> {
        let answers = answer_query(&self.inner, index, expand).map_err(value_err)?;
        tuples_to_py(py, answers.iter())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

fn load_tbox(text: &str) -> PyResult<(TBox, ABox, IndexMap<String, String>)> {
    let kb = parse_tbox(text, TboxFormat::Functional).map_err(value_err)?;
    Ok((kb.tbox, kb.abox, kb.prefixes))
}

/// Rewrites an ontology (functional syntax), data and SPARQL queries into one
/// program. `abox_format` is one of `ofn`, `ttl`, `nt`. With `same_as`, the
/// unique name assumption is dropped and `same_as` bounds the noStart chain.
#[pyfunction]
#[pyo3(signature = (tbox = None, abox = None, query = None, abox_format = "ttl", same_as = None, enhanced = true))]
fn rewrite(
    tbox: Option<&str>,
    abox: Option<&str>,
    query: Option<&str>,
    abox_format: &str,
    same_as: Option<usize>,
    enhanced: bool,
) -> PyResult<Program> {
    let mut rewriter = Rewriter::new(RewriteOptions { enhanced }, SymbolTable::new());
    let mut program = rl2dl_core::datalog::Program::new();
    let mut prefixes = IndexMap::new();
    if let Some(text) = tbox {
        let (t, a, p) = load_tbox(text)?;
        let violations = check_rl_profile(&t);
        if !violations.is_empty() {
            let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(RlViolationError::new_err(lines.join("\n")));
        }
        program.extend(rewriter.rewrite_tbox(&t).map_err(value_err)?);
        program.rules.extend(rewriter.top_closure());
        program.extend(rewriter.rewrite_abox(&a));
        prefixes.extend(p);
    }
    if let Some(text) = abox {
        let format = AboxFormat::from_extension(abox_format)
            .ok_or_else(|| PyValueError::new_err(format!("unknown ABox format {abox_format}")))?;
        let kb = parse_abox(text, format).map_err(value_err)?;
        program.extend(rewriter.rewrite_abox(&kb.abox));
        for (k, v) in kb.prefixes {
            prefixes.entry(k).or_insert(v);
        }
    }
    let mut queries = 0;
    if let Some(text) = query {
        let parsed = parse_sparql_bgp(text).map_err(|e| UnsupportedError::new_err(e.to_string()))?;
        for q in &parsed {
            queries += 1;
            let rule = translate_bgp(q, queries, &mut rewriter.symbols)
                .map_err(|e| UnsupportedError::new_err(e.to_string()))?;
            program.rules.push(rule);
        }
    }
    if let Some(n) = same_as {
        program = apply_non_una(&program, &[], EqualityConfig::with_n(n)).map_err(value_err)?;
    }
    Ok(Program {
        inner: program,
        symbols: rewriter.symbols,
        prefixes,
        queries,
        same_as,
    })
}

/// RL profile violations of an ontology, one string per axiom.
#[pyfunction]
fn check_rl(tbox: &str) -> PyResult<Vec<String>> {
    let (t, _, _) = load_tbox(tbox)?;
    Ok(check_rl_profile(&t).iter().map(|v| v.to_string()).collect())
}

/// Runs the command-line pipeline with the given arguments and returns its
/// exit code.
#[pyfunction]
fn run(args: Vec<String>) -> PyResult<i32> {
    let argv = std::iter::once("rl2dl".to_string()).chain(args);
    let cfg = RunConfig::try_parse_from(argv).map_err(value_err)?;
    Ok(match cli::run(&cfg) {
        Ok(_) => 0,
        Err(e) => e.exit_code(),
    })
}

#[pymodule]
fn rl2dl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Program>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(rewrite, m)?)?;
    m.add_function(wrap_pyfunction!(check_rl, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("RlViolationError", m.py().get_type::<RlViolationError>())?;
    m.add("UnsupportedError", m.py().get_type::<UnsupportedError>())?;
    Ok(())
}
