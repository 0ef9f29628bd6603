mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

use rl2dl::cli::{run, Error, EvalMode, RunConfig};
use rl2dl::datalog::Program;
use rl2dl::engine::{answer_query, materialize, materialize_with_equality};
use rl2dl::sameas::EqualityConfig;

use common::read_asp;

const PETS: &str = "Prefix(:=<http://ex.org/>)\nOntology(\n  SubClassOf(ObjectSomeValuesFrom(:hasPet :Dog) :DogOwner)\n)\n";
const FAMILY: &str = "@prefix : <http://ex.org/> .\n@prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
                      :Peter :hasPet :Brian .\n:BrianGriffin a :Dog .\n:Brian owl:sameAs :BrianGriffin .\n";
const OWNERS: &str = "PREFIX : <http://ex.org/>\nSELECT ?x WHERE { ?x a :DogOwner }\n";

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn pets_config(dir: &Path) -> RunConfig {
    write(dir, "pets.ofn", PETS);
    write(dir, "family.ttl", FAMILY);
    write(dir, "owners.sparql", OWNERS);
    let mut cfg = RunConfig::new(dir.join("out"));
    cfg.tbox_paths.push(dir.join("pets.ofn"));
    cfg.abox_paths.push(dir.join("family.ttl"));
    cfg.query_path = Some(dir.join("owners.sparql"));
    cfg
}

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rl2dl")).args(args).output().unwrap()
}

fn outputs(dir: &Path) -> BTreeMap<String, String> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn tbox_only_writes_one_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pets.ofn", PETS);
    let mut cfg = RunConfig::new(dir.path().join("out"));
    cfg.tbox_paths.push(dir.path().join("pets.ofn"));
    let report = run(&cfg).unwrap();
    assert_eq!(report.written, vec![dir.path().join("out/pets.tbox.asp")]);
    assert!(report.stats.is_none());
    let text = fs::read_to_string(&report.written[0]).unwrap();
    assert!(text.contains(":- hasPet(X,X_1), dog(X_1)."), "{text}");
}

#[test]
fn binary_finds_the_owner_without_una() {
    let dir = tempfile::tempdir().unwrap();
    pets_config(dir.path());
    let d = dir.path().to_str().unwrap();
    let out = bin(&[
        "--tbox",
        &format!("{d}/pets.ofn"),
        "--abox",
        &format!("{d}/family.ttl"),
        "--query",
        &format!("{d}/owners.sparql"),
        "--out",
        &format!("{d}/out"),
        "--same-as",
        "2",
        "--eval",
        "materialize",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("stats "), "{stdout}");
    let files = outputs(&dir.path().join("out"));
    assert_eq!(files["answers-1.tsv"], "\"http://ex.org/Peter\"\n");
    assert!(files.contains_key("pets.eq.asp"));
    assert!(files.contains_key("family.abox.asp"));
    assert!(files.contains_key("owners.query.asp"));
}

#[test]
fn non_rl_tbox_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "areas.ofn",
        "Prefix(:=<http://ex.org/>)\nOntology(\n  SubClassOf(:CommutingArea ObjectSomeValuesFrom(:linked :Capital))\n)\n",
    );
    let mut cfg = RunConfig::new(dir.path().join("out"));
    cfg.tbox_paths.push(dir.path().join("areas.ofn"));
    let err = run(&cfg).unwrap_err();
    assert!(matches!(err, Error::NotRl(_)));
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("CommutingArea"), "{err}");
    assert!(!dir.path().join("out").exists());

    let out = bin(&["--tbox", dir.path().join("areas.ofn").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn runs_are_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = pets_config(dir.path());
    cfg.same_as = Some(1);
    cfg.eval_mode = EvalMode::Materialize;
    run(&cfg).unwrap();
    let first = outputs(&cfg.out_dir);
    run(&cfg).unwrap();
    assert_eq!(first, outputs(&cfg.out_dir));
}

#[test]
fn output_files_compose() {
    for same_as in [None, Some(0), Some(2)] {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = pets_config(dir.path());
        cfg.same_as = same_as;
        cfg.eval_mode = EvalMode::Materialize;
        let report = run(&cfg).unwrap();
        let mut program = Program::new();
        for path in report.written.iter().filter(|p| p.extension().is_some_and(|e| e == "asp")) {
            program.extend(read_asp(&fs::read_to_string(path).unwrap()));
        }
        let model = match same_as {
            Some(n) => materialize_with_equality(&program, EqualityConfig::with_n(n)).unwrap().0,
            None => materialize(&program).unwrap(),
        };
        let got = rl2dl::engine::answers_to_tsv(&answer_query(&model, 1, false).unwrap());
        assert_eq!(got, fs::read_to_string(cfg.out_dir.join("answers-1.tsv")).unwrap(), "{same_as:?}");
    }
}

#[test]
fn unsupported_query_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "meta.rq", "SELECT ?x ?c WHERE { ?x a ?c }\n");
    let out = bin(&["--query", dir.path().join("meta.rq").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn configuration_errors_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "family.ttl", FAMILY);
    let abox = dir.path().join("family.ttl");
    let out = bin(&["--abox", abox.to_str().unwrap(), "--same-as"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(bin(&[]).status.code(), Some(5));
    write(dir.path(), "notes.txt", "");
    let out = bin(&["--tbox", dir.path().join("notes.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn missing_file_exits_2() {
    let out = bin(&["--tbox", "/nonexistent/x.ofn"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}
