"""Smoke test for the rl2dl extension module.

    maturin develop -m crates/python/Cargo.toml
    python python/smoke_test.py
"""

import tempfile
from pathlib import Path

import rl2dl

TBOX = """
Prefix(:=<http://ex.org/>)
Ontology(
  SubClassOf(ObjectSomeValuesFrom(:hasPet :Dog) :DogOwner)
)
"""

ABOX = """
@prefix : <http://ex.org/> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
:Peter :hasPet :Brian .
:BrianGriffin a :Dog .
:Brian owl:sameAs :BrianGriffin .
"""

QUERY = "PREFIX : <http://ex.org/> SELECT ?x WHERE { ?x a :DogOwner }"

PETER = ("http://ex.org/Peter",)


def main():
    una = rl2dl.rewrite(tbox=TBOX, abox=ABOX, query=QUERY)
    assert "dogOwner(X) :- hasPet(X,X_1), dog(X_1)." in una.rules(), una.rules()
    assert una.materialize().answers(1) == []

    for n in range(4):
        model = rl2dl.rewrite(tbox=TBOX, abox=ABOX, query=QUERY, same_as=n).materialize()
        assert model.answers(1) == [PETER], (n, model.answers(1))
        assert not model.inconsistent

    model = rl2dl.rewrite(abox=ABOX, query=QUERY.replace(":DogOwner", ":Dog"), same_as=2).materialize()
    assert model.answers(1, expand=True) == [("http://ex.org/Brian",), ("http://ex.org/BrianGriffin",)]

    bad = "Prefix(:=<http://ex.org/>) Ontology(SubClassOf(:A ObjectSomeValuesFrom(:r :B)))"
    assert len(rl2dl.check_rl(bad)) == 1
    try:
        rl2dl.rewrite(tbox=bad)
    except rl2dl.RlViolationError:
        pass
    else:
        raise AssertionError("expected an RL violation")

    try:
        rl2dl.rewrite(query="SELECT ?x WHERE { ?x ?p ?y }")
    except rl2dl.UnsupportedError:
        pass
    else:
        raise AssertionError("expected meta-reasoning to be rejected")

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        (tmp / "kb.ofn").write_text(TBOX)
        (tmp / "data.ttl").write_text(ABOX)
        (tmp / "q.sparql").write_text(QUERY)
        code = rl2dl.run([
            "--tbox", str(tmp / "kb.ofn"), "--abox", str(tmp / "data.ttl"),
            "--query", str(tmp / "q.sparql"), "--out", str(tmp / "out"),
            "--same-as", "--eval", "materialize",
        ])
        assert code == 0
        assert (tmp / "out" / "answers-1.tsv").read_text() == '"http://ex.org/Peter"\n'

    print("smoke test passed")


if __name__ == "__main__":
    main()
