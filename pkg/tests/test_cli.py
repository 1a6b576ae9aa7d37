import json
import os
import random
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from stocheff import io
from stocheff.charrel import CharRel, DownSet, canonical_relation
from stocheff.cli import main
from stocheff.equiv import Congruence
from stocheff.finspace import FinSpace, partition_from_text
from stocheff.logic import NeighborhoodModel

from .randmodels import effectivity, generator, kernel, space, subprob

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"
REGEN = os.environ.get("STOCHEFF_REGEN_GOLDEN") == "1"

CASES = {
    "check_ok": ["check", "P.json"],
    "check_profiles": ["check", "ex1.json", "--profiles"],
    "check_bad_row": ["check", "bad.json"],
    "check_missing_file": ["check", "nope.json"],
    "modelcheck_eighth": ["modelcheck", "ex1.json", "--formula", "dia[1/8] p"],
    "modelcheck_half": ["modelcheck", "ex1.json", "--formula", "dia[1/2] p"],
    "modelcheck_bad_threshold": ["modelcheck", "ex1.json", "--formula", "dia[3/2] p"],
    "modelcheck_unbound": ["modelcheck", "ex1.json", "--formula", "dia[1/2] zz"],
    "gameeval_star": ["gameeval", "nbhd.json", "--game", "g*", "--target", "c"],
    "gameeval_mixed": ["gameeval", "nbhd.json", "--game", "dual h ; g | h", "--target", "b,c"],
    "gameeval_unbound": ["gameeval", "nbhd.json", "--game", "zz", "--target", "a"],
    "compose_kleisli": ["compose", "ex1.json", "ex1.json", "--event", "b", "--q", "1/2",
                        "--verify-kleisli"],
    "compose_not_pointed": ["compose", "ts.json", "nlmp.json", "--event", "a,b", "--q", "1/4",
                            "--verify-kleisli"],
    "compose_mismatch": ["compose", "P.json", "ex1.json", "--event", "b", "--q", "1/2"],
    "quotient_ok": ["quotient", "P.json", "--alpha", "s,u|t", "--beta", "x|y"],
    "quotient_not_congruence": ["quotient", "P.json", "--alpha", "s,t|u", "--beta", "x,y"],
    "quotient_bad_partition": ["quotient", "P.json", "--alpha", "s|t", "--beta", "x|y"],
    "equiv_logical_self": ["equiv", "logical", "ex1.json", "ex1.json"],
    "equiv_logical_renamed": ["equiv", "logical", "P.json", "Q.json"],
    "equiv_behavioral": ["equiv", "behavioral", "P.json", "Q.json"],
    "equiv_logical_none": ["equiv", "logical", "ex1.json", "k2.json"],
    "equiv_bound": ["equiv", "logical", "ex1.json", "k2.json", "--max-search", "1"],
    "charrel_check_ok": ["charrel", "check", "R_ok.json"],
    "charrel_check_bad": ["charrel", "check", "R_bad.json"],
    "charrel_extract_ok": ["charrel", "extract", "R_ok.json"],
    "charrel_extract_bad": ["charrel", "extract", "R_bad.json"],
    "lift_kernel": ["lift", "kernel", "ex1.json"],
    "lift_ts": ["lift", "ts", "ts.json"],
    "lift_nlmp": ["lift", "nlmp", "nlmp.json"],
    "lift_wrong_kind": ["lift", "ts", "ex1.json"],
}

EXPECTED_EXIT = {
    "check_bad_row": 2, "check_missing_file": 2, "modelcheck_bad_threshold": 2,
    "modelcheck_unbound": 2, "gameeval_unbound": 2, "compose_mismatch": 2,
    "quotient_not_congruence": 1, "quotient_bad_partition": 2, "equiv_logical_none": 1,
    "equiv_bound": 3, "charrel_check_bad": 1, "charrel_extract_bad": 1, "lift_wrong_kind": 2,
}


def run(argv, capsys, monkeypatch):
    monkeypatch.chdir(DATA)
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def render(code, out, err):
    return f"exit {code}\n--- stdout\n{out}--- stderr\n{err}"


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys, monkeypatch):
    code, out, err = run(CASES[name], capsys, monkeypatch)
    assert code == EXPECTED_EXIT.get(name, 0)
    text = render(code, out, err)
    path = GOLDEN / f"{name}.txt"
    if REGEN:
        path.write_text(text, encoding="utf-8")
    assert text == path.read_text(encoding="utf-8")


def test_documented_cli_examples(capsys, monkeypatch):
    code, out, _ = run(["modelcheck", "ex1.json", "--formula", "dia[1/8] p"], capsys, monkeypatch)
    assert (code, out) == (0, "{a, b}\n")
    code, _, err = run(["check", "bad.json"], capsys, monkeypatch)
    assert code == 2 and "'b'" in err
    code, out, _ = run(["equiv", "logical", "P.json", "P.json"], capsys, monkeypatch)
    assert code == 0
    assert "alpha(P): s|t|u" in out and "iso states: s -> s, t -> t, u -> u" in out


def test_quotient_output_file(tmp_path, capsys, monkeypatch):
    target = tmp_path / "q.json"
    code, out, _ = run(["quotient", "P.json", "--alpha", "s,u|t", "--beta", "x|y", "-o", str(target)],
                       capsys, monkeypatch)
    assert code == 0 and out == ""
    doc = io.load(target)
    assert doc.kind == "effectivity" and doc.value.dom.states == ("s+u", "t")


def test_no_floats_in_output(capsys, monkeypatch):
    for name in ("lift_kernel", "lift_ts", "quotient_ok", "equiv_behavioral"):
        _, out, _ = run(CASES[name], capsys, monkeypatch)
        body = out[out.index("{"):]
        assert "." not in json.dumps(json.loads(body))


def test_usage_errors_exit_2(capsys, monkeypatch):
    with pytest.raises(SystemExit) as info:
        run(["frobnicate"], capsys, monkeypatch)
    assert info.value.code == 2
    code, _, err = run(["compose", "ex1.json", "ex1.json", "--event", "b", "--q", "0.5"],
                       capsys, monkeypatch)
    assert code == 2 and "0.5" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stocheff", "modelcheck", str(DATA / "ex1.json"),
                           "--formula", "dia[1/2] p"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "{b}\n"


# serialization

@pytest.mark.parametrize("name", sorted(p.name for p in DATA.glob("*.json") if p.name != "bad.json"))
def test_fixture_files_round_trip_byte_exact(name):
    text = (DATA / name).read_text(encoding="utf-8")
    assert io.dumps(io.loads(text)) == text


def _random_documents(rng):
    s, t = space(rng.randint(1, 3)), space(rng.randint(1, 3), "t")
    p = effectivity(rng, s, t)
    val = {"p": t.subset(x for x in t if rng.random() < 0.5), "q": t.empty()}
    yield io.Document("effectivity", p, val)
    yield io.Document("kernel", kernel(rng, s, t))
    yield io.Document("space", s)
    yield io.Document("nbhd-model", NeighborhoodModel(s, {
        "g": {x: tuple(rng.sample(s.subsets(), rng.randint(0, 2))) for x in s}}))
    rel = canonical_relation(subprob(rng, t))
    yield io.Document("charrel", rel.replace(t.full(), DownSet.upto(F(1, 3), closed=False)))
    yield io.Document("charrel", CharRel.from_mapping(t, {}))
    yield io.Document("congruence", Congruence(partition_from_text(s, "|".join(s.states)),
                                               partition_from_text(t, ",".join(t.states))))
    edges = tuple((x, y) for x in s for y in s if rng.random() < 0.4)
    yield io.Document("transition-system", io.TransitionSystem(s, edges))
    yield io.Document("nlmp", io.NLMP(s, tuple(generator(rng, t) for _ in s)))


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6))
def test_round_trip_all_kinds(seed):
    rng = random.Random(seed)
    for doc in _random_documents(rng):
        text = io.dumps(doc)
        back = io.loads(text)
        assert back == doc
        assert io.dumps(back) == text


def test_names_with_punctuation_survive():
    sp = FinSpace(("a, b", 'q"x', "ü"))
    doc = io.Document("space", sp)
    assert io.loads(io.dumps(doc)) == doc


@pytest.mark.parametrize("text, fragment", [
    ('{"kind": "space", "states": ["a"]}', "format"),
    ('{"format": 2, "kind": "space", "states": ["a"]}', "format"),
    ('{"format": 1, "kind": "widget"}', "widget"),
    ('{"format": 1, "kind": "space"}', "states"),
    ('{"format": 1, "kind": "kernel", "dom": ["a"], "cod": ["a"], "rows": {"a": ["0.5"]}}', "0.5"),
    ('{"format": 1, "kind": "kernel", "dom": ["a"], "cod": ["a"], "rows": {"a": [0.5]}}', "0.5"),
    ('{"format": 1, "kind": "nlmp", "dom": ["a"], "cod": ["a"], "kappa": {}}', "'a'"),
    ('{"format": 1, "kind": "transition-system", "states": ["a"], "edges": [["a"]]}', "pair"),
    ("not json", "JSON"),
])
def test_format_errors(text, fragment):
    with pytest.raises((ValueError, TypeError, KeyError)) as info:
        io.loads(text)
    assert fragment in str(info.value)
