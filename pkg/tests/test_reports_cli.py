from __future__ import annotations

import json
import random
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinsing.cli import main
from spinsing.corpus import random_stable_graph
from spinsing.errors import AnalysisError, GenusTooSmall, MissingFlag, RequestSyntaxError, SchemaError, UnknownId
from spinsing.reports import (
    MODES,
    AnalysisRequest,
    Options,
    parse_request,
    request_document,
    run_analysis,
    serialize_request,
)
from spinsing.spin import ThetaLabel

DOCS = Path(__file__).resolve().parents[1] / "docs" / "examples"

TAIL = {
    "vertices": [{"id": 0, "genus": 1, "j_class": "JZero"}, {"id": 1, "genus": 3}],
    "edges": [{"id": 0, "ends": [0, 1]}],
    "thetas": {"0": {"trivial_on_elliptic": True}},
}


def doc(**kw) -> bytes:
    d = dict(TAIL)
    d.update(kw)
    return json.dumps(d).encode()


def test_minimal_request_has_one_implicit_support():
    req = parse_request(b'{"vertices": [{"id": 0, "genus": 4}]}')
    assert req.supports is None
    rep = run_analysis(req)
    assert len(rep.data["supports"]) == 1
    assert rep.data["supports"][0]["classification"]["verdict"] == "Smooth"


def test_tail_request_round_trips():
    req = parse_request(doc())
    assert dict(req.thetas)[0] == ThetaLabel("theta", True)
    assert parse_request(serialize_request(req)) == req
    again = serialize_request(parse_request(serialize_request(req)))
    assert again == serialize_request(req)


def test_edge_to_missing_vertex():
    with pytest.raises(UnknownId):
        parse_request(b'{"vertices": [{"id": 0, "genus": 4}], "edges": [{"id": 0, "ends": [0, 3]}]}')


def test_syntax_error_is_positioned():
    with pytest.raises(RequestSyntaxError) as exc:
        parse_request(b'{"vertices": [\n  {"id": 0 "genus": 4}]}')
    assert (exc.value.line, exc.value.col) == (2, 12)


def test_schema_errors():
    with pytest.raises(SchemaError):
        parse_request(b"[]")
    with pytest.raises(SchemaError):
        parse_request(doc(options={"format": "yaml"}))
    with pytest.raises(SchemaError):
        parse_request(doc(automorphisms=[{"liftable": True, "is_eta2": False, "node_scalars": {"0": 0.5}}]))
    with pytest.raises(SchemaError):
        parse_request(doc(colour="red"))


def test_missing_flags():
    with pytest.raises(MissingFlag):
        parse_request(doc(thetas={}))
    # audit-only runs do not need the flag
    parse_request(doc(thetas={}, options={"modes": ["audit_degree"]}))
    with pytest.raises(MissingFlag):
        parse_request(doc(automorphisms=[{"component_types": {"0": "Elliptic(3)"}, "liftable": True}]))


def test_unknown_ids_in_automorphisms_and_supports():
    with pytest.raises(UnknownId):
        parse_request(doc(automorphisms=[{"component_types": {"7": "Elliptic(3)"}, "liftable": True, "is_eta2": False}]))
    with pytest.raises(UnknownId):
        parse_request(doc(supports=[{"exceptional": [4]}]))


def test_tail_report_is_non_canonical():
    rep = run_analysis(parse_request(doc()))
    (s,) = rep.data["supports"]
    assert s["classification"]["verdict"] == "NonCanonicalSingular"
    assert s["classification"]["reasons"]["tail_witness"] == 0
    assert s["quasireflection_generators"] == [{"edge": 0, "exponent": "1/4"}]
    assert rep.data["audit"] == {"value": "256/1", "expected": "256/1", "pass": True}


def test_parallel_edges_enumeration():
    req = parse_request((DOCS / "parallel_edges.json").read_bytes())
    rows = run_analysis(req).data["supports"]
    verdicts = {tuple(r["exceptional"]): r["classification"]["verdict"] for r in rows}
    assert verdicts == {("a", "b"): "CanonicalSingular", (): "Smooth"}


def test_audit_only_run():
    req = parse_request(b'{"vertices": [{"id": 0, "genus": 1}], "edges": [{"id": 0, "ends": [0, 0]}], "options": {"modes": ["audit_degree"]}}')
    data = run_analysis(req).data
    assert data["audit"] == {"value": "16/1", "expected": "16/1", "pass": True}
    assert "supports" not in data


def test_errors_are_tagged_with_the_support():
    req = parse_request(b'{"vertices": [{"id": 0, "genus": 3}]}')
    with pytest.raises(AnalysisError) as exc:
        run_analysis(req)
    assert exc.value.support == "N={}"
    assert isinstance(exc.value.cause, GenusTooSmall)


def test_per_support_thetas_override_global_ones():
    d = doc(supports=[{"exceptional": [0], "thetas": {"0": False}}])
    rows = run_analysis(parse_request(d)).data["supports"]
    assert rows[0]["classification"]["verdict"] == "Smooth"


def test_oracle_mode_agrees():
    rep = run_analysis(parse_request(doc(options={"modes": ["classify", "oracle"]})))
    o = rep.data["supports"][0]["oracle"]
    assert o["agrees"] and not o["canonical"]
    assert o["witness"]["min_sum"] == "2/3"


def test_reports_are_byte_stable():
    raw = (DOCS / "dumbbell.json").read_bytes()
    a = run_analysis(parse_request(raw))
    b = run_analysis(parse_request(raw))
    assert a.to_json() == b.to_json()
    assert a.to_text() == b.to_text()


def _random_request(seed: int) -> AnalysisRequest:
    rng = random.Random(seed)
    g = random_stable_graph(rng, max_edges=6, max_vertices=4)
    thetas = tuple(
        (v.id, ThetaLabel(rng.choice(["theta", "t1"]), rng.choice([True, False, None])))
        for v in g.vertices
        if v.genus == 1 and rng.random() < 0.7
    )
    modes = frozenset(m for m in MODES if rng.random() < 0.5)
    return AnalysisRequest(g, None, thetas, (), Options(rng.randint(1, 10**6), rng.choice(["json", "text"]), modes))


@given(st.integers(0, 2**32 - 1))
def test_parse_serialize_identity(seed):
    req = _random_request(seed)
    try:
        back = parse_request(serialize_request(req))
    except MissingFlag:
        return
    assert back == req
    canon = serialize_request(back)
    assert serialize_request(parse_request(canon)) == canon
    assert json.loads(canon) == request_document(req)


@pytest.mark.parametrize("name", ["elliptic_tail.json", "parallel_edges.json", "dumbbell.json"])
def test_documented_examples_run(name, capsys):
    assert main(["analyze", str(DOCS / name)]) == 0
    out = capsys.readouterr().out
    assert "fiber degree" in out or '"audit"' in out


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [{"id": 0, "genus": 4}], "edges": [{"id": 1, "ends": [0, 5]}]}')
    assert main(["analyze", str(bad)]) == 2
    assert main(["analyze", str(tmp_path / "missing.json")]) == 2
    assert main(["analyze", str(DOCS / "dumbbell.json"), "--oracle", "--closure-cap", "3"]) == 3
    assert main(["analyze", str(DOCS / "elliptic_tail.json"), "--audit-degree", "--format", "json"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out[out.index("{"):])["audit"]["pass"]


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "spinsing.cli", "analyze", str(DOCS / "elliptic_tail.json"), "--format", "text"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "NonCanonicalSingular" in proc.stdout
