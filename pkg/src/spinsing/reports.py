"""JSON analysis requests and deterministic reports.

A request is one JSON document::

    {
      "vertices": [{"id": 0, "genus": 1, "j_class": "JZero", "tags": []}, ...],
      "edges": [{"id": "e0", "ends": [0, 1]}, ...],
      "supports": "all" | [{"exceptional": ["e0"], "thetas": {...}, "gluing_class": 0}],
      "thetas": {"0": {"label": "theta", "trivial_on_elliptic": true}},
      "automorphisms": [{"name": ..., "liftable": true, "is_eta2": false, ...}],
      "options": {"closure_cap": 1000000, "format": "json", "modes": ["classify"]}
    }

Map keys are ``str(id)``; rationals are strings ``"p/q"``.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .automorphism import (
    AutomorphismDatum,
    ComponentType,
    lifting_count,
    make_datum,
    quasireflection_generators,
    resolve_liftable,
)
from .errors import (
    AnalysisError,
    InvalidGraph,
    MissingFlag,
    RequestSyntaxError,
    SchemaError,
    SpinSingError,
    UnknownId,
    Violation,
)
from .graph import DualGraph, EdgeId, JClass, VertexId, genus, is_tree_like, validate_graph
from .monomial import DEFAULT_CAP, fraction_str
from .oracle import canonical_by_closure, lifted_data, smooth_by_closure, spin_group
from .singularity import classify_stratum
from .spin import (
    SpinSupport,
    ThetaLabel,
    enumerate_supports,
    fiber_degree_audit,
    gluing_count,
    lifting_component_count,
    make_labels,
    make_support,
    sigma_graph,
    smooth_elliptic_tails,
)

MODES = ("enumerate_supports", "classify", "audit_degree", "oracle")
DEFAULT_MODES = frozenset({"classify", "audit_degree"})
FORMATS = ("json", "text")


@dataclass(frozen=True)
class SupportRequest:
    exceptional: tuple[EdgeId, ...]
    thetas: tuple[tuple[VertexId, ThetaLabel], ...] | None = None
    gluing_class: int = 0


@dataclass(frozen=True)
class AutomorphismSpec:
    name: str
    liftable: bool
    is_eta2: bool
    vertex_perm: tuple[tuple[VertexId, VertexId], ...] = ()
    edge_perm: tuple[tuple[EdgeId, EdgeId], ...] = ()
    component_types: tuple[tuple[VertexId, str], ...] = ()
    node_scalars: tuple[tuple[EdgeId, Fraction], ...] = ()
    block_exponents: tuple[tuple[VertexId, tuple[Fraction, ...]], ...] = ()
    swapped_loops: tuple[EdgeId, ...] = ()

    def datum(self, graph: DualGraph) -> AutomorphismDatum:
        return make_datum(
            graph,
            dict(self.vertex_perm),
            dict(self.edge_perm),
            dict(self.component_types),
            dict(self.node_scalars),
            dict(self.block_exponents),
            self.swapped_loops,
            self.name,
        )


@dataclass(frozen=True)
class Options:
    closure_cap: int = DEFAULT_CAP
    format: str = "json"
    modes: frozenset[str] = DEFAULT_MODES


@dataclass(frozen=True)
class AnalysisRequest:
    graph: DualGraph
    supports: tuple[SupportRequest, ...] | None = None
    thetas: tuple[tuple[VertexId, ThetaLabel], ...] = ()
    automorphisms: tuple[AutomorphismSpec, ...] = ()
    options: Options = field(default_factory=Options)


# parsing


def _expect(cond: bool, message: str):
    if not cond:
        raise SchemaError(message)


def _obj(x, where: str) -> dict:
    _expect(isinstance(x, dict), f"{where} must be an object")
    return x


def _list(x, where: str) -> list:
    _expect(isinstance(x, list), f"{where} must be an array")
    return x


def _ident(x, where: str):
    _expect(isinstance(x, (int, str)) and not isinstance(x, bool), f"{where} must be an integer or string id")
    return x


def _rational(x, where: str) -> Fraction:
    _expect(isinstance(x, str), f"{where} must be a rational string 'p/q'")
    try:
        return Fraction(x) % 1
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: cannot read {x!r} as a rational") from None


class _Ids:
    """Resolve ``str(id)`` keys and raw ids against the graph."""

    def __init__(self, graph: DualGraph):
        self.v = {str(i): i for i in graph.vertex_ids}
        self.e = {str(i): i for i in graph.edge_ids}
        _expect(len(self.v) == len(graph.vertices), "vertex ids must stay distinct as strings")
        _expect(len(self.e) == len(graph.edges), "edge ids must stay distinct as strings")

    def vertex(self, key):
        try:
            return self.v[str(key)]
        except KeyError:
            raise UnknownId("vertex", key) from None

    def edge(self, key):
        try:
            return self.e[str(key)]
        except KeyError:
            raise UnknownId("edge", key) from None


def _parse_graph(doc: dict) -> DualGraph:
    raw_v = _list(doc.get("vertices"), "vertices")
    raw_e = _list(doc.get("edges", []), "edges")
    vertices, known = [], set()
    for i, v in enumerate(raw_v):
        v = _obj(v, f"vertices[{i}]")
        vid = _ident(v.get("id"), f"vertices[{i}].id")
        g = v.get("genus")
        _expect(isinstance(g, int) and not isinstance(g, bool), f"vertices[{i}].genus must be an integer")
        j = v.get("j_class")
        tags = _list(v.get("tags", []), f"vertices[{i}].tags")
        _expect(j is None or j in {c.value for c in JClass}, f"vertices[{i}].j_class: unknown class {j!r}")
        for t in tags:
            _expect(t in ("HyperellipticG2", "HyperellipticG3", "BiellipticG2"), f"unknown tag {t!r}")
        vertices.append((vid, g, j, tuple(tags)))
        known.add(str(vid))
    edges = []
    for i, e in enumerate(raw_e):
        e = _obj(e, f"edges[{i}]")
        eid = _ident(e.get("id"), f"edges[{i}].id")
        ends = _list(e.get("ends"), f"edges[{i}].ends")
        _expect(len(ends) == 2, f"edges[{i}].ends must have two entries")
        for end in ends:
            if str(end) not in known:
                raise UnknownId("vertex", end)
        edges.append((eid, ends[0], ends[1]))
    by_str = {str(v[0]): v[0] for v in vertices}
    edges = [(eid, by_str[str(a)], by_str[str(b)]) for eid, a, b in edges]
    return validate_graph(vertices, edges)


def _parse_thetas(raw, ids: _Ids, graph: DualGraph, where: str) -> tuple:
    out = {}
    for key, val in _obj(raw, where).items():
        vid = ids.vertex(key)
        if isinstance(val, bool):
            lab = ThetaLabel("theta", val)
        else:
            val = _obj(val, f"{where}[{key}]")
            label = val.get("label", "theta")
            flag = val.get("trivial_on_elliptic")
            _expect(isinstance(label, str), f"{where}[{key}].label must be a string")
            _expect(flag is None or isinstance(flag, bool), f"{where}[{key}].trivial_on_elliptic must be boolean")
            lab = ThetaLabel(label, flag)
        if lab.trivial_on_elliptic is not None and graph.vertex(vid).genus != 1:
            raise InvalidGraph([Violation("FlagOnNonElliptic", vid)])
        out[vid] = lab
    return tuple(sorted(out.items(), key=lambda kv: graph.vertex_pos(kv[0])))


def _parse_support(raw, i: int, ids: _Ids, graph: DualGraph) -> SupportRequest:
    raw = _obj(raw, f"supports[{i}]")
    ex = {ids.edge(x) for x in _list(raw.get("exceptional"), f"supports[{i}].exceptional")}
    thetas = None
    if "thetas" in raw:
        thetas = _parse_thetas(raw["thetas"], ids, graph, f"supports[{i}].thetas")
    gc = raw.get("gluing_class", 0)
    _expect(isinstance(gc, int) and not isinstance(gc, bool) and gc >= 0, f"supports[{i}].gluing_class must be a non-negative integer")
    return SupportRequest(tuple(e for e in graph.edge_ids if e in ex), thetas, gc)


def _ordered(pairs, pos) -> tuple:
    return tuple(sorted(pairs, key=lambda kv: pos(kv[0])))


def _parse_automorphism(raw, i: int, ids: _Ids, graph: DualGraph) -> AutomorphismSpec:
    where = f"automorphisms[{i}]"
    raw = _obj(raw, where)
    for flag in ("liftable", "is_eta2"):
        if flag not in raw:
            raise MissingFlag(f"{where} needs the boolean flag {flag!r}")
        _expect(isinstance(raw[flag], bool), f"{where}.{flag} must be boolean")
    name = raw.get("name", f"aut{i}")
    _expect(isinstance(name, str), f"{where}.name must be a string")
    vpos, epos = graph.vertex_pos, graph.edge_pos

    vperm = [(ids.vertex(k), ids.vertex(v)) for k, v in _obj(raw.get("vertex_perm", {}), f"{where}.vertex_perm").items()]
    eperm = [(ids.edge(k), ids.edge(v)) for k, v in _obj(raw.get("edge_perm", {}), f"{where}.edge_perm").items()]
    types = []
    for k, v in _obj(raw.get("component_types", {}), f"{where}.component_types").items():
        _expect(isinstance(v, str), f"{where}.component_types values must be strings")
        try:
            types.append((ids.vertex(k), str(ComponentType.parse(v))))
        except ValueError as exc:
            raise SchemaError(f"{where}.component_types[{k}]: {exc}") from None
    scalars = [
        (ids.edge(k), _rational(v, f"{where}.node_scalars[{k}]"))
        for k, v in _obj(raw.get("node_scalars", {}), f"{where}.node_scalars").items()
    ]
    blocks = [
        (ids.vertex(k), tuple(_rational(x, f"{where}.block_exponents[{k}]") for x in _list(v, f"{where}.block_exponents[{k}]")))
        for k, v in _obj(raw.get("block_exponents", {}), f"{where}.block_exponents").items()
    ]
    loops = {ids.edge(x) for x in _list(raw.get("swapped_loops", []), f"{where}.swapped_loops")}
    spec = AutomorphismSpec(
        name,
        raw["liftable"],
        raw["is_eta2"],
        _ordered(vperm, vpos),
        _ordered(eperm, epos),
        _ordered(types, vpos),
        _ordered(scalars, epos),
        _ordered(blocks, vpos),
        tuple(e for e in graph.edge_ids if e in loops),
    )
    spec.datum(graph)  # validate now so errors surface before any analysis
    return spec


def _parse_options(raw) -> Options:
    raw = _obj(raw, "options")
    cap = raw.get("closure_cap", DEFAULT_CAP)
    _expect(isinstance(cap, int) and not isinstance(cap, bool) and cap > 0, "options.closure_cap must be a positive integer")
    fmt = raw.get("format", "json")
    _expect(fmt in FORMATS, f"options.format must be one of {list(FORMATS)}")
    modes = raw.get("modes", sorted(DEFAULT_MODES))
    for m in _list(modes, "options.modes"):
        _expect(m in MODES, f"unknown mode {m!r}")
    return Options(cap, fmt, frozenset(modes))


def _check_flags(req: AnalysisRequest):
    """Classification needs the theta flag on every smooth j=0 elliptic tail."""
    if "classify" not in req.options.modes and "oracle" not in req.options.modes:
        return
    graph = req.graph
    needed = [v for v in smooth_elliptic_tails(graph) if graph.vertex(v).decoration.j_class == JClass.J_ZERO]
    tables = [req.thetas] if req.supports is None else [s.thetas or req.thetas for s in req.supports]
    for table in tables:
        have = {v for v, lab in table if lab.trivial_on_elliptic is not None}
        for v in needed:
            if v not in have:
                raise MissingFlag(f"j=0 elliptic tail {v!r} needs a trivial_on_elliptic theta flag")


def parse_request(data: bytes | str) -> AnalysisRequest:
    """Parse and validate a request document."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RequestSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    doc = _obj(doc, "request")
    known = {"vertices", "edges", "supports", "thetas", "automorphisms", "options"}
    extra = sorted(set(doc) - known)
    _expect(not extra, f"unknown fields {extra}")

    graph = _parse_graph(doc)
    ids = _Ids(graph)
    raw_sup = doc.get("supports", "all")
    if raw_sup == "all":
        supports = None
    else:
        supports = tuple(_parse_support(s, i, ids, graph) for i, s in enumerate(_list(raw_sup, "supports")))
    thetas = _parse_thetas(doc.get("thetas", {}), ids, graph, "thetas")
    auts = tuple(
        _parse_automorphism(a, i, ids, graph) for i, a in enumerate(_list(doc.get("automorphisms", []), "automorphisms"))
    )
    req = AnalysisRequest(graph, supports, thetas, auts, _parse_options(doc.get("options", {})))
    _check_flags(req)
    return req


# serialization


def _theta_doc(table) -> dict:
    out = {}
    for vid, lab in table:
        d = {"label": lab.label}
        if lab.trivial_on_elliptic is not None:
            d["trivial_on_elliptic"] = lab.trivial_on_elliptic
        out[str(vid)] = d
    return out


def request_document(req: AnalysisRequest) -> dict:
    g = req.graph
    doc = {
        "vertices": [
            {
                "id": v.id,
                "genus": v.genus,
                "j_class": v.decoration.j_class.value,
                "tags": sorted(t.value for t in v.decoration.tags),
            }
            for v in g.vertices
        ],
        "edges": [{"id": e.id, "ends": list(e.ends)} for e in g.edges],
    }
    if req.supports is None:
        doc["supports"] = "all"
    else:
        sups = []
        for s in req.supports:
            d = {"exceptional": list(s.exceptional), "gluing_class": s.gluing_class}
            if s.thetas is not None:
                d["thetas"] = _theta_doc(s.thetas)
            sups.append(d)
        doc["supports"] = sups
    doc["thetas"] = _theta_doc(req.thetas)
    doc["automorphisms"] = [
        {
            "name": a.name,
            "liftable": a.liftable,
            "is_eta2": a.is_eta2,
            "vertex_perm": {str(k): v for k, v in a.vertex_perm},
            "edge_perm": {str(k): v for k, v in a.edge_perm},
            "component_types": {str(k): v for k, v in a.component_types},
            "node_scalars": {str(k): fraction_str(v) for k, v in a.node_scalars},
            "block_exponents": {str(k): [fraction_str(x) for x in v] for k, v in a.block_exponents},
            "swapped_loops": list(a.swapped_loops),
        }
        for a in req.automorphisms
    ]
    doc["options"] = {
        "closure_cap": req.options.closure_cap,
        "format": req.options.format,
        "modes": [m for m in MODES if m in req.options.modes],
    }
    return doc


def serialize_request(req: AnalysisRequest) -> bytes:
    """Canonical encoding: fixed field order, ids in graph order."""
    return (json.dumps(request_document(req), indent=2) + "\n").encode("utf-8")


# analysis


@dataclass(frozen=True)
class AnalysisReport:
    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        return render_text(self.data)

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_text()


def _jsonable(x):
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _support_label(s: SpinSupport) -> str:
    return "N={" + ",".join(str(e) for e in s.graph.edge_ids if e in s.exceptional) + "}"


def _labels_for(req: AnalysisRequest, support: SpinSupport, sreq: SupportRequest | None):
    table = dict(req.thetas)
    gc = 0
    if sreq is not None:
        if sreq.thetas is not None:
            table = dict(sreq.thetas)
        gc = sreq.gluing_class
    flags = {v: lab.trivial_on_elliptic for v, lab in table.items() if lab.trivial_on_elliptic is not None}
    names = {v: lab.label for v, lab in table.items()}
    return make_labels(support, flags, names, gc)


def _analyse_support(req, support, sreq, data) -> dict:
    modes = req.options.modes
    g = support.graph
    sigma = sigma_graph(support)
    tree = is_tree_like(sigma)
    labels = _labels_for(req, support, sreq)
    out = {
        "exceptional": [e for e in g.edge_ids if e in support.exceptional],
        "edge_classes": {str(e): support.edge_class[e].value for e in g.edge_ids},
        "sigma": {"vertices": len(sigma.vertices), "edges": len(sigma.edges), "b1": sigma.b1},
        "tree_like": tree,
        "gluing_count": gluing_count(support),
        "gluing_class": labels.gluing_class,
        "components": lifting_component_count(support),
    }
    lifting = {}
    lifts = []
    for spec, datum in data:
        ok = resolve_liftable(support, labels, datum, spec.liftable)
        lifting[spec.name] = lifting_count(support, datum, ok)
        if ok:
            lifts.append((spec, datum))
    out["lifting_counts"] = lifting
    qr = []
    for a in quasireflection_generators(support):
        i = next(i for i, x in enumerate(a.exps) if x)
        qr.append({"edge": a.coords.slots[i].owner, "exponent": a.exps[i]})
    out["quasireflection_generators"] = qr
    if "classify" in modes or "oracle" in modes:
        gens = [(d, spec.is_eta2) for spec, d in lifts]
        cl = classify_stratum(support, labels, gens)
        out["classification"] = {"verdict": cl.verdict.value, "reasons": cl.reasons}
        if "oracle" in modes:
            group = spin_group(support, lifted_data(support, labels, [(d, True) for _, d in lifts]), req.options.closure_cap)
            smooth_o = smooth_by_closure(group, req.options.closure_cap)
            canon = canonical_by_closure(support, group)
            o = {
                "group_order": group.size,
                "smooth": smooth_o,
                "canonical": canon.canonical,
                "agrees": smooth_o == (cl.verdict.value == "Smooth") and canon.canonical == (cl.verdict.value != "NonCanonicalSingular"),
            }
            if canon.witness is not None:
                w = canon.witness
                o["witness"] = {
                    "order": w.order,
                    "eigen_exponents": list(w.eigen_exponents),
                    "min_sum": w.min_sum,
                    "primitive_k": w.witness_k,
                }
            out["oracle"] = o
    return _jsonable(out)


def run_analysis(req: AnalysisRequest) -> AnalysisReport:
    """Deterministic report; module errors are re-raised tagged with the support."""
    g = req.graph
    modes = req.options.modes
    data = [(spec, spec.datum(g)) for spec in req.automorphisms]
    report: dict = {
        "graph": {
            "genus": genus(g),
            "vertices": len(g.vertices),
            "edges": len(g.edges),
            "b1": g.b1,
            "tree_like": is_tree_like(g),
        }
    }
    if "audit_degree" in modes:
        value = fiber_degree_audit(g)
        expected = 2 ** (2 * genus(g))
        report["audit"] = {"value": fraction_str(value), "expected": fraction_str(Fraction(expected)), "pass": value == expected}

    if modes & {"enumerate_supports", "classify", "oracle"}:
        if req.supports is None or "enumerate_supports" in modes:
            todo = [(s, None) for s in enumerate_supports(g)]
        else:
            todo = []
            for sreq in req.supports:
                try:
                    todo.append((make_support(g, sreq.exceptional), sreq))
                except SpinSingError as exc:
                    raise AnalysisError("N={" + ",".join(map(str, sreq.exceptional)) + "}", exc) from exc
        rows = []
        for support, sreq in todo:
            try:
                rows.append(_analyse_support(req, support, sreq, data))
            except SpinSingError as exc:
                raise AnalysisError(_support_label(support), exc) from exc
        report["supports"] = rows
    return AnalysisReport(report)


def with_modes(req: AnalysisRequest, modes=None, cap: int | None = None, fmt: str | None = None) -> AnalysisRequest:
    opts = req.options
    if modes:
        opts = replace(opts, modes=frozenset(modes))
    if cap is not None:
        opts = replace(opts, closure_cap=cap)
    if fmt is not None:
        opts = replace(opts, format=fmt)
    return replace(req, options=opts)


def render_text(data: dict) -> str:
    lines = []
    gr = data["graph"]
    lines.append(
        f"graph: genus {gr['genus']}, {gr['vertices']} vertices, {gr['edges']} edges, "
        f"b1 {gr['b1']}, tree-like {gr['tree_like']}"
    )
    if "audit" in data:
        a = data["audit"]
        lines.append(f"fiber degree: {a['value']} (expected {a['expected']}) {'PASS' if a['pass'] else 'FAIL'}")
    for s in data.get("supports", []):
        lines.append("")
        lines.append("support N={" + ",".join(str(e) for e in s["exceptional"]) + "}")
        classes = " ".join(f"{k}:{v}" for k, v in s["edge_classes"].items())
        lines.append(f"  edge classes: {classes or '-'}")
        sg = s["sigma"]
        lines.append(
            f"  sigma: {sg['vertices']} vertices, {sg['edges']} edges, b1 {sg['b1']}, tree-like {s['tree_like']}"
        )
        lines.append(f"  gluings: {s['gluing_count']}, components: {s['components']}")
        for name, n in s["lifting_counts"].items():
            lines.append(f"  lifts of {name}: {n}")
        qr = ", ".join(f"{q['edge']}:{q['exponent']}" for q in s["quasireflection_generators"])
        lines.append(f"  quasireflections: {qr or '-'}")
        if "classification" in s:
            c = s["classification"]
            reasons = ", ".join(f"{k}={v}" for k, v in sorted(c["reasons"].items()))
            lines.append(f"  verdict: {c['verdict']} ({reasons})")
        if "oracle" in s:
            o = s["oracle"]
            line = f"  oracle: |G|={o['group_order']} smooth={o['smooth']} canonical={o['canonical']} agrees={o['agrees']}"
            if "witness" in o:
                w = o["witness"]
                line += f" witness order {w['order']} sum {w['min_sum']} at k={w['primitive_k']}"
            lines.append(line)
    return "\n".join(lines) + "\n"


__all__ = [
    "AnalysisReport",
    "AnalysisRequest",
    "AutomorphismSpec",
    "Options",
    "SupportRequest",
    "parse_request",
    "request_document",
    "run_analysis",
    "serialize_request",
    "with_modes",
]
