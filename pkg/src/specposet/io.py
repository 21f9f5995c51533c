"""JSON instance documents and Graphviz rendering.

Document layout::

    {
      "nodes": [{"id": "x", "label": "(x)", "card": 1,
                 "flags": {"contains_p": false, "ann_p_in": false, "associated": true}}, ...],
      "covers": [["x", "xy"], ...],
      "max": "M",
      "partition": {"C": ["x", "y", "z"], "subcollections": [["x", "y"], ["z"]]},
      "characteristic": {"kind": "zero_mz_p", "p": 2},
      "metadata": {...}
    }

``card`` is a positive integer, ``"aleph0"`` or ``"continuum"``.  Computed
Spec(A) documents may also carry ``"bound": "upper"`` and ``"provenance"`` on
nodes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from .cardinality import Cardinality
from .errors import CycleDetected, DocumentSyntaxError, InvariantViolation
from .partition import MinfeasiblePartition
from .poset import PrimeNode, RingFlags, SpecDiagram, minimal_nodes
from .precompletion import PrecompletionDiagram
from .ring_conditions import Characteristic

_NODE_KEYS = {"id", "label", "card", "flags", "bound", "provenance"}
_TOP_KEYS = {"nodes", "covers", "max", "partition", "characteristic", "metadata"}
_FLAG_KEYS = {"contains_p", "ann_p_in", "associated"}


@dataclass
class InstanceDocument:
    diagram: SpecDiagram
    partition: MinfeasiblePartition | None = None
    characteristic: Characteristic | None = None
    metadata: dict = field(default_factory=dict)
    annotations: dict = field(default_factory=dict)


def _fail(where, rule):
    raise InvariantViolation(where, rule)


def _parse_node(k: int, raw) -> tuple[PrimeNode, dict]:
    where = f"nodes[{k}]"
    if not isinstance(raw, dict):
        _fail(where, "node must be an object")
    extra = set(raw) - _NODE_KEYS
    if extra:
        _fail(where, f"unknown keys {sorted(extra)}")
    node_id = raw.get("id")
    if not isinstance(node_id, str) or not node_id:
        _fail(where, "node id must be a nonempty string")
    where = f"nodes[{k}] ({node_id})"
    label = raw.get("label", node_id)
    if not isinstance(label, str):
        _fail(where, "label must be a string")
    try:
        card = Cardinality.from_json(raw.get("card", 1))
    except ValueError as exc:
        _fail(where, str(exc))
    if card.is_finite and card.n < 1:
        _fail(where, "cardinality must be at least 1")
    flags = None
    if "flags" in raw:
        fl = raw["flags"]
        if not isinstance(fl, dict) or set(fl) - _FLAG_KEYS or \
                not all(isinstance(v, bool) for v in fl.values()):
            _fail(where, f"flags must map {sorted(_FLAG_KEYS)} to booleans")
        flags = RingFlags(**fl)
    notes = {}
    if "bound" in raw:
        if raw["bound"] != "upper":
            _fail(where, 'bound must be "upper"')
        notes["bound"] = "upper"
    if "provenance" in raw:
        prov = raw["provenance"]
        if not isinstance(prov, list) or not all(isinstance(x, str) for x in prov):
            _fail(where, "provenance must be a list of node ids")
        notes["provenance"] = sorted(prov)
    return PrimeNode(node_id, label, card, flags), notes


def _add_cover(reach: dict[str, set[str]], a: str, b: str, k: int) -> None:
    if a == b or a in reach[b]:
        raise CycleDetected((a, b), f"covers[{k}] ({a} -> {b}) closes a directed cycle")
    ups = reach[b] | {b}
    for x, r in reach.items():
        if x == a or a in r:
            r |= ups


def document_from_dict(data: Any) -> InstanceDocument:
    if not isinstance(data, dict):
        _fail("document", "top level must be an object")
    extra = set(data) - _TOP_KEYS
    if extra:
        _fail("document", f"unknown keys {sorted(extra)}")
    for key in ("nodes", "covers", "max"):
        if key not in data:
            _fail("document", f"missing {key!r}")
    if not isinstance(data["nodes"], list):
        _fail("nodes", "must be a list")
    nodes, annotations, seen = [], {}, set()
    for k, raw in enumerate(data["nodes"]):
        node, notes = _parse_node(k, raw)
        if node.id in seen:
            _fail(f"nodes[{k}] ({node.id})", "node id is not unique")
        seen.add(node.id)
        nodes.append(node)
        if notes:
            annotations[node.id] = notes

    if not isinstance(data["covers"], list):
        _fail("covers", "must be a list")
    reach: dict[str, set[str]] = {nd.id: set() for nd in nodes}
    edges = []
    for k, e in enumerate(data["covers"]):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            _fail(f"covers[{k}]", "edge must be a pair of node ids")
        a, b = e
        for x in (a, b):
            if x not in seen:
                _fail(f"covers[{k}]", f"unknown node id {x!r}")
        if (a, b) in edges:
            _fail(f"covers[{k}] ({a} -> {b})", "duplicate edge")
        _add_cover(reach, a, b, k)
        edges.append((a, b))
    max_id = data["max"]
    if max_id not in seen:
        _fail("max", f"unknown node id {max_id!r}")

    d = SpecDiagram(tuple(nodes), frozenset(edges), max_id)
    problems = d.problems()
    if problems:
        raise problems[0]
    for q in sorted(minimal_nodes(d)):
        fl = d.node(q).flags
        if fl is not None and not fl.associated:
            _fail(q, "minimal primes are associated; flags.associated must be true")

    partition = None
    if data.get("partition") is not None:
        raw = data["partition"]
        if not isinstance(raw, dict) or set(raw) != {"C", "subcollections"}:
            _fail("partition", 'must be an object with "C" and "subcollections"')
        C, subs = raw["C"], raw["subcollections"]
        if not (isinstance(C, list) and all(isinstance(x, str) for x in C)):
            _fail("partition.C", "must be a list of node ids")
        if not (isinstance(subs, list) and all(isinstance(s, list) and
                                               all(isinstance(x, str) for x in s) for s in subs)):
            _fail("partition.subcollections", "must be a list of lists of node ids")
        for x in C + [y for s in subs for y in s]:
            if x not in seen:
                _fail("partition", f"unknown node id {x!r}")
        partition = MinfeasiblePartition(tuple(C), tuple(tuple(s) for s in subs))

    characteristic = None
    if data.get("characteristic") is not None:
        raw = data["characteristic"]
        if not isinstance(raw, dict) or "kind" not in raw or set(raw) - {"kind", "p", "k"}:
            _fail("characteristic", 'must be an object {"kind", "p"?, "k"?}')
        try:
            characteristic = Characteristic(raw["kind"], raw.get("p"), raw.get("k"))
        except ValueError as exc:
            _fail("characteristic", str(exc))
    metadata = data.get("metadata") or {}
    if not isinstance(metadata, dict):
        _fail("metadata", "must be an object")
    return InstanceDocument(d, partition, characteristic, metadata, annotations)


def parse(text: str) -> InstanceDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    return document_from_dict(data)


def document_to_dict(doc: InstanceDocument) -> dict:
    d = doc.diagram
    nodes = []
    for nd in d.nodes:
        item = {"id": nd.id, "label": nd.label, "card": nd.card.to_json()}
        if nd.flags is not None:
            item["flags"] = {"contains_p": nd.flags.contains_p, "ann_p_in": nd.flags.ann_p_in,
                             "associated": nd.flags.associated}
        item.update(doc.annotations.get(nd.id, {}))
        nodes.append(item)
    out = {
        "nodes": nodes,
        "covers": [list(e) for e in sorted(d.covers)],
        "max": d.max_id,
    }
    if doc.partition is not None:
        out["partition"] = {"C": list(doc.partition.C),
                            "subcollections": [list(s) for s in doc.partition.subcollections]}
    if doc.characteristic is not None:
        out["characteristic"] = doc.characteristic.to_json()
    if doc.metadata:
        out["metadata"] = doc.metadata
    return out


def serialize(doc: InstanceDocument) -> str:
    return json.dumps(document_to_dict(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def spec_a_document(spec: PrecompletionDiagram, metadata: dict | None = None) -> InstanceDocument:
    annotations = {}
    for a in spec.base.ids:
        notes = {"provenance": sorted(spec.provenance[a])}
        if a in spec.upper_bounds:
            notes["bound"] = "upper"
        annotations[a] = notes
    meta = {
        "mode": spec.mode.value,
        "minimal": list(spec.min_labels),
        "forced": spec.forced,
        "verdict": None if spec.verdict is None else spec.verdict.value,
        "size": spec.size_note(),
    }
    meta.update(metadata or {})
    return InstanceDocument(spec.base, metadata=meta, annotations=annotations)


def load(path) -> InstanceDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def fixture_names() -> list[str]:
    return sorted(p.name for p in resources.files("specposet.data").iterdir()
                  if p.name.endswith(".spec"))


def fixture_text(name: str) -> str:
    return resources.files("specposet.data").joinpath(name).read_text(encoding="utf-8")


def load_fixture(name: str) -> InstanceDocument:
    if not name.endswith(".spec"):
        name += ".spec"
    return parse(fixture_text(name))


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(diagram: SpecDiagram | PrecompletionDiagram, name: str = "spec") -> str:
    """Graphviz DOT for a Hasse diagram, minimal nodes at the bottom."""
    upper: frozenset[str] = frozenset()
    if isinstance(diagram, PrecompletionDiagram):
        upper = diagram.upper_bounds
        diagram = diagram.base
    d = diagram
    mins = minimal_nodes(d)
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;", '  node [fontname="Helvetica"];']
    for nd in d.nodes:
        if nd.is_box:
            style = ', style=dashed' if nd.id in upper else ''
            lines.append(f"  {_dot_id(nd.id)} [shape=box, label={_dot_id(str(nd.card))}, "
                         f"tooltip={_dot_id(nd.label)}{style}];")
        else:
            lines.append(f"  {_dot_id(nd.id)} [shape=point, width=0.08, "
                         f"xlabel={_dot_id(nd.label)}];")
    lines.append("  { rank=min; " + " ".join(_dot_id(q) for q in sorted(mins)) + " }")
    if d.max_id not in mins:
        lines.append("  { rank=max; " + _dot_id(d.max_id) + " }")
    for a, b in sorted(d.covers):
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
