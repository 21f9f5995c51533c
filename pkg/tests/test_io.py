import json

import pytest

from specposet.errors import CycleDetected, DocumentSyntaxError, InvariantViolation
from specposet.io import (document_from_dict, fixture_names, fixture_text, load_fixture, parse,
                          render_dot, serialize, spec_a_document)
from specposet.precompletion import spec_A


def minimal_doc(**extra):
    doc = {"nodes": [{"id": "q", "card": 1}, {"id": "M", "card": 1}], "covers": [["q", "M"]], "max": "M"}
    doc.update(extra)
    return doc


def test_xyz_fixture(xyz):
    d = xyz.diagram
    assert len(d) == 10 and len(d.covers) == 15
    assert d.node("xy").label == "(x,y)"
    assert sum(n.is_box for n in d.nodes) == 3
    assert xyz.partition.subcollections == (("x", "y"), ("z",))


@pytest.mark.parametrize("name", fixture_names())
def test_fixtures_round_trip(name):
    text = fixture_text(name)
    once = serialize(parse(text))
    assert once == text
    assert serialize(parse(once)) == once


def test_table_documents_round_trip(conditions_table):
    for row in conditions_table:
        text = serialize(document_from_dict(row["document"]))
        assert serialize(parse(text)) == text


def test_cycle_reported_at_closing_edge():
    doc = minimal_doc(nodes=[{"id": "a"}, {"id": "b"}, {"id": "M"}],
                      covers=[["a", "b"], ["b", "a"], ["b", "M"]])
    with pytest.raises(CycleDetected, match=r"covers\[1\] \(b -> a\)"):
        document_from_dict(doc)


def test_syntax_error_position():
    with pytest.raises(DocumentSyntaxError) as err:
        parse('{\n  "nodes": [,]\n}')
    assert (err.value.line, err.value.col) == (2, 13)


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d["nodes"].append({"id": "q"}), "nodes[2] (q)"),
    (lambda d: d["nodes"][0].update(card="aleph1"), "nodes[0] (q)"),
    (lambda d: d["nodes"][0].update(card=0), "nodes[0] (q)"),
    (lambda d: d["nodes"][0].update(colour="red"), "nodes[0]"),
    (lambda d: d["covers"].append(["q", "w"]), "covers[1]"),
    (lambda d: d.update(max="w"), "max"),
    (lambda d: d["nodes"][0].update(card=2), "q"),
    (lambda d: d.update(characteristic={"kind": "prime", "p": 6}), "characteristic"),
    (lambda d: d.update(partition={"C": ["w"], "subcollections": [["w"]]}), "partition"),
    (lambda d: d["nodes"][0].update(flags={"contains_p": True, "ann_p_in": False,
                                           "associated": False}), "q"),
])
def test_positioned_invariant_errors(mutate, where):
    doc = minimal_doc()
    mutate(doc)
    with pytest.raises(InvariantViolation) as err:
        document_from_dict(doc)
    assert err.value.where == where


def test_serialize_is_canonical():
    doc = minimal_doc(nodes=[{"id": "M", "card": 1}, {"id": "q", "card": 1, "label": "(q)"}])
    text = serialize(document_from_dict(doc))
    assert [n["id"] for n in json.loads(text)["nodes"]] == ["M", "q"]
    assert text.endswith("}\n")


def test_spec_a_document(xyz):
    spec = spec_A(xyz.diagram, xyz.partition, "countable", xyz.characteristic)
    doc = spec_a_document(spec)
    data = json.loads(serialize(doc))
    box = next(n for n in data["nodes"] if n["id"] == "Bz")
    assert box["card"] == "aleph0" and box["bound"] == "upper"
    assert data["metadata"]["verdict"] == "Constructive"
    assert serialize(parse(serialize(doc))) == serialize(doc)


def test_render_dot_xyz(xyz):
    text = render_dot(xyz.diagram)
    assert text.count("[shape=") == 10
    assert text.count("->") == 15
    assert text.count('label="𝔠"') == 3
    assert "rankdir=BT" in text and "rank=max" in text
    assert render_dot(xyz.diagram) == text


def test_render_dot_countable_boxes(xyz):
    spec = spec_A(xyz.diagram, xyz.partition, "countable", xyz.characteristic)
    text = render_dot(spec)
    assert text.count('label="ℵ0"') == 2
    assert "style=dashed" in text


def test_render_dot_two_chain():
    text = render_dot(parse(json.dumps(minimal_doc())).diagram)
    assert text.count("[shape=") == 2 and text.count("->") == 1


def test_load_fixture_suffix():
    assert load_fixture("xyz.spec").diagram == load_fixture("xyz").diagram
