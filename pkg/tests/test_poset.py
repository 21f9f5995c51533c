import numpy as np
import pytest

from conftest import chain, diagram
from specposet.cardinality import ALEPH0, CONTINUUM, ONE, Cardinality
from specposet.errors import CycleDetected, InvariantViolation, UnknownNode
from specposet.oracle import order_isomorphic
from specposet.poset import (PrimeNode, SpecDiagram, closure, coalesce, coalesce_map, concretize,
                             gap_witness_violations, maximal_elements, minimal_elements,
                             minimal_nodes, minimal_upper_bounds, transitive_reduction)


def test_closure_xyz(xyz):
    rel = closure(xyz.diagram)
    assert ("x", "M") in rel
    assert ("x", "y") not in rel and ("y", "x") not in rel
    assert all((n, n) in rel for n in xyz.diagram.ids)


def test_closure_single_node():
    d = SpecDiagram.build([PrimeNode("M")], [], "M")
    assert closure(d) == {("M", "M")}


def test_closure_cycle():
    d = SpecDiagram((PrimeNode("a"), PrimeNode("b")), frozenset({("a", "b"), ("b", "a")}), "b")
    with pytest.raises(CycleDetected):
        closure(d)


@pytest.mark.parametrize("edges, out", [
    ({("a", "b"), ("b", "c"), ("a", "c")}, {("a", "b"), ("b", "c")}),
    ({("a", "b")}, {("a", "b")}),
])
def test_transitive_reduction(edges, out):
    assert transitive_reduction(edges) == out


def test_transitive_reduction_keeps_reduced(xyz):
    assert transitive_reduction(xyz.diagram.covers) == xyz.diagram.covers


def test_transitive_reduction_cycle():
    with pytest.raises(CycleDetected):
        transitive_reduction({("a", "b"), ("b", "c"), ("c", "a")})


def test_minimal_nodes(xyz, xyzw):
    assert minimal_nodes(xyz.diagram) == {"x", "y", "z"}
    assert minimal_nodes(xyzw.diagram) == {"xz", "yz", "xw", "yw"}
    assert minimal_nodes(SpecDiagram.build([PrimeNode("M")], [], "M")) == {"M"}


def test_minimal_upper_bounds(xyzw):
    d = xyzw.diagram
    assert minimal_upper_bounds(d, {"yz", "yw"}) == {"yzw"}
    assert minimal_upper_bounds(d, {"xz", "yw"}) == {"M"}
    assert minimal_upper_bounds(d, {"Bxz"}) == {"Bxz"}
    with pytest.raises(UnknownNode):
        minimal_upper_bounds(d, {"nope"})


def test_minimal_and_maximal_elements(xyz):
    d = xyz.diagram
    assert minimal_elements(d, {"x", "xy", "M"}) == {"x"}
    assert maximal_elements(d, {"x", "xy", "z"}) == {"xy", "z"}


def test_problems_reported():
    d = SpecDiagram((PrimeNode("a"), PrimeNode("b"), PrimeNode("M")),
                    frozenset({("a", "M")}), "M")
    rules = [p.rule for p in d.problems()]
    assert any("unique maximum" in r for r in rules)

    boxed_min = SpecDiagram((PrimeNode("a", "a", Cardinality.finite(2)), PrimeNode("M")),
                            frozenset({("a", "M")}), "M")
    assert any("minimal node" in p.rule for p in boxed_min.problems())

    implied = SpecDiagram((PrimeNode("a"), PrimeNode("b"), PrimeNode("M")),
                          frozenset({("a", "b"), ("b", "M"), ("a", "M")}), "M")
    assert [p.where for p in implied.problems()] == ["a->M"]


def test_build_rejects_bad_max():
    with pytest.raises(InvariantViolation):
        diagram({"a": 1, "M": 3}, [("a", "M")])


def test_leq_is_read_only(xyz):
    with pytest.raises(ValueError):
        xyz.diagram.leq[0, 0] = False


def test_coalesce_left_box_of_standard_example():
    d = diagram({"q": 1, "b1": CONTINUUM, "b2": CONTINUUM, "s": 1, "M": 1},
                [("q", "b1"), ("q", "b2"), ("q", "s"), ("b1", "M"), ("b2", "M"), ("s", "M")])
    c = coalesce(d)
    assert len(c) == 3
    (box,) = [n for n in c.nodes if n.is_box]
    assert box.card == CONTINUUM


def test_coalesce_finite_sum_and_idempotent():
    d = diagram({"q": 1, "a": 2, "b": 3, "M": 1},
                [("q", "a"), ("q", "b"), ("a", "M"), ("b", "M")])
    c, mapping = coalesce_map(d)
    assert mapping["a"] == mapping["b"] == "a|b"
    assert c.card("a|b") == Cardinality.finite(5)
    assert coalesce(c) == c


def test_coalesce_unchanged_without_equivalents(xyzw):
    d = chain("q", "a", "M")
    assert coalesce(d) == d


def test_concretize(xyz):
    d = concretize(xyz.diagram, 2)
    assert {"Bx#0", "Bx#1"} <= set(d.ids)
    assert d.up("Bx#0") == {"Bx#0", "M"} and d.down("Bx#1") == {"Bx#1", "x"}
    assert not d.le("Bx#0", "Bx#1")
    assert concretize(chain("q", "M"), 3) == chain("q", "M")
    three = diagram({"q": 1, "b": 3, "M": 1}, [("q", "b"), ("b", "M")])
    assert len(concretize(three, 5)) == 5


def test_concretize_then_coalesce_is_isomorphic(xyz):
    forget = lambda d: d.with_cards({i: ONE for i in d.ids})  # noqa: E731
    for k in (1, 2, 3):
        assert order_isomorphic(forget(coalesce(concretize(xyz.diagram, k))),
                                forget(coalesce(xyz.diagram)))


def test_gap_witness(boxed_chain):
    assert gap_witness_violations(boxed_chain) == []
    assert gap_witness_violations(chain("q", "a", "M")) == [("q", "M")]


def test_fixture_diagrams_have_witness_boxes(xyz, split, xyzw):
    for doc in (xyz, split, xyzw):
        assert gap_witness_violations(doc.diagram) == []
