import pytest

from conftest import chain, diagram
from specposet.cardinality import CONTINUUM
from specposet.chains import (catenary_violations, chain_report, coheight, coheights, is_catenary,
                              maximal_chains, saturated_chains, verify_chain_theorems)
from specposet.errors import NotMinimal, ProvenanceMismatch, UnknownNode
from specposet.partition import MinfeasiblePartition
from specposet.precompletion import Mode, spec_A

P = MinfeasiblePartition.from_subcollections


def test_maximal_chains_xyz(xyz):
    chains = maximal_chains(xyz.diagram, "x")
    assert chains == [("x", "Bx", "M"), ("x", "xy", "M"), ("x", "xz", "M")]


def test_maximal_chains_simple_and_errors(xyz):
    assert maximal_chains(chain("a", "b", "c"), "a") == [("a", "b", "c")]
    with pytest.raises(NotMinimal):
        maximal_chains(xyz.diagram, "xy")
    with pytest.raises(UnknownNode):
        maximal_chains(xyz.diagram, "w")


def test_xyzw_chain_lengths(xyzw):
    assert {len(c) - 1 for c in maximal_chains(xyzw.diagram, "yw")} == {2}


def test_coheight(xyz, xyzw):
    assert coheight(xyz.diagram, "x") == 2
    assert coheight(xyz.diagram, "M") == 0
    assert coheight(xyzw.diagram, "yzw") == 1
    with pytest.raises(UnknownNode):
        coheight(xyz.diagram, "w")


def test_coheight_antitone(xyzw):
    d = xyzw.diagram
    c = coheights(d)
    for a in d.ids:
        for b in d.up(a):
            assert c[a] >= c[b]


def test_chain_report(xyz):
    rep = chain_report(xyz.diagram)
    assert rep.coheight == {"x": 2, "y": 2, "z": 2}
    assert rep.maximal_chain_lengths["z"] == {2}
    assert "x < Bx < M" in rep.summary()


def test_catenary():
    d = diagram({"q": 1, "a": 1, "b": 1, "M": 1}, [("q", "a"), ("a", "b"), ("b", "M"), ("q", "b")])
    assert d.covers == {("q", "a"), ("a", "b"), ("b", "M")}  # q<b implied, so still a chain
    skew = diagram({"q": 1, "a": 1, "b": 1, "c": 1, "M": 1},
                   [("q", "a"), ("a", "b"), ("b", "M"), ("q", "c"), ("c", "M")])
    assert not is_catenary(skew)
    assert ("q", "M", 2, 3) in catenary_violations(skew)


def test_saturated_chains_between():
    d = chain("a", "b", "c", "d")
    assert saturated_chains(d, "b", "d") == [("b", "c", "d")]
    assert saturated_chains(d, "c", "a") == []


@pytest.mark.parametrize("fixture", ["xyz", "split", "xyzw"])
@pytest.mark.parametrize("mode", list(Mode))
def test_theorems_on_examples(request, fixture, mode):
    doc = request.getfixturevalue(fixture)
    spec = spec_A(doc.diagram, doc.partition, mode, force=True)
    rep = verify_chain_theorems(doc.diagram, doc.partition, spec)
    assert rep.in_model and rep.passed, rep.summary()
    assert len(rep.checks) == 5


def test_standard_example_coheights(xyz):
    spec = spec_A(xyz.diagram, xyz.partition, force=True)
    assert coheight(spec.base, "q1") == coheight(spec.base, "q2") == 2
    assert {len(c) - 1 for q in ("q1", "q2") for c in maximal_chains(spec.base, q)} == {2}


def test_two_chain(boxed_chain):
    d = chain("q", "M")
    spec = spec_A(d, P([["q"]]), force=True)
    assert verify_chain_theorems(d, P([["q"]]), spec).passed


def test_non_catenary_is_skipped():
    d = diagram({"q": 1, "a": 1, "b": CONTINUUM, "c": CONTINUUM, "M": 1},
                [("q", "a"), ("a", "b"), ("b", "M"), ("q", "c"), ("c", "M")])
    spec = spec_A(d, P([["q"]]), force=True)
    rep = verify_chain_theorems(d, P([["q"]]), spec)
    assert not rep.in_model and "not catenary" in rep.skipped_reason
    assert "out of model" in rep.summary()


def test_missing_witness_box_is_skipped_and_would_fail():
    d = chain("q", "a", "M")
    p = P([["a"]])
    spec = spec_A(d, p, force=True)
    rep = verify_chain_theorems(d, p, spec)
    assert not rep.in_model and "witness" in rep.skipped_reason
    forced = verify_chain_theorems(d, p, spec, require_witness=False)
    assert not forced.passed  # q1 < M has length 1 while coht(q) = 2


def test_witness_box_restores_theorem(boxed_chain):
    p = P([["a"]])
    spec = spec_A(boxed_chain, p, force=True)
    rep = verify_chain_theorems(boxed_chain, p, spec)
    assert rep.in_model and rep.passed, rep.summary()


def test_provenance_mismatch(xyz, xyzw):
    spec = spec_A(xyzw.diagram, xyzw.partition, force=True)
    with pytest.raises(ProvenanceMismatch):
        verify_chain_theorems(xyz.diagram, xyz.partition, spec)
