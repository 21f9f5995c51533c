import pytest

from conftest import chain
from specposet.cardinality import Cardinality
from specposet.errors import NotAPartition
from specposet.io import load, load_fixture
from specposet.oracle import (GenParams, OracleSummary, _posets, brute_quotient, check_all,
                              drop_one_pair, enumerate_diagrams, enumerate_minfeasible,
                              order_isomorphic, persist, random_diagram, random_minfeasible,
                              run_trials, trial_seed)
from specposet.partition import fiber_classes, validate_minfeasible
from specposet.poset import PrimeNode, SpecDiagram, gap_witness_violations
from specposet.precompletion import quotient_order


def test_genparams_validation():
    with pytest.raises(ValueError):
        GenParams(1, max_nodes=1)
    with pytest.raises(ValueError):
        GenParams(1, edge_density=1.5)


def test_two_node_diagram():
    d = random_diagram(GenParams(11, max_nodes=2))
    assert len(d) == 2 and len(d.covers) == 1


def test_random_diagram_deterministic():
    gp = GenParams(123456789)
    assert random_diagram(gp) == random_diagram(gp)
    assert trial_seed(5, 3) == trial_seed(5, 3) != trial_seed(5, 4)


@pytest.mark.parametrize("seed", range(40))
def test_random_diagrams_valid(seed):
    gp = GenParams(trial_seed(99, seed), max_nodes=10)
    d = random_diagram(gp)
    assert 2 <= len(d) <= 10
    assert d.problems() == []
    assert gap_witness_violations(d) == [] or not _catenary(d)


def _catenary(d):
    from specposet.chains import is_catenary
    return is_catenary(d)


def test_random_minfeasible_xyz(xyz):
    # subcollection order only fixes the indices i
    def key(p):
        return frozenset(frozenset(c) for c in p.subcollections)
    valid = {key(p) for p in enumerate_minfeasible(xyz.diagram)}
    for s in range(10):
        p = random_minfeasible(xyz.diagram, GenParams(s))
        assert validate_minfeasible(xyz.diagram, p).ok and key(p) in valid


def test_random_minfeasible_two_chain():
    p = random_minfeasible(chain("q", "M"), GenParams(0))
    assert p.C == ("q",) and p.subcollections == (("q",),)


def test_random_minfeasible_none_only_without_candidates():
    d = SpecDiagram.build([PrimeNode("M")], [], "M")
    assert random_minfeasible(d, GenParams(0)) is None


def test_enumerate_minfeasible_counts(xyz):
    parts = list(enumerate_minfeasible(xyz.diagram))
    assert all(validate_minfeasible(xyz.diagram, p).ok for p in parts)
    assert xyz.partition in parts
    assert len(set(parts)) == len(parts)


def test_poset_counts():
    # unlabeled posets on 0..5 points
    assert [len(_posets(k)) for k in range(6)] == [1, 1, 2, 5, 16, 63]


def test_enumerated_diagrams_valid():
    ds = list(enumerate_diagrams(4))
    assert all(d.problems() == [] for d in ds)
    assert all(d.max_id == "M" for d in ds)


def test_brute_quotient_identity(xyz):
    d = xyz.diagram
    b = brute_quotient(d, [{x} for x in d.ids])
    assert b.pairs == {(d.idx(a), d.idx(c)) for a, c in
                       ((a, c) for a in d.ids for c in d.ids if d.le(a, c))}


@pytest.mark.parametrize("name", ["xyz", "split", "xyzw"])
def test_brute_quotient_matches(name):
    doc = load_fixture(name)
    classes = fiber_classes(doc.diagram, doc.partition)
    assert brute_quotient(doc.diagram, classes).pairs == quotient_order(doc.diagram, classes).pairs()


def test_brute_quotient_split_shared_node(split):
    classes = fiber_classes(split.diagram, split.partition)
    b = brute_quotient(split.diagram, classes)
    k = classes.index(frozenset({"p12"}))
    assert (0, k) in b.pairs and (1, k) not in b.pairs


def test_brute_quotient_pathological(xyz):
    d = xyz.diagram
    rest = [{i} for i in d.ids if i not in {"x", "M", "xy"}]
    classes = [{"x", "M"}, {"xy"}, *rest]
    b, q = brute_quotient(d, classes), quotient_order(d, classes)
    assert b.pairs == q.pairs() and b.is_antisymmetric is q.is_antisymmetric is False


def test_brute_quotient_rejects(xyz):
    with pytest.raises(NotAPartition):
        brute_quotient(xyz.diagram, [{"x"}])


@pytest.mark.parametrize("name", ["xyz", "split", "xyzw"])
def test_check_all_examples(name):
    doc = load_fixture(name)
    rep = check_all(doc.diagram, doc.partition)
    assert rep.ok, rep.failures
    assert rep.checks > 20 and rep.chain_skips == []


def test_fault_injection_caught(xyz):
    rep = check_all(xyz.diagram, xyz.partition, quotient=drop_one_pair)
    assert not rep.ok
    name, witness = rep.counterexample
    assert name == "quotient_order = brute_quotient" and len(witness) == 1


def test_order_isomorphic_respects_cards(xyz):
    d = xyz.diagram
    assert order_isomorphic(d, d)
    assert not order_isomorphic(d, d.with_cards({"Bx": Cardinality.finite(2)}))


def test_trials_independent_of_workers():
    a = run_trials(17, 6, max_nodes=7)
    b = run_trials(17, 6, max_nodes=7, workers=2)
    assert a.to_json() == b.to_json()
    assert a.ok and a.instances + a.no_partition == 6


def test_persist_counterexample(tmp_path, xyz):
    s = OracleSummary(counterexamples=[{"tag": {"trial": 0}, "diagram": xyz.diagram,
                                        "partition": xyz.partition, "failure": ("demo", None)}])
    (path,) = persist(s, str(tmp_path))
    assert load(path).diagram == xyz.diagram
    assert (tmp_path / "counterexample_000.dot").exists()
