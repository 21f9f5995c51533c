import json

import pytest

from specposet.io import fixture_text, load_fixture
from specposet.poset import PrimeNode, SpecDiagram
from specposet.cardinality import CONTINUUM


@pytest.fixture
def xyz():
    return load_fixture("xyz")


@pytest.fixture
def split():
    return load_fixture("split")


@pytest.fixture
def xyzw():
    return load_fixture("xyzw")


@pytest.fixture
def conditions_table():
    return json.loads(fixture_text("conditions_table.json"))["rows"]


def chain(*ids):
    """A chain diagram ids[0] < ids[1] < ... with the last id as maximum."""
    return SpecDiagram.build([PrimeNode(i) for i in ids], list(zip(ids, ids[1:])), ids[-1])


def diagram(nodes, covers, top="M"):
    """nodes: id -> card (int or Cardinality); covers: pairs."""
    from specposet.cardinality import Cardinality
    built = []
    for i, c in nodes.items():
        card = c if isinstance(c, Cardinality) else Cardinality.from_json(c)
        built.append(PrimeNode(i, i, card))
    return SpecDiagram.build(built, covers, top)


@pytest.fixture
def boxed_chain():
    """q < a < M with a witness box over q, so the q < M gap is realisable."""
    return diagram({"q": 1, "a": 1, "B": CONTINUUM, "M": 1},
                   [("q", "a"), ("a", "M"), ("q", "B"), ("B", "M")])
