import pytest

from specposet.cardinality import (ALEPH0, CONTINUUM, ONE, Cardinality, cardinal_max,
                                   cardinal_sum, total)


def F(n):
    return Cardinality.finite(n)


def test_total_order():
    assert F(1) < F(7) < ALEPH0 < CONTINUUM
    assert sorted([CONTINUUM, F(3), ALEPH0, F(2)]) == [F(2), F(3), ALEPH0, CONTINUUM]


@pytest.mark.parametrize("a, b, out", [
    (F(1), ALEPH0, ALEPH0),
    (ALEPH0, CONTINUUM, CONTINUUM),
    (F(2), F(3), F(5)),
    (CONTINUUM, F(4), CONTINUUM),
])
def test_sum(a, b, out):
    assert cardinal_sum(a, b) == out == cardinal_sum(b, a)
    assert a + b == out


def test_max_and_total():
    assert cardinal_max(F(2), ALEPH0) == ALEPH0
    assert cardinal_max(F(9), F(2)) == F(9)
    assert total([ONE, ONE, F(3)]) == F(5)
    assert total([CONTINUUM, ONE, ONE]) == CONTINUUM


@pytest.mark.parametrize("card, text, js", [
    (F(3), "3", 3), (ALEPH0, "ℵ0", "aleph0"), (CONTINUUM, "𝔠", "continuum"),
])
def test_text_forms(card, text, js):
    assert str(card) == text
    assert card.to_json() == js
    assert Cardinality.from_json(js) == card


@pytest.mark.parametrize("bad", ["aleph1", 1.5, True, None, -2])
def test_from_json_rejects(bad):
    with pytest.raises(ValueError):
        Cardinality.from_json(bad)


def test_capped():
    assert CONTINUUM.capped(ALEPH0) == ALEPH0
    assert F(2).capped(ALEPH0) == F(2)
