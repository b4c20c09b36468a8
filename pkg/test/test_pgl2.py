import numpy as np
import pytest

from loopforge.errors import UnsupportedField
from loopforge.pgl2 import FiniteField, make_pgl2, mobius


@pytest.mark.parametrize("q, order, borel", [(5, 120, 20), (9, 720, 72)])
def test_orders(q, order, borel):
    model = make_pgl2(q)
    assert model.group.order == order
    assert model.psl.order == order // 2
    assert model.borel.order == borel
    assert model.group.order // model.borel.order == q + 1
    assert model.psl.issubgroup(model.group)

def test_involutions_outside_psl():
    assert len(make_pgl2(5).involutions_outside_psl()) == 10

def test_gf9_is_a_field():
    field = FiniteField.of_order(9)
    nonzero = np.arange(1, 9)
    for x in nonzero:
        assert sorted(field.mul[x, nonzero]) == list(range(1, 9))
    assert all(field.mul[x, field.inv[x]] == 1 for x in nonzero)
    assert all(field.add[x, field.neg[x]] == 0 for x in range(9))

def test_unsupported_field():
    with pytest.raises(UnsupportedField):
        FiniteField.of_order(4)

def test_mobius_translation():
    field = FiniteField.of_order(5)
    t = mobius(field, 1, 1, 0, 1)
    assert t.images == (1, 2, 3, 4, 0, 5)
    flip = mobius(field, 0, 1, 1, 0)
    assert flip(0) == 5 and flip(5) == 0
    assert flip.order == 2
