import numpy as np
import pytest

from loopforge.bx2p import classify_folder
from loopforge.errors import InputError, SizeLimit
from loopforge.loopcore import is_group
from loopforge.permcore import Perm, PermGroup, cyclic_group
from loopforge.search import (EnumSpec, canonical_form, enumerate_loops, enumeration_frame, search_folders,
                              search_hypothesis_a)


@pytest.mark.parametrize("order, count", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 6)])
def test_loop_counts(order, count):
    assert len(enumerate_loops(EnumSpec(order))) == count

def test_order6_count():
    assert len(enumerate_loops(EnumSpec(6))) == 109

@pytest.mark.parametrize("order, count", [(4, 4), (5, 56)])
def test_reduced_latin_squares(order, count):
    assert len(enumerate_loops(EnumSpec(order, canonicalize=False))) == count

def test_order_independence():
    forward = enumerate_loops(EnumSpec(5))
    backward = enumerate_loops(EnumSpec(5, reverse=True))
    parallel = enumerate_loops(EnumSpec(5), workers=2)
    assert [L.tolist() for L in forward] == [L.tolist() for L in backward] == [L.tolist() for L in parallel]

def test_constraints():
    bol5 = enumerate_loops(EnumSpec(5, {"bol"}))
    assert len(bol5) == 1 and is_group(bol5[0])
    assert len(enumerate_loops(EnumSpec(4, {"exponent2"}))) == 1
    assert len(enumerate_loops(EnumSpec(4, {"aip"}))) == 2

def test_spec_checks():
    with pytest.raises(InputError):
        enumerate_loops(EnumSpec(4, {"moufang"}))
    with pytest.raises(InputError):
        enumerate_loops(EnumSpec(0))
    with pytest.raises(SizeLimit):
        enumerate_loops(EnumSpec(9))

def test_canonical_form(c4):
    p = np.array([0, 2, 3, 1])
    inv = np.argsort(p)
    relabeled = p[c4.table[np.ix_(inv, inv)]]
    assert canonical_form(c4.table) == canonical_form(relabeled)

def test_enumeration_frame():
    df = enumeration_frame(enumerate_loops(EnumSpec(4)))
    assert list(df.columns) == ["order", "group", "bol", "exponent"]
    assert df["group"].all()
    assert sorted(df["exponent"]) == [2, 4]

def test_single_folder_for_trivial_H():
    G = cyclic_group(4)
    folders = list(search_folders(G, PermGroup.trivial(4)))
    assert len(folders) == 1
    assert set(folders[0].K) == set(G.elements)

def test_folder_search(sym3):
    H = PermGroup(3, [Perm((1, 0, 2))])
    folders = list(search_folders(sym3, H))
    assert len(folders) == 1
    assert all(k.order != 2 for k in folders[0].K)
    assert list(search_folders(sym3, H, bx2p=True)) == []

def test_bx2p_folder_search(sym4, v4):
    H = PermGroup(4, [Perm((1, 2, 0, 3)), Perm((1, 0, 2, 3))])
    folders = list(search_folders(sym4, H, bx2p=True))
    assert any(set(F.K) == set(v4.elements) for F in folders)
    assert all(classify_folder(F)["bx2p"] for F in folders)

def test_hypothesis_a_sym3(sym3):
    hits = list(search_hypothesis_a(sym3))
    assert all(F.H.order != 1 for F in hits)
    assert [(F.H.order, len(F.K)) for F in hits] == [(6, 1)]

def test_hypothesis_a_sym4(sym4, v4):
    hits = list(search_hypothesis_a(sym4))
    assert sorted((F.H.order, len(F.K)) for F in hits) == [(6, 4), (24, 1)]
    hit = next(F for F in hits if F.H.order == 6)
    assert set(hit.K) == set(v4.elements)
    assert classify_folder(hit)["bruck"]
