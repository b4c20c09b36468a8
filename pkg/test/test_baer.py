import numpy as np
import pytest

from loopforge.baer import (Folder, baer_envelope, check_folder_axiom, detect_subfolder, faithful_reduction,
                            folder_fingerprint, folder_to_loop, group_folder, h_xy, is_transversal_to_conjugates,
                            make_folder, quotient_folder, right_coset_ids, verify_folder, verify_h_generation)
from loopforge.errors import InputError, NotInH
from loopforge.loopcore import is_group
from loopforge.permcore import Perm, PermGroup, cyclic_group

LOOPS = ["c2.loop", "c4.loop", "c5.loop", "s3.loop", "v8.loop", "nonassoc5.loop"]


@pytest.mark.parametrize("name", LOOPS)
def test_envelope_round_trip(name):
    from loopforge.formats import read_loop
    L = read_loop(f"corpus:{name}")
    F = baer_envelope(L)
    assert np.array_equal(folder_to_loop(F).table, L.table)
    fclass = verify_folder(F)
    assert fclass["folder"] and fclass["faithful"] and fclass["envelope"]
    assert F.H.order * L.n == F.G.order

def test_group_envelope_is_regular(c4):
    F = baer_envelope(c4)
    assert F.G.order == 4
    assert F.H.is_trivial()

def test_nonassociative_envelope(nonassoc5):
    F = baer_envelope(nonassoc5)
    assert not F.H.is_trivial()
    assert verify_h_generation(F)
    assert h_xy(F, 1, 2) in F.H

def test_d8_example(d8_folder):
    fclass = verify_folder(d8_folder)
    assert fclass["folder"]
    assert not fclass["faithful"]
    assert fclass.witness("faithful")["core_order"] == 4
    assert not fclass["envelope"]
    assert folder_to_loop(d8_folder).tolist() == [[0, 1], [1, 0]]
    assert is_transversal_to_conjugates(d8_folder)

def test_folder_axiom_failure(d8):
    r = Perm((1, 2, 3, 0))
    H = PermGroup(4, [r])
    F = make_folder(d8, H, [d8.identity, r * r])
    verdict = check_folder_axiom(F)
    assert not verdict
    assert "element" in verdict.witness

def test_folder_size_mismatch(d8):
    F = make_folder(d8, PermGroup.trivial(4), [d8.identity])
    assert check_folder_axiom(F).witness == {"K_size": 1, "index": 8}

def test_make_folder_checks(d8):
    H = PermGroup(4, [Perm((1, 2, 3, 0))])
    s = Perm((0, 3, 2, 1))
    with pytest.raises(InputError):
        make_folder(d8, H, [s, d8.identity])
    with pytest.raises(InputError):
        make_folder(d8, H, [d8.identity, Perm((1, 0, 2, 3))])
    with pytest.raises(InputError):
        make_folder(d8, H, [d8.identity, s, s])

def test_group_folder():
    G = cyclic_group(5)
    F = group_folder(G)
    assert is_group(folder_to_loop(F))
    assert verify_folder(F)["envelope"]

def test_right_coset_ids(s4_hypa):
    G, H = s4_hypa.G, s4_hypa.H
    ids = right_coset_ids(G, H)
    assert len(set(ids.values())) == G.order // H.order
    assert all(ids[h * g] == ids[g] for h in H for g in G)
    # K meets every right coset of H once
    assert sorted(ids[k] for k in s4_hypa.K) == sorted(set(ids.values()))

def test_faithful_reduction(d8_folder):
    reduced = faithful_reduction(d8_folder)
    assert reduced.folder.G.order == 2
    assert reduced.folder.H.is_trivial()
    assert verify_folder(reduced.folder)["faithful"]
    assert list(reduced.certificate) == [0, 1]

def test_quotient_needs_N_in_H(s3_a3):
    A3 = PermGroup(3, [Perm((1, 2, 0))])
    with pytest.raises(NotInH):
        quotient_folder(s3_a3, A3)

def test_detect_subfolder(s4_hypa, v4):
    sub = detect_subfolder(s4_hypa, v4)
    assert sub is not None
    assert sub.H.is_trivial()
    assert set(sub.K) == set(v4.elements)
    assert sub.labels == (0, 1, 2, 3)
    top = detect_subfolder(s4_hypa, s4_hypa.H)
    assert top.K == (s4_hypa.G.identity,)

def test_detect_subfolder_rejects(s4_hypa):
    C2 = PermGroup(4, [Perm((1, 0, 3, 2))])
    sub = detect_subfolder(s4_hypa, C2)
    assert sub is not None
    odd = PermGroup(4, [Perm((0, 2, 3, 1))])
    assert detect_subfolder(s4_hypa, odd) is None

def test_fingerprint_is_label_free(c4):
    F = baer_envelope(c4)
    G = cyclic_group(4)
    assert folder_fingerprint(F) == folder_fingerprint(Folder(G, PermGroup.trivial(4), G.elements))
