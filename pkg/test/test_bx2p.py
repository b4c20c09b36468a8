import pytest

from loopforge._load_corpus import corpus
from loopforge.baer import FLAG_ORDER, Folder
from loopforge.bx2p import (_two_m_checks, amt_consistent, amt_loop_size, check_ar_folder, check_bx2p_tau,
                            check_theorem1_shape, class_fibres, classify_folder, classify_q, direct_factors,
                            field_size_for_order, find_2m_subfolder, heiss_decomposition, is_2m_loop, kbar_check,
                            sieve_q, theorem1_shape)
from loopforge.errors import BadN, NotBX2PFolder, Undecided
from loopforge.formats import read_folder
from loopforge.permcore import Perm, PermGroup, cyclic_group, direct_product, symmetric_group
from loopforge.twisted import Automorphism


def test_classify_bol8(bol8):
    fclass = classify_folder(bol8)
    assert all(fclass[flag] for flag in FLAG_ORDER)
    assert list(fclass.to_dict()) == list(FLAG_ORDER)

def test_classify_d8_example(d8_folder):
    fclass = classify_folder(d8_folder)
    assert fclass["folder"] and fclass["bol"]
    assert not fclass["ar"]
    assert fclass.witness("bruck") == {"failed": "ar"}
    assert fclass.witness("bx2p") == {"failed": "bruck"}
    assert set(check_ar_folder(d8_folder).witness) == {"h", "k"}

def test_classify_odd_bruck(s3_a3):
    fclass = classify_folder(s3_a3)
    assert fclass["bruck"]
    assert not fclass["envelope"]
    assert not fclass["bx2p"]
    assert fclass.witness("bx2p")["order"] == 3

def _flag_chain_holds(fclass) -> bool:
    return ((not fclass["bx2p"] or fclass["bruck"])
            and (not fclass["bruck"] or (fclass["bol"] and fclass["ar"]))
            and (not (fclass["bol"] or fclass["ar"]) or fclass["folder"]))

@pytest.mark.parametrize("name", corpus.names(".folder"))
def test_flag_chain_on_bundled_folders(name):
    assert _flag_chain_holds(classify_folder(read_folder(f"corpus:{name}")))

def test_flag_chain_on_a_non_folder():
    r = Perm.from_cycles(4, (0, 1, 2, 3))
    F = Folder(cyclic_group(4), PermGroup.trivial(4), (Perm.identity(4), r * r))
    fclass = classify_folder(F)
    assert not fclass["folder"]
    assert not fclass["bol"] and not fclass["ar"]
    assert fclass.witness("bol") == {"failed": "folder"}
    assert fclass.witness("ar") == {"failed": "folder"}
    assert _flag_chain_holds(fclass)

def test_bx2p_tau(bol8, s3_a3, d8_folder):
    assert check_bx2p_tau(bol8).passed
    report = check_bx2p_tau(s3_a3)
    assert report.passed
    assert report.witness == {"tau_in_O2": False, "all_K_2_power": False}
    assert not check_bx2p_tau(d8_folder).applicable

def test_kbar(bol8, s4_hypa):
    assert kbar_check(bol8).passed
    assert kbar_check(s4_hypa).passed

def test_heiss_decomposition(bol8, s4_hypa):
    data = heiss_decomposition(bol8)
    assert (data.n0, data.orbits, data.total) == (8, [], 8)
    assert data.holds
    data = heiss_decomposition(s4_hypa)
    assert data.n0 == 4 and data.holds
    assert heiss_decomposition(s4_hypa, s4_hypa.G).to_dict()["holds"]

def test_bx2p_precondition(d8_folder):
    report = kbar_check(d8_folder)
    assert not report.applicable and report.passed is None
    with pytest.raises(NotBX2PFolder) as info:
        heiss_decomposition(d8_folder)
    assert info.value.witness == {"failed": "bruck"}

def test_class_fibres(sym4, v4):
    n0, orbits = class_fibres(sym4, v4.elements, PermGroup.trivial(4))
    assert n0 == 1
    assert [(o.m, o.n) for o in orbits] == [(3, 1)]
    assert class_fibres(sym4, v4.elements, v4) == (4, [])
    # transpositions fall two to a class member of S4/V4 = S3
    transpositions = [g for g in sym4.elements if g.order == 2 and len(g.cycles()) == 1]
    n0, orbits = class_fibres(sym4, [sym4.identity] + transpositions, v4)
    assert n0 == 1
    assert [(o.m, o.n) for o in orbits] == [(3, 2)]
    assert 7 == n0 + sum(o.m * o.n for o in orbits)

def test_heiss_rejects_small_N(s4_hypa):
    with pytest.raises(BadN):
        heiss_decomposition(s4_hypa, PermGroup.trivial(4))
    with pytest.raises(BadN):
        heiss_decomposition(s4_hypa, s4_hypa.H)

@pytest.mark.parametrize("q, verdict, reason", [
    (2, "two", None),
    (3, "excluded", "q_equals_3"),
    (5, "fermat_prime", None),
    (7, "excluded", "q_minus_1_not_2_power"),
    (9, "nine", None),
    (17, "fermat_prime", None),
    (33, "excluded", "not_prime_power"),
    (65537, "fermat_prime", None),
])
def test_classify_q(q, verdict, reason):
    result = classify_q(q)
    assert (result.verdict, result.reason) == (verdict, reason)

def test_readings():
    assert not classify_q(2).admitted
    assert classify_q(2, "literal").admitted
    assert classify_q(9).admitted
    with pytest.raises(ValueError):
        classify_q(1)
    with pytest.raises(ValueError):
        classify_q(5, "loose")

def test_sieve():
    admitted = [c.q for c in sieve_q(70000) if c.admitted]
    assert admitted == [5, 9, 17, 257, 65537]

def test_loop_sizes():
    assert amt_loop_size(5, 8) == 48
    assert amt_consistent(5, 2, 1)
    assert not amt_consistent(5, 4, 1)
    assert not amt_consistent(7, 2, 1)

def test_field_size_for_order():
    assert field_size_for_order(120) == 5
    assert field_size_for_order(720) == 9
    assert field_size_for_order(100) is None

def test_direct_factors():
    G = direct_product(cyclic_group(3), symmetric_group(3))
    assert sorted(D.order for D in direct_factors(G)) == [3, 6]
    assert [D.order for D in direct_factors(symmetric_group(4))] == [24]
    assert direct_factors(PermGroup.trivial(2)) == []

def test_direct_factors_limit():
    with pytest.raises(Undecided):
        direct_factors(symmetric_group(8))

def test_theorem1(bol8, d8_folder):
    report = check_theorem1_shape(bol8)
    assert report.applicable and report.passed
    assert report.witness["e"] == 0
    assert report.witness["conclusions"] == {"1": True, "2": True, "3": True, "4": True}
    assert not check_theorem1_shape(d8_folder).applicable

@pytest.fixture
def affine5():
    """AGL(1, 5), the Borel subgroup of S5 = PGL_2(5) on the projective line over GF(5)"""
    return PermGroup(5, [Perm((1, 2, 3, 4, 0)), Perm((0, 2, 4, 1, 3))])

def test_theorem1_shape_of_pgl2_5(affine5):
    shape = theorem1_shape(symmetric_group(5), affine5)
    assert shape["e"] == 1
    assert shape["factors"] == [{"order": 120, "q": 5, "admissible": True, "isomorphic": True, "borel": True}]
    # O_2(S5) = 1 is not self-centralizing
    assert shape["conclusions"] == {"1": True, "2": True, "3": True, "4": False}

def test_theorem1_shape_over_a_central_2_subgroup():
    G = direct_product(cyclic_group(2), symmetric_group(5))
    H = PermGroup(7, [Perm((0, 1, 3, 4, 5, 6, 2)), Perm((0, 1, 2, 4, 6, 3, 5))])
    shape = theorem1_shape(G, H)
    assert [(f["order"], f["q"], f["borel"]) for f in shape["factors"]] == [(120, 5, True)]
    assert shape["conclusions"] == {"1": True, "2": True, "3": True, "4": False}

def test_theorem1_shape_rejects_small_fields(sym4):
    # S4/V4 = S3 = PGL_2(2), and 2 is not an admissible field size
    shape = theorem1_shape(sym4, PermGroup(4, [Perm((1, 2, 0, 3)), Perm((1, 0, 2, 3))]))
    assert shape["factors"] == [{"order": 6, "q": 2, "admissible": False, "isomorphic": True, "borel": False}]
    assert shape["conclusions"] == {"1": True, "2": False, "3": False, "4": True}
    shape = theorem1_shape(cyclic_group(3), PermGroup.trivial(3))
    assert shape["factors"][0]["q"] is None
    assert not shape["conclusions"]["1"]

def test_two_m_checks_on_pgl2_5(affine5):
    S5 = symmetric_group(5)
    transpositions = [g for g in S5.elements if g.order == 2 and len(g.cycles()) == 1]
    F = Folder(S5, affine5, [S5.identity] + transpositions)
    q, checks = _two_m_checks(F, F, S5, Automorphism(S5, {g: g for g in S5.elements}))
    assert q == 5
    assert checks == {"generated_by_K": True, "F_star_is_O2": False, "pgl2_quotient": True, "index_q_plus_1": True,
                      "Kbar_involutions": True, "inverted_element": True, "H_element_in_perfect_core": True}

def test_2m_loops(v8, s3_loop):
    assert is_2m_loop(v8).witness == {"reason": "soluble"}
    assert is_2m_loop(s3_loop).witness == {"reason": "not bruck"}

def test_no_2m_subfolder_in_2groups(bol8):
    assert find_2m_subfolder(bol8) is None
