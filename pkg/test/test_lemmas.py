"""
Lemma audits on the bundled folders
"""

import pytest

from loopforge.bx2p import LemmaReport
from loopforge.errors import SizeLimit
from loopforge.lemmas import (REGISTERED_LEMMAS, FolderContext, LemmaCheck, failed, get_activated_lemmas,
                              lemma_suite)

config = {
    "evensize": 1,
    "noHinvert": 1,
    "O2prime": 0,
    "HeissEquation": 1,
}


def test_registry_sections():
    section3 = [check.name for check in get_activated_lemmas()]
    assert section3[0] == "evensize"
    assert "HKsuper" not in section3
    everything = [check.name for check in get_activated_lemmas(suite="all")]
    assert everything == list(REGISTERED_LEMMAS)
    assert set(section3) < set(everything)

def test_config_selects_in_registry_order():
    names = [check.name for check in get_activated_lemmas(config)]
    assert names == ["evensize", "noHinvert", "HeissEquation"]
    assert "O2prime" not in names

def test_unknown_lemma_and_suite():
    with pytest.raises(KeyError):
        get_activated_lemmas({"not_a_lemma": 1})
    with pytest.raises(ValueError):
        get_activated_lemmas(suite="section9")

@pytest.mark.parametrize("name", ["bol8.folder", "s4_hypa.folder"])
def test_bx2p_folders_pass(name):
    from loopforge.formats import read_folder
    reports = lemma_suite(read_folder(f"corpus:{name}"), "all")
    assert failed(reports) == []
    assert [r.lemma for r in reports] == list(REGISTERED_LEMMAS)
    by_name = {r.lemma: r for r in reports}
    assert by_name["evensize"].applicable
    assert by_name["HeissEquation"].passed

def test_baer_envelope_lemmas(bol8):
    reports = {r.lemma: r for r in lemma_suite(bol8, "all")}
    for name in ("HKsuper", "Hnormal", "Hgeneration", "Bol_twisted", "twisted", "BruckFolder", "normal_xi"):
        assert reports[name].applicable, name
        assert reports[name].passed, name

def test_non_bx2p_folder_is_inapplicable(d8_folder):
    reports = lemma_suite(d8_folder)
    assert all(not r.applicable for r in reports)
    assert all(r.passed is None for r in reports)
    assert {r.lemma: r for r in reports}["evensize"].witness == {"reason": "not a BX2P folder"}

def test_heiss_equation_runs_every_admissible_n(s4_hypa, bol8):
    report = lemma_suite(s4_hypa, config={"HeissEquation": 1})[0]
    # V4 = O_2(S4), A4 and S4 all contain O_2
    assert report.witness == {"N_orders": [4, 12, 24], "failures": []}
    assert report.passed
    report = lemma_suite(bol8, config={"HeissEquation": 1})[0]
    assert report.witness["N_orders"] == [16]

def test_ar_folder_lemmas(s3_a3):
    reports = {r.lemma: r for r in lemma_suite(s3_a3)}
    assert reports["ArFolders(5)"].applicable and reports["ArFolders(5)"].passed
    assert reports["ArFolders(6)"].applicable and reports["ArFolders(6)"].passed

def test_capacity_errors_skip(bol8):
    def too_big(ctx):
        raise SizeLimit("too big", {"n": 99})
    check = LemmaCheck(too_big, "too_big", "section3")
    report = check(FolderContext(bol8))
    assert report == LemmaReport("too_big", False, None, {"skipped": "too big"})

def test_to_dict_keys(bol8):
    report = lemma_suite(bol8, config={"evensize": 1})[0]
    assert report.to_dict() == {"lemma": "evensize", "applicable": True, "pass": True, "witness": {"K_size": 8}}
