import io
import json

import numpy as np

from loopforge.bx2p import LemmaReport, classify_folder, classify_q
from loopforge.lemmas import lemma_suite
from loopforge.report import (LEMMA_COLUMNS, NdjsonWriter, dumps, folder_class_record, qclass_record,
                              reports_to_frame, verdict_record)
from loopforge.loopcore import check_bol
from loopforge.verbalizer import Verbalizer, verbalize_flags

reports = [
    LemmaReport("evensize", True, True, {"K_size": 8}),
    LemmaReport("noHinvert", True, False, {"h": "(0 1 2)", "k": "(0 1)(2 3)"}),
    LemmaReport("HeissPrime", False, None, {"reason": "O_2(Hbar) != 1"}),
]


def test_dumps_numpy_values():
    record = {"n": np.int64(3), "ok": np.bool_(True), "table": np.eye(2, dtype=np.int64), "set": {3, 1}}
    assert json.loads(dumps(record)) == {"n": 3, "ok": True, "table": [[1, 0], [0, 1]], "set": [1, 3]}

def test_dumps_is_deterministic(bol8):
    first = dumps(folder_class_record(classify_folder(bol8)))
    assert first == dumps(folder_class_record(classify_folder(bol8)))
    assert list(json.loads(first)["flags"])[0] == "folder"

def test_writer():
    stream = io.StringIO()
    writer = NdjsonWriter(stream)
    writer.write_all([qclass_record(classify_q(5)), qclass_record(classify_q(7))])
    assert writer.count == 2
    lines = stream.getvalue().split("\n")
    assert lines[-1] == ""
    assert json.loads(lines[1])["reason"] == "q_minus_1_not_2_power"

def test_verdict_record(nonassoc5):
    record = verdict_record(check_bol(nonassoc5))
    assert record["check"] == "bol"
    assert record["pass"] is False
    assert set(record["witness"]) == {"x", "y", "z"}

def test_reports_frame():
    df = reports_to_frame(reports)
    assert list(df.columns) == LEMMA_COLUMNS
    assert len(df) == 3

def test_verbalizer():
    verbalizer = Verbalizer(reports_to_frame(reports))
    lines = verbalizer.lines()
    assert lines[0] == "This folder satisfies lemma 'evensize'"
    assert lines[1] == "This folder fails lemma 'noHinvert' (h=(0 1 2), k=(0 1)(2 3))"
    assert lines[2] == "Lemma 'HeissPrime' does not apply to this folder: O_2(Hbar) != 1"
    df = verbalizer.verbalize(only_failures=True)
    assert df["lemma"].to_list() == ["noHinvert"]

def test_verbalize_suite(bol8):
    lines = Verbalizer(reports_to_frame(lemma_suite(bol8)), subject="envelope").lines()
    assert lines
    assert all("envelope" in line for line in lines)

def test_verbalize_flags(d8_folder):
    lines = verbalize_flags(classify_folder(d8_folder))
    assert lines[0] == "This folder is a loop folder"
    assert any(line.startswith("This folder is not an A_r-folder") for line in lines)
