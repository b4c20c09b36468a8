import io
import json

import pytest

from loopforge.cli import main


def run(*argv):
    stream = io.StringIO()
    code = main(list(argv), stream=stream)
    return code, [json.loads(line) for line in stream.getvalue().splitlines()]


def test_check_loop():
    code, records = run("check-loop", "corpus:c4.loop", "--identities", "bol,aip,ar")
    assert code == 0
    assert records[0]["command"] == "check-loop"
    assert list(records[0]["inputs"]) == ["corpus:c4.loop"]
    assert [r["check"] for r in records[1:]] == ["bol", "aip", "ar"]

def test_check_loop_failure():
    code, records = run("check-loop", "corpus:nonassoc5.loop", "--identities", "bol,group")
    assert code == 1
    assert records[1]["pass"] is False

def test_soluble_flag():
    code, records = run("check-loop", "corpus:s3.loop", "--soluble")
    assert code == 0
    assert records[-1]["check"] == "soluble"
    assert records[-1]["series"][0] == [0]

def test_unknown_identity():
    code, records = run("check-loop", "corpus:c4.loop", "--identities", "moufang")
    assert code == 2
    assert records[-1]["error"] == "InputError"

def test_missing_file(tmp_path):
    code, records = run("check-loop", str(tmp_path / "absent.loop"))
    assert code == 2
    assert records[-1]["error"] == "FormatError"

def test_unknown_corpus_name():
    code, _ = run("check-loop", "corpus:absent.loop")
    assert code == 2

def test_check_folder_levels():
    assert run("check-folder", "corpus:d8_example.folder")[0] == 0
    code, records = run("check-folder", "corpus:d8_example.folder", "--level", "ar")
    assert code == 1
    assert records[1]["flags"]["ar"]["holds"] is False
    assert run("check-folder", "corpus:bol8.folder", "--level", "bx2p")[0] == 0

def test_envelope(tmp_path):
    out = tmp_path / "env.folder"
    code, records = run("envelope", "corpus:nonassoc5.loop", "--emit-folder", str(out))
    assert code == 0
    assert records[1]["loop_order"] == 5
    assert records[1]["flags"]["faithful"]["holds"]
    assert run("fold2loop", str(out))[1][1]["table"][1] == [1, 0, 3, 4, 2]

def test_fold2loop(tmp_path):
    out = tmp_path / "c2.loop"
    code, records = run("fold2loop", "corpus:d8_example.folder", "--emit-loop", str(out))
    assert code == 0
    assert records[1] == {"order": 2, "table": [[0, 1], [1, 0]]}
    assert out.read_text(encoding="utf-8") == "loop 2\n0 1\n1 0\n"

def test_lemmas(tmp_path):
    code, records = run("lemmas", "corpus:bol8.folder", "--suite", "all")
    assert code == 0
    assert all(set(r) == {"lemma", "applicable", "pass", "witness"} for r in records[1:])
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"evensize": 1}), encoding="utf-8")
    code, records = run("lemmas", "corpus:bol8.folder", "--config", str(config))
    assert [r["lemma"] for r in records[1:]] == ["evensize"]
    config.write_text(json.dumps({"nope": 1}), encoding="utf-8")
    code, records = run("lemmas", "corpus:bol8.folder", "--config", str(config))
    assert code == 2
    # no header before a rejected config
    assert [r.get("error") for r in records] == ["InputError"]

def test_heiss():
    code, records = run("heiss", "corpus:s4_hypa.folder")
    assert code == 0
    assert records[1]["heiss"]["n0"] == 4
    code, records = run("heiss", "corpus:d8_example.folder")
    assert code == 2
    assert records[0]["error"] == "NotBX2PFolder"

def test_missing_corpus_instance_is_an_input_error():
    code, records = run("check-loop", "corpus:nope.loop")
    assert code == 2
    assert [r["error"] for r in records] == ["FormatError"]

def test_qclass():
    code, records = run("qclass", "--sieve", "70000")
    assert code == 0
    assert records[-1]["admitted"] == [5, 9, 17, 257, 65537]
    code, records = run("qclass", "9")
    assert records[1]["verdict"] == "nine"
    code, records = run("qclass", "1")
    assert code == 2
    assert [r.get("error") for r in records] == ["InputError"]
    assert run("qclass")[0] == 2

def test_theorem1():
    code, records = run("theorem1", "corpus:bol8.folder")
    assert code == 0
    assert records[1]["lemma"] == "theorem1"
    assert run("theorem1", "corpus:d8_example.folder")[0] == 0

def test_enumerate(tmp_path):
    code, records = run("enumerate", "--order", "4", "--out", str(tmp_path))
    assert code == 0
    assert records[1]["count"] == 2
    assert sorted(p.name for p in tmp_path.iterdir()) == ["loop_00000.loop", "loop_00001.loop", "summary.ndjson"]
    summary = (tmp_path / "summary.ndjson").read_text(encoding="utf-8").splitlines()
    assert [json.loads(line)["group"] for line in summary] == [True, True]

def test_enumerate_size_limit(tmp_path):
    code, records = run("enumerate", "--order", "9", "--out", str(tmp_path))
    assert code == 3
    assert records[-1]["error"] == "SizeLimit"

def test_search_a(tmp_path):
    code, records = run("search-a", "corpus:sym4.group", "--out", str(tmp_path))
    assert code == 0
    assert records[1] == {"group_order": 24, "count": 2}

def test_search_folder(tmp_path):
    h = tmp_path / "h.group"
    h.write_text("group 4\n", encoding="utf-8")
    code, records = run("search-folder", "corpus:c4.group", "--h", str(h), "--out", str(tmp_path / "out"))
    assert code == 0
    assert records[1]["count"] == 1
    assert (tmp_path / "out" / "folder_00000.folder").exists()

def test_timing():
    code, records = run("--timing", "qclass", "5")
    assert code == 0
    assert set(records[-1]) == {"elapsed_ms"}
    assert "elapsed_ms" not in records[1]

def test_text_goes_to_stderr(capsys):
    code, records = run("--text", "check-folder", "corpus:d8_example.folder")
    captured = capsys.readouterr()
    assert "This folder is a loop folder" in captured.err
    assert captured.out == ""

def test_parser_errors():
    with pytest.raises(SystemExit):
        main(["frobnicate"], stream=io.StringIO())
