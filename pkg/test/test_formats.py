import pytest

from loopforge._load_corpus import Corpus, corpus
from loopforge.errors import FormatError, NotLatin, NotTransversal
from loopforge.formats import (parse_folder, parse_group, parse_loop, read_folder, read_group, read_source,
                               read_subgroup, write_folder, write_group, write_loop)

BAD_FOLDER = """
[group]
group 4
1 2 3 0
0 3 2 1
[H]
1 2 3 0
[K]
0 1 2 3
2 3 0 1
"""


def test_corpus_contents():
    assert "c4.loop" in corpus.names(".loop")
    assert "bol8.folder" in corpus.names(".folder")
    assert all(name.endswith(".group") for name in corpus.names(".group"))
    with pytest.raises(KeyError):
        corpus.get("missing.loop")

def test_corpus_add_items():
    local = Corpus()
    local.add_items("tiny.loop", "loop 1\n0\n")
    assert parse_loop(local.get("tiny.loop")).n == 1
    with pytest.raises(FileNotFoundError):
        local.add_from_path("nothing_here.loop")

def test_read_source(tmp_path):
    with pytest.raises(FormatError) as info:
        read_source("corpus:nope.loop")
    assert info.value.witness["path"] == "corpus:nope.loop"
    assert "c4.loop" in info.value.witness["known"]
    with pytest.raises(FormatError):
        read_source(tmp_path / "absent.loop")

def test_loop_text(c4):
    text = write_loop(c4)
    assert text.splitlines()[0] == "loop 4"
    assert parse_loop(text) == c4

def test_comments_and_blank_lines():
    L = parse_loop("# a comment\n\nloop 2  # header\n0 1\n\n1 0\n")
    assert L.tolist() == [[0, 1], [1, 0]]

@pytest.mark.parametrize("text, line", [
    ("lop 2\n0 1\n1 0\n", 1),
    ("loop 2\n0 1\n1 x\n", 3),
    ("loop 2\n0 1\n1 0 1\n", 3),
    ("loop 2\n0 1\n", 2),
    ("loop 2\n0 1\n1 0\n0 1\n", 4),
])
def test_loop_syntax_errors(text, line):
    with pytest.raises(FormatError) as e:
        parse_loop(text)
    assert e.value.witness["line"] == line

def test_loop_must_be_latin():
    with pytest.raises(NotLatin):
        parse_loop("loop 2\n0 1\n1 1\n")

def test_group_text(d8):
    assert d8.order == 8
    assert parse_group(write_group(d8)) == d8
    assert read_group("corpus:s3.group").order == 6
    assert read_group("corpus:sym4.group").order == 24
    with pytest.raises(FormatError):
        parse_group("group 3\n0 0 1\n")

def test_folder_text(d8_folder):
    again = parse_folder(write_folder(d8_folder))
    assert again.G == d8_folder.G
    assert again.H == d8_folder.H
    assert again.K == d8_folder.K

def test_folder_errors():
    with pytest.raises(NotTransversal):
        parse_folder(BAD_FOLDER)
    with pytest.raises(FormatError):
        parse_folder(BAD_FOLDER.replace("[H]", "[L]"))
    with pytest.raises(FormatError):
        parse_folder(BAD_FOLDER.replace("[K]", "[H]"))
    with pytest.raises(FormatError):
        parse_folder("0 1 2 3\n" + BAD_FOLDER)
    with pytest.raises(FormatError):
        parse_folder(BAD_FOLDER.split("[K]")[0])

def test_read_subgroup(tmp_path, sym4):
    path = tmp_path / "v4.group"
    path.write_text("group 4\n1 0 3 2\n2 3 0 1\n", encoding="utf-8")
    assert read_subgroup(path, sym4).order == 4
    with pytest.raises(FormatError):
        read_subgroup(path, read_folder("corpus:s3_a3.folder").G)
    path.write_text(read_source("corpus:d8.group"), encoding="utf-8")
    with pytest.raises(FormatError):
        read_subgroup(path, read_folder("corpus:s4_hypa.folder").H)
