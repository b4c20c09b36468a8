"""
Plain-text files for groups, loops and folders.

    group <degree>          loop <n>              [group]
    <image list>            <row 0>               group <degree>
    ...                     ...                   <image list> ...
                                                  [H]
                                                  <image list> ...
                                                  [K]
                                                  <identity image list>
                                                  ...

Blank lines are ignored and '#' starts a comment. Every reader validates its input fully
before returning; syntax problems raise FormatError with the offending line number.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

from ._load_corpus import corpus
from .baer import Folder, check_folder_axiom, make_folder
from .errors import FormatError, NotTransversal
from .loopcore import Loop, validate_loop
from .permcore import Perm, PermGroup

logger = logging.getLogger(__name__)

CORPUS_PREFIX = "corpus:"
SECTIONS = ("group", "H", "K")

Line = Tuple[int, str]


def read_source(source: Union[str, Path]) -> str:
    """Text of a file, or of a bundled instance named corpus:<name>"""
    source = str(source)
    if source.startswith(CORPUS_PREFIX):
        try:
            return corpus.get(source[len(CORPUS_PREFIX):])
        except KeyError as e:
            raise FormatError(e.args[0], {"path": source, "known": list(corpus.names())}) from e
    try:
        return Path(source).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"Cannot read '{source}': {e.strerror}", {"path": source}) from e

def _lines(text: str) -> List[Line]:
    """Nonblank lines with comments stripped, numbered from 1"""
    result = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            result.append((number, line))
    return result

def _integers(line: Line) -> List[int]:
    number, text = line
    try:
        return [int(token) for token in text.split()]
    except ValueError:
        raise FormatError(f"line {number}: expected integers, got '{text}'", {"line": number}) from None

def _header(lines: List[Line], keyword: str) -> int:
    if not lines:
        raise FormatError(f"Missing '{keyword} <size>' header", {"line": 0})
    number, text = lines[0]
    parts = text.split()
    if len(parts) != 2 or parts[0] != keyword or not parts[1].isdigit() or int(parts[1]) < 1:
        raise FormatError(f"line {number}: expected '{keyword} <size>', got '{text}'", {"line": number})
    return int(parts[1])

def _perm(line: Line, degree: int) -> Perm:
    images = _integers(line)
    if len(images) != degree or sorted(images) != list(range(degree)):
        raise FormatError(f"line {line[0]}: not a permutation of 0..{degree - 1}", {"line": line[0]})
    return Perm(tuple(images))


# ~~~ Groups ~~~

def _group_from_lines(lines: List[Line]) -> PermGroup:
    degree = _header(lines, "group")
    return PermGroup(degree, [_perm(line, degree) for line in lines[1:]])

def parse_group(text: str) -> PermGroup:
    return _group_from_lines(_lines(text))

def read_group(source: Union[str, Path]) -> PermGroup:
    return parse_group(read_source(source))

def _image_lines(perms: Iterable[Perm]) -> List[str]:
    return [" ".join(str(i) for i in p.images) for p in perms]

def write_group(G: PermGroup) -> str:
    return "\n".join([f"group {G.degree}"] + _image_lines(G.generators)) + "\n"


# ~~~ Loops ~~~

def parse_loop(text: str) -> Loop:
    lines = _lines(text)
    n = _header(lines, "loop")
    rows = lines[1:]
    if len(rows) != n:
        where = rows[n][0] if len(rows) > n else (lines[-1][0])
        raise FormatError(f"line {where}: expected {n} rows, found {len(rows)}", {"line": where})
    table = []
    for line in rows:
        row = _integers(line)
        if len(row) != n or any(not 0 <= v < n for v in row):
            raise FormatError(f"line {line[0]}: expected {n} entries in 0..{n - 1}", {"line": line[0]})
        table.append(row)
    return validate_loop(table)

def read_loop(source: Union[str, Path]) -> Loop:
    return parse_loop(read_source(source))

def write_loop(L: Loop) -> str:
    rows = [" ".join(str(v) for v in row) for row in L.tolist()]
    return "\n".join([f"loop {L.n}"] + rows) + "\n"


# ~~~ Folders ~~~

def _sections(lines: List[Line]) -> Dict[str, List[Line]]:
    sections: Dict[str, List[Line]] = {}
    current = None
    for number, text in lines:
        if text.startswith("[") and text.endswith("]"):
            current = text[1:-1].strip()
            if current not in SECTIONS:
                raise FormatError(f"line {number}: unknown section '[{current}]'", {"line": number})
            if current in sections:
                raise FormatError(f"line {number}: section '[{current}]' repeated", {"line": number})
            sections[current] = []
        elif current is None:
            raise FormatError(f"line {number}: content before the first section", {"line": number})
        else:
            sections[current].append((number, text))
    missing = [name for name in SECTIONS if name not in sections]
    if missing:
        raise FormatError(f"Missing section '[{missing[0]}]'", {"line": 0})
    return sections

def parse_folder(text: str) -> Folder:
    sections = _sections(_lines(text))
    G = _group_from_lines(sections["group"])
    H = PermGroup(G.degree, [_perm(line, G.degree) for line in sections["H"]])
    K = [_perm(line, G.degree) for line in sections["K"]]
    F = make_folder(G, H, K)
    verdict = check_folder_axiom(F)
    if not verdict:
        raise NotTransversal("K is not a transversal to every conjugate of H", verdict.witness)
    return F

def read_folder(source: Union[str, Path]) -> Folder:
    return parse_folder(read_source(source))

def write_folder(F: Folder) -> str:
    lines = ["[group]", f"group {F.G.degree}", *_image_lines(F.G.generators),
             "[H]", *_image_lines(F.H.generators),
             "[K]", *_image_lines(F.K)]
    return "\n".join(lines) + "\n"

def read_subgroup(source: Union[str, Path], G: PermGroup) -> PermGroup:
    """A group file whose generators must lie in G"""
    U = read_group(source)
    if U.degree != G.degree:
        raise FormatError(f"Subgroup has degree {U.degree}, expected {G.degree}", {"line": 1})
    outside = next((g for g in U.generators if g not in G), None)
    if outside is not None:
        raise FormatError("Subgroup generator is not in G", {"element": str(outside)})
    return U
