"""
Command-line front end. Every subcommand writes NDJSON records to stdout: a header naming the
command and the digests of its inputs, then the results. Exit codes: 0 when every check
passes, 1 when a verdict fails, 2 on unusable input, 3 when a size cap is hit.
"""

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import formats
from .baer import FLAG_ORDER, baer_envelope, folder_to_loop, verify_folder
from .bx2p import check_theorem1_shape, classify_folder, classify_q, heiss_decomposition, sieve_q
from .errors import CapacityError, InputError, LoopforgeError
from .lemmas import failed, get_activated_lemmas, lemma_suite
from .loopcore import check_aip, check_ar, check_bol, is_bruck, is_group, is_soluble_loop
from .report import NdjsonWriter, folder_class_record, heiss_record, qclass_record, reports_to_frame, verdict_record
from .search import EnumSpec, enumerate_loops, search_folders, search_hypothesis_a
from .verbalizer import Verbalizer, verbalize_flags

logger = logging.getLogger("loopforge")

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
LEVELS = ("folder", "bol", "ar", "bruck", "bx2p")

IDENTITY_CHECKS = {
    "bol": check_bol,
    "aip": check_aip,
    "bruck": is_bruck,
    "ar": check_ar,
    "group": is_group,
}


class Session:
    """State of one CLI invocation: the output writer, the input digests and the verdict so far"""

    def __init__(self, args: argparse.Namespace, stream):
        self.args = args
        self.writer = NdjsonWriter(stream)
        self.inputs: Dict[str, str] = {}
        self.texts: Dict[str, str] = {}
        self.ok = True

    def read(self, source: str) -> str:
        if source not in self.texts:
            text = formats.read_source(source)
            self.texts[source] = text
            self.inputs[source] = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return self.texts[source]

    def header(self) -> None:
        self.writer.write({"command": self.args.command, "inputs": self.inputs})

    def emit(self, record: Dict) -> None:
        self.writer.write(record)

    def say(self, lines: List[str]) -> None:
        if self.args.text:
            for line in lines:
                print(line, file=sys.stderr)

    def fail_if(self, condition: bool) -> None:
        if condition:
            self.ok = False


# ~~~ Commands ~~~

def _check_loop(s: Session) -> None:
    L = formats.parse_loop(s.read(s.args.loop))
    names = [name.strip() for name in s.args.identities.split(",") if name.strip()]
    unknown = [name for name in names if name not in IDENTITY_CHECKS]
    if unknown:
        raise InputError(f"Unknown identity '{unknown[0]}'", {"known": sorted(IDENTITY_CHECKS)})
    s.header()
    for name in names:
        verdict = IDENTITY_CHECKS[name](L)
        record = verdict_record(verdict)
        record["check"] = name
        s.emit(record)
        s.fail_if(not verdict.holds)
        s.say([f"This loop {'satisfies' if verdict.holds else 'violates'} {name}"])
    if s.args.soluble:
        verdict = is_soluble_loop(L)
        s.emit({"check": "soluble", "pass": verdict.holds, "series": [list(S.elements) for S in verdict.series]})
        s.fail_if(not verdict.holds)

def _envelope(s: Session) -> None:
    L = formats.parse_loop(s.read(s.args.loop))
    F = baer_envelope(L)
    fclass = verify_folder(F)
    s.header()
    s.emit({"loop_order": L.n, "G_order": F.G.order, "H_order": F.H.order, **folder_class_record(fclass)})
    if s.args.emit_folder:
        Path(s.args.emit_folder).write_text(formats.write_folder(F), encoding="utf-8")

def _check_folder(s: Session) -> None:
    F = formats.parse_folder(s.read(s.args.folder))
    fclass = classify_folder(F)
    s.header()
    s.emit(folder_class_record(fclass))
    s.fail_if(not (fclass["folder"] and fclass[s.args.level]))
    s.say(verbalize_flags(fclass))

def _fold2loop(s: Session) -> None:
    F = formats.parse_folder(s.read(s.args.folder))
    L = folder_to_loop(F)
    s.header()
    s.emit({"order": L.n, "table": L.tolist()})
    if s.args.emit_loop:
        Path(s.args.emit_loop).write_text(formats.write_loop(L), encoding="utf-8")

def _load_config(path: Optional[str]) -> Optional[Dict[str, int]]:
    if path is None:
        return None
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise InputError(f"Cannot read lemma config '{path}': {e}") from e

def _lemmas(s: Session) -> None:
    F = formats.parse_folder(s.read(s.args.folder))
    config = _load_config(s.args.config)
    try:
        get_activated_lemmas(config, s.args.suite)
    except KeyError as e:
        raise InputError(e.args[0], {"config": s.args.config}) from e
    s.header()
    reports = lemma_suite(F, s.args.suite, config)
    for report in reports:
        s.emit(report.to_dict())
    s.fail_if(bool(failed(reports)))
    s.say(Verbalizer(reports_to_frame(reports)).lines(only_failures=not s.args.verbose))

def _heiss(s: Session) -> None:
    F = formats.parse_folder(s.read(s.args.folder))
    N = None
    if s.args.normal:
        s.read(s.args.normal)
        N = formats.read_subgroup(s.args.normal, F.G)
    data = heiss_decomposition(F, N)
    s.header()
    s.emit(heiss_record(data))
    s.fail_if(not data.holds)

def _qclass(s: Session) -> None:
    if (s.args.q is None) == (s.args.sieve is None):
        raise InputError("Give either q or --sieve")
    try:
        classes = [classify_q(s.args.q, s.args.reading)] if s.args.q is not None else sieve_q(s.args.sieve, s.args.reading)
    except ValueError as e:
        raise InputError(str(e), {"q": s.args.q}) from e
    s.header()
    for qclass in classes:
        s.emit(qclass_record(qclass))
    if s.args.sieve is not None:
        s.emit({"admitted": [c.q for c in classes if c.admitted], "reading": s.args.reading})

def _theorem1(s: Session) -> None:
    F = formats.parse_folder(s.read(s.args.folder))
    report = check_theorem1_shape(F)
    s.header()
    s.emit(report.to_dict())
    s.fail_if(report.applicable and not report.passed)

def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out

def _enumerate(s: Session) -> None:
    constraints = {name for name in ("bol", "aip", "exponent2", "ar") if getattr(s.args, name)}
    spec = EnumSpec(s.args.order, frozenset(constraints), s.args.canonical, s.args.reverse)
    loops = enumerate_loops(spec, s.args.workers)
    out = _out_dir(s.args.out)
    s.header()
    with open(out / "summary.ndjson", "w", encoding="utf-8", newline="\n") as fout:
        summary = NdjsonWriter(fout)
        for i, L in enumerate(loops):
            name = f"loop_{i:05d}.loop"
            (out / name).write_text(formats.write_loop(L), encoding="utf-8")
            summary.write({"file": name, "order": L.n, "group": is_group(L).holds})
    s.emit({"order": spec.order, "constraints": sorted(constraints), "canonical": spec.canonicalize, "count": len(loops)})

def _write_folders(s: Session, folders, out: Path) -> int:
    count = 0
    with open(out / "summary.ndjson", "w", encoding="utf-8", newline="\n") as fout:
        summary = NdjsonWriter(fout)
        for F in folders:
            name = f"folder_{count:05d}.folder"
            (out / name).write_text(formats.write_folder(F), encoding="utf-8")
            fclass = classify_folder(F)
            summary.write({"file": name, "H_order": F.H.order, "K_size": len(F.K),
                           "flags": {flag: fclass[flag] for flag in FLAG_ORDER}})
            count += 1
    return count

def _search_a(s: Session) -> None:
    G = formats.parse_group(s.read(s.args.group))
    out = _out_dir(s.args.out)
    s.header()
    s.emit({"group_order": G.order, "count": _write_folders(s, search_hypothesis_a(G), out)})

def _search_folder(s: Session) -> None:
    G = formats.parse_group(s.read(s.args.group))
    s.read(s.args.h)
    H = formats.read_subgroup(s.args.h, G)
    out = _out_dir(s.args.out)
    s.header()
    s.emit({"group_order": G.order, "H_order": H.order, "count": _write_folders(s, search_folders(G, H, s.args.bx2p), out)})


# ~~~ Parser ~~~

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loopforge", description="Loops, loop folders and BX2P audits")
    parser.add_argument("--timing", action="store_true", help="append a record with elapsed_ms")
    parser.add_argument("--text", action="store_true", help="print verbalized summaries to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-loop", help="check loop identities")
    p.add_argument("loop")
    p.add_argument("--identities", default="bol", help="comma separated: " + ",".join(IDENTITY_CHECKS))
    p.add_argument("--soluble", action="store_true")
    p.set_defaults(func=_check_loop)

    p = sub.add_parser("envelope", help="build the Baer envelope of a loop")
    p.add_argument("loop")
    p.add_argument("--emit-folder")
    p.set_defaults(func=_envelope)

    p = sub.add_parser("check-folder", help="classify a loop folder")
    p.add_argument("folder")
    p.add_argument("--level", choices=LEVELS, default="folder")
    p.set_defaults(func=_check_folder)

    p = sub.add_parser("fold2loop", help="rebuild the loop of a folder")
    p.add_argument("folder")
    p.add_argument("--emit-loop")
    p.set_defaults(func=_fold2loop)

    p = sub.add_parser("lemmas", help="run the lemma audit suite on a folder")
    p.add_argument("folder")
    p.add_argument("--suite", choices=("section3", "all"), default="section3")
    p.add_argument("--config", help="JSON file mapping lemma ids to 1 or 0")
    p.add_argument("--verbose", action="store_true", help="with --text, verbalize every report")
    p.set_defaults(func=_lemmas)

    p = sub.add_parser("heiss", help="Heiss decomposition of a BX2P folder")
    p.add_argument("folder")
    p.add_argument("--normal", help="group file of a normal subgroup containing O_2(G)")
    p.set_defaults(func=_heiss)

    p = sub.add_parser("qclass", help="classify field sizes q")
    p.add_argument("q", nargs="?", type=int)
    p.add_argument("--sieve", type=int, metavar="MAX")
    p.add_argument("--reading", choices=("prime_power", "literal"), default="prime_power")
    p.set_defaults(func=_qclass)

    p = sub.add_parser("theorem1", help="check the structure of a BX2P envelope")
    p.add_argument("folder")
    p.set_defaults(func=_theorem1)

    p = sub.add_parser("enumerate", help="enumerate loops of a given order")
    p.add_argument("--order", type=int, required=True)
    for name in ("bol", "aip", "exponent2", "ar", "canonical", "reverse"):
        p.add_argument(f"--{name}", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_enumerate)

    p = sub.add_parser("search-a", help="search Hypothesis (A) folders in a group")
    p.add_argument("group")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_search_a)

    p = sub.add_parser("search-folder", help="search loop folders (G, H, K) for given G and H")
    p.add_argument("group")
    p.add_argument("--h", required=True, help="group file of the subgroup H")
    p.add_argument("--bx2p", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_search_folder)
    return parser

def _configure_logging() -> None:
    level = os.environ.get("LOOPFORGE_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="loopforge: %(levelname)s %(name)s: %(message)s")

def main(argv: Optional[Sequence[str]] = None, stream=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    session = Session(args, sys.stdout if stream is None else stream)
    start = time.perf_counter()
    try:
        args.func(session)
        code = EXIT_OK if session.ok else EXIT_FAILED
    except InputError as e:
        logger.error("%s", e)
        session.emit({"error": type(e).__name__, "message": str(e), "witness": e.witness})
        code = EXIT_INPUT
    except CapacityError as e:
        logger.error("%s", e)
        session.emit({"error": type(e).__name__, "message": str(e), "witness": e.witness})
        code = EXIT_CAP
    except LoopforgeError as e:
        logger.error("%s", e)
        session.emit({"error": type(e).__name__, "message": str(e), "witness": e.witness})
        code = EXIT_FAILED
    if args.timing:
        session.emit({"elapsed_ms": round((time.perf_counter() - start) * 1000, 3)})
    return code


if __name__ == "__main__":
    sys.exit(main())
