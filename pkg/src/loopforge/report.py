"""
NDJSON reports: one JSON object per line, UTF-8, LF line endings and a fixed key order, so
identical inputs give identical bytes.
"""

import json
from typing import Any, Dict, Iterable, List, TextIO

import numpy as np
import pandas as pd

from .baer import FolderClass
from .bx2p import HeissData, LemmaReport, QClass
from .loopcore import Verdict

LEMMA_COLUMNS = ["lemma", "applicable", "pass", "witness"]


def _default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    return str(value)

def dumps(record: Dict) -> str:
    return json.dumps(record, ensure_ascii=False, default=_default)

def verdict_record(verdict: Verdict) -> Dict:
    return {"check": verdict.name, "pass": verdict.holds, "witness": verdict.witness}

def folder_class_record(fclass: FolderClass) -> Dict:
    return {"flags": fclass.to_dict()}

def heiss_record(data: HeissData) -> Dict:
    return {"heiss": data.to_dict()}

def qclass_record(qclass: QClass) -> Dict:
    return qclass.to_dict()


class NdjsonWriter:
    """Writes records to a text stream, one per line"""

    def __init__(self, stream: TextIO):
        self.stream = stream
        self.count = 0

    def write(self, record: Dict) -> None:
        self.stream.write(dumps(record) + "\n")
        self.count += 1

    def write_all(self, records: Iterable[Dict]) -> None:
        for record in records:
            self.write(record)


def reports_to_frame(reports: List[LemmaReport]) -> pd.DataFrame:
    """One row per lemma report"""
    return pd.DataFrame([r.to_dict() for r in reports], columns=LEMMA_COLUMNS)
