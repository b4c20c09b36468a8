import pandas as pd
from typing import Dict, List

from .baer import FolderClass


class Verbalizer:
    """
    Turns a frame of lemma reports (see report.reports_to_frame) into one sentence per report
    """

    def __init__(self, reports_df: pd.DataFrame, subject: str = "folder"):
        self.reports_df = reports_df
        self.subject = subject

    def _witness_text(self, witness: Dict) -> str:
        if not witness:
            return ""
        parts = [f"{key}={value}" for key, value in witness.items()]
        return " (" + ", ".join(parts) + ")"

    def _template(self, lemma: str, applicable: bool, passed, witness: Dict) -> str:
        if not applicable:
            reason = witness.get("reason") or witness.get("skipped") or "hypotheses fail"
            return f"Lemma '{lemma}' does not apply to this {self.subject}: {reason}"
        if passed:
            return f"This {self.subject} satisfies lemma '{lemma}'"
        return f"This {self.subject} fails lemma '{lemma}'{self._witness_text(witness)}"

    def verbalize(self, only_failures: bool = False) -> pd.DataFrame:
        """
        Returns
        ------
            - pd.DataFrame - the lemma, whether it applied and passed, and its verbalized form
        """
        df = self.reports_df
        if only_failures:
            df = df.loc[df["applicable"] & ~df["pass"].fillna(False).astype(bool)]
        sentences = [self._template(row["lemma"], bool(row["applicable"]), row["pass"], row["witness"] or {})
                     for _, row in df.iterrows()]
        return pd.DataFrame({
            "lemma": df["lemma"].to_list(),
            "applicable": df["applicable"].to_list(),
            "pass": df["pass"].to_list(),
            "verbalized": sentences,
        })

    def lines(self, only_failures: bool = False) -> List[str]:
        return self.verbalize(only_failures)["verbalized"].to_list()


def verbalize_flags(fclass: FolderClass, subject: str = "folder") -> List[str]:
    """One sentence per classification flag"""
    lines = []
    for name, entry in fclass.to_dict().items():
        if entry["holds"]:
            lines.append(f"This {subject} is {_FLAG_NAMES[name]}")
        else:
            witness = entry["witness"] or {}
            detail = " (" + ", ".join(f"{k}={v}" for k, v in witness.items()) + ")" if witness else ""
            lines.append(f"This {subject} is not {_FLAG_NAMES[name]}{detail}")
    return lines

_FLAG_NAMES = {
    "folder": "a loop folder",
    "faithful": "faithful",
    "envelope": "an envelope",
    "bol": "a Bol folder",
    "ar": "an A_r-folder",
    "bruck": "a Bruck folder",
    "bx2p": "a BX2P-folder",
}
