"""Source text handling: normalization and ASCII-to-Unicode substitution.

A SourceFile is the single text model the whole pipeline (and the
playground editor) operates on: NFC-normalized, newline-canonical, with
precomputed line starts for span-to-position mapping.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from importlib import resources

from .errors import err


@dataclass(frozen=True)
class SourceFile:
    text: str
    line_starts: tuple[int, ...]
    path: str = "<input>"

    def position(self, offset: int) -> tuple[int, int]:
        """Map a character offset to a 1-based (line, column) pair."""
        lo, hi = 0, len(self.line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.line_starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, offset - self.line_starts[lo] + 1


def normalize(raw_text: str | bytes, path: str = "<input>") -> SourceFile:
    """Build a SourceFile: decode, NFC-normalize, canonicalize newlines."""
    if isinstance(raw_text, bytes):
        try:
            raw_text = raw_text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise err("E_ENCODING", f"not valid UTF-8: {exc}") from None
    text = unicodedata.normalize("NFC", raw_text)
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)
    return SourceFile(text=text, line_starts=tuple(starts), path=path)


class SubstitutionTable:
    """Ordered trigger -> replacement map, matched longest-trigger-first.

    The published default table contains the pair \\in / \\int, so triggers
    are not prefix-free; longest-match keeps scanning unambiguous anyway.
    Replacements never contain triggers, which makes application idempotent.
    """

    def __init__(self, entries: dict[str, str], version: int = 1):
        self.version = version
        self.entries = dict(entries)
        self._ordered = sorted(self.entries, key=len, reverse=True)
        for trigger, replacement in self.entries.items():
            for other in self.entries:
                if other in replacement:
                    raise ValueError(
                        f"replacement for {trigger!r} contains trigger {other!r}"
                    )

    @classmethod
    def from_json(cls, text: str) -> "SubstitutionTable":
        doc = json.loads(text)
        return cls(doc["entries"], version=doc.get("version", 1))

    def to_json(self) -> str:
        return json.dumps(
            {"version": self.version, "entries": self.entries},
            ensure_ascii=False,
            indent=2,
        )


def default_table() -> SubstitutionTable:
    data = resources.files("lina.data").joinpath("substitutions.json").read_text("utf-8")
    return SubstitutionTable.from_json(data)


def substitute_ascii(text: str, table: SubstitutionTable | None = None) -> str:
    """Replace every trigger occurrence, longest match first, left to right.

    Backtick-quoted spans are copied through untouched so quoted names such
    as `w_smoothness` keep their literal spelling.
    """
    if table is None:
        table = default_table()
    out: list[str] = []
    i = 0
    n = len(text)
    in_backticks = False
    while i < n:
        ch = text[i]
        if ch == "`":
            in_backticks = not in_backticks
            out.append(ch)
            i += 1
            continue
        if not in_backticks:
            for trigger in table._ordered:
                if text.startswith(trigger, i):
                    out.append(table.entries[trigger])
                    i += len(trigger)
                    break
            else:
                out.append(ch)
                i += 1
            continue
        out.append(ch)
        i += 1
    return "".join(out)
