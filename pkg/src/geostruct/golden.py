"""Golden component tables: parsing, lookup of shipped files and verification.

File format, one entry per line::

    name indices expression [suspect [computed=<expression>]]

``#`` starts a comment.  Indices are 1-based digits (``_`` for scalars) and
expressions use the DSL without spaces.  Entries marked ``suspect`` are known
transcription disagreements; their mismatches are reported but not fatal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .expr import Expr, to_dsl
from .parser import ExprSyntaxError, parse_expr


class GoldenFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GoldenEntry:
    name: str
    indices: Tuple[int, ...]
    expected: Expr
    suspect: bool
    line: int
    recorded_computed: Optional[str] = None

    @property
    def label(self) -> str:
        return f"{self.name} {''.join(str(i + 1) for i in self.indices) or '_'}"


@dataclass
class GoldenDiff:
    entry: GoldenEntry
    computed: Expr

    def to_dict(self) -> dict:
        return {
            "entry": self.entry.label,
            "line": self.entry.line,
            "expected": to_dsl(self.entry.expected, compact=True),
            "computed": to_dsl(self.computed, compact=True),
            "suspect": self.entry.suspect,
        }


@dataclass
class GoldenResult:
    total: int = 0
    matched: int = 0
    diffs: List[GoldenDiff] = field(default_factory=list)
    suspect_matched: List[GoldenEntry] = field(default_factory=list)

    @property
    def hard_diffs(self) -> List[GoldenDiff]:
        return [d for d in self.diffs if not d.entry.suspect]

    @property
    def suspect_diffs(self) -> List[GoldenDiff]:
        return [d for d in self.diffs if d.entry.suspect]

    @property
    def ok(self) -> bool:
        return not self.hard_diffs

    @property
    def match_fraction(self) -> float:
        return self.matched / self.total if self.total else 1.0

    def to_dict(self) -> dict:
        return {
            "entries": self.total,
            "matched": self.matched,
            "suspect_mismatches": len(self.suspect_diffs),
            "hard_mismatches": len(self.hard_diffs),
            "diffs": [d.to_dict() for d in self.diffs],
        }


def parse_golden(text: str, symbols: Sequence[str] = ("a", "b")) -> List[GoldenEntry]:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 3:
            raise GoldenFormatError(f"line {lineno}: expected 'name indices expression'")
        name, idx, expr_text, *rest = parts
        if idx == "_":
            indices: Tuple[int, ...] = ()
        elif idx.isdigit() and "0" not in idx:
            indices = tuple(int(c) - 1 for c in idx)
        else:
            raise GoldenFormatError(f"line {lineno}: bad index string {idx!r}")
        suspect = False
        recorded = None
        for token in rest:
            if token == "suspect":
                suspect = True
            elif token.startswith("computed=") and suspect:
                recorded = token[len("computed="):]
            else:
                raise GoldenFormatError(f"line {lineno}: unexpected trailing token {token!r}")
        try:
            expected = parse_expr(expr_text, symbols)
        except ExprSyntaxError as exc:
            raise GoldenFormatError(f"line {lineno}: {exc}") from exc
        entries.append(GoldenEntry(name, indices, expected, suspect, lineno, recorded))
    return entries


def load_golden(path: str | Path, symbols: Sequence[str] = ("a", "b")) -> List[GoldenEntry]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GoldenFormatError(f"cannot read golden file: {exc}") from exc
    return parse_golden(text, symbols)


def shipped_golden_name(preset: str, epsilon: int) -> str:
    return f"{preset}_eps{'+1' if epsilon > 0 else '-1'}.golden"


def shipped_golden_text(preset: str, epsilon: int) -> str:
    res = resources.files("geostruct").joinpath("data", "golden", shipped_golden_name(preset, epsilon))
    if not res.is_file():
        raise GoldenFormatError(f"no shipped golden table for {preset} epsilon {epsilon}")
    return res.read_text(encoding="utf-8")


def verify_golden(pipeline, entries: Sequence[GoldenEntry]) -> GoldenResult:
    result = GoldenResult()
    for entry in entries:
        try:
            computed = pipeline.lookup(entry.name, entry.indices)
        except (KeyError, IndexError, ValueError) as exc:
            raise GoldenFormatError(f"line {entry.line}: unknown component {entry.label}") from exc
        result.total += 1
        if computed == entry.expected:
            result.matched += 1
            if entry.suspect:
                result.suspect_matched.append(entry)
        else:
            result.diffs.append(GoldenDiff(entry, computed))
    return result
