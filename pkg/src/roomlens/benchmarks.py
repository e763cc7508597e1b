"""Benchmarks: the criteria a document is scored against.

Two flavors: the fixed 8x3 emotion matrix (eight channels, three
intensities each, plus the eight named conditions that pair adjacent
mid-intensity channels) and generic keyword benchmarks where each entry
is a label with a one-or-more-token chunk.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputError, ParseError

# Channels in fixed order; columns are low / mid / high intensity.
EMOTION_MATRIX: tuple[tuple[str, str, str], ...] = (
    ("serenity", "joy", "ecstasy"),
    ("acceptance", "trust", "admiration"),
    ("apprehension", "fear", "terror"),
    ("distraction", "surprise", "amazement"),
    ("pensiveness", "sadness", "grief"),
    ("boredom", "disgust", "loathing"),
    ("annoyance", "anger", "rage"),
    ("interest", "anticipation", "vigilance"),
)

# (first mid-intensity word, second mid-intensity word, condition name)
CONDITIONS: tuple[tuple[str, str, str], ...] = (
    ("joy", "trust", "love"),
    ("trust", "fear", "submission"),
    ("fear", "surprise", "awe"),
    ("surprise", "sadness", "disapproval"),
    ("sadness", "disgust", "remorse"),
    ("disgust", "anger", "contempt"),
    ("anger", "anticipation", "aggressiveness"),
    ("anticipation", "joy", "optimism"),
)

EMOTION_WORDS: tuple[str, ...] = tuple(w for row in EMOTION_MATRIX for w in row)
MID_WORDS: tuple[str, ...] = tuple(row[1] for row in EMOTION_MATRIX)
CONDITION_NAMES: tuple[str, ...] = tuple(name for _, _, name in CONDITIONS)

_CELL_OF = {word: (r, c) for r, row in enumerate(EMOTION_MATRIX) for c, word in enumerate(row)}


def emotion_cell(label: str) -> tuple[int, int]:
    """(row, column) of an emotion word in the matrix."""
    try:
        return _CELL_OF[label]
    except KeyError:
        raise InputError(f"unknown emotion word: {label!r}") from None


@dataclass(frozen=True)
class EmotionBenchmark:
    matrix: tuple[tuple[str, str, str], ...] = EMOTION_MATRIX
    conditions: tuple[tuple[str, str, str], ...] = CONDITIONS

    @property
    def words(self) -> tuple[str, ...]:
        """All 24 emotion words in row-major order."""
        return tuple(w for row in self.matrix for w in row)

    def condition_rows(self) -> tuple[tuple[int, int], ...]:
        """Channel-row index pairs feeding each condition."""
        mid_row = {row[1]: r for r, row in enumerate(self.matrix)}
        return tuple((mid_row[a], mid_row[b]) for a, b, _ in self.conditions)


_PLUTCHIK = EmotionBenchmark()


def plutchik() -> EmotionBenchmark:
    """The constant emotion benchmark."""
    return _PLUTCHIK


@dataclass(frozen=True)
class BenchmarkEntry:
    label: str
    chunk: tuple[str, ...]


@dataclass(frozen=True)
class Benchmark:
    """Ordered labelled keyword/chunk list for generic scoring."""

    entries: tuple[BenchmarkEntry, ...]

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            if entry.label in seen:
                raise InputError(f"duplicate benchmark label {entry.label!r}")
            seen.add(entry.label)
            if not entry.chunk:
                raise InputError(f"benchmark entry {entry.label!r} has an empty chunk")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.entries)


def load_benchmark(path) -> Benchmark:
    """Parse a benchmark file: one `label: token [token ...]` per line.

    Lines starting with '#' are comments; blank lines are skipped.
    """
    path = Path(path)
    entries: list[BenchmarkEntry] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            if ":" not in line:
                raise ParseError(path, lineno, f"missing ':' separator in {line!r}")
            label, _, rest = line.partition(":")
            label = label.strip()
            if not label:
                raise ParseError(path, lineno, "empty label")
            if label in seen:
                raise ParseError(path, lineno, f"duplicate label {label!r}")
            seen.add(label)
            chunk = tuple(rest.split())
            if not chunk:
                raise ParseError(path, lineno, f"empty chunk for label {label!r}")
            entries.append(BenchmarkEntry(label, chunk))
    if not entries:
        raise ParseError(path, None, "no benchmark entries")
    return Benchmark(tuple(entries))
