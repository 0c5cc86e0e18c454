"""Conversion metrics and token-distribution analysis."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .kernels import edit_distance
from .mapping import MappingTable

__all__ = [
    "EvalAccumulator",
    "EvalReport",
    "TokenStats",
    "count_ambiguous",
    "edit_distance",
    "evaluate",
    "format_report",
    "zipf_slope",
]


@dataclass(frozen=True)
class EvalReport:
    """Disambiguation error density and sentence accuracy.

    ``ded`` is total character edit distance per 1000 ambiguous source
    characters; ``sa`` is the percentage of sentences reproduced exactly.
    A source side with no ambiguous characters reports ``ded = 0`` and
    ``ded_defined = False``.
    """

    ded: float
    sa: float
    total_edit_distance: int
    total_ambiguous_chars: int
    sentence_count: int
    correct_sentence_count: int
    ded_defined: bool = True
    ambiguity_side: str = "source"


def count_ambiguous(text: str, table: MappingTable) -> int:
    return sum(1 for ch in text if table.is_ambiguous(ch))


class EvalAccumulator:
    """Running sums behind :class:`EvalReport`, for line-by-line evaluation."""

    def __init__(self, table: MappingTable):
        self.table = table
        self.distance = 0
        self.ambiguous = 0
        self.sentences = 0
        self.correct = 0

    def add(self, prediction: str, reference: str, source: str) -> int:
        d = edit_distance(prediction, reference)
        self.distance += d
        self.ambiguous += count_ambiguous(source, self.table)
        self.sentences += 1
        self.correct += d == 0
        return d

    def report(self) -> EvalReport:
        return EvalReport(
            ded=self.distance / self.ambiguous * 1000 if self.ambiguous else 0.0,
            sa=self.correct / self.sentences * 100 if self.sentences else 0.0,
            total_edit_distance=self.distance,
            total_ambiguous_chars=self.ambiguous,
            sentence_count=self.sentences,
            correct_sentence_count=self.correct,
            ded_defined=self.ambiguous > 0,
        )


def evaluate(
    predictions: Sequence[str],
    references: Sequence[str],
    sources: Sequence[str],
    table: MappingTable,
) -> EvalReport:
    if not len(predictions) == len(references) == len(sources):
        raise ValueError(
            f"length mismatch: {len(predictions)} predictions, {len(references)} references, {len(sources)} sources"
        )
    acc = EvalAccumulator(table)
    for pred, ref, src in zip(predictions, references, sources):
        acc.add(pred, ref, src)
    return acc.report()


def format_report(report) -> str:
    """``key: value`` lines, one per field."""
    lines = []
    for key, value in asdict(report).items():
        if isinstance(value, (list, tuple)):
            continue
        if isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TokenStats:
    """Frequency-ranked counts and the fitted Zipf slope magnitude."""

    ranked: tuple[tuple[str, int], ...]
    slope: float
    fit_range: int
    distinct_tokens: int
    total_tokens: int


def zipf_slope(tokens_or_counts: Iterable[str] | Mapping[str, int], top_k: int = 10000) -> TokenStats:
    """Least-squares slope of log frequency on log rank, reported as a magnitude.

    Counts are ranked by descending frequency (ties by token). Frequencies
    enter the fit as ratios to the top count, which keeps the slope exactly
    invariant under integer rescaling of all counts.
    """
    counts = Counter(tokens_or_counts)
    ranked = sorted(((t, c) for t, c in counts.items() if c > 0), key=lambda tc: (-tc[1], tc[0]))
    if len(ranked) < 2:
        raise ValueError("need at least 2 distinct tokens")
    k = min(top_k, len(ranked))
    top = ranked[0][1]
    x = np.log(np.arange(1, k + 1, dtype=float))
    y = np.array([math.log(c / top) for _, c in ranked[:k]])
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    return TokenStats(
        ranked=tuple(ranked),
        slope=abs(slope),
        fit_range=k,
        distinct_tokens=len(ranked),
        total_tokens=sum(c for _, c in ranked),
    )
