"""Joint segmentation and conversion over a mapping lattice.

A path through the lattice fixes both the SC tokenization and, per token,
a list of TC candidates. A path is scored as

    sc_weight * log p_SC(sc tokens) + tc_weight * A(path)

where ``A`` aggregates the TC-LM scores of the hypotheses that survive a
left-to-right beam over the candidates (log-sum-exp by default, or max).
The best path is then read out by running the same beam and taking its
top hypothesis.
"""
from __future__ import annotations

import itertools
import math
import unicodedata
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .mapping import ConversionLattice, MappingEntry, MappingTable, build_lattice
from .segment import max_match

__all__ = [
    "ConvertConfig",
    "MappingSequence",
    "TcHypothesis",
    "beam_search_tc",
    "best_mapping_sequence",
    "convert",
    "convert_batch",
    "convert_stream",
    "logsumexp",
    "max_match_convert",
    "score_mapping_sequence",
    "tc_beam",
]

AGGREGATIONS = ("logsumexp", "max")


@dataclass(frozen=True)
class ConvertConfig:
    beam_width: int = 8
    tc_aggregation: str = "logsumexp"
    sc_weight: float = 1.0
    tc_weight: float = 1.0

    def __post_init__(self):
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if self.tc_aggregation not in AGGREGATIONS:
            raise ValueError(f"tc_aggregation must be one of {AGGREGATIONS}")
        if self.sc_weight < 0 or self.tc_weight < 0:
            raise ValueError("weights must be non-negative")


DEFAULT_CONFIG = ConvertConfig()


@dataclass(frozen=True)
class TcHypothesis:
    chosen: tuple[str, ...]
    choice: tuple[int, ...]  # candidate index per mapping, the tie-breaker
    score: float
    state: tuple = field(default=(), compare=False, repr=False)

    @property
    def text(self) -> str:
        return "".join(self.chosen)


@dataclass(frozen=True)
class MappingSequence:
    path: tuple[MappingEntry, ...]
    joint_score: float

    @property
    def sc_tokens(self) -> tuple[str, ...]:
        return tuple(e.sc for e in self.path)

    @property
    def boundaries(self) -> tuple[int, ...]:
        out, pos = [], 0
        for e in self.path:
            pos += len(e.sc)
            out.append(pos)
        return tuple(out)


def logsumexp(values: Iterable[float]) -> float:
    """Order-independent log-sum-exp (``math.fsum`` is exactly rounded)."""
    values = list(values)
    top = max(values)
    if top == -math.inf:
        return top
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


def _aggregate(scores: Sequence[float], how: str) -> float:
    return logsumexp(scores) if how == "logsumexp" else max(scores)


def _rank(hyps: list[TcHypothesis]) -> list[TcHypothesis]:
    return sorted(hyps, key=lambda h: (-h.score, h.choice))


def _extend(beam: Sequence[TcHypothesis], entry: MappingEntry, tc_lm, width: int) -> tuple[TcHypothesis, ...]:
    grown = []
    for hyp in beam:
        for idx, cand in enumerate(entry.tc_candidates):
            lp, state = tc_lm.score(hyp.state, cand)
            grown.append(TcHypothesis(hyp.chosen + (cand,), hyp.choice + (idx,), hyp.score + lp, state))
    return tuple(_rank(grown)[:width])


def _finish(beam: Sequence[TcHypothesis], tc_lm) -> list[TcHypothesis]:
    return _rank([TcHypothesis(h.chosen, h.choice, h.score + tc_lm.end_score(h.state), h.state) for h in beam])


def _entries(path) -> tuple[MappingEntry, ...]:
    return path.path if isinstance(path, MappingSequence) else tuple(path)


def tc_beam(path, tc_lm, beam_width: int) -> list[TcHypothesis]:
    """Complete TC hypotheses for a path, best first, EOS included."""
    beam: Sequence[TcHypothesis] = (TcHypothesis((), (), 0.0, tc_lm.initial_state()),)
    for entry in _entries(path):
        beam = _extend(beam, entry, tc_lm, beam_width)
    return _finish(beam, tc_lm)


def beam_search_tc(path, tc_lm, config: ConvertConfig = DEFAULT_CONFIG) -> str:
    return tc_beam(path, tc_lm, config.beam_width)[0].text


def score_mapping_sequence(path, sc_lm, tc_lm, config: ConvertConfig = DEFAULT_CONFIG) -> float:
    entries = _entries(path)
    sc = sc_lm.log_prob([e.sc for e in entries], eos=True)
    beam = tc_beam(entries, tc_lm, config.beam_width)
    return config.sc_weight * sc + config.tc_weight * _aggregate([h.score for h in beam], config.tc_aggregation)


class _Partial:
    __slots__ = ("sc_state", "sc_score", "beam", "entries", "bounds", "score")

    def __init__(self, sc_state, sc_score, beam, entries, bounds, score):
        self.sc_state = sc_state
        self.sc_score = sc_score
        self.beam = beam
        self.entries = entries
        self.bounds = bounds
        self.score = score

    def key(self, config):
        # Two partial paths with equal keys evolve identically from here on,
        # up to a constant offset, so only the better one needs to survive.
        sc_part = self.sc_state if config.sc_weight else None
        if not config.tc_weight:
            return sc_part, None
        top = self.beam[0].score
        return sc_part, tuple((h.state, h.score - top) for h in self.beam)

    def sort_key(self):
        return -self.score, self.bounds


def best_mapping_sequence(lattice: ConversionLattice, sc_lm, tc_lm, config: ConvertConfig = DEFAULT_CONFIG) -> MappingSequence:
    """Best path by a trellis of partial paths over lattice boundaries.

    Each boundary keeps at most ``beam_width`` partial paths after merging
    those with identical futures. When nothing is pruned the search is
    exhaustive, so it returns the true arg-max of
    :func:`score_mapping_sequence`.
    """
    n = lattice.length
    alpha, beta, width, how = config.sc_weight, config.tc_weight, config.beam_width, config.tc_aggregation
    start_beam = (TcHypothesis((), (), 0.0, tc_lm.initial_state()),)
    chart: list[dict] = [dict() for _ in range(n + 1)]
    chart[0][None] = _Partial(sc_lm.initial_state(), 0.0, start_beam, (), (), 0.0)
    for j in range(n):
        partials = sorted(chart[j].values(), key=_Partial.sort_key)[:width]
        chart[j] = {}
        for end, entry in lattice.edges[j]:
            target = chart[end]
            for part in partials:
                lp, sc_state = sc_lm.score(part.sc_state, entry.sc)
                sc_score = part.sc_score + lp
                beam = _extend(part.beam, entry, tc_lm, width)
                score = alpha * sc_score + beta * _aggregate([h.score for h in beam], how)
                cand = _Partial(sc_state, sc_score, beam, part.entries + (entry,), part.bounds + (end,), score)
                key = cand.key(config)
                old = target.get(key)
                if old is None or cand.sort_key() < old.sort_key():
                    target[key] = cand
    best = None
    for part in chart[n].values():
        sc_total = part.sc_score + sc_lm.end_score(part.sc_state)
        final = _finish(part.beam, tc_lm)
        total = alpha * sc_total + beta * _aggregate([h.score for h in final], how)
        if best is None or (-total, part.bounds) < (-best[0], best[1].bounds):
            best = (total, part)
    return MappingSequence(best[1].entries, best[0])


def _normalize(sentence: str) -> str:
    return unicodedata.normalize("NFC", sentence)


def convert(sentence: str, table: MappingTable, sc_lm, tc_lm, config: ConvertConfig = DEFAULT_CONFIG) -> str:
    """SC sentence to TC: lattice, best mapping sequence, then TC beam search."""
    sentence = _normalize(sentence)
    if not sentence:
        return ""
    path = best_mapping_sequence(build_lattice(sentence, table), sc_lm, tc_lm, config)
    return beam_search_tc(path, tc_lm, config)


_worker_args = None


def _init_worker(args):
    global _worker_args
    _worker_args = args


def _convert_one(sentence):
    return convert(sentence, *_worker_args)


def convert_batch(
    sentences: Sequence[str],
    table: MappingTable,
    sc_lm,
    tc_lm,
    config: ConvertConfig = DEFAULT_CONFIG,
    jobs: int = 1,
) -> list[str]:
    """Element-wise :func:`convert`; ``jobs > 1`` fans out over processes, order kept."""
    sentences = list(sentences)
    if jobs <= 1 or len(sentences) < 2:
        return [convert(s, table, sc_lm, tc_lm, config) for s in sentences]
    args = (table, sc_lm, tc_lm, config)
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(args,)) as pool:
        return list(pool.map(_convert_one, sentences, chunksize=max(1, len(sentences) // (4 * jobs))))


def convert_stream(
    lines: Iterable[str],
    table: MappingTable,
    sc_lm,
    tc_lm,
    config: ConvertConfig = DEFAULT_CONFIG,
    jobs: int = 1,
    chunk: int = 64,
) -> Iterator[str]:
    """Lazy :func:`convert` over a line stream; at most ``chunk * jobs`` lines in flight."""
    if jobs <= 1:
        for line in lines:
            yield convert(line, table, sc_lm, tc_lm, config)
        return
    args = (table, sc_lm, tc_lm, config)
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(args,)) as pool:
        it = iter(lines)
        while True:
            block = list(itertools.islice(it, chunk * jobs))
            if not block:
                return
            yield from pool.map(_convert_one, block, chunksize=chunk)


def max_match_convert(sentence: str, table: MappingTable) -> str:
    """Dictionary-converter baseline: greedy longest match, first candidate of each token."""
    out = []
    for tok in max_match(_normalize(sentence), table).tokens:
        entry = table.get(tok)
        out.append(entry.default if entry else tok)
    return "".join(out)
