"""Tokenizers for unsegmented Chinese text.

All LM-scored methods search over segmentations whose tokens are
dictionary words or single characters, scoring ``lm.log_prob(tokens,
eos=True)``. Exact score ties are broken by the boundary sequence: the
lexicographically smaller one (earlier first boundary) wins.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterator

from .mapping import MappingTable
from .trie import WordTrie

__all__ = [
    "DEFAULT_MAX_STATES",
    "Segmentation",
    "SentenceTooLongError",
    "as_dictionary",
    "enumerate_segmentations",
    "load_dictionary",
    "max_match",
    "nbest_segmentations",
    "viterbi_segment",
]

DEFAULT_MAX_STATES = 8
# A* keeps popping while the frontier is within this of the n-th score so
# that ties (up to float noise) are all seen before the final sort.
_TIE_EPS = 1e-9


class SentenceTooLongError(ValueError):
    pass


@dataclass(frozen=True)
class Segmentation:
    tokens: tuple[str, ...]
    score: float | None = None

    @property
    def boundaries(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate(len(t) for t in self.tokens))

    def __str__(self):
        return "|".join(self.tokens)


def as_dictionary(words) -> WordTrie:
    """Coerce a table, a trie or an iterable of words into a :class:`WordTrie`."""
    if isinstance(words, WordTrie):
        return words
    if isinstance(words, MappingTable):
        return words.trie
    return WordTrie.from_words(w for w in words if w)


def load_dictionary(path) -> WordTrie:
    """Read a word-per-line file, or the keys of a mapping table (lines with a tab)."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n").rstrip("\r")
            if not line or line.startswith("#"):
                continue
            words.append(line.split("\t", 1)[0])
    return WordTrie.from_words(words)


def _spans(sentence: str, start: int, trie: WordTrie) -> list[int]:
    """End positions of candidate tokens starting at ``start``, ascending."""
    ends = [end for end, _ in trie.prefixes(sentence, start)]
    if not ends or ends[0] != start + 1:
        ends.insert(0, start + 1)
    return ends


def max_match(sentence: str, dictionary) -> Segmentation:
    """Greedy left-to-right longest match; unmatched characters become single tokens."""
    trie = as_dictionary(dictionary)
    tokens = []
    i = 0
    while i < len(sentence):
        hit = trie.longest_prefix(sentence, i)
        end = hit[0] if hit else i + 1
        tokens.append(sentence[i:end])
        i = end
    return Segmentation(tuple(tokens))


class _Cell:
    __slots__ = ("score", "bounds", "back")

    def __init__(self, score, bounds, back):
        self.score = score
        self.bounds = bounds
        self.back = back  # (prev_pos, prev_state, token) or None

    def beats(self, score, bounds):
        return self.score > score or (self.score == score and self.bounds < bounds)


def _forward(sentence, lm, trie, max_states, keep_incoming=False):
    """Viterbi trellis keyed by (boundary, LM state).

    Returns ``(chart, incoming)``: ``chart[j]`` maps surviving states to
    their best cell; ``incoming[j][state]`` lists every arc into that node
    (only when ``keep_incoming``).
    """
    n = len(sentence)
    chart: list[dict] = [dict() for _ in range(n + 1)]
    incoming: list[dict] = [dict() for _ in range(n + 1)] if keep_incoming else []
    chart[0][lm.initial_state()] = _Cell(0.0, (), None)
    for j in range(n):
        cells = chart[j]
        if not cells:
            continue
        if max_states is not None and len(cells) > max_states:
            ranked = sorted(cells.items(), key=lambda kv: (-kv[1].score, kv[1].bounds))
            cells = chart[j] = dict(ranked[:max_states])
        for end in _spans(sentence, j, trie):
            token = sentence[j:end]
            target = chart[end]
            for state, cell in cells.items():
                lp, nxt = lm.score(state, token)
                score = cell.score + lp
                bounds = cell.bounds + (end,)
                old = target.get(nxt)
                if old is None or not old.beats(score, bounds):
                    target[nxt] = _Cell(score, bounds, (j, state, token))
                if keep_incoming:
                    incoming[end].setdefault(nxt, []).append((j, state, token, lp))
    return chart, incoming


def _state_limit(lm, max_states):
    # a bigram state is just the previous token: nothing to gain from pruning
    return None if lm.order <= 2 else max_states


def _backtrace(chart, pos, state):
    tokens = []
    while True:
        cell = chart[pos][state]
        if cell.back is None:
            break
        pos, state, token = cell.back
        tokens.append(token)
    return tuple(reversed(tokens))


def viterbi_segment(sentence: str, lm, dictionary, max_states: int | None = DEFAULT_MAX_STATES) -> Segmentation:
    """Highest-scoring segmentation under ``lm``.

    The trellis keeps at most ``max_states`` LM states per boundary
    (``None`` keeps all). That is exact for bigram models, whose state is
    the previous token, and for any order once ``max_states`` exceeds the
    number of live histories.
    """
    if not sentence:
        return Segmentation((), lm.log_prob((), eos=True))
    trie = as_dictionary(dictionary)
    chart, _ = _forward(sentence, lm, trie, _state_limit(lm, max_states))
    best = None
    for state, cell in chart[len(sentence)].items():
        total = cell.score + lm.end_score(state)
        if best is None or total > best[0] or (total == best[0] and cell.bounds < best[1]):
            best = (total, cell.bounds, state)
    tokens = _backtrace(chart, len(sentence), best[2])
    return Segmentation(tokens, best[0])


def nbest_segmentations(
    sentence: str, lm, dictionary, n: int, max_states: int | None = DEFAULT_MAX_STATES
) -> list[Segmentation]:
    """Top-``n`` segmentations, best first, by forward Viterbi then backward A*.

    The forward pass gives every (boundary, state) node its best prefix
    score, which is an exact heuristic for the backward search over
    suffixes, so complete hypotheses pop in score order. ``max_states``
    prunes the forward trellis exactly as in :func:`viterbi_segment`, so the
    first result is always the Viterbi segmentation.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not sentence:
        return [Segmentation((), lm.log_prob((), eos=True))]
    trie = as_dictionary(dictionary)
    chart, incoming = _forward(sentence, lm, trie, _state_limit(lm, max_states), keep_incoming=True)
    length = len(sentence)
    start = lm.initial_state()
    tick = itertools.count()
    heap = []
    for state, cell in chart[length].items():
        g = lm.end_score(state)
        heapq.heappush(heap, (-(g + cell.score), next(tick), length, state, g, ()))
    found: list[Segmentation] = []
    while heap:
        neg_f, _, pos, state, g, suffix = heapq.heappop(heap)
        if len(found) >= n and -neg_f < found[n - 1].score - _TIE_EPS:
            break
        if pos == 0:
            if state == start:
                seg = Segmentation(suffix, lm.log_prob(suffix, eos=True))
                found.append(seg)
                found.sort(key=lambda s: (-s.score, s.boundaries))
            continue
        for prev_pos, prev_state, token, lp in incoming[pos].get(state, ()):
            prev = chart[prev_pos].get(prev_state)
            if prev is None:
                continue
            g2 = g + lp
            heapq.heappush(heap, (-(g2 + prev.score), next(tick), prev_pos, prev_state, g2, (token,) + suffix))
    return found[:n]


def _compositions(sentence: str, trie: WordTrie, start: int = 0) -> Iterator[tuple[str, ...]]:
    if start == len(sentence):
        yield ()
        return
    for end in _spans(sentence, start, trie):
        head = sentence[start:end]
        for rest in _compositions(sentence, trie, end):
            yield (head,) + rest


def enumerate_segmentations(sentence: str, dictionary, max_len: int = 14, lm=None) -> list[Segmentation]:
    """Every segmentation into dictionary words or single characters.

    Brute force, meant as a reference for the search procedures above.
    Results come in lexicographic boundary order; they carry scores when
    ``lm`` is given.
    """
    if len(sentence) > max_len:
        raise SentenceTooLongError(f"sentence has {len(sentence)} characters, limit is {max_len}")
    trie = as_dictionary(dictionary)
    out = []
    for tokens in _compositions(sentence, trie):
        score = lm.log_prob(tokens, eos=True) if lm is not None else None
        out.append(Segmentation(tokens, score))
    return out

