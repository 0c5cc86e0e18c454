"""Training-corpus augmentation.

Two rewrites make a count-based LM see what a per-epoch sampled neural LM
would: sentences cut into random contiguous pieces (so inner spans also
occur at line starts), and raw text re-segmented by sampling from the LM's
n-best list. :func:`augment_corpus` concatenates independently sampled
copies of a corpus, one per "epoch".
"""
from __future__ import annotations

import math
import random
from typing import Sequence

from .segment import DEFAULT_MAX_STATES, nbest_segmentations

__all__ = ["augment_corpus", "sample_segmentation", "sample_subsequences", "split_at"]


def split_at(sentence: Sequence[str], points: Sequence[int]) -> list[list[str]]:
    """Cut ``sentence`` before each index in ``points`` (strictly inside, ascending)."""
    pieces, prev = [], 0
    for p in points:
        if not prev < p < len(sentence):
            raise ValueError(f"split point {p} out of range")
        pieces.append(list(sentence[prev:p]))
        prev = p
    pieces.append(list(sentence[prev:]))
    return pieces


def sample_subsequences(sentence: Sequence[str], rng: random.Random, num_splits: int = 1) -> list[list[str]]:
    """Partition into contiguous pieces at ``num_splits`` uniformly drawn inner points.

    Asking for more splits than there are gaps splits everywhere.
    """
    if not sentence:
        raise ValueError("empty sentence")
    gaps = len(sentence) - 1
    k = min(num_splits, gaps)
    points = sorted(rng.sample(range(1, len(sentence)), k)) if k > 0 else []
    return split_at(sentence, points)


def sample_segmentation(
    sentence: str, lm, dictionary, n: int, rng: random.Random, max_states: int | None = DEFAULT_MAX_STATES
) -> tuple[str, ...]:
    """Draw one of the ``n`` best segmentations with probability ∝ exp(score)."""
    nbest = nbest_segmentations(sentence, lm, dictionary, n, max_states)
    if len(nbest) == 1:
        return nbest[0].tokens
    top = nbest[0].score
    weights = [math.exp(s.score - top) for s in nbest]
    return rng.choices(nbest, weights=weights)[0].tokens


def augment_corpus(
    corpus: Sequence[Sequence[str]],
    epochs: int,
    rng: random.Random,
    lm=None,
    dictionary=None,
    n: int = 4,
    num_splits: int = 1,
) -> list[list[str]]:
    """``epochs`` sampled copies of ``corpus``.

    Every sentence is split into subsequences; when both ``lm`` and
    ``dictionary`` are given, each piece is then re-segmented from its raw
    text by n-best sampling.
    """
    out: list[list[str]] = []
    resegment = lm is not None and dictionary is not None
    for _ in range(epochs):
        for sentence in corpus:
            if not sentence:
                continue
            for piece in sample_subsequences(sentence, rng, num_splits):
                if resegment:
                    piece = list(sample_segmentation("".join(piece), lm, dictionary, n, rng))
                out.append(piece)
    return out
