"""Subword language models.

Every scorer exposes the same small incremental interface: a hashable
*state* (the last ``order - 1`` tokens of history) and ``score(state,
token) -> (logprob, next_state)``. The decoders only ever talk to this
interface, so any model with that shape can replace the n-gram default.

Event convention, shared by training and perplexity: each sentence is
left-padded with ``order - 1`` BOS symbols, and every token plus one final
EOS is a predicted event. The event space of a model is its observed
vocabulary plus EOS and UNK; BOS is only ever history.
"""
from __future__ import annotations

import hashlib
import json
import math
from abc import ABC, abstractmethod
from collections import Counter
from typing import Iterable, Sequence

__all__ = [
    "BOS",
    "EOS",
    "UNK",
    "LanguageModel",
    "ModelLoadError",
    "NgramCounts",
    "NgramModel",
    "PERPLEXITY_CONVENTION",
    "TrainingError",
    "UniformModel",
    "deserialize_model",
    "load_model",
    "perplexity",
    "save_model",
    "serialize_model",
    "train_ngram",
]

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"
RESERVED = frozenset((BOS, EOS, UNK))

SMOOTHINGS = ("kneser_ney", "witten_bell", "add_k")

PERPLEXITY_CONVENTION = "exp(-sum logprob / events); events = tokens + one EOS per sentence"

_MAGIC = b"SC2TC-NGRAM"
FORMAT_VERSION = 1


class TrainingError(ValueError):
    pass


class ModelLoadError(ValueError):
    pass


class LanguageModel(ABC):
    """Incremental scorer over subword tokens."""

    order: int

    @abstractmethod
    def logprob(self, state: tuple[str, ...], token: str) -> float:
        """Natural-log P(token | state); ``token`` may be EOS."""

    @abstractmethod
    def event_space(self) -> list[str]:
        """Tokens the conditional distributions are defined over."""

    def normalize_token(self, token: str) -> str:
        return token

    def initial_state(self) -> tuple[str, ...]:
        return (BOS,) * (self.order - 1)

    def advance(self, state: tuple[str, ...], token: str) -> tuple[str, ...]:
        if self.order == 1:
            return ()
        return (state + (self.normalize_token(token),))[1:]

    def score(self, state: tuple[str, ...], token: str) -> tuple[float, tuple[str, ...]]:
        return self.logprob(state, token), self.advance(state, token)

    def end_score(self, state: tuple[str, ...]) -> float:
        return self.logprob(state, EOS)

    def log_prob(self, tokens: Iterable[str], eos: bool = False) -> float:
        total = 0.0
        state = self.initial_state()
        for tok in tokens:
            lp, state = self.score(state, tok)
            total += lp
        if eos:
            total += self.end_score(state)
        return total


class UniformModel(LanguageModel):
    """Every event equally likely; handy as a baseline and in tests."""

    def __init__(self, vocabulary: Iterable[str], order: int = 1):
        vocab = sorted(set(vocabulary) - RESERVED)
        self.order = order
        self._events = vocab + [EOS, UNK]
        self._lp = -math.log(len(self._events))

    def logprob(self, state, token):
        return self._lp

    def event_space(self):
        return list(self._events)


def _padded_ngrams(tokens: Sequence[str], order: int) -> Iterable[tuple[str, ...]]:
    padded = (BOS,) * (order - 1) + tuple(tokens) + (EOS,)
    for i in range(order - 1, len(padded)):
        yield padded[i - order + 1 : i + 1]


class NgramCounts:
    """Highest-order n-gram counts of a corpus.

    Lower-order counts are recoverable as suffix sums because every event
    has a full-length (BOS-padded) history, so only the top order is kept.
    Partial counts from corpus shards combine with :meth:`merge`.
    """

    def __init__(self, order: int, counts: Counter | None = None):
        if order < 1:
            raise TrainingError(f"order must be >= 1, got {order}")
        self.order = order
        self.counts: Counter = counts if counts is not None else Counter()

    @classmethod
    def from_corpus(cls, corpus: Iterable[Sequence[str]], order: int) -> "NgramCounts":
        counts = cls(order)
        for sentence in corpus:
            counts.add_sentence(sentence)
        return counts

    def add_sentence(self, tokens: Sequence[str]) -> None:
        for tok in tokens:
            if not tok or tok in RESERVED or " " in tok:
                raise TrainingError(f"invalid token {tok!r}")
        self.counts.update(_padded_ngrams(tokens, self.order))

    def merge(self, other: "NgramCounts") -> "NgramCounts":
        if other.order != self.order:
            raise TrainingError("cannot merge counts of different order")
        merged = Counter(self.counts)
        merged.update(other.counts)
        return NgramCounts(self.order, merged)

    def __eq__(self, other):
        return isinstance(other, NgramCounts) and self.order == other.order and self.counts == other.counts

    @property
    def num_events(self) -> int:
        return sum(self.counts.values())


def _kn_discount(counts: Iterable[int]) -> float:
    hist = Counter(c for c in counts if c <= 2)
    n1, n2 = hist[1], hist[2]
    if n1 == 0:
        return 0.5
    return n1 / (n1 + 2 * n2)


class NgramModel(LanguageModel):
    """Interpolated n-gram model.

    ``smoothing`` is ``"kneser_ney"`` (interpolated, one discount per order,
    continuation counts below the top order), ``"witten_bell"``
    (interpolated) or ``"add_k"`` (Lidstone on the top order only). Every
    chain bottoms out in the uniform distribution over the event space,
    which is where UNK gets its mass.
    """

    def __init__(self, counts: NgramCounts, smoothing: str = "kneser_ney", k: float = 1.0):
        if smoothing not in SMOOTHINGS:
            raise TrainingError(f"unknown smoothing {smoothing!r}")
        if smoothing == "add_k" and not k >= 0:
            raise TrainingError("add_k needs k >= 0")
        if not counts.counts:
            raise TrainingError("empty corpus")
        self.counts = counts
        self.order = counts.order
        self.smoothing = smoothing
        self.k = float(k) if smoothing == "add_k" else None
        vocab = {ng[-1] for ng in counts.counts}
        vocab.discard(EOS)
        self.vocabulary = frozenset(vocab)
        self._events = sorted(vocab) + [EOS, UNK]
        self._uniform = 1.0 / len(self._events)
        self._levels, self._discounts = self._build_levels()
        self._cache: dict[tuple, float] = {}

    def _build_levels(self):
        order = self.order
        raw: list[Counter] = [Counter() for _ in range(order + 1)]
        raw[order] = self.counts.counts
        for n in range(order - 1, 0, -1):
            for ng, c in raw[order].items():
                raw[n][ng[-n:]] += c
        if self.smoothing == "kneser_ney":
            # below the top order, count distinct left extensions instead of tokens
            level_counts = [Counter() for _ in range(order + 1)]
            level_counts[order] = raw[order]
            for n in range(order - 1, 0, -1):
                for ng in raw[n + 1]:
                    level_counts[n][ng[1:]] += 1
        else:
            level_counts = raw
        levels: list[dict] = [dict() for _ in range(order + 1)]
        discounts = [0.0] * (order + 1)
        for n in range(1, order + 1):
            table: dict[tuple, list] = {}
            for ng, c in level_counts[n].items():
                slot = table.setdefault(ng[:-1], [0, 0, {}])
                slot[0] += c
                slot[1] += 1
                slot[2][ng[-1]] = c
            levels[n] = {ctx: (tot, types, nxt) for ctx, (tot, types, nxt) in table.items()}
            if self.smoothing == "kneser_ney":
                discounts[n] = _kn_discount(level_counts[n].values())
        return levels, discounts

    def normalize_token(self, token: str) -> str:
        if token in self.vocabulary or token == EOS or token == BOS:
            return token
        return UNK

    def event_space(self) -> list[str]:
        return list(self._events)

    def prob(self, state: tuple[str, ...], token: str) -> float:
        token = self.normalize_token(token)
        width = self.order - 1
        if width:
            state = ((BOS,) * width + tuple(state))[-width:]
            ctx = tuple(map(self.normalize_token, state))
        else:
            ctx = ()
        if self.smoothing == "add_k":
            entry = self._levels[self.order].get(ctx)
            if entry is None:
                return self._uniform
            total, _, nxt = entry
            return (nxt.get(token, 0) + self.k) / (total + self.k * len(self._events))
        p = self._uniform
        kn = self.smoothing == "kneser_ney"
        for n in range(1, self.order + 1):
            entry = self._levels[n].get(ctx[len(ctx) - (n - 1):] if n > 1 else ())
            if entry is None:
                continue
            total, types, nxt = entry
            c = nxt.get(token, 0)
            if kn:
                d = self._discounts[n]
                p = (max(c - d, 0.0) + d * types * p) / total
            else:
                p = (c + types * p) / (total + types)
        return p

    def logprob(self, state: tuple[str, ...], token: str) -> float:
        key = (state, token)
        lp = self._cache.get(key)
        if lp is None:
            p = self.prob(state, token)
            lp = math.log(p) if p > 0 else -math.inf
            self._cache[key] = lp
        return lp

    def contexts(self) -> list[tuple[str, ...]]:
        """Distinct full-length histories seen in training."""
        return sorted(self._levels[self.order]) if self.order > 1 else [()]


def train_ngram(corpus: Iterable[Sequence[str]], order: int = 3, smoothing: str = "kneser_ney", k: float = 1.0) -> NgramModel:
    corpus = list(corpus)
    if not corpus:
        raise TrainingError("empty corpus")
    return NgramModel(NgramCounts.from_corpus(corpus, order), smoothing=smoothing, k=k)


def perplexity(model: LanguageModel, corpus: Iterable[Sequence[str]]) -> float:
    total = 0.0
    events = 0
    for sentence in corpus:
        total += model.log_prob(sentence, eos=True)
        events += len(sentence) + 1
    if events == 0:
        raise ValueError("empty corpus")
    return math.exp(-total / events)


def serialize_model(model: NgramModel) -> bytes:
    payload = {
        "order": model.order,
        "smoothing": model.smoothing,
        "k": model.k,
        "ngrams": sorted([list(ng), c] for ng, c in model.counts.counts.items()),
    }
    body = json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")
    header = b"%s %d %d %s\n" % (_MAGIC, FORMAT_VERSION, len(body), hashlib.sha256(body).hexdigest().encode())
    return header + body


def deserialize_model(data: bytes) -> NgramModel:
    head, sep, body = data.partition(b"\n")
    parts = head.split(b" ")
    if not sep or len(parts) != 4 or parts[0] != _MAGIC:
        raise ModelLoadError("not an n-gram model file")
    try:
        version, length = int(parts[1]), int(parts[2])
    except ValueError:
        raise ModelLoadError("corrupt header") from None
    if version != FORMAT_VERSION:
        raise ModelLoadError(f"unsupported model format version {version}")
    if len(body) != length:
        raise ModelLoadError(f"truncated model: expected {length} bytes, got {len(body)}")
    if hashlib.sha256(body).hexdigest().encode() != parts[3]:
        raise ModelLoadError("checksum mismatch")
    try:
        payload = json.loads(body.decode("utf-8"))
        counts = Counter({tuple(ng): int(c) for ng, c in payload["ngrams"]})
        ngram_counts = NgramCounts(int(payload["order"]), counts)
        k = payload["k"] if payload["k"] is not None else 1.0
        return NgramModel(ngram_counts, smoothing=payload["smoothing"], k=k)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelLoadError(f"corrupt model payload: {exc}") from None


def save_model(model: NgramModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_model(model))


def load_model(path) -> NgramModel:
    with open(path, "rb") as fh:
        return deserialize_model(fh.read())
