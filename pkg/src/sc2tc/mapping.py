"""Simplified-to-Traditional mapping tables and the conversion lattice.

A mapping table pairs an SC subword with an ordered list of TC subwords of
the same length. The first candidate is the default (most frequent) one.

Table files are UTF-8, one record per line::

    发<TAB>發 髮
    发展<TAB>發展

Blank lines and lines starting with ``#`` are ignored.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from .trie import WordTrie

__all__ = [
    "ConversionLattice",
    "MappingEntry",
    "MappingFormatError",
    "MappingTable",
    "MappingValidationError",
    "build_lattice",
    "load_mapping_table",
    "read_mapping_table",
]


class MappingFormatError(ValueError):
    """A table line could not be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class MappingValidationError(MappingFormatError):
    """A record parsed but violates the table invariants."""


@dataclass(frozen=True)
class MappingEntry:
    sc: str
    tc_candidates: tuple[str, ...]
    # True for the identity edges the lattice adds for characters the table lacks.
    fallback: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.sc:
            raise MappingValidationError("empty SC key")
        if not self.tc_candidates:
            raise MappingValidationError(f"{self.sc!r} has no TC candidates")
        if len(set(self.tc_candidates)) != len(self.tc_candidates):
            raise MappingValidationError(f"{self.sc!r} has duplicate candidates")
        for cand in self.tc_candidates:
            if len(cand) != len(self.sc):
                raise MappingValidationError(
                    f"candidate {cand!r} length {len(cand)} differs from {self.sc!r} length {len(self.sc)}"
                )

    @classmethod
    def identity(cls, char: str) -> "MappingEntry":
        return cls(char, (char,), fallback=True)

    @property
    def default(self) -> str:
        return self.tc_candidates[0]

    @property
    def is_ambiguous(self) -> bool:
        return len(self.tc_candidates) > 1


class MappingTable:
    """Trie-indexed collection of :class:`MappingEntry`.

    Entries sharing an SC key are merged: candidate lists are concatenated
    with duplicates dropped, first occurrence keeping its position.
    """

    def __init__(self, entries: Iterable[MappingEntry] = ()):
        self._entries: dict[str, MappingEntry] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: MappingEntry) -> None:
        old = self._entries.get(entry.sc)
        if old is not None:
            merged = list(old.tc_candidates)
            merged.extend(c for c in entry.tc_candidates if c not in merged)
            entry = MappingEntry(entry.sc, tuple(merged))
        self._entries[entry.sc] = entry
        self.__dict__.pop("_trie_cache", None)

    @property
    def trie(self) -> WordTrie:
        trie = self.__dict__.get("_trie_cache")
        if trie is None:
            trie = WordTrie((sc, e) for sc, e in self._entries.items())
            self.__dict__["_trie_cache"] = trie
        return trie

    @property
    def max_key_len(self) -> int:
        return self.trie.max_key_len

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[MappingEntry]:
        return iter(self._entries.values())

    def __contains__(self, sc: object) -> bool:
        return sc in self._entries

    def get(self, sc: str) -> MappingEntry | None:
        return self._entries.get(sc)

    def candidates(self, sc: str) -> list[str]:
        entry = self._entries.get(sc)
        return list(entry.tc_candidates) if entry else []

    def words(self) -> list[str]:
        return list(self._entries)

    def char_ambiguity(self, char: str) -> int:
        """Number of distinct TC candidates of a single-character entry, 0 if absent."""
        entry = self._entries.get(char) if len(char) == 1 else None
        return len(entry.tc_candidates) if entry else 0

    def is_ambiguous(self, char: str) -> bool:
        return self.char_ambiguity(char) >= 2

    def matches(self, text: str, start: int) -> list[tuple[int, MappingEntry]]:
        """Entries whose key equals ``text[start:end]``, as ``(end, entry)`` pairs."""
        return list(self.trie.prefixes(text, start))

    def reverse(self) -> "MappingTable":
        """Mechanical TC->SC table: every candidate maps back to its SC key."""
        rev = MappingTable()
        for entry in self:
            for cand in entry.tc_candidates:
                rev.add(MappingEntry(cand, (entry.sc,)))
        return rev

    @classmethod
    def merge(cls, *tables: "MappingTable") -> "MappingTable":
        return cls(e for t in tables for e in t)

    def dump(self, out: TextIO) -> None:
        for entry in self:
            out.write(f"{entry.sc}\t{' '.join(entry.tc_candidates)}\n")


def _nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


def load_mapping_table(source: TextIO | Iterable[str], table: MappingTable | None = None) -> MappingTable:
    """Parse a table stream. Passing ``table`` merges the records into it."""
    table = MappingTable() if table is None else table
    for lineno, raw in enumerate(source, 1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        if "\t" not in line:
            raise MappingFormatError("expected SC<TAB>candidates", lineno)
        sc, _, rest = line.partition("\t")
        if not sc or not rest:
            raise MappingFormatError("empty field", lineno)
        cands = rest.split(" ")
        if any(not c for c in cands) or "\t" in rest:
            raise MappingFormatError("empty candidate", lineno)
        sc = _nfc(sc)
        seen: list[str] = []
        for c in map(_nfc, cands):
            if c not in seen:
                seen.append(c)
        try:
            table.add(MappingEntry(sc, tuple(seen)))
        except MappingValidationError as exc:
            raise MappingValidationError(str(exc), lineno) from None
    return table


def read_mapping_table(*paths) -> MappingTable:
    table = MappingTable()
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            load_mapping_table(fh, table)
    return table


@dataclass(frozen=True)
class ConversionLattice:
    """DAG over character boundaries ``0..length`` of ``sentence``.

    ``edges[j]`` lists ``(k, entry)`` with ``entry.sc == sentence[j:k]``,
    sorted by ``k``.
    """

    sentence: str
    edges: tuple[tuple[tuple[int, MappingEntry], ...], ...]

    @property
    def length(self) -> int:
        return len(self.sentence)

    def paths(self) -> Iterator[tuple[MappingEntry, ...]]:
        """Every complete path, in lexicographic order of boundaries."""

        def walk(j):
            if j == self.length:
                yield ()
                return
            for k, entry in self.edges[j]:
                for rest in walk(k):
                    yield (entry,) + rest

        return walk(0)

    def count_paths(self) -> int:
        counts = [0] * (self.length + 1)
        counts[self.length] = 1
        for j in range(self.length - 1, -1, -1):
            counts[j] = sum(counts[k] for k, _ in self.edges[j])
        return counts[0]


def build_lattice(sentence: str, table: MappingTable) -> ConversionLattice:
    """Lattice of every table match, plus identity edges for unknown characters."""
    edges = []
    for j, char in enumerate(sentence):
        out = table.matches(sentence, j)
        if not out or out[0][0] != j + 1:
            out.insert(0, (j + 1, MappingEntry.identity(char)))
        edges.append(tuple(out))
    return ConversionLattice(sentence, tuple(edges))
