"""Prefix trie over strings with attached values."""
from __future__ import annotations

from typing import Any, Iterable, Iterator

_END = object()


class WordTrie:
    """Dict-of-dicts trie mapping words to values.

    Keys are matched codepoint by codepoint; the value stored for a word is
    kept under a private sentinel key in the node that terminates it.
    """

    def __init__(self, items: Iterable[tuple[str, Any]] = ()):
        self._root: dict = {}
        self._size = 0
        self.max_key_len = 0
        for key, value in items:
            self.insert(key, value)

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "WordTrie":
        return cls((w, w) for w in words)

    def insert(self, key: str, value: Any = True) -> None:
        if not key:
            raise ValueError("empty key")
        node = self._root
        for ch in key:
            node = node.setdefault(ch, {})
        if _END not in node:
            self._size += 1
        node[_END] = value
        self.max_key_len = max(self.max_key_len, len(key))

    def get(self, key: str, default: Any = None) -> Any:
        node = self._root
        for ch in key:
            node = node.get(ch)
            if node is None:
                return default
        return node.get(_END, default)

    def __contains__(self, key: object) -> bool:
        return isinstance(key, str) and self.get(key, _END) is not _END

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[str]:
        stack = [("", self._root)]
        while stack:
            prefix, node = stack.pop()
            for ch, child in sorted(((k, v) for k, v in node.items() if k is not _END), reverse=True):
                stack.append((prefix + ch, child))
            if _END in node and prefix:
                yield prefix

    def prefixes(self, text: str, start: int = 0) -> Iterator[tuple[int, Any]]:
        """Yield ``(end, value)`` for every key equal to ``text[start:end]``.

        Matches come out shortest first.
        """
        node = self._root
        for end in range(start, len(text)):
            node = node.get(text[end])
            if node is None:
                return
            if _END in node:
                yield end + 1, node[_END]

    def longest_prefix(self, text: str, start: int = 0) -> tuple[int, Any] | None:
        best = None
        for match in self.prefixes(text, start):
            best = match
        return best
