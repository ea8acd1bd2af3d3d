"""Alphabets and words.

A word is a tuple of symbol indices into an :class:`Alphabet`.  Word sets
are frozensets internally and are sorted lexicographically by index
whenever they leave the library.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Word = tuple[int, ...]

MAX_ALPHABET = 256


@dataclass(frozen=True)
class Alphabet:
    """Ordered, distinct symbol labels."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"alphabet labels must be distinct: {self.symbols}")
        if len(self.symbols) > MAX_ALPHABET:
            raise ValueError(f"alphabet size {len(self.symbols)} exceeds {MAX_ALPHABET}")
        for s in self.symbols:
            if not s or any(c.isspace() for c in s) or "#" in s:
                raise ValueError(f"bad symbol label {s!r}")

    @classmethod
    def of(cls, symbols: Iterable[str] | str) -> "Alphabet":
        if isinstance(symbols, str):
            symbols = symbols.split() if " " in symbols else list(symbols)
        return cls(tuple(str(s) for s in symbols))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def compact(self) -> bool:
        """True when every label is one character, so words print unseparated."""
        return all(len(s) == 1 for s in self.symbols)

    def index(self, label: str) -> int:
        try:
            return self.symbols.index(label)
        except ValueError:
            raise ValueError(f"symbol {label!r} not in alphabet {self.symbols}") from None

    def parse(self, text: str) -> Word:
        """Read a word written as concatenated labels or space-separated labels."""
        text = text.strip()
        if not text:
            return ()
        tokens = text.split() if (" " in text or not self.compact) else list(text)
        return tuple(self.index(t) for t in tokens)

    def format(self, word: Sequence[int]) -> str:
        sep = "" if self.compact else " "
        return sep.join(self.symbols[i] for i in word)

    def all_words(self, n: int) -> Iterator[Word]:
        return itertools.product(range(self.size), repeat=n)

    def check(self, word: Sequence[int]) -> Word:
        word = tuple(word)
        if any(not 0 <= i < self.size for i in word):
            raise ValueError(f"word {word} has an index outside alphabet of size {self.size}")
        return word


def sorted_words(words: Iterable[Word]) -> list[Word]:
    return sorted(words)


def factors(word: Word, n: int) -> Iterator[Word]:
    """All length-n windows of ``word`` (with repetition)."""
    for i in range(len(word) - n + 1):
        yield word[i : i + n]


def contains_factor(word: Word, patterns: Iterable[Word]) -> bool:
    for p in patterns:
        k = len(p)
        for i in range(len(word) - k + 1):
            if word[i : i + k] == p:
                return True
    return False
