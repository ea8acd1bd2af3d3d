"""Subshift presentations and their languages.

Every presentation answers ``language(spec, n)``; everything else here
(minimal forbidden words, SFT covers, the subshift metric, stability
profiles) is computed from those finite word sets.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .graph import EmptyShift, SftGraph, build_graph
from .words import Alphabet, Word

__all__ = [
    "SubshiftSpec",
    "ForbiddenList",
    "FullShift",
    "LanguageTable",
    "Product",
    "DepthExceeded",
    "StabilityProfile",
    "language",
    "complexity",
    "minimal_forbidden",
    "sft_cover",
    "sft_order",
    "distance",
    "stability_profile",
    "window_density",
    "product",
    "fibonacci_shift",
]


class DepthExceeded(ValueError):
    """A finite language table was asked for words beyond its depth."""


class SubshiftSpec:
    """Base class for subshift presentations."""

    alphabet: Alphabet
    max_depth: int | None = None

    def _words(self, n: int) -> frozenset[Word]:
        raise NotImplementedError


@dataclass(frozen=True)
class FullShift(SubshiftSpec):
    alphabet: Alphabet

    def _words(self, n: int) -> frozenset[Word]:
        return frozenset(self.alphabet.all_words(n))


@dataclass(frozen=True)
class ForbiddenList(SubshiftSpec):
    """The SFT Y_F of points avoiding every word of ``words``."""

    alphabet: Alphabet
    words: frozenset[Word] = frozenset()

    def __post_init__(self) -> None:
        ws = frozenset(self.alphabet.check(w) for w in self.words)
        object.__setattr__(self, "words", ws)

    @classmethod
    def of(cls, alphabet: Alphabet | str, words: Iterable[str | Sequence[int]]) -> "ForbiddenList":
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet.of(alphabet)
        parsed = [alphabet.parse(w) if isinstance(w, str) else tuple(w) for w in words]
        return cls(alphabet, frozenset(parsed))

    @property
    def order(self) -> int:
        return max([1, *(len(w) for w in self.words)])

    @cached_property
    def graph(self) -> SftGraph | EmptyShift:
        return build_graph(self.alphabet, self.words)

    def _words(self, n: int) -> frozenset[Word]:
        return self.graph.words(n)


@dataclass(frozen=True)
class LanguageTable(SubshiftSpec):
    """Explicit L_1 .. L_N; ``levels[k-1]`` is L_k."""

    alphabet: Alphabet
    levels: tuple[frozenset[Word], ...]
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        levels = tuple(frozenset(self.alphabet.check(w) for w in lv) for lv in self.levels)
        object.__setattr__(self, "levels", levels)
        for k, lv in enumerate(levels, start=1):
            if any(len(w) != k for w in lv):
                raise ValueError(f"level {k} contains a word of the wrong length")
        if self.validate:
            self._check_factorial()

    def _check_factorial(self) -> None:
        for k in range(2, len(self.levels) + 1):
            lower, upper = self.levels[k - 2], self.levels[k - 1]
            for w in upper:
                if w[1:] not in lower or w[:-1] not in lower:
                    raise ValueError(f"table is not factorial: {w} at level {k}")
            right = {w[:-1] for w in upper}
            left = {w[1:] for w in upper}
            for w in lower:
                if w not in right or w not in left:
                    raise ValueError(f"word {w} at level {k - 1} is not bilaterally extendable")

    @property
    def max_depth(self) -> int:  # type: ignore[override]
        return len(self.levels)

    def _words(self, n: int) -> frozenset[Word]:
        return self.levels[n - 1]


@dataclass(frozen=True)
class Product(SubshiftSpec):
    """Direct product; symbols are coded in mixed radix, first factor most
    significant, so code order equals tuple order."""

    factors: tuple[SubshiftSpec, ...]

    def __post_init__(self) -> None:
        if len(self.factors) < 2:
            raise ValueError("a product needs at least two factors")

    @cached_property
    def alphabet(self) -> Alphabet:  # type: ignore[override]
        labels = itertools.product(*(f.alphabet.symbols for f in self.factors))
        return Alphabet(tuple("(" + ",".join(t) + ")" for t in labels))

    @property
    def max_depth(self) -> int | None:  # type: ignore[override]
        depths = [f.max_depth for f in self.factors if f.max_depth is not None]
        return min(depths) if depths else None

    def encode(self, symbols: Sequence[int]) -> int:
        code = 0
        for f, s in zip(self.factors, symbols):
            code = code * f.alphabet.size + s
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for f in reversed(self.factors):
            code, s = divmod(code, f.alphabet.size)
            out.append(s)
        return tuple(reversed(out))

    def zip_words(self, words: Sequence[Word]) -> Word:
        return tuple(self.encode(col) for col in zip(*words))

    def unzip(self, word: Word) -> tuple[Word, ...]:
        cols = [self.decode(c) for c in word]
        return tuple(tuple(c[i] for c in cols) for i in range(len(self.factors)))

    def _words(self, n: int) -> frozenset[Word]:
        langs = [language(f, n) for f in self.factors]
        return frozenset(self.zip_words(ws) for ws in itertools.product(*langs))


def product(specs: Sequence[SubshiftSpec]) -> Product:
    return Product(tuple(specs))


def fibonacci_shift() -> ForbiddenList:
    """The golden-mean SFT over {0, 1} forbidding 11."""
    return ForbiddenList.of("01", ["11"])


@functools.lru_cache(maxsize=4096)
def _language(spec: SubshiftSpec, n: int) -> frozenset[Word]:
    return spec._words(n)


def language(spec: SubshiftSpec, n: int) -> frozenset[Word]:
    """L_n of the presented subshift (L_0 is the empty word)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return frozenset({()})
    depth = spec.max_depth
    if depth is not None and n > depth:
        raise DepthExceeded(f"language requested at n={n} beyond table depth {depth}")
    return _language(spec, n)


def complexity(spec: SubshiftSpec, n: int) -> int:
    return len(language(spec, n))


def minimal_forbidden(spec: SubshiftSpec, n: int) -> frozenset[Word]:
    """M_n: forbidden n-words whose (n-1)-prefix and suffix are allowed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    order = sft_order(spec)
    if order is not None and n > order:
        # every window of length <= order lies in the prefix or the suffix,
        # and an SFT glues words overlapping in order - 1 symbols
        return frozenset()
    shorter = language(spec, n - 1)
    allowed = language(spec, n)
    size = spec.alphabet.size
    out = set()
    for u in shorter:
        for b in range(size):
            w = u + (b,)
            if w not in allowed and w[1:] in shorter:
                out.add(w)
    return frozenset(out)


def sft_cover(spec: SubshiftSpec, n: int) -> ForbiddenList:
    """X_n: the SFT forbidding every minimal forbidden word of length <= n."""
    words: set[Word] = set()
    for k in range(1, n + 1):
        words |= minimal_forbidden(spec, k)
    return ForbiddenList(spec.alphabet, frozenset(words))


def sft_order(spec: SubshiftSpec) -> int | None:
    """Longest minimal forbidden word length if the presentation is an SFT
    by construction, else None."""
    if isinstance(spec, FullShift):
        return 1
    if isinstance(spec, ForbiddenList):
        return spec.order
    if isinstance(spec, Product):
        orders = [sft_order(f) for f in spec.factors]
        return None if None in orders else max(orders)  # type: ignore[type-var]
    return None


def _as_labels(spec: SubshiftSpec, words: frozenset[Word]) -> frozenset[tuple[str, ...]]:
    syms = spec.alphabet.symbols
    return frozenset(tuple(syms[i] for i in w) for w in words)


def distance(a: SubshiftSpec, b: SubshiftSpec, max_n: int) -> Fraction | None:
    """2^-n for the first n <= max_n where L_n differ; None if they agree to max_n."""
    same_alphabet = a.alphabet == b.alphabet
    for n in range(1, max_n + 1):
        la, lb = language(a, n), language(b, n)
        if not same_alphabet:
            la, lb = _as_labels(a, la), _as_labels(b, lb)  # type: ignore[assignment]
        if la != lb:
            return Fraction(1, 2**n)
    return None


def window_density(
    members: Iterable[int], depth: int, lengths: Iterable[int] | None = None
) -> Fraction:
    """Best |S ∩ window| / |window| over windows inside [1, depth].

    ``lengths`` is the window schedule; by default every length from
    depth // 2 up to depth, which keeps short lucky windows from
    dominating.
    """
    if depth < 1:
        raise ValueError("empty range: depth must be >= 1")
    s = set(members)
    if any(not 1 <= x <= depth for x in s):
        raise ValueError("members must lie in [1, depth]")
    lengths = list(range(max(1, depth // 2), depth + 1)) if lengths is None else list(lengths)
    prefix = [0]
    for x in range(1, depth + 1):
        prefix.append(prefix[-1] + (x in s))
    best = Fraction(0)
    for n in lengths:
        if not 1 <= n <= depth:
            raise ValueError(f"window length {n} outside [1, {depth}]")
        hits = max(prefix[k + n - 1] - prefix[k - 1] for k in range(1, depth - n + 2))
        best = max(best, Fraction(hits, n))
    return best


@dataclass(frozen=True)
class StabilityProfile:
    """Lengths without minimal forbidden words, certified to ``depth`` only."""

    depth: int
    empty_lengths: tuple[int, ...]
    runs: tuple[tuple[int, int], ...]
    window_density: Fraction

    def stable_runs(self, min_length: int = 2) -> list[tuple[int, int]]:
        return [r for r in self.runs if r[1] >= min_length]

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "certified": f"certified to depth {self.depth}",
            "emptyLengths": list(self.empty_lengths),
            "runs": [{"start": s, "length": r} for s, r in self.runs],
            "windowDensity": str(self.window_density),
        }


def maximal_runs(members: Iterable[int]) -> tuple[tuple[int, int], ...]:
    """(start, length) of each maximal block of consecutive integers."""
    runs: list[tuple[int, int]] = []
    for x in sorted(set(members)):
        if runs and runs[-1][0] + runs[-1][1] == x:
            runs[-1] = (runs[-1][0], runs[-1][1] + 1)
        else:
            runs.append((x, 1))
    return tuple(runs)


def stability_profile(
    spec: SubshiftSpec, depth: int, lengths: Iterable[int] | None = None
) -> StabilityProfile:
    empty = tuple(n for n in range(1, depth + 1) if not minimal_forbidden(spec, n))
    return StabilityProfile(
        depth=depth,
        empty_lengths=empty,
        runs=maximal_runs(empty),
        window_density=window_density(empty, depth, lengths),
    )
