"""Higher-block graph realisation of a shift of finite type.

For forbidden words of maximal length ``m`` the vertices are the allowed
(m-1)-words and the edges the allowed m-words; pruning vertices without a
predecessor or successor leaves the essential graph, whose bi-infinite
paths are exactly the points of the shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np
from scipy import sparse

from .words import Alphabet, Word

__all__ = ["SftGraph", "EmptyShift", "build_graph", "admissible_words"]


@dataclass(frozen=True)
class EmptyShift:
    """The empty subshift; returned instead of raising wherever pruning
    removes every vertex."""

    alphabet: Alphabet

    def words(self, n: int) -> frozenset[Word]:
        return frozenset({()}) if n == 0 else frozenset()

    def __bool__(self) -> bool:
        return False


def _has_forbidden_suffix(word: Word, by_length: dict[int, frozenset[Word]]) -> bool:
    n = len(word)
    for k, ws in by_length.items():
        if k <= n and word[n - k :] in ws:
            return True
    return False


def admissible_words(alphabet: Alphabet, forbidden: Iterable[Word], n: int) -> list[Word]:
    """Words of length n containing no forbidden factor (local admissibility)."""
    by_length: dict[int, set[Word]] = {}
    for w in forbidden:
        by_length.setdefault(len(w), set()).add(w)
    frozen = {k: frozenset(v) for k, v in by_length.items()}
    level: list[Word] = [()]
    for _ in range(n):
        level = [
            w + (b,)
            for w in level
            for b in range(alphabet.size)
            if not _has_forbidden_suffix(w + (b,), frozen)
        ]
    return level


@dataclass(frozen=True, eq=False)
class SftGraph:
    """Essential higher-block graph of an SFT.

    ``edges`` holds ``(u, v, symbol)`` triples of vertex indices; the edge
    word is ``vertices[u] + (symbol,)``.
    """

    alphabet: Alphabet
    order: int
    vertices: tuple[Word, ...]
    edges: tuple[tuple[int, int, int], ...]
    forbidden: frozenset[Word] = field(default_factory=frozenset)
    essential: bool = True

    def __bool__(self) -> bool:
        return True

    @cached_property
    def index(self) -> dict[Word, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def successors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        succ: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for u, v, b in self.edges:
            succ[u].append((v, b))
        return tuple(tuple(s) for s in succ)

    def edge_word(self, u: int, symbol: int) -> Word:
        return self.vertices[u] + (symbol,)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((len(self.vertices), len(self.vertices)), dtype=np.int64)
        for u, v, _ in self.edges:
            a[u, v] += 1
        return a

    def adjacency_sparse(self) -> sparse.csr_matrix:
        n = len(self.vertices)
        if not self.edges:
            return sparse.csr_matrix((n, n), dtype=np.float64)
        rows, cols, _ = zip(*self.edges)
        return sparse.csr_matrix(
            (np.ones(len(rows)), (np.array(rows), np.array(cols))), shape=(n, n)
        )

    def count_paths(self, k: int) -> int:
        """Number of edge paths of length k (exact integer arithmetic)."""
        counts = [1] * len(self.vertices)
        for _ in range(k):
            nxt = [0] * len(self.vertices)
            for u, v, _ in self.edges:
                nxt[v] += counts[u]
            counts = nxt
        return sum(counts)

    def words(self, n: int) -> frozenset[Word]:
        """Labels of length n read along bi-infinite paths, i.e. L_n of the shift."""
        if n < 0:
            raise ValueError("n must be >= 0")
        span = self.order - 1
        if n <= span:
            return frozenset(v[:n] for v in self.vertices)
        frontier = [(v, i) for i, v in enumerate(self.vertices)]
        succ = self.successors
        for _ in range(n - span):
            frontier = [(w + (b,), t) for w, u in frontier for t, b in succ[u]]
        return frozenset(w for w, _ in frontier)

    def vertex_path(self, word: Word) -> list[int] | None:
        """Vertex indices visited while reading ``word`` (len >= order-1), or None."""
        span = self.order - 1
        idx = self.index
        path = []
        for i in range(len(word) - span + 1):
            j = idx.get(word[i : i + span])
            if j is None:
                return None
            path.append(j)
        if len(path) > 1:
            succ = self.successors
            for a, b in zip(path, path[1:]):
                if all(t != b for t, _ in succ[a]):
                    return None
        return path

    def to_json(self) -> dict:
        fmt = self.alphabet.format
        return {
            "order": self.order,
            "vertices": [fmt(v) for v in self.vertices],
            "edges": [[u, v, fmt(self.edge_word(u, b))] for u, v, b in self.edges],
        }


def build_graph(alphabet: Alphabet, forbidden: Iterable[Word]) -> SftGraph | EmptyShift:
    """Essential graph of the SFT forbidding ``forbidden`` over ``alphabet``."""
    forbidden = frozenset(tuple(w) for w in forbidden)
    if () in forbidden:
        return EmptyShift(alphabet)
    order = max([2, *(len(w) for w in forbidden)])
    by_length: dict[int, set[Word]] = {}
    for w in forbidden:
        by_length.setdefault(len(w), set()).add(w)
    frozen = {k: frozenset(v) for k, v in by_length.items()}

    verts = admissible_words(alphabet, forbidden, order - 1)
    alive = set(verts)
    edges: list[tuple[Word, Word, int]] = []
    for u in verts:
        for b in range(alphabet.size):
            w = u + (b,)
            if not _has_forbidden_suffix(w, frozen):
                edges.append((u, w[1:], b))

    # prune to the essential part
    while True:
        has_out = {u for u, v, _ in edges if v in alive}
        has_in = {v for u, v, _ in edges if u in alive}
        keep = alive & has_out & has_in
        if keep == alive:
            break
        alive = keep
        edges = [e for e in edges if e[0] in alive and e[1] in alive]
    edges = [e for e in edges if e[0] in alive and e[1] in alive]
    if not alive:
        return EmptyShift(alphabet)

    vertices = tuple(sorted(alive))
    index = {v: i for i, v in enumerate(vertices)}
    indexed = tuple(sorted((index[u], index[v], b) for u, v, b in edges))
    return SftGraph(alphabet, order, vertices, indexed, forbidden)
