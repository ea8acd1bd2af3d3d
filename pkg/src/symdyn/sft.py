"""Entropy and maximal-entropy measures of shifts of finite type.

The essential graph splits into strongly connected components; each one
with at least one edge carries Perron eigendata and hence a Parry measure.
Averaging the Parry measures of the components of largest spectral radius
gives a measure fixed by every automorphism of the SFT.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .graph import EmptyShift, SftGraph
from .language import ForbiddenList, SubshiftSpec, language
from .words import Alphabet, Word

__all__ = [
    "TransitiveComponent",
    "MarkovMeasure",
    "MeasureMixture",
    "PerronConvergenceError",
    "RefinementResult",
    "RefinementTooLarge",
    "transitive_components",
    "perron",
    "topological_entropy",
    "parry_measure",
    "cylinder_measure",
    "mme_mixture",
    "check_gluing",
    "uniform_visit_refinement",
    "graph_of",
]

PERRON_TOL = 1e-12
PERRON_MAX_ITER = 10**6
TIE_TOL = 1e-9
REFINE_CAP = int(os.environ.get("SYMDYN_MAX_WORDS", 10**6))


class PerronConvergenceError(RuntimeError):
    def __init__(self, message: str, vector: np.ndarray, residual: float):
        super().__init__(message)
        self.vector = vector
        self.residual = residual


@dataclass(frozen=True, eq=False)
class TransitiveComponent:
    """One strongly connected class of the essential graph, with Perron data.

    ``left`` and ``right`` are positive and scaled so that left . right = 1.
    """

    graph: SftGraph = field(repr=False)
    vertices: tuple[int, ...]
    adjacency: np.ndarray = field(repr=False)
    perron_value: float
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)

    @property
    def entropy(self) -> float:
        return math.log(self.perron_value)

    @cached_property
    def local_index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def is_cycle(self) -> bool:
        return bool(np.all(self.adjacency.sum(axis=1) == 1))

    def to_json(self) -> dict:
        fmt = self.graph.alphabet.format
        return {
            "vertices": [fmt(self.graph.vertices[v]) for v in self.vertices],
            "lambda": self.perron_value,
            "entropy": self.entropy,
        }


def perron(
    adjacency: np.ndarray, tol: float = PERRON_TOL, max_iter: int = PERRON_MAX_ITER
) -> tuple[float, np.ndarray, np.ndarray]:
    """Spectral radius and positive left/right eigenvectors of an
    irreducible nonnegative matrix.

    Iterates with A + I, which is primitive whenever A is irreducible, so
    periodic components converge too.  Stops when the Collatz-Wielandt
    bounds min (Ax)_i/x_i <= lambda <= max (Ax)_i/x_i pinch to ``tol``.
    """
    a = np.asarray(adjacency, dtype=np.float64)
    n = a.shape[0]
    if n == 0 or not a.any():
        raise ValueError("perron needs a component with at least one edge")
    if np.all(a.sum(axis=1) == 1) and np.all(a.sum(axis=0) == 1):
        # a permutation matrix: a single cycle
        ones = np.ones(n)
        return 1.0, ones / n, ones.copy()

    def iterate(m: np.ndarray) -> tuple[float, np.ndarray]:
        x = np.ones(n)
        lam = 0.0
        gap = math.inf
        for _ in range(max_iter):
            ax = m @ x
            ratios = ax / x
            lo, hi = ratios.min(), ratios.max()
            lam = 0.5 * (lo + hi)
            gap = hi - lo
            y = ax + x
            x = y / y.sum()
            if gap <= tol * max(1.0, lam):
                return lam, x
        raise PerronConvergenceError(
            f"power iteration did not converge in {max_iter} steps", x, float(gap)
        )

    lam_r, right = iterate(a)
    lam_l, left = iterate(a.T)
    lam = 0.5 * (lam_r + lam_l)
    right = right / right.sum()
    left = left / float(left @ right)
    return float(lam), left, right


def transitive_components(
    g: SftGraph, tol: float = PERRON_TOL, max_iter: int = PERRON_MAX_ITER
) -> list[TransitiveComponent]:
    """Strongly connected components carrying at least one edge, ordered by
    their smallest vertex."""
    if isinstance(g, EmptyShift):
        return []
    n = len(g.vertices)
    _, labels = connected_components(g.adjacency_sparse(), directed=True, connection="strong")
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(int(labels[v]), []).append(v)
    full = g.adjacency()
    comps = []
    for members in sorted(groups.values(), key=lambda m: m[0]):
        sub = full[np.ix_(members, members)]
        if not sub.any():
            continue
        lam, left, right = perron(sub, tol, max_iter)
        comps.append(TransitiveComponent(g, tuple(members), sub, lam, left, right))
    return comps


def topological_entropy(g: SftGraph | EmptyShift) -> float:
    """Entropy in nats; -inf for the empty shift."""
    if isinstance(g, EmptyShift):
        return -math.inf
    return max(c.entropy for c in transitive_components(g))


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """Stationary Markov measure on one component.

    ``stationary`` and ``transition`` are indexed by position in
    ``component.vertices``.
    """

    component: TransitiveComponent = field(repr=False)
    stationary: np.ndarray
    transition: np.ndarray = field(repr=False)

    @property
    def graph(self) -> SftGraph:
        return self.component.graph

    @property
    def entropy(self) -> float:
        p = self.transition
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.where(p > 0, np.log(np.where(p > 0, p, 1.0)), 0.0)
        return float(-(self.stationary @ (p * logs).sum(axis=1)))

    def cylinder(self, word: Sequence[int]) -> float:
        word = tuple(word)
        g = self.graph
        span = g.order - 1
        local = self.component.local_index
        if len(word) < span:
            n = len(word)
            return float(
                sum(
                    self.stationary[i]
                    for i, v in enumerate(self.component.vertices)
                    if g.vertices[v][:n] == word
                )
            )
        path = g.vertex_path(word)
        if path is None or any(v not in local for v in path):
            return 0.0
        prob = self.stationary[local[path[0]]]
        for a, b in zip(path, path[1:]):
            prob *= self.transition[local[a], local[b]]
        return float(prob)


@dataclass(frozen=True, eq=False)
class MeasureMixture:
    """Convex combination of Markov measures."""

    parts: tuple[tuple[float, MarkovMeasure], ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("a mixture needs at least one measure")
        if any(w <= 0 for w, _ in self.parts) or abs(sum(w for w, _ in self.parts) - 1) > 1e-12:
            raise ValueError("mixture weights must be positive and sum to 1")

    @property
    def graph(self) -> SftGraph:
        return self.parts[0][1].graph

    @property
    def entropy(self) -> float:
        """Entropy of the mixture (affine in the measure)."""
        return sum(w * m.entropy for w, m in self.parts)

    def cylinder(self, word: Sequence[int]) -> float:
        return sum(w * m.cylinder(word) for w, m in self.parts)


def parry_measure(c: TransitiveComponent) -> MarkovMeasure:
    """The unique measure of maximal entropy on a transitive component."""
    lam = c.perron_value
    if lam <= 0:
        raise ValueError("degenerate component: Perron value is zero")
    r, l = c.right, c.left
    p = c.adjacency * r[np.newaxis, :] / (lam * r[:, np.newaxis])
    p = p / p.sum(axis=1, keepdims=True)
    pi = l * r
    pi = pi / pi.sum()
    return MarkovMeasure(c, pi, p)


def cylinder_measure(mu: MarkovMeasure | MeasureMixture, word: Sequence[int]) -> float:
    return mu.cylinder(word)


def mme_mixture(g: SftGraph, tie_tol: float = TIE_TOL) -> MeasureMixture:
    """Uniform average of the Parry measures of all components of maximal
    entropy."""
    if isinstance(g, EmptyShift):
        raise ValueError("the empty shift carries no measure")
    comps = transitive_components(g)
    h_max = max(c.entropy for c in comps)
    top = [c for c in comps if abs(c.entropy - h_max) <= tie_tol * (1 + abs(h_max))]
    w = 1.0 / len(top)
    return MeasureMixture(tuple((w, parry_measure(c)) for c in top))


def check_gluing(g: SftGraph | EmptyShift, gap: int, max_len: int) -> bool:
    """Exhaustively test: uw, wv in L with |w| = gap  =>  uwv in L, for
    1 <= |u|, |v| <= max_len."""
    if isinstance(g, EmptyShift):
        return True
    cache: dict[int, frozenset[Word]] = {}

    def lang(n: int) -> frozenset[Word]:
        if n not in cache:
            cache[n] = g.words(n)
        return cache[n]

    for lu in range(1, max_len + 1):
        for lv in range(1, max_len + 1):
            left = lang(lu + gap)
            right = lang(gap + lv)
            whole = lang(lu + gap + lv)
            by_mid: dict[Word, list[Word]] = {}
            for x in right:
                by_mid.setdefault(x[:gap], []).append(x[gap:])
            for x in left:
                u, w = x[:lu], x[lu:]
                for v in by_mid.get(w, ()):
                    if u + w + v not in whole:
                        return False
    return True


class RefinementTooLarge(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class RefinementResult:
    spec: ForbiddenList
    graph: SftGraph | EmptyShift
    empty: bool
    entropy: float
    components: int


def uniform_visit_refinement(
    spec: ForbiddenList, m: int, d: int, cap: int | None = None
) -> RefinementResult:
    """Forbid every d-word of the shift that misses some allowed m-word.

    The surviving points see every allowed m-word inside every window of
    length d.
    """
    if not 1 <= m <= d:
        raise ValueError("need 1 <= m <= d")
    cap = REFINE_CAP if cap is None else cap
    long_words = language(spec, d)
    if len(long_words) > cap:
        raise RefinementTooLarge(f"|L_{d}| = {len(long_words)} exceeds cap {cap}")
    short = language(spec, m)
    extra = set()
    for w in long_words:
        seen = {w[i : i + m] for i in range(d - m + 1)}
        if not short <= seen:
            extra.add(w)
    refined = ForbiddenList(spec.alphabet, spec.words | frozenset(extra))
    g = refined.graph
    if isinstance(g, EmptyShift):
        return RefinementResult(refined, g, True, -math.inf, 0)
    comps = transitive_components(g)
    return RefinementResult(refined, g, False, max(c.entropy for c in comps), len(comps))


def graph_of(spec: SubshiftSpec, depth: int | None = None) -> SftGraph | EmptyShift:
    """Essential graph of an SFT presentation (or of its cover at ``depth``)."""
    from .language import sft_cover, sft_order

    if isinstance(spec, ForbiddenList):
        return spec.graph
    order = sft_order(spec)
    n = depth if depth is not None else order
    if n is None:
        raise ValueError("spec is not an SFT; pass a cover depth")
    return sft_cover(spec, n).graph
