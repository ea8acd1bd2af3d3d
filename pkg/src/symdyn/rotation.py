"""Codings of an irrational circle rotation by a two-interval partition.

All points live in the quadratic field of ``alpha`` and every comparison
is exact.  Cells are half-open ``[x, y)``; a point on a partition
endpoint belongs to the cell it opens.

Two circle partitions recur:

* the gap partition of ``n`` orbit points ``{-i*alpha : 1 <= i <= n}``,
  whose interval lengths obey the three-distance theorem with
  continued-fraction index ``n - 1``;
* the orbit partition ``Q_n`` with endpoints ``{-i*alpha : 1 <= i <= n-1}``
  (the gap partition of n-1 points), compared against the coding
  partition ``P_n`` with endpoints ``{-i*alpha, beta - i*alpha : 1 <= i <= n-1}``.
"""

from __future__ import annotations

import bisect
import functools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .language import LanguageTable, SubshiftSpec, minimal_forbidden
from .quadratic import Convergent, QuadNumber, QuadraticIrrational, QuadraticPoint
from .words import Alphabet, Word

__all__ = [
    "RotationCoding",
    "CirclePartition",
    "GapStructure",
    "WitnessRow",
    "WitnessReport",
    "BetaChain",
    "ChainSearchExhausted",
    "cf_convergents",
    "gap_structure",
    "orbit_partition",
    "coding_partition",
    "coding_language",
    "coding_words",
    "orbit_hits_boundary",
    "mfw_witness_check",
    "orbit_gap_visits",
    "orbit_gap_max_visits",
    "beta_chain_search",
    "z_union_language",
]

BINARY = Alphabet(("0", "1"))


def cf_convergents(alpha: QuadraticIrrational, count: int) -> list[Convergent]:
    """Convergents k = 1 .. count of alpha = [0; a_1, a_2, ...]."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return alpha.convergents(count + 1)[1:]


class CirclePartition:
    """Half-open intervals of the circle cut at a finite set of points."""

    def __init__(self, points: Iterable[QuadraticPoint]):
        self.endpoints: list[QuadraticPoint] = sorted(set(points))

    def __len__(self) -> int:
        return max(1, len(self.endpoints))

    def cell_of(self, x: QuadraticPoint) -> int:
        """Index of the cell [e_i, e_{i+1}) holding x; the wrap-around cell
        [e_last, e_0) has index len - 1."""
        if not self.endpoints:
            return 0
        i = bisect.bisect_right(self.endpoints, x) - 1
        return i % len(self.endpoints)

    def cell_distance(self, i: int, j: int) -> int:
        """Cyclic adjacency distance: 0 same cell, 1 adjacent, 2 twice adjacent."""
        c = len(self)
        d = abs(i - j) % c
        return min(d, c - d)

    def lengths(self) -> list[QuadNumber]:
        e = self.endpoints
        if not e:
            return []
        out = [e[i + 1] - e[i] for i in range(len(e) - 1)]
        out.append(e[0] - e[-1] + e[0].alpha.number(1, 0))
        return [QuadNumber(x.alpha, x.u, x.v) for x in out]


def orbit_partition(alpha: QuadraticIrrational, n: int) -> CirclePartition:
    """Q_n: cut at -alpha, -2alpha, ..., -(n-1)alpha."""
    return CirclePartition(alpha.point(0, -i) for i in range(1, n))


def coding_partition(alpha: QuadraticIrrational, beta: QuadraticPoint, n: int) -> CirclePartition:
    """P_n: cut at -i*alpha and beta - i*alpha for 1 <= i <= n-1."""
    pts = []
    for i in range(1, n):
        pts.append(alpha.point(0, -i))
        pts.append(beta.shift(-i))
    return CirclePartition(pts)


@dataclass(frozen=True)
class GapStructure:
    """Gap lengths of the n points -alpha, ..., -n*alpha against the
    three-distance formula at index N = n - 1 = m*q_k + q_{k-1} + r."""

    n: int
    endpoints: tuple[QuadraticPoint, ...] = field(repr=False)
    lengths: tuple[QuadNumber, ...] = field(repr=False)
    k: int
    m: int
    r: int
    type_lengths: tuple[QuadNumber, QuadNumber, QuadNumber]
    type_counts: tuple[int, int, int]

    @property
    def observed(self) -> Counter:
        return Counter(self.lengths)

    @property
    def predicted(self) -> Counter:
        c: Counter = Counter()
        for length, count in zip(self.type_lengths, self.type_counts):
            if count:
                c[length] += count
        return c

    def matches_formula(self) -> bool:
        return self.observed == self.predicted

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "m": self.m,
            "r": self.r,
            "types": [
                {"type": i + 1, "count": c, "length": float(length), "exact": str(length)}
                for i, (length, c) in enumerate(zip(self.type_lengths, self.type_counts))
            ],
            "distinctLengths": len(self.observed),
            "matchesFormula": self.matches_formula(),
        }


def _decompose(alpha: QuadraticIrrational, index: int) -> tuple[int, int, int, list[Convergent]]:
    """(k, m, r) with index = m*q_k + q_{k-1} + r, 1 <= m <= a_{k+1}, 0 <= r < q_k."""
    count = 4
    while True:
        cvs = alpha.convergents(count)
        for k in range(count - 1):
            q_prev = cvs[k - 1].q if k else 0
            if cvs[k].q + q_prev <= index < cvs[k + 1].q + cvs[k].q:
                m, r = divmod(index - q_prev, cvs[k].q)
                return k, m, r, cvs
        count *= 2


def gap_structure(alpha: QuadraticIrrational, n: int) -> GapStructure:
    if n < 3:
        raise ValueError("gap_structure needs n >= 3")
    part = CirclePartition(alpha.point(0, -i) for i in range(1, n + 1))
    k, m, r, cvs = _decompose(alpha, n - 1)
    one = alpha.number(1, 0)
    eta = lambda j: one if j < 0 else cvs[j].eta  # noqa: E731
    q = cvs[k].q
    types = (eta(k - 1) - eta(k) * m, eta(k), eta(k - 1) - eta(k) * (m - 1))
    counts = (r + 1, n - q, q - r - 1)
    return GapStructure(
        n, tuple(part.endpoints), tuple(part.lengths()), k, m, r, types, counts
    )


@functools.lru_cache(maxsize=1024)
def _coding_cells(alpha: QuadraticIrrational, beta: QuadraticPoint, n: int) -> tuple[frozenset[Word], bool]:
    pts = []
    for i in range(n):
        pts.append(alpha.point(0, -i))
        pts.append(beta.shift(-i))
    distinct = sorted(set(pts))
    boundary_hit = len(distinct) < len(pts)
    words = set()
    for x in distinct:
        words.add(tuple(0 if x.shift(i) < beta else 1 for i in range(n)))
    return frozenset(words), boundary_hit


def coding_words(alpha: QuadraticIrrational, beta: QuadraticPoint, n: int) -> frozenset[Word]:
    """L_n of X_beta: itineraries of the cells of the depth-n refinement."""
    if n == 0:
        return frozenset({()})
    return _coding_cells(alpha, beta, n)[0]


def orbit_hits_boundary(alpha: QuadraticIrrational, beta: QuadraticPoint, n: int) -> bool:
    """True when partition endpoints coincide, i.e. beta lies on the orbit of 0."""
    return _coding_cells(alpha, beta, n)[1]


@dataclass(frozen=True)
class RotationCoding(SubshiftSpec):
    """X_beta: coding of x -> x + alpha by {[0, beta) -> 0, [beta, 1) -> 1}."""

    alpha: QuadraticIrrational
    beta: QuadraticPoint

    def __post_init__(self) -> None:
        if self.beta.sign() <= 0:
            raise ValueError("beta must lie in (0, 1)")

    @property
    def alphabet(self) -> Alphabet:  # type: ignore[override]
        return BINARY

    def _words(self, n: int) -> frozenset[Word]:
        return coding_words(self.alpha, self.beta, n)


def coding_language(alpha: QuadraticIrrational, beta: QuadraticPoint, n: int) -> LanguageTable:
    if beta.sign() <= 0:
        raise ValueError("beta must lie in (0, 1)")
    top = coding_words(alpha, beta, n)
    levels = tuple(frozenset(w[:k] for w in top) for k in range(1, n + 1))
    return LanguageTable(BINARY, levels)


def z_union_language(
    alpha: QuadraticIrrational, betas: Sequence[QuadraticPoint], n: int
) -> LanguageTable:
    """Finite truncation of the closure of the union of the X_beta."""
    if not betas:
        raise ValueError("need at least one beta")
    levels = []
    for k in range(1, n + 1):
        words: set[Word] = set()
        for b in betas:
            words |= {w[:k] for w in coding_words(alpha, b, n)}
        levels.append(frozenset(words))
    return LanguageTable(BINARY, tuple(levels))


@dataclass(frozen=True)
class WitnessRow:
    length: int
    mfw_count: int
    coincidence: bool
    cond1: bool
    cond2: bool
    cond3: bool
    containment: bool

    @property
    def ok(self) -> bool:
        """Containment holds and, if minimal forbidden words exist, one of
        the three proximity conditions in Q_n holds."""
        if not self.containment:
            return False
        return self.mfw_count == 0 or self.cond1 or self.cond2 or self.cond3

    @property
    def coincidence_ok(self) -> bool:
        return self.mfw_count == 0 or self.coincidence


@dataclass(frozen=True)
class WitnessReport:
    """``violations`` covers the proximity conditions and containment;
    ``coincidence_failures`` lists lengths where no point of {0, beta}
    shares a P_n interval with {-n alpha, beta - n alpha}.  The latter can
    happen when beta lies on the orbit of 0 and cut points coincide
    (``boundary_hit``)."""

    rows: tuple[WitnessRow, ...]
    boundary_hit: bool = False

    @property
    def violations(self) -> list[WitnessRow]:
        return [r for r in self.rows if not r.ok]

    @property
    def coincidence_failures(self) -> list[WitnessRow]:
        return [r for r in self.rows if not r.coincidence_ok]

    def to_json(self) -> dict:
        return {
            "rows": [
                {
                    "length": r.length,
                    "mfw": r.mfw_count,
                    "cellCoincidence": r.coincidence,
                    "cond1": r.cond1,
                    "cond2": r.cond2,
                    "cond3": r.cond3,
                    "containment": r.containment,
                    "ok": r.ok,
                }
                for r in self.rows
            ],
            "violations": len(self.violations),
            "coincidenceFailures": [r.length for r in self.coincidence_failures],
            "boundaryHit": self.boundary_hit,
        }


def mfw_witness_check(alpha: QuadraticIrrational, beta: QuadraticPoint, n: int) -> WitnessReport:
    """For every length n'+1 <= n+1 carrying minimal forbidden words of
    X_beta, test the cell-coincidence condition in P_n' and the three
    Q_n' proximity conditions; also check that Q_n' endpoints are P_n'
    endpoints."""
    spec = RotationCoding(alpha, beta)
    zero = alpha.point(0, 0)
    rows = []
    for np_ in range(1, n + 1):
        mfw = minimal_forbidden(spec, np_ + 1)
        p = coding_partition(alpha, beta, np_)
        q = orbit_partition(alpha, np_)
        containment = set(q.endpoints) <= set(p.endpoints)
        orbit = alpha.point(0, -np_)
        left = [zero, beta]
        right = [orbit, beta.shift(-np_)]
        coincidence = any(p.cell_of(x) == p.cell_of(y) for x in left for y in right)
        c_orbit = q.cell_of(orbit)
        cond1 = q.cell_distance(q.cell_of(zero), c_orbit) <= 2
        cond2 = q.cell_of(beta) == c_orbit
        cond3 = q.cell_distance(q.cell_of(-beta), c_orbit) <= 2
        rows.append(WitnessRow(np_ + 1, len(mfw), coincidence, cond1, cond2, cond3, containment))
    return WitnessReport(tuple(rows), orbit_hits_boundary(alpha, beta, n + 1))


def _orbit_gap_counts(alpha: QuadraticIrrational, k: int) -> Counter:
    cvs = alpha.convergents(k + 2)
    qk, ak1 = cvs[k].q, cvs[k + 1].a
    qkm1 = cvs[k - 1].q if k else 0
    part = orbit_partition(alpha, qk + qkm1)
    visits: Counter = Counter()
    for n in range(qk + qkm1, (ak1 + 1) * qk + qkm1):
        visits[part.cell_of(alpha.point(0, -n))] += 1
    return visits


def orbit_gap_visits(alpha: QuadraticIrrational, k: int) -> bool:
    """True iff {-n alpha : q_k + q_{k-1} <= n < (a_{k+1}+1) q_k + q_{k-1}}
    visits no cell of Q_{q_k + q_{k-1}} twice."""
    return orbit_gap_max_visits(alpha, k) <= 1


def orbit_gap_max_visits(alpha: QuadraticIrrational, k: int) -> int:
    counts = _orbit_gap_counts(alpha, k)
    return max(counts.values()) if counts else 0


class ChainSearchExhausted(RuntimeError):
    def __init__(self, message: str, partial: "BetaChain"):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class BetaChain:
    """beta_j = multiples[j] * alpha mod 1 with convergent indices ks[j];
    ``gaps[j]`` is a run of lengths (start, stop inclusive) free of minimal
    forbidden words in every X_beta_i and in their union, or None when no
    such run fits inside ``depth``."""

    alpha: QuadraticIrrational = field(repr=False)
    betas: tuple[QuadraticPoint, ...]
    multiples: tuple[int, ...]
    ks: tuple[int, ...]
    windows: tuple[int, ...]
    gaps: tuple[tuple[int, int] | None, ...]
    depth: int

    @property
    def certified(self) -> bool:
        return all(
            g is not None and g[1] - g[0] + 1 >= j for j, g in enumerate(self.gaps, start=1)
        )

    def satisfies_conditions(self) -> bool:
        """Re-check the three chain conditions from scratch."""
        cvs = self.alpha.convergents(max(self.ks) + 2)
        alpha_pt = self.alpha.point(0, 1)
        for j, k in enumerate(self.ks, start=1):
            if (cvs[k + 1].a + 1) * cvs[k].q <= 7 * j * j:
                return False
            q = orbit_partition(self.alpha, self.windows[j - 1])
            for b in self.betas[j - 1 :]:
                if q.cell_of(b) != q.cell_of(alpha_pt):
                    return False
                if q.cell_of(-b) != q.cell_of(-alpha_pt):
                    return False
        ordered = all(a < b for a, b in zip(self.betas, self.betas[1:]))
        return ordered and all(b < alpha_pt for b in self.betas)

    def to_json(self) -> dict:
        return {
            "betas": [{"multiple": n, "value": float(b)} for n, b in zip(self.multiples, self.betas)],
            "ks": list(self.ks),
            "windows": list(self.windows),
            "gaps": [list(g) if g else None for g in self.gaps],
            "depth": self.depth,
            "certified": self.certified,
        }


def _mfw_free_lengths(specs: Sequence[SubshiftSpec], lo: int, hi: int) -> list[int]:
    out = []
    for length in range(lo, hi + 1):
        if all(not minimal_forbidden(s, length) for s in specs):
            out.append(length)
    return out


def _longest_run(members: list[int]) -> tuple[int, int] | None:
    best = None
    runs: list[list[int]] = []
    for x in members:
        if runs and runs[-1][1] + 1 == x:
            runs[-1][1] = x
        else:
            runs.append([x, x])
    for a, b in runs:
        if best is None or b - a > best[1] - best[0]:
            best = (a, b)
    return best


def beta_chain_search(
    alpha: QuadraticIrrational,
    count: int,
    depth: int,
    max_multiple: int = 10**4,
    max_k: int = 20,
) -> BetaChain:
    """Greedy search for beta_1 < ... < beta_count < alpha among multiples
    of alpha meeting the three chain conditions, followed by certification
    of the MFW-free runs of lengths up to ``depth``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    cvs = alpha.convergents(max_k + 2)
    alpha_pt = alpha.point(0, 1)
    neg_alpha = alpha.point(0, -1)
    betas: list[QuadraticPoint] = []
    multiples: list[int] = []
    ks: list[int] = []
    windows: list[int] = []

    def partial(reason: str) -> ChainSearchExhausted:
        chain = BetaChain(alpha, tuple(betas), tuple(multiples), tuple(ks), tuple(windows),
                          tuple(None for _ in betas), depth)
        return ChainSearchExhausted(f"{reason}; deepest j reached: {len(betas)}", chain)

    k = 0
    for j in range(1, count + 1):
        k += 1
        while k <= max_k and (cvs[k + 1].a + 1) * cvs[k].q <= 7 * j * j:
            k += 1
        if k > max_k:
            raise partial(f"no convergent index <= {max_k} satisfies the growth condition for j={j}")
        window = (cvs[k + 1].a + 1) * cvs[k].q + cvs[k - 1].q - 1
        q = orbit_partition(alpha, window)
        home, neg_home = q.cell_of(alpha_pt), q.cell_of(neg_alpha)
        lower = betas[-1] if betas else alpha.point(0, 0)
        found = None
        for n in range(max(window, 2), max_multiple + 1):
            b = alpha.point(0, n)
            if lower < b < alpha_pt and q.cell_of(b) == home and q.cell_of(-b) == neg_home:
                found = (n, b)
                break
        if found is None:
            raise partial(f"no multiple n <= {max_multiple} fits the cells for j={j}")
        multiples.append(found[0])
        betas.append(found[1])
        ks.append(k)
        windows.append(window)

    specs: list[SubshiftSpec] = [RotationCoding(alpha, b) for b in betas]
    union = z_union_language(alpha, betas, depth)
    gaps = []
    for j, k in enumerate(ks, start=1):
        qk, qkm1, a = cvs[k].q, cvs[k - 1].q, cvs[k + 1].a
        lo, hi = qk + qkm1 + 1, min((a + 1) * qk + qkm1, depth)
        if lo > hi:
            gaps.append(None)
            continue
        free = _mfw_free_lengths([*specs, union], lo, hi)
        run = _longest_run(free)
        gaps.append(run if run and run[1] - run[0] + 1 >= j else None)
    return BetaChain(alpha, tuple(betas), tuple(multiples), tuple(ks), tuple(windows),
                     tuple(gaps), depth)
