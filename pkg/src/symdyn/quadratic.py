"""Exact arithmetic in a real quadratic field Q(sqrt(D)).

Every number handled by the rotation machinery has the form ``u + v*alpha``
with ``u`` rational and ``v`` an integer, where ``alpha`` is a fixed
quadratic irrational.  Signs, floors and orderings of such numbers are
decided exactly; floats are only used as a filter before the exact test.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

__all__ = [
    "QuadraticIrrational",
    "QuadNumber",
    "QuadraticPoint",
    "Convergent",
    "parse_alpha",
    "parse_point",
]

# |float(x)| below this is settled by the exact test
_FILTER = 1e-9


def _squarefree_part(n: int) -> tuple[int, int]:
    """Return (k, d) with n = k*k*d and d squarefree."""
    k, d, p = 1, n, 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            k *= p
        p += 1
    return k, d


def _sign_surd(x: Fraction, y: Fraction, d: int) -> int:
    """Sign of x + y*sqrt(d) for squarefree d > 1."""
    sx = (x > 0) - (x < 0)
    sy = (y > 0) - (y < 0)
    if sy == 0:
        return sx
    if sx == 0 or sx == sy:
        return sy
    return sx if x * x > y * y * d else sy


def _floor_surd(x: Fraction, y: Fraction, d: int) -> int:
    """floor(x + y*sqrt(d)) exactly."""
    if y == 0:
        return math.floor(x)
    c = math.lcm(x.denominator, y.denominator)
    a = int(x * c)
    b = int(y * c)
    root = math.isqrt(b * b * d)
    floor_b_sqrt = root if b > 0 else -root - 1
    return (a + floor_b_sqrt) // c


@dataclass(frozen=True)
class Convergent:
    """One continued-fraction step: partial quotient, convergent p/q, and
    the distance ``eta = |q*alpha - p|`` as an exact field number."""

    k: int
    a: int
    p: int
    q: int
    eta: "QuadNumber"


class QuadraticIrrational:
    """A real quadratic irrational reduced into (0, 1).

    Construct with :meth:`from_pqrd` for ``(p + q*sqrt(D)) / r`` or with
    :meth:`from_cf` for an eventually periodic continued fraction.
    """

    def __init__(self, rational: Fraction, surd: Fraction, d: int):
        if d <= 1:
            raise ValueError(f"D must exceed 1, got {d}")
        k, d0 = _squarefree_part(d)
        if d0 == 1:
            raise ValueError(f"D={d} is a perfect square; alpha would be rational")
        surd = Fraction(surd) * k
        if surd == 0:
            raise ValueError("surd coefficient must be nonzero")
        rational = Fraction(rational)
        rational -= _floor_surd(rational, surd, d0)
        self.rational = rational
        self.surd = surd
        self.d = d0
        self._value = float(rational) + float(surd) * math.sqrt(d0)
        self._pq: list[int] = []
        self._cf_state: tuple[int, int, int] | None = None

    @classmethod
    def from_pqrd(cls, p: int, q: int, r: int, d: int) -> "QuadraticIrrational":
        if r == 0:
            raise ValueError("r must be nonzero")
        return cls(Fraction(p, r), Fraction(q, r), d)

    @classmethod
    def from_cf(cls, prefix: list[int], period: list[int]) -> "QuadraticIrrational":
        """Value of [prefix; (period)] with a nonempty repeating block."""
        if not period:
            raise ValueError("a quadratic irrational needs a nonempty period")
        if any(a < 1 for a in period) or any(a < 1 for a in prefix[1:]):
            raise ValueError("partial quotients after the first must be positive")
        # y = [period; y]: y = (P y + P1) / (Q y + Q1)
        p_prev, p_cur, q_prev, q_cur = 1, period[0], 0, 1
        for a in period[1:]:
            p_prev, p_cur = p_cur, a * p_cur + p_prev
            q_prev, q_cur = q_cur, a * q_cur + q_prev
        # q_cur*y^2 + (q_prev - p_cur)*y - p_prev = 0, take the root > 1
        a2, a1, a0 = q_cur, q_prev - p_cur, -p_prev
        disc = a1 * a1 - 4 * a2 * a0
        y = _QF(Fraction(-a1, 2 * a2), Fraction(1, 2 * a2), disc)
        x = y
        for a in reversed(prefix):
            x = _QF(Fraction(a), Fraction(0), disc) + x.reciprocal()
        return cls(x.x, x.y, disc)

    def __repr__(self) -> str:
        return f"QuadraticIrrational({self.rational} + {self.surd}*sqrt({self.d}))"

    def __float__(self) -> float:
        return self._value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadraticIrrational):
            return NotImplemented
        return (self.rational, self.surd, self.d) == (other.rational, other.surd, other.d)

    def __hash__(self) -> int:
        return hash((self.rational, self.surd, self.d))

    def sign(self, u: Fraction | int, v: Fraction | int) -> int:
        """Exact sign of u + v*alpha."""
        approx = float(u) + v * self._value
        if abs(approx) > _FILTER * (1 + abs(v)):
            return 1 if approx > 0 else -1
        u = Fraction(u)
        return _sign_surd(u + v * self.rational, v * self.surd, self.d)

    def floor(self, u: Fraction | int, v: Fraction | int) -> int:
        """Exact floor of u + v*alpha."""
        u = Fraction(u)
        return _floor_surd(u + v * self.rational, v * self.surd, self.d)

    def _next_quotient(self) -> int:
        if self._cf_state is None:
            # alpha = (P + sqrt(dd)) / Q with Q | dd - P^2
            c = math.lcm(self.rational.denominator, self.surd.denominator)
            P = int(self.rational * c)
            B = int(self.surd * c)
            Q = c
            if B < 0:
                P, B, Q = -P, -B, -Q
            dd = B * B * self.d
            if (dd - P * P) % Q:
                P *= abs(Q)
                dd *= Q * Q
                Q *= abs(Q)
            self._cf_state = (P, Q, dd)
        P, Q, dd = self._cf_state
        s = math.isqrt(dd)
        a = (P + s) // Q if Q > 0 else (-P - s - 1) // (-Q)
        P = a * Q - P
        Q = (dd - P * P) // Q
        self._cf_state = (P, Q, dd)
        return a

    def partial_quotient(self, k: int) -> int:
        """a_k of alpha = [a_0; a_1, a_2, ...] (a_0 = 0)."""
        while len(self._pq) <= k:
            self._pq.append(self._next_quotient())
        return self._pq[k]

    def convergents(self, count: int) -> list[Convergent]:
        """Convergents k = 0 .. count-1 with exact eta_k = (-1)^k (q_k alpha - p_k)."""
        if count < 1:
            raise ValueError("count must be >= 1")
        out = []
        p2, p1, q2, q1 = 0, 1, 1, 0  # p_{-2}, p_{-1}, q_{-2}, q_{-1}
        for k in range(count):
            a = self.partial_quotient(k)
            p, q = a * p1 + p2, a * q1 + q2
            sgn = 1 if k % 2 == 0 else -1
            out.append(Convergent(k, a, p, q, QuadNumber(self, Fraction(-sgn * p), sgn * q)))
            p2, p1, q2, q1 = p1, p, q1, q
        return out

    def number(self, u: Fraction | int = 0, v: int = 0) -> "QuadNumber":
        return QuadNumber(self, Fraction(u), v)

    def point(self, u: Fraction | int = 0, v: int = 0) -> "QuadraticPoint":
        return QuadraticPoint.reduce(self, Fraction(u), v)


@dataclass(frozen=True)
class _QF:
    """Scratch element x + y*sqrt(d) of Q(sqrt(d)) used by from_cf."""

    x: Fraction
    y: Fraction
    d: int

    def __add__(self, other: "_QF") -> "_QF":
        return _QF(self.x + other.x, self.y + other.y, self.d)

    def reciprocal(self) -> "_QF":
        norm = self.x * self.x - self.y * self.y * self.d
        return _QF(self.x / norm, -self.y / norm, self.d)


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class QuadNumber:
    """The real number ``u + v*alpha`` (u rational, v integer)."""

    alpha: QuadraticIrrational = field(repr=False)
    u: Fraction
    v: int

    def __float__(self) -> float:
        return float(self.u) + self.v * float(self.alpha)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadNumber):
            return NotImplemented
        return self.u == other.u and self.v == other.v and self.alpha == other.alpha

    def __hash__(self) -> int:
        return hash((self.u, self.v))

    def __lt__(self, other: "QuadNumber") -> bool:
        return self.alpha.sign(self.u - other.u, self.v - other.v) < 0

    def __add__(self, other: "QuadNumber") -> "QuadNumber":
        return QuadNumber(self.alpha, self.u + other.u, self.v + other.v)

    def __sub__(self, other: "QuadNumber") -> "QuadNumber":
        return QuadNumber(self.alpha, self.u - other.u, self.v - other.v)

    def __neg__(self) -> "QuadNumber":
        return QuadNumber(self.alpha, -self.u, -self.v)

    def __mul__(self, k: int) -> "QuadNumber":
        return QuadNumber(self.alpha, self.u * k, self.v * k)

    __rmul__ = __mul__

    def sign(self) -> int:
        return self.alpha.sign(self.u, self.v)

    def mod1(self) -> "QuadraticPoint":
        return QuadraticPoint.reduce(self.alpha, self.u, self.v)

    def __str__(self) -> str:
        return f"{self.u}{self.v:+d}a"


class QuadraticPoint(QuadNumber):
    """A point ``u + v*alpha mod 1`` on the circle, stored in [0, 1)."""

    @classmethod
    def reduce(cls, alpha: QuadraticIrrational, u: Fraction, v: int) -> "QuadraticPoint":
        u = Fraction(u)
        return cls(alpha, u - alpha.floor(u, v), v)

    def __post_init__(self) -> None:
        if not (0 <= float(self) < 1 + 1e-9) or self.sign() < 0 or (
            self.alpha.sign(self.u - 1, self.v) >= 0
        ):
            raise ValueError(f"{self} is not reduced into [0, 1)")

    def __neg__(self) -> "QuadraticPoint":
        return QuadraticPoint.reduce(self.alpha, -self.u, -self.v)

    def shift(self, k: int) -> "QuadraticPoint":
        """This point rotated by k*alpha."""
        return QuadraticPoint.reduce(self.alpha, self.u, self.v + k)


_QUAD = re.compile(r"^\s*quad\s*:\s*(-?\d+)\s+(-?\d+)\s+(-?\d+)\s+(\d+)\s*$")
_CF = re.compile(r"^\s*cf\s*:\s*(-?\d+)\s*;\s*(.*)$")


def parse_alpha(text: str) -> QuadraticIrrational:
    """Parse ``quad: p q r D`` or ``cf: a0; a1, a2, (b1, b2)``."""
    m = _QUAD.match(text)
    if m:
        p, q, r, d = (int(g) for g in m.groups())
        return QuadraticIrrational.from_pqrd(p, q, r, d)
    m = _CF.match(text)
    if m:
        a0 = int(m.group(1))
        rest = m.group(2).strip()
        if "(" not in rest or not rest.endswith(")"):
            raise ValueError(f"cf form needs a parenthesised period: {text!r}")
        head, period = rest[:-1].split("(", 1)
        pre = [int(t) for t in head.replace(",", " ").split()]
        per = [int(t) for t in period.replace(",", " ").split()]
        return QuadraticIrrational.from_cf([a0, *pre], per)
    raise ValueError(f"cannot parse alpha {text!r}; expected 'quad: p q r D' or 'cf: ...'")


def parse_point(alpha: QuadraticIrrational, text: str) -> QuadraticPoint:
    """Parse ``u v`` (meaning u + v*alpha mod 1), or ``Na`` for N*alpha."""
    text = text.strip()
    m = re.fullmatch(r"(-?\d+)\s*a(lpha)?", text)
    if m:
        return alpha.point(0, int(m.group(1)))
    parts = text.split()
    if len(parts) != 2:
        raise ValueError(f"cannot parse point {text!r}; expected 'u v' or 'Na'")
    return alpha.point(Fraction(parts[0]), int(parts[1]))
