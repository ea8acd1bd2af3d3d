from __future__ import annotations

import itertools
from decimal import Decimal, getcontext

import pytest

from symdyn import Alphabet, ForbiddenList, parse_alpha

getcontext().prec = 80

BIN = Alphabet(("0", "1"))


@pytest.fixture(scope="session")
def golden():
    return parse_alpha("quad: -1 1 2 5")


@pytest.fixture(scope="session")
def silver():
    return parse_alpha("quad: -1 1 1 2")


def golden_decimal() -> Decimal:
    return (Decimal(5).sqrt() - 1) / 2


def silver_decimal() -> Decimal:
    return Decimal(2).sqrt() - 1


def brute_language(forbidden, n: int, size: int = 2) -> frozenset:
    """Locally admissible n-words that can be padded by ``pad`` admissible
    symbols on each side; ``pad`` exceeds the number of (order-1)-states,
    so a padded word revisits a state and extends bi-infinitely."""
    forbidden = [tuple(w) for w in forbidden]
    order = max([1, *(len(w) for w in forbidden)])
    pad = size ** max(order - 1, 1) + 1

    def ok(w):
        return not any(
            w[i : i + len(f)] == f for f in forbidden for i in range(len(w) - len(f) + 1)
        )

    def extends(w, step):
        frontier = {w}
        for _ in range(pad):
            nxt = set()
            for x in frontier:
                for b in range(size):
                    y = step(x, b)
                    if ok(y):
                        nxt.add(y[-(order - 1):] if step is right else y[: order - 1])
            if not nxt:
                return False
            frontier = nxt
        return True

    def right(x, b):
        return x + (b,)

    def left(x, b):
        return (b,) + x

    # words shorter than a state are read off as prefixes of state-length words
    m = max(n, order - 1)
    out = set()
    for w in itertools.product(range(size), repeat=m):
        if ok(w) and extends(w, right) and extends(w, left):
            out.add(w[:n])
    return frozenset(out)


def brute_minimal(lang, n: int, size: int = 2) -> frozenset:
    """w forbidden and every proper factor allowed."""
    out = set()
    for w in itertools.product(range(size), repeat=n):
        if w in lang(n):
            continue
        if all(w[i:j] in lang(j - i) for i in range(n) for j in range(i + 1, n + 1) if j - i < n):
            out.add(w)
    return frozenset(out)


def fl(*words: str) -> ForbiddenList:
    return ForbiddenList.of(BIN, list(words))
