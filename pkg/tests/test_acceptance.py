"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` or directly as a script.
"""

from __future__ import annotations

import itertools
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import BIN, brute_language, brute_minimal, fl  # noqa: E402

from symdyn import (  # noqa: E402
    BlockCode,
    ForbiddenList,
    RotationCoding,
    characteristic_estimate,
    check_endomorphism,
    coding_language,
    complexity,
    fibonacci_shift,
    gap_structure,
    language,
    mfw_witness_check,
    minimal_forbidden,
    mme_mixture,
    orbit_gap_visits,
    parse_alpha,
    product,
    screening_test,
    sft_cover,
    topological_entropy,
    uniform_visit_refinement,
    z_union_language,
)
from symdyn.cli import main  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"
GOLDEN = parse_alpha("quad: -1 1 2 5")
SILVER = parse_alpha("quad: -1 1 1 2")


class Check:
    """Collects failure reasons for a single criterion."""

    def __init__(self) -> None:
        self.problems: list[str] = []

    def expect(self, cond: bool, why: str) -> None:
        if not cond:
            self.problems.append(why)

    def timed(self, start: float, limit: float) -> None:
        elapsed = time.perf_counter() - start
        self.expect(elapsed < limit, f"runtime {elapsed:.2f}s >= {limit}s")


def criterion_1(c: Check) -> None:
    import contextlib
    import io
    import json

    expected = {
        "00": 0.44721, "01": 0.27639, "10": 0.27639,
        "0000": 0.17082, "0010": 0.17082, "0100": 0.17082,
        "0001": 0.10557, "0101": 0.10557, "1000": 0.10557, "1010": 0.10557,
        "1001": 0.06525,
    }
    start = time.perf_counter()
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["parry", "--shift", str(DATA / "fib.fw"), "--len", "4", "--format", "json"])
    c.timed(start, 1.0)
    c.expect(code == 0, f"exit code {code}")
    got = {row["word"]: row["mu"] for row in json.loads(buf.getvalue())["cylinders"]}
    for w, v in expected.items():
        c.expect(abs(got.get(w, math.nan) - v) <= 1e-4, f"mu([{w}]) = {got.get(w)} vs {v}")


def criterion_2(c: Check) -> None:
    import contextlib
    import io

    fib = fibonacci_shift()
    phi = BlockCode.from_strings(1, {"000": "0", "001": "0", "010": "1", "100": "1", "101": "1"}, BIN)
    endo = check_endomorphism(phi, fib, 2)
    c.expect(endo.ok, "endomorphism check at depth 2 fails: "
             f"{BIN.format(endo.counterexample or ())} -> {BIN.format(endo.image or ())}")
    rep = screening_test(phi, mme_mixture(fib.graph), fib, 2)
    row = rep.row((0, 0))
    c.expect(abs(row.difference - 0.17082) <= 1e-4, f"gap at 00 is {row.difference:.6f}")
    c.expect(row in rep.failures, "screening does not fail at 00")
    with contextlib.redirect_stdout(io.StringIO()):
        code = main(["screen", "--shift", str(DATA / "fib.fw"), "--code", str(DATA / "phi.bc"), "--maxlen", "2"])
    c.expect(code == 2, f"exit code {code}")


def criterion_3(c: Check) -> None:
    start = time.perf_counter()
    h2 = topological_entropy(fl().graph)
    hf = topological_entropy(fibonacci_shift().graph)
    c.timed(start, 1.0)
    c.expect(abs(h2 - math.log(2)) <= 1e-12, f"full shift {h2!r}")
    root = (1 + math.sqrt(5)) / 2  # larger root of x^2 - x - 1
    c.expect(abs(hf - math.log(root)) <= 1e-9, f"fibonacci {hf!r}")


def criterion_4(c: Check) -> None:
    rng = random.Random(20261015)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        ws = {tuple(rng.randrange(2) for _ in range(rng.randint(1, 4))) for _ in range(rng.randint(1, 4))}
        spec = ForbiddenList(BIN, frozenset(ws))
        cache: dict[int, frozenset] = {}

        def lang(n, ws=ws, cache=cache):
            if n not in cache:
                cache[n] = brute_language(ws, n)
            return cache[n]

        for n in range(1, 9):
            if minimal_forbidden(spec, n) != brute_minimal(lang, n):
                mismatches += 1
                break
    c.timed(start, 30.0)
    c.expect(mismatches == 0, f"{mismatches} SFTs disagree")


def criterion_5(c: Check) -> None:
    start = time.perf_counter()
    bad = [(name, n) for name, a in (("golden", GOLDEN), ("silver", SILVER))
           for n in range(3, 201) if not gap_structure(a, n).matches_formula()]
    c.timed(start, 10.0)
    c.expect(not bad, f"formula mismatch at {bad[:5]}")


def criterion_6(c: Check) -> None:
    for name, a in (("golden", GOLDEN), ("silver", SILVER)):
        table = coding_language(a, a.point(0, 1), 30)
        bad = [k for k in range(1, 31) if complexity(table, k) != k + 1]
        c.expect(not bad, f"{name}: complexity differs at k = {bad}")


def criterion_7(c: Check) -> None:
    for v in (1, 2):
        rep = mfw_witness_check(GOLDEN, GOLDEN.point(0, v), 30)
        c.expect(any(r.mfw_count for r in rep.rows), f"beta = {v}a: no minimal forbidden words seen")
        c.expect(not rep.violations, f"beta = {v}a: violations at {[r.length for r in rep.violations]}")


def criterion_8(c: Check) -> None:
    for name, a in (("golden", GOLDEN), ("silver", SILVER)):
        bad = [k for k in range(2, 9) if not orbit_gap_visits(a, k)]
        c.expect(not bad, f"{name}: false at k = {bad}")


def criterion_9(c: Check) -> None:
    r = uniform_visit_refinement(fl(), 2, 8)
    c.expect(not r.empty, "d = 8 refinement is empty")
    c.expect(r.components == 1, f"{r.components} transitive components")
    c.expect(0 < r.entropy < math.log(2), f"entropy {r.entropy}")
    hs = [uniform_visit_refinement(fl(), 2, d).entropy for d in range(8, 13)]
    c.expect(all(hs[i] < hs[i + 1] for i in range(len(hs) - 1)), f"entropies {hs}")


def criterion_10(c: Check) -> None:
    chain_z = z_union_language(GOLDEN, [GOLDEN.point(0, 22), GOLDEN.point(0, 56)], 60)
    cases = [
        ("fibonacci", fibonacci_shift(), 12),
        ("full2", fl(), 10),
        ("fib000", fl("11", "000"), 12),
        ("sturmian", RotationCoding(GOLDEN, GOLDEN.point(0, 1)), 30),
        ("two-alpha", RotationCoding(GOLDEN, GOLDEN.point(0, 2)), 30),
        ("third", RotationCoding(GOLDEN, GOLDEN.point(Fraction(1, 3), 0)), 30),
        ("chain-union", chain_z, 60),
    ]
    for name, spec, depth in cases:
        hs = [topological_entropy(sft_cover(spec, n).graph) for n in range(1, depth + 1)]
        c.expect(all(hs[i] >= hs[i + 1] - 1e-12 for i in range(depth - 1)), f"{name}: cover entropy not monotone")
        est = characteristic_estimate(spec, depth)
        for cover, mu in zip(est.covers, est.estimates):
            for k in range(1, 7):
                total = sum(mu.cylinder(w) for w in language(cover, k))
                c.expect(abs(total - 1) <= 1e-9, f"{name}: mass {total} at k = {k}")
    for name, spec in (("fibonacci", fibonacci_shift()), ("fib000", fl("11", "000"))):
        base = mme_mixture(spec.graph)
        for n in (4, 9, 16):
            mu = characteristic_estimate(spec, n).estimates[0]
            worst = max(abs(mu.cylinder(w) - base.cylinder(w)) for k in range(1, 7) for w in language(spec, k))
            c.expect(worst <= 1e-12, f"{name}: SFT estimate at N = {n} moves by {worst}")
    mu = characteristic_estimate(fl(), 10).estimates[0]
    for k in range(1, 7):
        for w in itertools.product(range(2), repeat=k):
            c.expect(mu.cylinder(w) == mu.cylinder(tuple(1 - s for s in w)), f"swap changes [{w}]")


def criterion_11(c: Check) -> None:
    a, b = fibonacci_shift(), fl()
    p = product([a, b])
    split = lambda w: (tuple(s // 2 for s in w), tuple(s % 2 for s in w))  # noqa: E731
    for n in range(1, 6):
        want = {tuple(x * 2 + y for x, y in zip(u, v)) for u in language(a, n) for v in language(b, n)}
        c.expect(language(p, n) == want, f"L_{n} of the product differs")
    m2 = minimal_forbidden(p, 2)
    c.expect(bool(m2), "no minimal forbidden 2-words")
    for w in m2:
        u, v = split(w)
        c.expect(u in minimal_forbidden(a, 2) or v in minimal_forbidden(b, 2), f"{w} has no minimal coordinate")


CRITERIA = {
    1: ("Fibonacci Parry cylinder values", criterion_1),
    2: ("screening verdict for the Fibonacci code", criterion_2),
    3: ("entropy closed forms", criterion_3),
    4: ("minimal forbidden words vs brute force", criterion_4),
    5: ("three-distance counts", criterion_5),
    6: ("Sturmian complexity", criterion_6),
    7: ("witness conditions for beta = a, 2a", criterion_7),
    8: ("orbit-gap visits for k = 2..8", criterion_8),
    9: ("uniform-visit refinement of the full shift", criterion_9),
    10: ("characteristic-estimate structure", criterion_10),
    11: ("product shift language", criterion_11),
}


def evaluate(number: int) -> Check:
    c = Check()
    CRITERIA[number][1](c)
    return c


def report_line(number: int, c: Check) -> str:
    status = "PASS" if not c.problems else "FAIL"
    line = f"criterion {number:2d} {status}: {CRITERIA[number][0]}"
    return line if not c.problems else line + " [" + "; ".join(c.problems) + "]"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    c = evaluate(number)
    with capsys.disabled():
        print("\n" + report_line(number, c))
    assert not c.problems, "; ".join(c.problems)


if __name__ == "__main__":
    results = {n: evaluate(n) for n in sorted(CRITERIA)}
    for n, c in results.items():
        print(report_line(n, c))
    sys.exit(0 if all(not c.problems for c in results.values()) else 1)
