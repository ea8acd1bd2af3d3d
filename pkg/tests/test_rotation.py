from __future__ import annotations

from collections import Counter
from decimal import Decimal

import pytest

from symdyn import (
    RotationCoding,
    beta_chain_search,
    cf_convergents,
    coding_language,
    complexity,
    gap_structure,
    language,
    mfw_witness_check,
    minimal_forbidden,
    orbit_gap_visits,
    stability_profile,
    z_union_language,
)
from symdyn.rotation import (
    ChainSearchExhausted,
    coding_partition,
    orbit_partition,
    orbit_gap_max_visits,
    orbit_hits_boundary,
)

from conftest import golden_decimal, silver_decimal

def frac(x: Decimal) -> Decimal:
    return x - x.to_integral_value(rounding="ROUND_FLOOR")


def cf_data(kind: str, count: int):
    """Partial quotients and denominators from the classical expansions."""
    a = [0] + [1 if kind == "golden" else 2] * count
    q = [1]
    qm1 = 0
    for k in range(1, count):
        q.append(a[k] * q[-1] + (q[-2] if k >= 2 else qm1))
    return a, q


def three_distance_oracle(x: Decimal, kind: str, n: int) -> Counter:
    """Counts of each gap length by the formula, evaluated in Decimal."""
    a, q = cf_data(kind, 40)
    p = [0]
    for k in range(1, 40):
        p.append(a[k] * p[-1] + (p[-2] if k >= 2 else 1))
    eta = lambda k: Decimal(1) if k < 0 else abs(q[k] * x - p[k])  # noqa: E731
    N = n - 1
    k = next(k for k in range(39) if q[k] + (q[k - 1] if k else 0) <= N < q[k + 1] + q[k])
    qk1 = q[k - 1] if k else 0
    m, r = divmod(N - qk1, q[k])
    out: Counter = Counter()
    for length, count in (
        (eta(k - 1) - m * eta(k), r + 1),
        (eta(k), n - q[k]),
        (eta(k - 1) - (m - 1) * eta(k), q[k] - r - 1),
    ):
        if count:
            out[round(length, 40)] += count
    return out


def sorted_gaps(x: Decimal, n: int) -> Counter:
    pts = sorted(frac(-i * x) for i in range(1, n + 1))
    gaps = [pts[i + 1] - pts[i] for i in range(n - 1)] + [pts[0] + 1 - pts[-1]]
    return Counter(round(g, 40) for g in gaps)


def decimal_itineraries(x: Decimal, beta: Decimal, n: int) -> frozenset:
    """Itineraries of cell midpoints of the depth-n partition."""
    pts = sorted({round(frac(-i * x), 60) for i in range(n)} | {round(frac(beta - i * x), 60) for i in range(n)})
    mids = [(pts[i] + pts[i + 1]) / 2 for i in range(len(pts) - 1)] + [frac((pts[-1] + pts[0] + 1) / 2)]
    return frozenset(
        tuple(0 if frac(m + i * x) < beta else 1 for i in range(n)) for m in mids
    )


@pytest.fixture(params=["golden", "silver"])
def case(request, golden, silver):
    if request.param == "golden":
        return request.param, golden, golden_decimal()
    return request.param, silver, silver_decimal()


def test_cf_convergents_examples(golden, silver):
    assert [c.q for c in cf_convergents(golden, 6)] == [1, 2, 3, 5, 8, 13]
    assert [c.q for c in cf_convergents(silver, 4)] == [2, 5, 12, 29]
    qs = [c.q for c in cf_convergents(golden, 20)]
    assert all(qs[i] < qs[i + 1] for i in range(1, len(qs) - 1))


def test_three_distance_against_decimal_oracle(case):
    kind, alpha, x = case
    for n in range(3, 121):
        gs = gap_structure(alpha, n)
        assert sum(gs.type_counts) == n
        assert len(gs.observed) <= 3
        assert gs.matches_formula()
        assert sorted_gaps(x, n) == three_distance_oracle(x, kind, n)
        observed = Counter(round(Decimal(float(l)), 12) for l in gs.lengths)
        oracle = Counter(round(l, 12) for l in sorted_gaps(x, n).elements())
        assert observed == oracle


def test_two_lengths_at_convergent_sums(golden):
    qs = [c.q for c in golden.convergents(10)]
    for k in range(2, 9):
        assert len(gap_structure(golden, qs[k] + qs[k - 1]).observed) == 2


def test_gap_structure_four_points(golden):
    gs = gap_structure(golden, 4)
    assert len(gs.lengths) == 4 and len(gs.observed) == 3
    assert gs.matches_formula()


def test_sturmian_complexity_and_oracle(case):
    _, alpha, x = case
    spec = RotationCoding(alpha, alpha.point(0, 1))
    for k in range(1, 31):
        assert complexity(spec, k) == k + 1
    for k in (1, 5, 12):
        assert language(spec, k) == decimal_itineraries(x, x, k)


def test_two_alpha_coding(golden):
    beta = golden.point(0, 2)
    table = coding_language(golden, beta, 10)
    for k in range(1, 11):
        assert len(language(table, k)) <= 2 * k
    # beta lies on the orbit of 0, so the partition endpoints collide
    assert orbit_hits_boundary(golden, beta, 5)


def test_generic_beta_matches_decimal_oracle(golden):
    from fractions import Fraction

    beta = golden.point(Fraction(1, 3), 0)
    x = golden_decimal()
    for k in (1, 4, 9):
        assert coding_language(golden, beta, k).levels[-1] == decimal_itineraries(x, Decimal(1) / 3, k)
    assert not orbit_hits_boundary(golden, beta, 20)


def test_coding_language_is_factorial_table(golden):
    table = coding_language(golden, golden.point(0, 3), 15)
    assert table.max_depth == 15  # LanguageTable validates factoriality on construction


def test_sft_cover_of_sturmian_up_to_four(golden):
    from symdyn import sft_cover

    spec = RotationCoding(golden, golden.point(0, 1))
    cover = sft_cover(spec, 4)
    expected = set()
    for k in range(1, 5):
        expected |= minimal_forbidden(spec, k)
    assert cover.words == frozenset(expected)
    for k in range(1, 5):
        assert language(cover, k) == language(spec, k)


@pytest.mark.parametrize("v", [1, 2])
def test_witness_conditions(golden, v):
    rep = mfw_witness_check(golden, golden.point(0, v), 30)
    assert rep.violations == []
    assert all(r.containment for r in rep.rows)
    assert any(r.mfw_count for r in rep.rows)


def test_witness_cell_coincidence_for_beta_alpha(golden):
    rep = mfw_witness_check(golden, golden.point(0, 1), 30)
    assert rep.coincidence_failures == []


def test_coincidence_can_fail_when_beta_is_on_the_orbit_of_zero(golden):
    rep = mfw_witness_check(golden, golden.point(0, 2), 30)
    assert rep.boundary_hit
    assert [r.length for r in rep.coincidence_failures] == [5]


def test_orbit_partition_is_a_coarsening(golden):
    beta = golden.point(0, 5)
    for n in range(3, 31):
        q, p = orbit_partition(golden, n), coding_partition(golden, beta, n)
        assert set(q.endpoints) <= set(p.endpoints)


def test_cell_adjacency_is_cyclic(golden):
    q = orbit_partition(golden, 6)
    c = len(q)
    assert q.cell_distance(0, c - 1) == 1
    assert q.cell_distance(0, c - 2) == 2


def decimal_max_visits(x: Decimal, kind: str, k: int) -> int:
    a, q = cf_data(kind, k + 3)
    qk1 = q[k - 1] if k else 0
    cuts = sorted(frac(-i * x) for i in range(1, q[k] + qk1))
    visits: Counter = Counter()
    for n in range(q[k] + qk1, (a[k + 1] + 1) * q[k] + qk1):
        y = frac(-n * x)
        cell = sum(1 for c in cuts if c <= y) - 1
        visits[cell % len(cuts)] += 1
    return max(visits.values())


def test_orbit_gap_visits_against_oracle(case):
    kind, alpha, x = case
    for k in range(1, 9):
        assert orbit_gap_max_visits(alpha, k) == decimal_max_visits(x, kind, k)


def test_orbit_gap_visits_golden(golden):
    assert all(orbit_gap_visits(golden, k) for k in range(0, 9))


def test_orbit_gap_silver_two_visits(silver):
    # 2 q_k orbit points against q_k + q_{k-1} - 1 cells forces a repeat
    assert [orbit_gap_max_visits(silver, k) for k in range(2, 7)] == [2] * 5


def test_beta_chain_golden():
    from symdyn import parse_alpha

    golden = parse_alpha("quad: -1 1 2 5")
    chain = beta_chain_search(golden, 2, 60)
    assert chain.satisfies_conditions()
    assert chain.certified
    assert chain.betas[0] < chain.betas[1] < golden.point(0, 1)
    assert chain.ks == (4, 7) and chain.windows == (12, 54)
    # the certified run is free of minimal forbidden words in every shift and the union
    z = z_union_language(golden, chain.betas, 60)
    for j, (lo, hi) in enumerate(chain.gaps, start=1):
        assert hi - lo + 1 >= j
        for length in range(lo, hi + 1):
            assert not minimal_forbidden(z, length)
            for b in chain.betas:
                assert not minimal_forbidden(RotationCoding(golden, b), length)


def test_beta_chain_single(golden):
    chain = beta_chain_search(golden, 1, 30)
    assert len(chain.betas) == 1 and chain.satisfies_conditions()


def test_beta_chain_exhaustion_reports_depth(golden):
    with pytest.raises(ChainSearchExhausted) as info:
        beta_chain_search(golden, 3, 30, max_k=7)
    assert len(info.value.partial.betas) == 2


def test_z_union_examples(golden):
    b1, b2 = golden.point(0, 22), golden.point(0, 56)
    assert z_union_language(golden, [b1], 12).levels == coding_language(golden, b1, 12).levels
    small = z_union_language(golden, [b1], 12)
    big = z_union_language(golden, [b1, b2], 12)
    for k in range(1, 13):
        assert language(small, k) <= language(big, k)
    prof = stability_profile(z_union_language(golden, [b1, b2], 60), 60)
    assert set(range(36, 55)) <= set(prof.empty_lengths)


@pytest.mark.parametrize("u", [(1, 3), (1, 2)])
def test_witness_clean_for_beta_off_the_orbit(golden, u):
    from fractions import Fraction

    rep = mfw_witness_check(golden, golden.point(Fraction(*u), 0), 30)
    assert not rep.boundary_hit
    assert rep.violations == [] and rep.coincidence_failures == []
