"""Finite-stage approximations of a characteristic measure.

Along each maximal run of lengths without minimal forbidden words the SFT
covers stop changing, and the measure-of-maximal-entropy mixture of the
cover at the run's end is the candidate measure for that stage.  Nothing
here claims convergence: the whole estimate sequence is returned together
with cylinder-difference diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .language import (
    ForbiddenList,
    StabilityProfile,
    SubshiftSpec,
    complexity,
    sft_cover,
    sft_order,
    stability_profile,
)
from .sft import MeasureMixture, mme_mixture, topological_entropy

__all__ = [
    "CharMeasureEstimate",
    "EntropyBounds",
    "NoStableRunError",
    "characteristic_estimate",
    "entropy_bounds",
    "DIAGNOSTIC_WORD_CAP",
]

DIAGNOSTIC_WORD_CAP = 10**5
TOP_CYLINDERS = 5


class NoStableRunError(ValueError):
    def __init__(self, profile: StabilityProfile):
        super().__init__(
            f"no run of >= 2 consecutive lengths without minimal forbidden words up to depth {profile.depth}"
        )
        self.profile = profile


@dataclass(frozen=True)
class Diagnostic:
    """max |mu_a([w]) - mu_b([w])| over w in L_k of the coarser cover, k <= length."""

    index_from: int
    index_to: int
    length: int
    max_delta: float


@dataclass(frozen=True, eq=False)
class CharMeasureEstimate:
    spec: SubshiftSpec = field(repr=False)
    depth: int
    runs: tuple[tuple[int, int], ...]
    indices: tuple[int, ...]
    covers: tuple[ForbiddenList, ...] = field(repr=False)
    estimates: tuple[MeasureMixture, ...] = field(repr=False)
    diagnostics: tuple[Diagnostic, ...]
    entropy_upper: float
    report_len: int
    profile: StabilityProfile | None = field(default=None, repr=False)

    @property
    def entropies(self) -> list[float]:
        return [m.entropy for m in self.estimates]

    @property
    def entropy_lower_bound(self) -> float:
        return min(self.entropies)

    def run_structure_holds(self) -> bool:
        """X_s and X_{n*} forbid the same words along each chosen run."""
        for (s, _), cover in zip(self.runs, self.covers):
            if sft_cover(self.spec, s).words != cover.words:
                return False
        return True

    def to_json(self) -> dict:
        per_index = {}
        for n, cover, mu in zip(self.indices, self.covers, self.estimates):
            per_index[str(n)] = {
                "entropy": mu.entropy,
                "components": len(mu.parts),
                "topCylinders": _top_cylinders(cover, mu, self.report_len),
            }
        return {
            "depth": self.depth,
            "indices": list(self.indices),
            "perIndex": per_index,
            "diagnostics": [
                {"from": d.index_from, "to": d.index_to, "length": d.length, "maxDelta": d.max_delta}
                for d in self.diagnostics
            ],
            "entropyLower": self.entropy_lower_bound,
            "entropyUpper": self.entropy_upper,
        }


def _capped_length(cover: ForbiddenList, report_len: int) -> int:
    k = report_len
    while k > 1 and len(cover.graph.words(k)) > DIAGNOSTIC_WORD_CAP:
        k -= 1
    return k


def _top_cylinders(cover: ForbiddenList, mu: MeasureMixture, report_len: int) -> list[dict]:
    k = _capped_length(cover, report_len)
    fmt = cover.alphabet.format
    vals = sorted(((-mu.cylinder(w), w) for w in cover.graph.words(k)))
    return [{"word": fmt(w), "mu": -v} for v, w in vals[:TOP_CYLINDERS]]


def _diagnostic(n_a: int, cov_a: ForbiddenList, mu_a: MeasureMixture,
                n_b: int, mu_b: MeasureMixture, report_len: int) -> Diagnostic:
    k_max = _capped_length(cov_a, report_len)
    worst = 0.0
    for k in range(1, k_max + 1):
        for w in cov_a.graph.words(k):
            worst = max(worst, abs(mu_a.cylinder(w) - mu_b.cylinder(w)))
    return Diagnostic(n_a, n_b, k_max, worst)


def characteristic_estimate(
    spec: SubshiftSpec, depth: int, report_len: int = 6
) -> CharMeasureEstimate:
    """MME mixtures of the SFT covers at the end of every stable run."""
    if depth < 1 or report_len < 1:
        raise ValueError("depth and report_len must be >= 1")
    order = sft_order(spec)
    profile = stability_profile(spec, depth)
    if order is not None and order <= depth:
        # an SFT is its own cover from its order on, so every stage agrees;
        # lengths beyond the order carry no minimal forbidden words, so the
        # last run ends at depth
        last = profile.runs[-1] if profile.runs else (depth, 1)
        if last[0] + last[1] - 1 != depth:
            last = (depth, 1)
        runs = (last,)
        indices = (depth,)
    else:
        runs = tuple(profile.stable_runs(2))
        if not runs:
            raise NoStableRunError(profile)
        runs = tuple(sorted(runs, key=lambda r: r[0] + r[1]))
        indices = tuple(s + r - 1 for s, r in runs)
    covers = tuple(sft_cover(spec, n) for n in indices)
    estimates = tuple(mme_mixture(c.graph) for c in covers)
    diags = tuple(
        _diagnostic(indices[i], covers[i], estimates[i], indices[i + 1], estimates[i + 1], report_len)
        for i in range(len(indices) - 1)
    )
    upper = topological_entropy(sft_cover(spec, depth).graph)
    return CharMeasureEstimate(
        spec, depth, runs, indices, covers, estimates, diags, upper, report_len, profile
    )


@dataclass(frozen=True)
class EntropyBounds:
    """``upper`` is always an upper bound; ``lower`` is certified only when
    ``certified`` is True (SFT presentations), otherwise a heuristic
    log(complexity)/N estimate."""

    lower: float
    upper: float
    certified: bool

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lowerKind": "certified" if self.certified else "estimate",
        }


def entropy_bounds(spec: SubshiftSpec, depth: int) -> EntropyBounds:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    upper = topological_entropy(sft_cover(spec, depth).graph)
    order = sft_order(spec)
    if order is not None and order <= depth:
        return EntropyBounds(upper, upper, True)
    count = complexity(spec, depth)
    lower = math.log(count) / depth if count else -math.inf
    return EntropyBounds(lower, upper, False)

