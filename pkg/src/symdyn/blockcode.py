"""Sliding block codes on subshifts.

A code of range R reads a window of 2R+1 symbols and writes one.  Besides
application and composition this module checks that a code maps a shift
into itself, screens candidate automorphisms against an invariant measure,
and searches for block inverses of bounded range.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .language import SubshiftSpec, language, sft_order
from .sft import MarkovMeasure, MeasureMixture
from .words import Alphabet, Word

__all__ = [
    "BlockCode",
    "EndomorphismCheck",
    "ScreeningRow",
    "ScreeningReport",
    "InverseSearch",
    "CANNOT",
    "INCONCLUSIVE",
    "apply_to_word",
    "check_endomorphism",
    "preimage_words",
    "compose",
    "screening_test",
    "find_inverse",
    "identity_code",
]

CANNOT = "cannot be an automorphism"
INCONCLUSIVE = "passed all checks (inconclusive)"
SCREEN_TOL = 1e-9


@dataclass(frozen=True)
class BlockCode:
    """Local rule ``table`` on (2R+1)-words; ``codomain`` defaults to ``domain``."""

    range: int
    table: Mapping[Word, int] = field(hash=False)
    domain: Alphabet
    codomain: Alphabet | None = None

    def __post_init__(self) -> None:
        if self.range < 0:
            raise ValueError("range must be >= 0")
        if self.codomain is None:
            object.__setattr__(self, "codomain", self.domain)
        width = self.window
        table = {}
        for w, s in self.table.items():
            w = self.domain.check(w)
            if len(w) != width:
                raise ValueError(f"table word {w} has length {len(w)}, expected {width}")
            if not 0 <= s < self.codomain.size:  # type: ignore[union-attr]
                raise ValueError(f"image symbol {s} outside codomain")
            table[w] = s
        object.__setattr__(self, "table", dict(sorted(table.items())))

    @property
    def window(self) -> int:
        return 2 * self.range + 1

    @classmethod
    def from_strings(
        cls, range_: int, rules: Mapping[str, str], domain: Alphabet, codomain: Alphabet | None = None
    ) -> "BlockCode":
        cod = codomain or domain
        return cls(
            range_, {domain.parse(k): cod.index(v.strip()) for k, v in rules.items()}, domain, cod
        )

    def __call__(self, word: Sequence[int]) -> Word:
        return apply_to_word(self, word)


def identity_code(alphabet: Alphabet) -> BlockCode:
    return BlockCode(0, {(i,): i for i in range(alphabet.size)}, alphabet)


def apply_to_word(code: BlockCode, w: Sequence[int]) -> Word:
    w = tuple(w)
    width = code.window
    if len(w) < width:
        raise ValueError(f"word of length {len(w)} is shorter than the window {width}")
    out = []
    for i in range(len(w) - width + 1):
        window = w[i : i + width]
        try:
            out.append(code.table[window])
        except KeyError:
            raise ValueError(f"code is undefined on window {window}") from None
    return tuple(out)


@dataclass(frozen=True)
class EndomorphismCheck:
    """Outcome of testing phi(L_{2R+k}) within L_k for k up to ``depth``.

    ``conclusive`` is True only for SFT presentations checked at least to
    their order; otherwise a positive answer is evidence to ``depth``.
    """

    ok: bool
    depth: int
    conclusive: bool
    counterexample: Word | None = None
    image: Word | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_endomorphism(code: BlockCode, spec: SubshiftSpec, depth: int) -> EndomorphismCheck:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if code.codomain != spec.alphabet or code.domain != spec.alphabet:
        raise ValueError("code alphabets do not match the shift")
    order = sft_order(spec)
    conclusive = order is not None and depth >= order
    for w in language(spec, code.window):
        if w not in code.table:
            return EndomorphismCheck(False, depth, True, w, None)
    for k in range(1, depth + 1):
        target = language(spec, k)
        for v in sorted(language(spec, code.window - 1 + k)):
            img = apply_to_word(code, v)
            if img not in target:
                return EndomorphismCheck(False, depth, True, v, img)
    return EndomorphismCheck(True, depth, conclusive)


def preimage_words(code: BlockCode, w: Sequence[int], spec: SubshiftSpec) -> frozenset[Word]:
    """{v in L_{2R+|w|} : phi(v) = w}."""
    w = tuple(w)
    n = code.window - 1 + len(w)
    return frozenset(v for v in language(spec, n) if apply_to_word(code, v) == w)


def compose(outer: BlockCode, inner: BlockCode, spec: SubshiftSpec | None = None) -> BlockCode:
    """outer after inner, of range R_outer + R_inner.

    With ``spec`` the table covers L_{2R+1}(spec); otherwise every word over
    the inner domain on which both rules are defined.
    """
    if inner.codomain != outer.domain:
        raise ValueError("inner codomain must equal outer domain")
    r = outer.range + inner.range
    width = 2 * r + 1
    if spec is not None:
        candidates = language(spec, width)
    else:
        candidates = itertools.product(range(inner.domain.size), repeat=width)  # type: ignore[assignment]
    table = {}
    for v in candidates:
        try:
            table[tuple(v)] = apply_to_word(outer, apply_to_word(inner, v))[0]
        except ValueError:
            continue
    return BlockCode(r, table, inner.domain, outer.codomain)


@dataclass(frozen=True)
class ScreeningRow:
    word: Word
    measure: float
    preimage_measure: float
    preimage_count: int

    @property
    def difference(self) -> float:
        return abs(self.measure - self.preimage_measure)


@dataclass(frozen=True)
class ScreeningReport:
    """Per-word comparison of mu([w]) with mu([phi^-1(w)]).

    The check is necessary, never sufficient: a code that passes may still
    fail to be an automorphism.
    """

    alphabet: Alphabet
    rows: tuple[ScreeningRow, ...]
    tol: float
    max_len: int
    code_range: int
    metadata: dict = field(default_factory=dict, hash=False, compare=False)

    def row_failed(self, row: ScreeningRow) -> bool:
        return row.difference > self.tol

    @property
    def failures(self) -> list[ScreeningRow]:
        return [r for r in self.rows if self.row_failed(r)]

    @property
    def verdict(self) -> str:
        return CANNOT if self.failures else INCONCLUSIVE

    def row(self, word: Sequence[int]) -> ScreeningRow:
        word = tuple(word)
        for r in self.rows:
            if r.word == word:
                return r
        raise KeyError(word)

    def to_json(self) -> dict:
        fmt = self.alphabet.format
        return {
            "verdict": self.verdict,
            "tol": self.tol,
            "maxLen": self.max_len,
            "range": self.code_range,
            "metadata": self.metadata,
            "rows": [
                {
                    "word": fmt(r.word),
                    "mu": r.measure,
                    "muPreimage": r.preimage_measure,
                    "preimages": r.preimage_count,
                    "difference": r.difference,
                    "verdict": "FAIL" if self.row_failed(r) else "ok",
                }
                for r in self.rows
            ],
        }

    def to_table(self) -> str:
        fmt = self.alphabet.format
        head = ("word", "mu[w]", "mu[preimage]", "|diff|", "verdict")
        body = [
            (
                fmt(r.word),
                f"{r.measure:.10g}",
                f"{r.preimage_measure:.10g}",
                f"{r.difference:.10g}",
                "FAIL" if self.row_failed(r) else "ok",
            )
            for r in self.rows
        ]
        widths = [max(len(x[i]) for x in [head, *body]) for i in range(len(head))]
        lines = ["  ".join(c.ljust(wd) for c, wd in zip(line, widths)).rstrip() for line in [head, *body]]
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def screening_test(
    code: BlockCode,
    mu: MarkovMeasure | MeasureMixture,
    spec: SubshiftSpec,
    max_len: int,
    tol: float = SCREEN_TOL,
) -> ScreeningReport:
    """Compare mu([w]) with the summed measure of the same-length cylinders
    of phi^-1(w) for every w in L_k, k <= max_len.

    By shift invariance the offset of the preimage cylinders is immaterial.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    rows = []
    for k in range(1, max_len + 1):
        by_image: dict[Word, list[Word]] = {}
        for v in language(spec, code.window - 1 + k):
            by_image.setdefault(apply_to_word(code, v), []).append(v)
        for w in sorted(language(spec, k)):
            pre = by_image.get(w, [])
            rows.append(
                ScreeningRow(w, mu.cylinder(w), float(sum(mu.cylinder(v) for v in pre)), len(pre))
            )
    meta = {
        "preimageOffset": "same-length cylinders summed; offset immaterial by shift invariance",
        "sufficiency": "necessary condition only",
    }
    return ScreeningReport(spec.alphabet, tuple(rows), tol, max_len, code.range, meta)


@dataclass(frozen=True)
class InverseSearch:
    """``status`` is "found", "no-inverse" (certified on an SFT domain) or
    "undetermined"; ``conflicts`` maps each failed range to an image word
    whose preimages disagree at the centre."""

    status: str
    code: BlockCode | None
    max_range: int
    conflicts: dict[int, Word] = field(default_factory=dict, hash=False)
    verified_depth: int = 0

    def describe(self) -> str:
        if self.status == "found":
            return f"inverse of range {self.code.range} found"  # type: ignore[union-attr]
        if self.status == "no-inverse":
            return f"no inverse of range <= {self.max_range}"
        return f"undetermined at range <= {self.max_range}"


def find_inverse(
    code: BlockCode, spec: SubshiftSpec, max_range: int, verify_extra: int = 2
) -> InverseSearch:
    """Smallest-range block code psi with psi(phi(x)) = x on the words
    tested, found by reading off the centre symbol of every preimage."""
    if max_range < 0:
        raise ValueError("max_range must be >= 0")
    conflicts: dict[int, Word] = {}
    depth_cap = spec.max_depth
    for rp in range(max_range + 1):
        span = code.range + rp
        n = 2 * span + 1
        if depth_cap is not None and n > depth_cap:
            break
        centre: dict[Word, int] = {}
        clash = None
        for v in sorted(language(spec, n)):
            w = apply_to_word(code, v)
            c = v[span]
            if centre.setdefault(w, c) != c:
                clash = w
                break
        if clash is not None:
            conflicts[rp] = clash
            continue
        inverse = BlockCode(rp, centre, code.codomain, code.domain)  # type: ignore[arg-type]
        verified = 0
        for t in range(verify_extra + 1):
            m = n + t
            if depth_cap is not None and m > depth_cap:
                break
            for v in language(spec, m):
                if apply_to_word(inverse, apply_to_word(code, v)) != v[span : m - span]:
                    raise AssertionError("inconsistent inverse table")  # pragma: no cover
            verified = m
        return InverseSearch("found", inverse, max_range, conflicts, verified)
    certified = sft_order(spec) is not None and len(conflicts) == max_range + 1
    return InverseSearch("no-inverse" if certified else "undetermined", None, max_range, conflicts)
