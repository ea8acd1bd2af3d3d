"""Command-line front end.

Exit status: 0 on success, 2 when ``screen`` finds that a code cannot be an
automorphism, 1 on any error.  Output is deterministic; floats carry 10
significant digits.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import random
import sys
from typing import Any, Sequence

from .blockcode import CANNOT, check_endomorphism, find_inverse, screening_test
from .charmeasure import NoStableRunError, characteristic_estimate, entropy_bounds
from .graph import EmptyShift
from .io import (
    FormatError,
    dump_language_table,
    dump_words,
    format_block_code,
    format_forbidden_list,
    load_shift,
    read_block_code,
)
from .language import (
    DepthExceeded,
    ForbiddenList,
    SubshiftSpec,
    distance,
    language,
    minimal_forbidden,
    product,
    sft_cover,
    sft_order,
    stability_profile,
)
from .quadratic import parse_alpha, parse_point
from .rotation import (
    ChainSearchExhausted,
    RotationCoding,
    beta_chain_search,
    coding_language,
    gap_structure,
    mfw_witness_check,
    orbit_hits_boundary,
    z_union_language,
)
from .sft import (
    RefinementTooLarge,
    graph_of,
    mme_mixture,
    parry_measure,
    topological_entropy,
    transitive_components,
    uniform_visit_refinement,
)
from .words import Alphabet

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CANNOT = 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def fmt_float(x: float) -> str:
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return f"{x:.10g}"


def _round_floats(obj: Any) -> Any:
    if isinstance(obj, float):
        return fmt_float(obj) if not math.isfinite(obj) else float(fmt_float(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def emit_json(obj: Any) -> None:
    print(json.dumps(_round_floats(obj), indent=2))


def _spec(args: argparse.Namespace) -> SubshiftSpec:
    shifts = getattr(args, "shift", None) or []
    alpha = getattr(args, "alpha", None)
    beta = getattr(args, "beta", None)
    if shifts and alpha:
        raise CliError("give either --shift or --alpha/--beta, not both")
    if shifts:
        specs = [load_shift(p) for p in shifts]
        return specs[0] if len(specs) == 1 else product(specs)
    if alpha:
        if not beta:
            raise CliError("--alpha needs --beta for a rotation coding")
        a = parse_alpha(alpha)
        return RotationCoding(a, parse_point(a, beta))
    raise CliError("no shift given: use --shift FILE or --alpha/--beta")


def _words_out(args: argparse.Namespace, alphabet: Alphabet, n: int, words) -> None:
    data = dump_words(alphabet, n, words)
    if args.format == "json":
        emit_json(data)
    else:
        print(f"n = {n}, count = {len(data['words'])}")
        for w in data["words"]:
            print(w)


def cmd_lang(args: argparse.Namespace) -> int:
    spec = _spec(args)
    _words_out(args, spec.alphabet, args.n, language(spec, args.n))
    return EXIT_OK


def cmd_mfw(args: argparse.Namespace) -> int:
    spec = _spec(args)
    _words_out(args, spec.alphabet, args.n, minimal_forbidden(spec, args.n))
    return EXIT_OK


def cmd_cover(args: argparse.Namespace) -> int:
    cover = sft_cover(_spec(args), args.n)
    if args.format == "json":
        a = cover.alphabet
        emit_json({"n": args.n, "alphabet": list(a.symbols),
                   "forbidden": [a.format(w) for w in sorted(cover.words, key=lambda w: (len(w), w))]})
    else:
        sys.stdout.write(format_forbidden_list(cover))
    return EXIT_OK


def cmd_dist(args: argparse.Namespace) -> int:
    a, b = load_shift(args.shift[0]), load_shift(args.other)
    d = distance(a, b, args.max_n)
    if args.format == "json":
        emit_json({"maxN": args.max_n, "distance": None if d is None else str(d),
                   "indistinguishable": d is None})
    elif d is None:
        print(f"indistinguishable to depth {args.max_n}")
    else:
        print(f"{d} (first difference at n = {d.denominator.bit_length() - 1})")
    return EXIT_OK


def cmd_stability(args: argparse.Namespace) -> int:
    p = stability_profile(_spec(args), args.depth)
    if args.format == "json":
        emit_json(p.to_json())
    else:
        print(f"certified to depth {p.depth}")
        print("empty lengths: " + " ".join(map(str, p.empty_lengths)))
        for s, r in p.runs:
            print(f"run start {s} length {r}")
        print(f"window density: {p.window_density}")
    return EXIT_OK


def cmd_entropy(args: argparse.Namespace) -> int:
    spec = _spec(args)
    order = sft_order(spec)
    if order is not None and args.depth is None:
        h = topological_entropy(graph_of(spec))
        if args.format == "json":
            emit_json({"entropy": h})
        else:
            print(fmt_float(h))
        return EXIT_OK
    depth = args.depth or 10
    b = entropy_bounds(spec, depth)
    if args.format == "json":
        emit_json({"depth": depth, **b.to_json()})
    else:
        kind = "certified" if b.certified else "estimate"
        print(f"upper {fmt_float(b.upper)}")
        print(f"lower {fmt_float(b.lower)} ({kind})")
    return EXIT_OK


def _cylinder_rows(g, mu, max_len: int) -> list[tuple[str, float]]:
    rows = []
    for k in range(1, max_len + 1):
        for w in sorted(g.words(k)):
            rows.append((g.alphabet.format(w), mu.cylinder(w)))
    return rows


def _measure_out(args: argparse.Namespace, rows, header: dict) -> None:
    if args.format == "json":
        emit_json({**header, "cylinders": [{"word": w, "mu": v} for w, v in rows]})
        return
    for k, v in header.items():
        print(f"{k}: {v if not isinstance(v, float) else fmt_float(v)}")
    width = max((len(w) for w, _ in rows), default=4)
    for w, v in rows:
        print(f"{w.ljust(width)}  {fmt_float(v)}")


def _graph(args: argparse.Namespace):
    spec = _spec(args)
    g = graph_of(spec, args.depth)
    if isinstance(g, EmptyShift):
        raise CliError("the shift is empty")
    return g


def cmd_parry(args: argparse.Namespace) -> int:
    g = _graph(args)
    comps = transitive_components(g)
    h = max(c.entropy for c in comps)
    top = [c for c in comps if abs(c.entropy - h) <= 1e-9 * (1 + abs(h))]
    if len(top) != 1:
        raise CliError(f"{len(top)} components of maximal entropy; use 'mixture'")
    mu = parry_measure(top[0])
    _measure_out(args, _cylinder_rows(g, mu, args.len), {"lambda": top[0].perron_value, "entropy": h})
    return EXIT_OK


def cmd_mixture(args: argparse.Namespace) -> int:
    g = _graph(args)
    mu = mme_mixture(g)
    header = {"components": len(mu.parts), "weight": mu.parts[0][0], "entropy": mu.entropy}
    _measure_out(args, _cylinder_rows(g, mu, args.len), header)
    return EXIT_OK


def cmd_refine(args: argparse.Namespace) -> int:
    spec = _spec(args)
    if not isinstance(spec, ForbiddenList):
        spec = sft_cover(spec, args.depth or args.d)
    r = uniform_visit_refinement(spec, args.m, args.d)
    data = {"m": args.m, "d": args.d, "empty": r.empty, "components": r.components,
            "entropy": r.entropy, "forbidden": len(r.spec.words)}
    if args.format == "json":
        emit_json(data)
    else:
        for k, v in data.items():
            print(f"{k}: {fmt_float(v) if isinstance(v, float) else v}")
    return EXIT_OK


def _code(args: argparse.Namespace, spec: SubshiftSpec):
    return read_block_code(args.code, spec.alphabet)


def cmd_screen(args: argparse.Namespace) -> int:
    spec = _spec(args)
    code = _code(args, spec)
    depth = args.depth or sft_order(spec) or 2
    endo = check_endomorphism(code, spec, depth)
    g = graph_of(spec, None if sft_order(spec) is not None else max(depth, args.maxlen) + 2 * code.range)
    mu = mme_mixture(g)
    report = screening_test(code, mu, spec, args.maxlen, args.tol)
    fmt = spec.alphabet.format
    endo_json = {
        "ok": endo.ok,
        "depth": endo.depth,
        "conclusive": endo.conclusive,
        "counterexample": None if endo.counterexample is None else fmt(endo.counterexample),
        "image": None if endo.image is None else fmt(endo.image),
    }
    verdict = CANNOT if not endo.ok else report.verdict
    if args.format == "json":
        emit_json({"endomorphism": endo_json, "verdict": verdict, "screening": report.to_json()})
    else:
        if endo.ok:
            kind = "conclusive" if endo.conclusive else f"evidence to depth {endo.depth}"
            print(f"endomorphism check: passed ({kind})")
        else:
            print(f"endomorphism check: FAILED ({endo_json['counterexample']} -> {endo_json['image']})")
        print(report.to_table())
        if verdict != report.verdict:
            print(f"overall: {verdict}")
    return EXIT_CANNOT if verdict == CANNOT else EXIT_OK


def cmd_invert(args: argparse.Namespace) -> int:
    spec = _spec(args)
    code = _code(args, spec)
    res = find_inverse(code, spec, args.max_range)
    fmt = spec.alphabet.format
    if args.format == "json":
        emit_json({
            "status": res.status,
            "maxRange": res.max_range,
            "conflicts": {str(k): fmt(v) for k, v in res.conflicts.items()},
            "inverse": None if res.code is None else format_block_code(res.code),
        })
    else:
        print(res.describe())
        if res.code is not None:
            sys.stdout.write(format_block_code(res.code))
    return EXIT_OK


def cmd_rotation(args: argparse.Namespace) -> int:
    alpha = parse_alpha(args.alpha)
    if args.action == "gaps":
        gs = gap_structure(alpha, args.n)
        data = gs.to_json()
        if args.format == "json":
            emit_json(data)
        else:
            print(f"n = {gs.n}: k = {gs.k}, m = {gs.m}, r = {gs.r}")
            for t in data["types"]:
                print(f"type {t['type']}: {t['count']} x {fmt_float(t['length'])}")
            print(f"matches formula: {'yes' if gs.matches_formula() else 'NO'}")
        return EXIT_OK
    if args.action in ("code", "witness"):
        if not args.beta:
            raise CliError("--beta is required")
        beta = parse_point(alpha, args.beta)
        if args.action == "code":
            table = coding_language(alpha, beta, args.n)
            data = dump_language_table(table)
            data["boundaryHit"] = orbit_hits_boundary(alpha, beta, args.n)
            if args.format == "json":
                emit_json(data)
            else:
                if data["boundaryHit"]:
                    print("# beta lies on the orbit of 0; boundary points coded half-open")
                for lv in data["levels"]:
                    print(f"{lv['n']}: {' '.join(lv['words'])}")
            return EXIT_OK
        rep = mfw_witness_check(alpha, beta, args.n)
        data = rep.to_json()
        if args.format == "json":
            emit_json(data)
        else:
            for r in rep.rows:
                if r.mfw_count:
                    print(f"length {r.length}: mfw={r.mfw_count} coincidence={r.coincidence} "
                          f"cond1={r.cond1} cond2={r.cond2} cond3={r.cond3} ok={r.ok}")
            print(f"violations: {len(rep.violations)}")
            if rep.coincidence_failures:
                print("cell coincidence fails at lengths: "
                      + " ".join(str(r.length) for r in rep.coincidence_failures))
        return EXIT_OK
    # chain
    try:
        chain = beta_chain_search(alpha, args.count, args.depth, args.max_multiple, args.max_k)
    except ChainSearchExhausted as exc:
        raise CliError(str(exc)) from None
    data = chain.to_json()
    if args.emit_table:
        table = z_union_language(alpha, chain.betas, args.depth)
        with open(args.emit_table, "w", encoding="utf-8") as fh:
            json.dump(dump_language_table(table), fh, indent=2)
            fh.write("\n")
    if args.format == "json":
        emit_json(data)
    else:
        for j, (n, k, win, gap) in enumerate(
            zip(chain.multiples, chain.ks, chain.windows, chain.gaps), start=1
        ):
            span = "none" if gap is None else f"{gap[0]}..{gap[1]}"
            print(f"beta_{j} = {n}*alpha mod 1  k={k}  window={win}  mfw-free lengths {span}")
        print(f"certified: {'yes' if chain.certified else 'no'} (depth {chain.depth})")
    return EXIT_OK


def cmd_charmeasure(args: argparse.Namespace) -> int:
    spec = _spec(args)
    try:
        est = characteristic_estimate(spec, args.depth, args.report_len)
    except NoStableRunError as exc:
        if args.format == "json":
            emit_json({"error": str(exc), "profile": exc.profile.to_json()})
        else:
            print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    data = est.to_json()
    if args.format == "json":
        emit_json(data)
    else:
        print(f"certified to depth {est.depth}")
        for n in est.indices:
            d = data["perIndex"][str(n)]
            print(f"n* = {n}: entropy {fmt_float(d['entropy'])}, components {d['components']}")
        for d in est.diagnostics:
            print(f"delta {d.index_from} -> {d.index_to} (k <= {d.length}): {fmt_float(d.max_delta)}")
        print(f"entropy upper bound {fmt_float(est.entropy_upper)}")
    return EXIT_OK


def _random_sft(rng: random.Random) -> ForbiddenList:
    alphabet = Alphabet(("0", "1"))
    words = set()
    for _ in range(rng.randint(1, 4)):
        n = rng.randint(1, 4)
        words.add(tuple(rng.randrange(2) for _ in range(n)))
    return ForbiddenList(alphabet, frozenset(words))


def _brute_minimal(spec: ForbiddenList, n: int, langs: dict[int, frozenset]) -> frozenset:
    out = set()
    for w in itertools.product(range(2), repeat=n):
        if w in langs[n]:
            continue
        if all(w[i:j] in langs[j - i] for i in range(n) for j in range(i + 1, n + 1) if j - i < n):
            out.add(w)
    return frozenset(out)


def cmd_selfcheck(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    failures = 0
    for trial in range(args.trials):
        spec = _random_sft(rng)
        langs = {n: language(spec, n) for n in range(0, 9)}
        for n in range(1, 9):
            if minimal_forbidden(spec, n) != _brute_minimal(spec, n, langs):
                failures += 1
                print(f"trial {trial}: mismatch at n={n} for {format_forbidden_list(spec)!r}")
                break
    summary = {"seed": args.seed, "trials": args.trials, "failures": failures}
    if args.format == "json":
        emit_json(summary)
    else:
        print(f"seed {args.seed}: {args.trials} random SFTs, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symdyn", description="Languages, entropy and measures of subshifts.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, help_: str, fn, shift: bool = True) -> argparse.ArgumentParser:
        c = sub.add_parser(name, help=help_)
        c.add_argument("--format", choices=("table", "json"), default="table")
        if shift:
            c.add_argument("--shift", action="append", metavar="FILE",
                           help="forbidden-list file or JSON language table; repeat for a product")
            c.add_argument("--alpha", help="rotation number, 'quad: p q r D' or 'cf: a0; a1, (b1, b2)'")
            c.add_argument("--beta", help="cut point, 'u v' (u + v*alpha) or 'Na'")
        c.set_defaults(func=fn)
        return c

    command("lang", "dump L_n", cmd_lang).add_argument("--n", type=int, required=True)
    command("mfw", "minimal forbidden words of length n", cmd_mfw).add_argument("--n", type=int, required=True)
    command("cover", "SFT cover X_n as a forbidden list", cmd_cover).add_argument("--n", type=int, required=True)

    c = command("dist", "subshift distance", cmd_dist)
    c.add_argument("--other", required=True, metavar="FILE")
    c.add_argument("--max-n", type=int, default=10)

    command("stability", "lengths without minimal forbidden words", cmd_stability).add_argument(
        "--depth", type=int, required=True)

    command("entropy", "topological entropy (bounds for non-SFTs)", cmd_entropy).add_argument(
        "--depth", type=int)

    for name, fn, help_ in (("parry", cmd_parry, "Parry measure cylinders"),
                            ("mixture", cmd_mixture, "maximal-entropy mixture cylinders")):
        c = command(name, help_, fn)
        c.add_argument("--len", type=int, default=4)
        c.add_argument("--depth", type=int, help="cover depth for non-SFT shifts")

    c = command("refine", "uniform-visit refinement", cmd_refine)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--depth", type=int)

    c = command("screen", "measure screening of a block code", cmd_screen)
    c.add_argument("--code", required=True, metavar="FILE")
    c.add_argument("--maxlen", type=int, default=4)
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--depth", type=int, help="endomorphism check depth")

    c = command("invert", "search for a block inverse", cmd_invert)
    c.add_argument("--code", required=True, metavar="FILE")
    c.add_argument("--max-range", type=int, default=3)

    c = command("rotation", "circle-rotation codings", cmd_rotation, shift=False)
    c.add_argument("action", choices=("gaps", "code", "witness", "chain"))
    c.add_argument("--alpha", required=True)
    c.add_argument("--beta")
    c.add_argument("--n", type=int, default=30)
    c.add_argument("--count", type=int, default=2)
    c.add_argument("--depth", type=int, default=60)
    c.add_argument("--max-multiple", type=int, default=10**4)
    c.add_argument("--max-k", type=int, default=20)
    c.add_argument("--emit-table", metavar="FILE", help="write the union language table as JSON")

    c = command("charmeasure", "characteristic-measure estimates", cmd_charmeasure)
    c.add_argument("--depth", type=int, required=True)
    c.add_argument("--report-len", type=int, default=6)

    c = command("selfcheck", "randomized minimal-forbidden-word check", cmd_selfcheck, shift=False)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--trials", type=int, default=50)
    return p


def _validate(args: argparse.Namespace) -> None:
    for name in ("n", "depth", "len", "maxlen", "m", "d", "count", "report_len", "trials", "max_n"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise CliError(f"--{name.replace('_', '-')} must be >= 1")
    tol = getattr(args, "tol", None)
    if tol is not None and tol <= 0:
        raise CliError("--tol must be positive")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except (CliError, FormatError, DepthExceeded, RefinementTooLarge, ValueError, OSError) as exc:
        print(f"symdyn {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
