"""Command-line front end: ``medianqmc {points,tvalue,bound,converge,verify}``.

Exit codes: 0 on success, 1 when ``verify`` finds a failing check, 2 for
usage errors and invalid parameters, 3 when an instance is too large to
enumerate.  The number of worker threads for ``converge`` comes from the
``MEDIANQMC_THREADS`` environment variable (default 1).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import error_bounds as eb
from .digital_net import (
    DEFAULT_DIRNUMS,
    InstanceTooLarge,
    generate_points,
    niederreiter_matrices,
    per_projection_t,
    sobol_matrices,
    t_value_dual,
    t_value_rank,
)
from .median_qmc import DEFAULT_PRECISION, DEFAULT_REPLICATES
from .plotting import write_convergence_svg
from .poly_lattice import plr_gen_matrices, sample_plr
from .scramble import SeedSpec, draw_scrambled_net
from .testbed import RULES, TestFunction, fit_slope, run_convergence, write_records_csv, write_replicates_csv
from .verification import run_all

THREADS_ENV = "MEDIANQMC_THREADS"
POINT_RULES = ("sobol", "niederreiter", "scrambled-sobol", "plr")
MAX_EMITTED_POINTS = 2**24


class UsageError(Exception):
    pass


def parse_m_range(text: str) -> list:
    """``"a:b"`` (inclusive) or a single integer."""
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m-range {text!r}; use a:b") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad m-range {text!r}; need 1 <= a <= b")
    return list(range(lo, hi + 1))


def _float_list(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _matrices(rule, s, m, b, w, seed, dirnums):
    if rule == "sobol":
        if b != 2:
            raise UsageError("Sobol' points need --b 2")
        return sobol_matrices(s, m, dirnums)
    if rule == "niederreiter":
        return niederreiter_matrices(s, m, b)
    if rule == "scrambled-sobol":
        if b != 2:
            raise UsageError("Sobol' points need --b 2")
        return draw_scrambled_net(sobol_matrices(s, m, dirnums), SeedSpec(seed), w)
    return plr_gen_matrices(sample_plr(b, m, s, np.random.SeedSequence(seed), w))


# ---------------------------------------------------------------------------
# subcommands


def cmd_points(args, out) -> int:
    if args.b ** args.m > MAX_EMITTED_POINTS:
        raise InstanceTooLarge(f"refusing to write {args.b}^{args.m} points (limit 2^24)")
    G = _matrices(args.rule, args.s, args.m, args.b, args.w, args.seed, args.dirnums)
    P = generate_points(G)
    out.write(f"# rule={args.rule} b={args.b} m={args.m} s={args.s} w={G.n} seed={args.seed}\n")
    for row in P.points:
        out.write(",".join(repr(float(x)) for x in row) + "\n")
    return 0


def cmd_tvalue(args, out) -> int:
    G = _matrices(args.rule, args.s, args.m, args.b, args.w, args.seed, args.dirnums)
    out.write(f"rule={args.rule} b={args.b} m={args.m} s={args.s}\n")
    if args.method in ("rank", "both"):
        out.write(f"t (rank test) = {t_value_rank(G)}\n")
    if args.method in ("dual", "both"):
        out.write(f"t (dual scan) = {t_value_dual(G)}\n")
    if args.projections:
        for u, t in per_projection_t(G).items():
            out.write(f"t_{{{','.join(map(str, u))}}} = {t}\n")
    return 0


def _weights(args, s):
    if args.gammas:
        g = args.gammas
        if len(g) < s:
            g = g + [g[-1]] * (s - len(g))
        return eb.WeightModel.product(g)
    return eb.WeightModel.product([j ** -args.gamma_decay for j in range(1, s + 1)])


def _shifts(args, s):
    if args.shifts:
        a = args.shifts
        return a + [a[-1]] * (s - len(a)) if len(a) < s else a
    return [args.shift_scale * j**args.shift_power for j in range(1, s + 1)]


def cmd_bound(args, out) -> int:
    kw = dict(m=args.m, s=args.s, delta=args.delta, b=args.b)
    if args.theorem == "sob1":
        kw["weights"] = _weights(args, args.s)
    elif args.theorem == "sob-alpha":
        kw["weights"] = _weights(args, args.s)
        kw["alpha"] = args.alpha
    else:
        kw["u_seq"] = eb.SmoothWeightSeq.from_shifts(_shifts(args, args.s), args.b)
        kw.update(regime=args.regime, a=args.a, q=args.q)
    res = eb.bound_report(args.theorem, args.family, **kw)
    out.write(f"theorem={res.theorem} family={res.family} b={args.b} m={args.m} s={args.s} delta={args.delta!r}\n")
    note = "  (vacuous: exceeds 1)" if res.vacuous else ""
    out.write(f"epsilon = {res.value!r}{note}\n")
    if res.lam is not None:
        out.write(f"lambda = {res.lam!r}\n")
    if res.tau is not None:
        out.write(f"tau = {res.tau!r}\n")
    for key, val in res.constants.items():
        out.write(f"{key} = {val!r}\n" if not isinstance(val, str) else f"{key} = {val}\n")
    fail = eb.amplify(args.delta, args.r)
    out.write(f"median failure probability (r={args.r}) = {fail!r}{'  (vacuous)' if fail >= 1 else ''}\n")
    return 0


def cmd_converge(args, out) -> int:
    threads = _threads()
    rules = args.rule or list(RULES)
    cs = args.c if args.c else [None]
    funcs = []
    for fid in args.function:
        for c in (cs if fid in ("f4", "f5") else [None]):
            funcs.append(TestFunction(fid, args.s if fid in ("f4", "f5") else None, c))
    records = []
    for rule in rules:
        for tf in funcs:
            records.extend(
                run_convergence(rule, tf, args.m, args.r, args.seed, args.b, args.w, args.dirnums, threads)
            )
    config = {
        "command": "converge",
        "rules": ",".join(rules),
        "functions": ",".join(tf.label for tf in funcs),
        "m": f"{args.m[0]}:{args.m[-1]}",
        "b": args.b,
        "r": args.r,
        "w": args.w,
        "seed": args.seed,
        "dirnums": args.dirnums or DEFAULT_DIRNUMS,
    }
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_records_csv(records, fh, config)
    else:
        write_records_csv(records, out, config)
    if args.replicates:
        with open(args.replicates, "w", encoding="utf-8") as fh:
            for key, val in config.items():
                fh.write(f"# {key}={val}\n")
            write_replicates_csv(records, fh)
    if args.svg:
        title = " ".join(f"{k}={v}" for k, v in config.items() if k != "command")
        write_convergence_svg(records, args.svg, title, config)
    if args.slopes:
        for rule in rules:
            for tf in funcs:
                sub = [rec for rec in records if rec.rule == rule and rec.function == tf.id and rec.c == tf.c]
                try:
                    slope = f"{fit_slope(sub):.4f}"
                except ValueError as exc:
                    slope = f"n/a ({exc})"
                sys.stderr.write(f"slope {rule} {tf.label}: {slope}\n")
    return 0


def cmd_verify(args, out) -> int:
    results = run_all(args.base, args.max_m)
    for res in results:
        out.write(res.line() + "\n")
    ok = all(res.passed for res in results)
    out.write(f"{'all checks passed' if ok else 'some checks FAILED'}\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="medianqmc", description="Median QMC integration toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def common_net(sp, rules):
        sp.add_argument("--rule", choices=rules, default="sobol")
        sp.add_argument("--s", type=int, required=True)
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--b", type=int, default=2)
        sp.add_argument("--w", type=int, default=DEFAULT_PRECISION)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--dirnums", type=Path, default=None, help="direction-number file")

    sp = sub.add_parser("points", help="write the points of a net, one per line")
    common_net(sp, POINT_RULES)
    sp.set_defaults(func=cmd_points)

    sp = sub.add_parser("tvalue", help="t-value by both methods and per projection")
    common_net(sp, POINT_RULES)
    sp.add_argument("--method", choices=("rank", "dual", "both"), default="both")
    sp.add_argument("--projections", action="store_true", help="also print t_u for every projection")
    sp.set_defaults(func=cmd_tvalue)

    sp = sub.add_parser("bound", help="evaluate a probabilistic worst-case error bound")
    sp.add_argument("--theorem", choices=("sob1", "sob-alpha", "inf"), required=True)
    sp.add_argument("--family", choices=("net", "plr"), default="net")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--delta", type=float, default=0.25)
    sp.add_argument("--b", type=int, default=2)
    sp.add_argument("--r", type=int, default=DEFAULT_REPLICATES)
    sp.add_argument("--alpha", type=int, default=2)
    sp.add_argument("--gammas", type=_float_list, default=None,
                    help="product weights gamma_1,gamma_2,...; the last one is repeated")
    sp.add_argument("--gamma-decay", type=float, default=2.0, help="gamma_j = j^-p (default p=2)")
    sp.add_argument("--shifts", type=_float_list, default=None, help="a_1,a_2,... for the smooth space")
    sp.add_argument("--shift-scale", type=float, default=1.0)
    sp.add_argument("--shift-power", type=float, default=0.0, help="a_j = scale * j^power")
    sp.add_argument("--regime", choices=("unweighted", "weighted"), default="unweighted")
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--q", type=float, default=None)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("converge", help="convergence experiment, CSV and SVG output")
    sp.add_argument("--rule", choices=RULES, action="append", help="repeatable; default all three")
    sp.add_argument("--function", type=lambda t: t.split(","), required=True, help="f1..f5, comma-separated")
    sp.add_argument("--c", type=_float_list, default=None, help="parameter(s) of f4/f5")
    sp.add_argument("--s", type=int, default=None, help="dimension for f4/f5")
    sp.add_argument("--m", type=parse_m_range, default=parse_m_range("6:16"), help="range a:b")
    sp.add_argument("--r", type=int, default=DEFAULT_REPLICATES)
    sp.add_argument("--w", type=int, default=DEFAULT_PRECISION)
    sp.add_argument("--b", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--dirnums", type=Path, default=None)
    sp.add_argument("--output", type=Path, default=None, help="CSV path (default stdout)")
    sp.add_argument("--svg", type=Path, default=None)
    sp.add_argument("--replicates", type=Path, default=None, help="companion CSV of replicate errors")
    sp.add_argument("--slopes", action="store_true", help="print fitted slopes to stderr")
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("verify", help="run the exhaustive combinatorial checks")
    sp.add_argument("--base", type=int, default=2)
    sp.add_argument("--max-m", type=int, default=3)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "function", None):
            for fid in args.function:
                if fid in ("f4", "f5") and not args.c:
                    raise UsageError(f"{fid} needs --c")
        return args.func(args, out)
    except InstanceTooLarge as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return 3
    except (UsageError, ValueError, NotImplementedError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        parser.print_usage(sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
