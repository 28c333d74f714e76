"""Command-line front end: ``lpptour <subcommand> [flags]``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
Rationals are printed as ``a/b``; floats as their shortest round-trip repr.
``LPPTOUR_TOL`` and ``LPPTOUR_WORKERS`` override the default tolerance and
worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Callable

from . import asymptotics, percolation, recurrence, series
from .numerics import as_probability, format_rational

VERIFY_PROBABILITIES = ("1/2", "1/3", "3/4")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    return float(raw) if raw else default


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


def _prob(text: str) -> Fraction:
    try:
        return as_probability(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _r(x: Fraction) -> str:
    return format_rational(x)


def _write(out, fmt: str, payload, rows: list[dict] | None = None, table: str | None = None) -> None:
    if fmt == "json":
        out.write(json.dumps(payload) + "\n")
    elif fmt == "csv":
        rows = rows if rows is not None else [payload]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write((table if table is not None else json.dumps(payload)) + "\n")


def cmd_exact(args, out):
    value = recurrence.expected_weight(args.n, args.p)
    payload = {"n": args.n, "p": _r(args.p), "expected_weight": _r(value)}
    _write(out, args.format, payload, table=_r(value))


def _dist_output(args, out, dist: recurrence.WeightDistribution):
    rows = [{"weight": k, "probability": _r(x)} for k, x in enumerate(dist.probs)]
    _write(out, args.format, dist.to_dict(), rows, ", ".join(_r(x) for x in dist.probs))


def cmd_dist(args, out):
    _dist_output(args, out, recurrence.distribution(args.n, args.p))


def cmd_oracle(args, out):
    _dist_output(args, out, percolation.brute_force_distribution(args.n, args.p))


def cmd_pgf(args, out):
    poly = recurrence.pgf(args.n, args.p)
    coeffs = [_r(poly[k]) for k in range(args.n)]
    rows = [{"power": k, "coefficient": c} for k, c in enumerate(coeffs)]
    table = " + ".join(f"({c})t^{k}" for k, c in enumerate(coeffs))
    _write(out, args.format, {"n": args.n, "p": _r(args.p), "coeffs": coeffs}, rows, table)


def cmd_moments(args, out):
    if args.float or args.n_max > args.exact_threshold:
        m1, m2 = recurrence.moments_float(args.n_max, args.p)
        rows = [
            {"n": n, "m1": repr(float(m1[n])), "m2": repr(float(m2[n])), "variance": repr(float(m2[n] - m1[n] ** 2))}
            for n in range(args.n_max + 1)
        ]
    else:
        tab = recurrence.moments(args.n_max, args.p)
        rows = [{"n": n, "m1": _r(tab.m1[n]), "m2": _r(tab.m2[n]), "variance": _r(tab.variance(n))} for n in range(args.n_max + 1)]
    table = "\n".join(f"{r['n']}\t{r['m1']}\t{r['m2']}\t{r['variance']}" for r in rows)
    _write(out, args.format, {"p": _r(args.p), "rows": rows}, rows, table)


def cmd_series(args, out):
    q = 1 - args.p
    if args.kind == "Z":
        z = series.series_Z(q, args.order)
        coeffs = [[_r(c) for c in z[n].coeffs] for n in range(args.order + 1)]
        rows = [{"n": n, "pgf": " ".join(c)} for n, c in enumerate(coeffs)]
        _write(out, args.format, {"order": args.order, "coeffs": coeffs}, rows, "\n".join(r["pgf"] for r in rows))
        return
    build = {"A": series.series_A, "B": series.series_B, "G": series.series_G, "H": series.series_H}[args.kind]
    s = build(q, args.order)
    rows = [{"n": n, "coefficient": _r(c)} for n, c in enumerate(s.coeffs)]
    _write(out, args.format, json.loads(s.to_json()), rows, ", ".join(r["coefficient"] for r in rows))


def cmd_compositions(args, out):
    q = 1 - args.p
    h = series.h_by_compositions(args.n, q, args.limit)
    g = series.g_by_compositions(args.n, q, args.limit)
    payload = {"n": args.n, "p": _r(args.p), "h": _r(h), "g": _r(g)}
    if args.list:
        payload["compositions"] = [list(a) for a in series.compositions(args.n)]
    table = f"h_{args.n} = {_r(h)}\ng({args.n}) = {_r(g)}"
    if args.list:
        table += "\n" + "\n".join(" ".join(map(str, a)) for a in payload["compositions"])
    _write(out, args.format, payload, [{k: payload[k] for k in ("n", "p", "h", "g")}], table)


def cmd_beta(args, out):
    v = asymptotics.beta_tr(args.p, args.tol)
    _write(out, args.format, {"p": _r(args.p), **v.to_dict()}, table=v.digits())


def cmd_sigma(args, out):
    v = asymptotics.sigma_w(args.p, args.tol, args.formula)
    _write(out, args.format, {"p": _r(args.p), "formula": args.formula, **v.to_dict()}, table=v.digits())


def cmd_varslope(args, out):
    if args.compare:
        cmp = asymptotics.compare_variance_constants(args.n, args.p, args.tol)
        rows = [{"formula": f, "value": repr(cmp[f]["value"]), "relative_gap": repr(cmp[f]["relative_gap"])} for f in asymptotics.FORMULAS]
        table = f"variance_slope\t{cmp['variance_slope']!r}\n" + "\n".join(f"{r['formula']}\t{r['value']}\t{r['relative_gap']}" for r in rows)
        _write(out, args.format, cmp, rows, table)
        return
    v = asymptotics.variance_slope(args.n, args.p)
    _write(out, args.format, {"n": args.n, "p": _r(args.p), "variance_slope": v}, table=repr(v))


def cmd_simulate(args, out):
    seed = percolation.new_seed() if args.seed is None else args.seed
    values = percolation.sample_values(args.n, args.p, args.count, seed, args.workers)
    report = percolation.summarize(args.n, args.p, values, seed, args.workers)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["sample", "x"])
            w.writerows(enumerate(values.tolist()))
    table = "\n".join(f"{k}\t{v}" for k, v in report.to_dict().items())
    _write(out, args.format, report.to_dict(), table=table)
    if args.format != "json":
        print(f"seed: {seed}", file=sys.stderr)


def cmd_clt(args, out):
    seed = percolation.new_seed() if args.seed is None else args.seed
    s = asymptotics.clt_diagnostic(args.n, args.p, args.count, seed, args.workers, args.formula, args.windows)
    d = s.to_dict()
    _write(out, args.format, d, table="\n".join(f"{k}\t{v}" for k, v in d.items()))


def verify_checks(n_max: int, probabilities) -> list[tuple[str, bool]]:
    """Cross-check recurrence, series, compositions and brute force; returns ``(label, ok)`` pairs."""
    results = []
    for p in probabilities:
        p = as_probability(p)
        q = 1 - p
        tag = f"p={_r(p)}"
        A, B = series.series_A(q, n_max), series.series_B(q, n_max)
        results.append((f"{tag} 1 + x*B == A to order {n_max}", (series.one(n_max) + B.shift()).truncate(n_max) == A))
        G = series.series_G(q, n_max)
        H = series.series_H(q, n_max)
        Z = series.series_Z(q, n_max)
        for n in range(1, n_max + 1):
            f = recurrence.expected_weight(n, p)
            poly = recurrence.pgf(n, p)
            results.append((f"{tag} n={n} [x^n]G == 1 + f(n)", G[n] == 1 + f))
            results.append((f"{tag} n={n} pgf(1) == 1, pgf'(1) == f(n)", poly(Fraction(1)) == 1 and poly.derivative()(Fraction(1)) == f))
            results.append((f"{tag} n={n} [x^n]Z == pgf", Z[n] == poly))
            if n <= series.COMPOSITION_LIMIT:
                results.append((f"{tag} n={n} h_n by compositions", series.h_by_compositions(n, q) == H[n]))
                results.append((f"{tag} n={n} g(n) by compositions", series.g_by_compositions(n, q) == G[n]))
            if n < percolation.BRUTE_FORCE_MAX_N:
                results.append((f"{tag} n={n} distribution == brute force", recurrence.distribution(n, p) == percolation.brute_force_distribution(n, p)))
    return results


def cmd_verify(args, out):
    ps = [args.p] if args.p is not None else VERIFY_PROBABILITIES
    results = verify_checks(args.n_max, ps)
    failed = [label for label, ok in results if not ok]
    if args.format == "json":
        out.write(json.dumps({"checks": len(results), "failed": failed}) + "\n")
    else:
        for label, ok in results:
            if not ok or args.verbose:
                out.write(f"{'ok  ' if ok else 'FAIL'} {label}\n")
        out.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    tol = _env_float("LPPTOUR_TOL", asymptotics.DEFAULT_TOL)
    workers = _env_int("LPPTOUR_WORKERS", 1)
    parser = _Parser(prog="lpptour", description="Last passage percolation on Bernoulli-weighted transitive tournaments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str, *, n=False, n_max=False, p=True):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=("json", "csv", "table"), default="table")
        if p:
            sp.add_argument("--p", type=_prob, required=True, help='edge probability as "a/b"')
        if n:
            sp.add_argument("--n", type=int, required=True)
        if n_max:
            sp.add_argument("--n-max", type=int, required=True)
        return sp

    add("exact", cmd_exact, "exact E[X_n]", n=True)
    add("dist", cmd_dist, "exact distribution of X_n", n=True)
    add("pgf", cmd_pgf, "exact PGF of X_n", n=True)
    sp = add("moments", cmd_moments, "E[X_n], E[X_n^2] for n <= n_max", n_max=True)
    sp.add_argument("--float", action="store_true", help="use the floating-point recurrence")
    sp.add_argument("--exact-threshold", type=int, default=recurrence.EXACT_THRESHOLD)
    sp = add("series", cmd_series, "truncated series A, B, G, H or Z")
    sp.add_argument("--kind", choices=("A", "B", "G", "H", "Z"), required=True)
    sp.add_argument("--order", type=int, required=True)
    sp = add("compositions", cmd_compositions, "h_n and g(n) by composition sums", n=True)
    sp.add_argument("--limit", type=int, default=series.COMPOSITION_LIMIT)
    sp.add_argument("--list", action="store_true", help="also list the compositions of n")
    sp = add("beta", cmd_beta, "limit constant beta_tr(p)")
    sp.add_argument("--tol", type=float, default=tol)
    sp = add("sigma", cmd_sigma, "CLT scaling constant sigma_w")
    sp.add_argument("--tol", type=float, default=tol)
    sp.add_argument("--formula", choices=asymptotics.FORMULAS, default="theorem")
    sp = add("varslope", cmd_varslope, "var(X_n)/(n-1)", n=True)
    sp.add_argument("--compare", action="store_true", help="compare against every closed form")
    sp.add_argument("--tol", type=float, default=tol)
    for name, func, help in (("simulate", cmd_simulate, "Monte Carlo estimate of E[X_n]"), ("clt", cmd_clt, "standardized-sample CLT diagnostic")):
        sp = add(name, func, help, n=True)
        sp.add_argument("--count", type=int, required=True)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--workers", type=int, default=workers)
        if name == "simulate":
            sp.add_argument("--csv", metavar="PATH", help="write per-sample X values to PATH")
        else:
            sp.add_argument("--formula", choices=asymptotics.FORMULAS, default="theorem")
            sp.add_argument("--windows", action="store_true", help="also estimate the two-window correlation")
    add("oracle", cmd_oracle, "brute-force distribution of X_n (n <= 8)", n=True)
    sp = add("verify", cmd_verify, "cross-check every exact route", n_max=True, p=False)
    sp.add_argument("--p", type=_prob, default=None, help="check one p instead of 1/2, 1/3, 3/4")
    sp.add_argument("--verbose", action="store_true")
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        code = args.func(args, out)
    except UsageError as exc:
        print(f"lpptour: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        print(f"lpptour: error: {exc}", file=sys.stderr)
        return 2
    return code or 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
