"""Command-line front end: ``dirinv <subcommand> ...`` (or ``python -m dirinv``).

Exit codes: 0 success, 1 a verify sweep found a failing report, 2 bad
arguments, 3 hypothesis violation during verify, 4 resource ceiling hit.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from .arith import (
    DEFAULT_TUPLE_CEILING,
    ArithmeticFunction,
    NormalizationError,
    ResourceLimitError,
    as_rational,
    inverse_multiplicative,
    inverse_recursive,
    inverse_sum_formula,
)
from .bounds import (
    FAMILIES,
    BoundSpec,
    HypothesisViolation,
    default_workers,
    extremal_family,
    fit_exponential_constant,
    format_real,
    random_for_spec,
    reports_to_csv,
    reports_to_json,
    sweep_random,
    verify_sweep,
)
from .factorizations import (
    ALL2,
    CountOverflowError,
    FactorSet,
    H,
    H_k,
    d_max_upper_bound,
    dmax_bound_holds,
    dmin_bound_holds,
    e_log_bound,
    enumerate_ordered_factorizations,
    factor_sum_extrema,
    h_table,
    hk_table,
    klog_bound_holds,
)
from .zeta import DivergenceError, NoSignChangeError, ZetaEquation, rho, solve

EXIT_FAILURES = 1
EXIT_USAGE = 2
EXIT_HYPOTHESIS = 3
EXIT_RESOURCE = 4


class UsageError(ValueError):
    pass


def fmt_rational(q) -> str:
    q = as_rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "inf" if v == math.inf else "-inf" if v == -math.inf else f"{v:.12g}"
    if isinstance(v, Fraction) or type(v).__name__ == "mpq":
        return fmt_rational(v)
    if isinstance(v, tuple):
        return "(" + ", ".join(map(str, v)) + ")"
    return str(v)


def _json_value(v):
    """Native JSON for ints and bools; strings for exact rationals and reals."""
    if v is None or isinstance(v, int):
        return v
    return fmt_value(v)


def emit(rows: list[dict[str, object]], fmt: str, out: TextIO, *, extra: dict | None = None) -> None:
    """Write ``rows`` as an aligned table, CSV or JSON (values already exact)."""
    cols = list(rows[0]) if rows else []
    cells = [[fmt_value(r[c]) for c in cols] for r in rows]
    if fmt == "json":
        doc: object = [{c: _json_value(r[c]) for c in cols} for r in rows]
        if extra is not None:
            doc = {"rows": doc, **extra}
        json.dump(doc, out, indent=1)
        out.write("\n")
        return
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        w.writerows(cells)
    else:
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
        out.write("  ".join(c.rjust(wd) for c, wd in zip(cols, widths)).rstrip() + "\n")
        for row in cells:
            out.write("  ".join(c.rjust(wd) for c, wd in zip(row, widths)).rstrip() + "\n")
    if extra:
        for k, v in extra.items():
            out.write(f"# {k}: {v}\n")


# ---------------------------------------------------------------------------
# argument parsing helpers


def _factor_set(text: str) -> FactorSet:
    try:
        return FactorSet.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}") from None
    if not sep or a < 2 or b < a:
        raise argparse.ArgumentTypeError(f"expected 2 <= lo <= hi in lo..hi, got {text!r}")
    return a, b


def read_table(path: str) -> ArithmeticFunction:
    """Two-column ``n value`` file; ``#`` starts a comment.  Unlisted ``n`` are 0."""
    data: dict[int, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise UsageError(f"{path}:{lineno}: expected 'n value'")
            try:
                n = int(parts[0])
                v = as_rational(parts[1])
            except (ValueError, TypeError) as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from None
            if n < 1 or n in data:
                raise UsageError(f"{path}:{lineno}: bad or repeated n={n}")
            data[n] = v
    if data.get(1) != 1:
        raise UsageError(f"{path}: the line '1 1' is mandatory")
    return ArithmeticFunction.from_table(data, path, default=0)


def _equation(text: str) -> ZetaEquation:
    name, _, rest = text.partition(":")
    args = [a.strip() for a in rest.split(",") if a.strip()]
    try:
        vals = [Fraction(a) for a in args]
        if name == "zeta2" and not args:
            return ZetaEquation.full_zeta(2)
        if name == "odd2" and not args:
            return ZetaEquation.odd_zeta(2)
        if name == "varsigma" and len(vals) == 1:
            return ZetaEquation.varsigma(vals[0])
        if name == "oddsigma" and len(vals) == 1:
            return ZetaEquation.odd_varsigma(vals[0])
        if name == "upsilon" and len(vals) == 2:
            return ZetaEquation.upsilon(*vals)
        if name in ("trunclow", "finite") and len(vals) == 2 and vals[0].denominator == 1:
            ctor = ZetaEquation.truncated_low if name == "trunclow" else ZetaEquation.finite_set
            return ctor(int(vals[0]), vals[1])
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"{text!r}: {exc}") from None
    raise argparse.ArgumentTypeError(
        f"unknown equation {text!r}; expected zeta2, odd2, varsigma:C, upsilon:A,c, "
        "trunclow:N,C, finite:N,C or oddsigma:C"
    )


def _spec(text: str) -> BoundSpec:
    try:
        return BoundSpec.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dirinv", description="Exact Dirichlet inverses, ordered factorizations and growth bounds.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--format", choices=("table", "csv", "json"), default="table")
    g.add_argument("--csv", dest="format", action="store_const", const="csv", help="same as --format csv")
    g.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")

    q = sub.add_parser("inverse", parents=[fmt], help="exact f^-1(n)")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="extremal family, e.g. hille or mult2:C=3,g=0")
    src.add_argument("--table", help="file with 'n value' lines")
    q.add_argument("--n", type=_positive, required=True)
    q.add_argument("--upto", action="store_true", help="print every m <= n")
    q.add_argument("--route", choices=("recursive", "sum", "multiplicative"), default="recursive")
    q.add_argument("--ceiling", type=_positive, default=DEFAULT_TUPLE_CEILING, help="tuple ceiling for --route sum")

    q = sub.add_parser("h", parents=[fmt], help="number of ordered factorizations H(n, P)")
    q.add_argument("--n", type=_positive, required=True)
    q.add_argument("--set", type=_factor_set, default=ALL2)
    q.add_argument("--upto", action="store_true")

    q = sub.add_parser("hk", parents=[fmt], help="factorizations with exactly k factors")
    q.add_argument("--n", type=_positive, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--set", type=_factor_set, default=ALL2)
    q.add_argument("--upto", action="store_true")

    q = sub.add_parser("enumerate", parents=[fmt], help="list ordered factorizations lexicographically")
    q.add_argument("--n", type=_positive, required=True)
    q.add_argument("--k", type=_positive)
    q.add_argument("--set", type=_factor_set, default=ALL2)
    q.add_argument("--ceiling", type=_positive, default=DEFAULT_TUPLE_CEILING)

    q = sub.add_parser("dminmax", parents=[fmt], help="extremal factor sums and their bounds")
    q.add_argument("--n", type=_positive, required=True)
    q.add_argument("--k", type=_positive, help="default: every feasible k")

    q = sub.add_parser("rho", parents=[fmt], help="root of zeta_P(s) = 1")
    q.add_argument("--set", type=_factor_set, default=ALL2)
    q.add_argument("--tol", type=float, default=1e-9)

    q = sub.add_parser("solve", parents=[fmt], help="root of a zeta-type equation")
    q.add_argument("--equation", type=_equation, required=True)
    q.add_argument("--tol", type=float, default=1e-9)

    q = sub.add_parser("verify", parents=[fmt], help="sweep a bound against exact inverses")
    q.add_argument("--spec", type=_spec, required=True, help="kind:key=value,..., e.g. generalpoly:C=1,g=0")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--family")
    src.add_argument("--table")
    src.add_argument("--random", action="store_true", help="seeded random f satisfying the hypothesis")
    q.add_argument("--range", type=_range, required=True, help="lo..hi with lo >= 2")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--count", type=_positive, default=1, help="number of random functions (seeds seed, seed+1, ...)")
    q.add_argument("--form", help="which inequality of the kind to check")
    q.add_argument("--mode", choices=("exhaustive", "random-sample"), default="exhaustive")
    q.add_argument("--sample", type=_positive, default=1000)
    q.add_argument("--workers", type=_positive, help="processes for --count > 1 (default: DIRINV_WORKERS or 1)")
    q.add_argument("--fit-exponential", action="store_true", help="also report the smallest A~ with |f^-1(n)| <= A~ c^n")

    sub.add_parser("families", parents=[fmt], help="list the builtin extremal families")
    return p


# ---------------------------------------------------------------------------
# subcommands


def _cmd_inverse(a, out: TextIO) -> int:
    f = extremal_family(a.family) if a.family else read_table(a.table)
    ns = range(1, a.n + 1) if a.upto else [a.n]
    if a.route == "recursive":
        tab = inverse_recursive(f, a.n)
        vals = [tab[n] for n in ns]
    elif a.route == "sum":
        vals = [inverse_sum_formula(f, n, ceiling=a.ceiling) for n in ns]
    else:
        vals = [inverse_multiplicative(f, n) for n in ns]
    emit([{"n": n, "inverse": v} for n, v in zip(ns, vals)], a.format, out)
    return 0


def _cmd_h(a, out: TextIO) -> int:
    if a.upto:
        tab = h_table(a.n, a.set)
        rows = [{"n": n, "H": int(tab[n])} for n in range(1, a.n + 1)]
    else:
        rows = [{"n": a.n, "H": H(a.n, a.set)}]
    emit(rows, a.format, out)
    return 0


def _cmd_hk(a, out: TextIO) -> int:
    if a.k < 0:
        raise UsageError("k must be >= 0")
    if a.upto:
        tab = hk_table(a.n, a.set, a.k)
        rows = [{"n": n, "k": a.k, "H_k": int(tab[a.k, n])} for n in range(1, a.n + 1)]
    else:
        rows = [{"n": a.n, "k": a.k, "H_k": H_k(a.n, a.k, a.set)}]
    emit(rows, a.format, out)
    return 0


def _cmd_enumerate(a, out: TextIO) -> int:
    if a.n < 2:
        raise UsageError("n must be >= 2")
    tuples = enumerate_ordered_factorizations(a.n, a.set, a.k, ceiling=a.ceiling)
    rows = [{"k": len(t), "factors": "*".join(map(str, t))} for t in tuples]
    emit(rows, a.format, out, extra={"count": len(tuples)})
    return 0


def _cmd_dminmax(a, out: TextIO) -> int:
    if a.n < 2:
        raise UsageError("n must be >= 2")
    ext = factor_sum_extrema(a.n)
    ks = [a.k] if a.k else sorted(ext)
    rows = []
    for k in ks:
        lo, hi = ext.get(k, (math.inf, -math.inf))
        ub = d_max_upper_bound(a.n, k)
        rows.append({
            "k": k,
            "d_min": lo,
            "k_root": format_real(k * a.n ** (1.0 / k)),
            "e_ln_n": format_real(e_log_bound(a.n)),
            "d_max": hi,
            "d_max_bound": ub,
            "min_ok": dmin_bound_holds(a.n, k, lo) and klog_bound_holds(a.n, k),
            "max_ok": dmax_bound_holds(a.n, k, hi),
            "max_equal": hi != -math.inf and hi == ub,
        })
    emit(rows, a.format, out)
    return 0


def _root_rows(r) -> list[dict[str, object]]:
    return [{
        "equation": r.equation.description,
        "root": format_real(r.value),
        "lo": format_real(r.lo),
        "hi": format_real(r.hi),
        "boundary": r.boundary,
    }]


def _cmd_rho(a, out: TextIO) -> int:
    r = rho(a.set) if a.tol == 1e-9 else solve(ZetaEquation.factor_set_root(a.set, 1), a.tol)
    emit(_root_rows(r), a.format, out)
    return 0


def _cmd_solve(a, out: TextIO) -> int:
    emit(_root_rows(solve(a.equation, a.tol)), a.format, out)
    return 0


def _cmd_verify(a, out: TextIO) -> int:
    spec: BoundSpec = a.spec
    lo, hi = a.range
    if a.form and a.form not in spec.forms:
        raise UsageError(f"{spec.kind} has forms {', '.join(spec.forms)}")
    if a.random and a.count > 1:
        results = sweep_random(spec, hi, range(a.seed, a.seed + a.count), form=a.form, workers=a.workers or default_workers())
        rows = [{k: r[k] for k in ("seed", "checked", "failures", "max_ratio", "argmax")} for r in results]
        bad = sum(r["failures"] for r in results)
        emit(rows, a.format, out, extra={"summary": f"{a.count} functions, {bad} failures"})
        return EXIT_FAILURES if bad else 0
    if a.random:
        f = random_for_spec(spec, hi, a.seed)
    else:
        f = extremal_family(a.family) if a.family else read_table(a.table)
    res = verify_sweep(spec, f, (lo, hi), a.mode, form=a.form, sample=a.sample, seed=a.seed)
    extra = {"summary": res.summary_line()}
    if a.fit_exponential:
        if spec.c is None:
            raise UsageError("--fit-exponential needs a spec with parameter c")
        tab = inverse_recursive(f, hi)
        extra["fitted_A"] = format_real(fit_exponential_constant(tab, spec.c, [r.n for r in res.reports]))
    if a.format == "csv":
        reports_to_csv(res, out)
        for k, v in extra.items():
            out.write(f"# {k}: {v}\n")
    elif a.format == "json":
        reports_to_json(res, out)
    else:
        emit([r.as_row() for r in res.reports], "table", out, extra=extra)
    return 0 if res.ok else EXIT_FAILURES


def _cmd_families(a, out: TextIO) -> int:
    rows = [{"family": name, "parameters": ",".join(keys) or "-", "description": desc}
            for name, (_, keys, desc) in FAMILIES.items()]
    emit(rows, a.format, out)
    return 0


_COMMANDS = {
    "inverse": _cmd_inverse,
    "h": _cmd_h,
    "hk": _cmd_hk,
    "enumerate": _cmd_enumerate,
    "dminmax": _cmd_dminmax,
    "rho": _cmd_rho,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "families": _cmd_families,
}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Parse ``argv``, run the subcommand, return the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        old_err, sys.stderr = sys.stderr, err
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stderr = old_err
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except HypothesisViolation as exc:
        err.write(f"dirinv: hypothesis violation: {exc}\n")
        return EXIT_HYPOTHESIS
    except (ResourceLimitError, CountOverflowError) as exc:
        err.write(f"dirinv: resource ceiling: {exc}\n")
        return EXIT_RESOURCE
    except (UsageError, NormalizationError, DivergenceError, NoSignChangeError, ValueError, OSError) as exc:
        err.write(f"dirinv: error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
