"""Explicit upper bounds on |f^-1(n)| and the sweeps that check them.

Every bound is evaluated with outward rounding: the value handed back by
:func:`bound_value` is an exact rational that is never smaller than the true
real bound.  Comparing it against the exact ``|f^-1(n)|`` can therefore only
err towards a spurious failure, never a spurious pass.
"""

from __future__ import annotations

import csv
import json
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence, TextIO

import mpmath
import numpy as np
from gmpy2 import mpq

from .arith import (
    MULT,
    SUB,
    ArithmeticFunction,
    InverseTable,
    as_rational,
    check_multiplicativity,
    factorize,
    inverse_multiplicative_table,
    inverse_recursive,
    is_prime,
    multiplicative_counterexample,
    spf_table,
)
from .factorizations import H, h_table, partitions
from .zeta import GrowthExponent, ZetaEquation, eta, rho, solve

__all__ = [
    "FAMILIES",
    "BoundReport",
    "BoundSpec",
    "HypothesisViolation",
    "SweepResult",
    "bound_table",
    "bound_value",
    "check_hypothesis",
    "exact_inverse",
    "extremal_family",
    "fit_exponential_constant",
    "prime_power_partition_sum",
    "random_for_spec",
    "reports_to_csv",
    "reports_to_json",
    "submultiplicative_bound",
    "supermultiplicative_bound",
    "sweep_random",
    "verify_sweep",
]

WORKERS_ENV = "DIRINV_WORKERS"
_DPS = 30  # e and logarithms enter exponents of n, so carry 30 digits
_INFLATE = 1 + mpq(1, 2**64)

# kind -> (parameter names, inequality forms; the first form is the default)
KINDS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "submultpoly": (("C", "gamma"), ("H", "rho")),
    "multpoly": (("C", "gamma"), ("omega", "corollary")),
    "multpolyzero": (("C", "gamma"), ("main",)),
    "multexp": (("A", "c"), ("omega", "corollary")),
    "primepowerpartition": (("A", "c"), ("main",)),
    "generalpoly": (("C", "gamma"), ("main",)),
    "generalpolylog": (("C", "gamma"), ("omega", "log")),
    "expsmallc": (("A", "c"), ("omega", "log")),
    "expsmallcunita": (("A", "c"), ("main",)),
    "explargec": (("A", "c"), ("main",)),
    "trunclow": (("N", "C", "gamma"), ("main",)),
    "trunchigh": (("N", "C", "gamma"), ("main",)),
    "oddsupport": (("C", "gamma"), ("main",)),
}

# kinds whose hypothesis includes multiplicativity of f on the swept range
MULTIPLICATIVE_KINDS = frozenset({"multpoly", "multpolyzero", "multexp", "primepowerpartition"})

_ALIASES = {"g": "gamma", "γ": "gamma"}


class HypothesisViolation(ValueError):
    """``f`` does not satisfy the hypothesis a bound needs; ``n`` is a witness."""

    def __init__(self, kind: str, n: int | tuple[int, int], reason: str):
        super().__init__(f"{kind}: hypothesis fails at n={n}: {reason}")
        self.kind = kind
        self.n = n
        self.reason = reason


@dataclass(frozen=True)
class BoundSpec:
    """One family of bounds with its parameters.

    ``C``, ``gamma``, ``A`` and ``c`` are exact rationals.  The growth exponent
    the kind needs is solved on first use and cached on the instance.
    """

    kind: str
    C: Fraction | None = None
    gamma: Fraction | None = None
    A: Fraction | None = None
    c: Fraction | None = None
    N: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "expsmallcunita" and self.A is None:
            object.__setattr__(self, "A", Fraction(1))
        if self.kind not in KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}; known: {', '.join(KINDS)}")
        names, _ = KINDS[self.kind]
        for name in ("C", "gamma", "A", "c", "N"):
            val = getattr(self, name)
            if name in names and val is None:
                raise ValueError(f"{self.kind} needs parameter {name}")
            if name not in names and val is not None:
                raise ValueError(f"{self.kind} does not take parameter {name}")
            if val is not None and name != "N":
                object.__setattr__(self, name, Fraction(val))
        for name in ("C", "A", "c"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise ValueError(f"{name} must be positive")
        if self.N is not None and self.N < 2:
            raise ValueError("N must be >= 2")
        if self.kind in ("multexp", "expsmallc", "expsmallcunita") and not self.c < 1:
            raise ValueError(f"{self.kind} needs c in (0, 1)")
        if self.kind == "expsmallcunita" and self.A > 1:
            raise ValueError("expsmallcunita needs A <= 1")
        if self.kind == "explargec" and not self.c > 1:
            raise ValueError("explargec needs c > 1")

    @classmethod
    def parse(cls, text: str) -> "BoundSpec":
        """``kind:key=value,...``, e.g. ``generalpoly:C=1,g=0`` or ``trunclow:N=5,C=1,g=0``."""
        kind, _, rest = text.strip().partition(":")
        params: dict[str, object] = {}
        for item in filter(None, (t.strip() for t in rest.split(","))):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"expected key=value, got {item!r}")
            key = _ALIASES.get(key.strip(), key.strip())
            params[key] = int(val) if key == "N" else Fraction(val.strip())
        return cls(kind.strip().lower(), **params)

    def __str__(self) -> str:
        names, _ = KINDS[self.kind]
        return self.kind + ":" + ",".join(f"{k}={getattr(self, k)}" for k in names)

    @property
    def forms(self) -> tuple[str, ...]:
        return KINDS[self.kind][1]

    @property
    def equation(self) -> ZetaEquation | None:
        k = self.kind
        if k in ("generalpoly", "generalpolylog"):
            return ZetaEquation.varsigma(self.C)
        if k == "expsmallc":
            return ZetaEquation.varsigma(self.A)
        if k == "explargec":
            return ZetaEquation.upsilon(self.A, self.c)
        if k == "trunclow":
            return ZetaEquation.truncated_low(self.N, self.C)
        if k == "trunchigh":
            return ZetaEquation.finite_set(self.N, self.C)
        if k == "oddsupport":
            return ZetaEquation.odd_varsigma(self.C)
        return None

    @property
    def exponent(self) -> GrowthExponent | None:
        """The resolved growth exponent (rho, varsigma, upsilon or eta)."""
        return _exponent(self)


@lru_cache(maxsize=None)
def _exponent(spec: BoundSpec) -> GrowthExponent | None:
    if spec.kind in ("submultpoly", "expsmallcunita"):
        return rho()
    if spec.kind == "oddsupport" and spec.C == 1:
        return eta()
    eq = spec.equation
    return solve(eq) if eq is not None else None


# ---------------------------------------------------------------------------
# evaluation helpers


def _up(x: mpmath.mpf) -> mpq:
    """Exact rational upper bound on a positive mpmath value."""
    if x <= 0:
        raise ValueError(f"bound must be positive, got {x}")
    man, exp = x.man_exp
    val = mpq(int(man)) * mpq(2) ** int(exp)
    return val * _INFLATE


def _mpf(q) -> mpmath.mpf:
    q = as_rational(q)
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def _int_gamma(gamma: Fraction) -> int | None:
    return int(gamma) if gamma.denominator == 1 else None


def _rat(x: Fraction) -> mpq:
    return mpq(x.numerator, x.denominator)


def prime_power_partition_sum(A, c, p: int, k: int) -> mpq:
    """``sum over partitions (phi_1..phi_l) of k`` of ``multinomial * A^l * c^(sum p^phi_j)``.

    Exact for rational ``A`` and ``c``; this is the sharp bound on
    ``|f^-1(p^k)|`` when ``|f(p^j)| <= A c^(p^j)``.
    """
    A, c = as_rational(A), as_rational(c)
    total = mpq(0)
    for part in partitions(k):
        total += part.arrangements * A ** len(part) * c ** sum(p**phi for phi in part)
    return total


def _omega_counts(n: int) -> tuple[int, int]:
    fac = factorize(n)
    return fac.big_omega, fac.small_omega


def bound_value(spec: BoundSpec, n: int, form: str | None = None, *, h_of_n: int | None = None) -> mpq:
    """Upper-rounded value of the bound at ``n >= 2``.

    Exact (no rounding at all) whenever the bound is a rational number: the
    multiplicative polynomial bounds with integral ``gamma`` and the
    prime-power partition bound.
    """
    if n < 2:
        raise ValueError("bounds are stated for n >= 2")
    form = form or spec.forms[0]
    if form not in spec.forms:
        raise ValueError(f"{spec.kind} has forms {spec.forms}, not {form!r}")
    k = spec.kind
    Om, om = _omega_counts(n)
    g_int = _int_gamma(spec.gamma) if spec.gamma is not None else None

    # exact rational cases
    if k == "primepowerpartition":
        out = mpq(1)
        for p, e in factorize(n):
            out *= prime_power_partition_sum(_rat(spec.A), _rat(spec.c), p, e)
        return out
    if g_int is not None:
        C = _rat(spec.C)
        ng = mpq(n) ** g_int
        if k == "submultpoly" and form == "H":
            return (h_of_n if h_of_n is not None else H(n)) * C**Om * ng
        if k == "multpoly" and form == "omega":
            return (C / (C + 1)) ** om * (C + 1) ** Om * ng
        if k == "multpolyzero":
            return C**Om * ng

    expo = spec.exponent
    with mpmath.workdps(_DPS):
        ln_n = mpmath.log(n)
        npow = lambda x: mpmath.exp(x * ln_n)  # noqa: E731
        s_hi = mpmath.mpf(expo.hi) if expo is not None else None
        if k in ("submultpoly", "multpoly", "multpolyzero", "generalpoly", "generalpolylog",
                 "trunclow", "trunchigh", "oddsupport"):
            C, g = _mpf(spec.C), _mpf(spec.gamma)
        if k in ("multexp", "expsmallc", "expsmallcunita", "explargec"):
            A, c = _mpf(spec.A), _mpf(spec.c)

        if k == "submultpoly":
            if form == "H":
                hn = h_of_n if h_of_n is not None else H(n)
                val = hn * C**Om * npow(g)
            else:
                val = C**Om * npow(g + s_hi)
        elif k == "multpoly":
            if form == "omega":
                val = (C / (C + 1)) ** om * (C + 1) ** Om * npow(g)
            else:
                val = npow(g + mpmath.log(1 + C) / mpmath.log(2))
        elif k == "multpolyzero":
            val = C**Om * npow(g)
        elif k == "multexp":
            base = 3 * mpmath.log(c) / mpmath.log(3)
            if form == "omega":
                val = (A / (A + 1)) ** om * (A + 1) ** Om * npow(base)
            else:
                val = npow(base + mpmath.log(1 + A) / mpmath.log(2))
        elif k in ("generalpoly", "trunclow", "trunchigh", "oddsupport"):
            val = npow(g + s_hi)
        elif k == "generalpolylog":
            lead = C * npow(g + s_hi) / mpmath.power(2, s_hi)
            val = lead * Om if form == "omega" else lead * ln_n / mpmath.log(2)
        elif k == "expsmallc":
            lead = A * npow(s_hi + mpmath.e * mpmath.log(c)) / mpmath.power(2, s_hi)
            val = lead * Om if form == "omega" else lead * ln_n / mpmath.log(2)
        elif k == "expsmallcunita":
            val = npow(s_hi + mpmath.e * mpmath.log(c))
        elif k == "explargec":
            val = A * mpmath.power(c, n) + (Om - 1) * A * npow(s_hi) * mpmath.power(c, mpmath.mpf(n) / 2) / mpmath.power(2, s_hi)
        else:  # pragma: no cover - guarded by BoundSpec
            raise ValueError(k)
        return _up(val)


@lru_cache(maxsize=32)
def bound_table(spec: BoundSpec, N: int, form: str | None = None) -> tuple[mpq | None, ...]:
    """``bound_value`` for ``n = 0..N`` (``None`` below 2); cached per spec."""
    spf_table(N)
    hs = h_table(N) if spec.kind == "submultpoly" else None
    out: list[mpq | None] = [None, None]
    for n in range(2, N + 1):
        out.append(bound_value(spec, n, form, h_of_n=int(hs[n]) if hs is not None else None))
    return tuple(out)


def supermultiplicative_bound(f: Callable[[int], object], n: int) -> mpq:
    """``H(n) |f(n)|``, valid when ``|f|`` is supermultiplicative."""
    return H(n) * abs(as_rational(f(n)))


def submultiplicative_bound(f: Callable[[int], object], n: int) -> mpq:
    """``H(n) prod |f(p_j)|^e_j``, valid when ``|f|`` is submultiplicative."""
    out = mpq(H(n))
    for p, e in factorize(n):
        out *= abs(as_rational(f(p))) ** e
    return out


# ---------------------------------------------------------------------------
# hypotheses


def _poly_ok(v: mpq, n: int, C: Fraction, gamma: Fraction) -> bool:
    """Exact test of ``|v| <= C n^gamma`` for rational ``gamma = a/b``."""
    a, b = gamma.numerator, gamma.denominator
    lhs = (abs(v) / _rat(C)) ** b
    return lhs <= mpq(n) ** a if a >= 0 else lhs * mpq(n) ** (-a) <= 1


def _check_poly(kind: str, vals: Sequence[mpq], ns: Iterable[int], C, gamma) -> None:
    for n in ns:
        if vals[n] and not _poly_ok(vals[n], n, C, gamma):
            raise HypothesisViolation(kind, n, f"|f(n)| = {abs(vals[n])} exceeds {C} n^{gamma}")


def _check_exp(kind: str, vals: Sequence[mpq], ns: Iterable[int], A, c) -> None:
    A, c = _rat(A), _rat(c)
    for n in ns:
        if vals[n] and abs(vals[n]) > A * c**n:
            raise HypothesisViolation(kind, n, f"|f(n)| exceeds {A} * {c}^n")


def _prime_powers_upto(N: int) -> list[int]:
    spf = spf_table(N)
    out = []
    for n in range(2, N + 1):
        p = int(spf[n])
        m = n
        while m % p == 0:
            m //= p
        if m == 1:
            out.append(n)
    return out


def check_hypothesis(spec: BoundSpec, f: ArithmeticFunction, N: int, *, needs_composites: bool = True) -> None:
    """Raise :class:`HypothesisViolation` unless ``f`` meets ``spec`` on ``2..N``.

    Properties quantified over all pairs (multiplicativity and its relatives)
    are checked exhaustively over ``m * n <= N``.  For the prime-power
    partition bound the envelope is only needed on prime powers, and
    multiplicativity only when ``needs_composites`` (the sweep touches an
    ``n`` that is not a prime power).
    """
    k = spec.kind
    vals = f.values(N)
    full = range(2, N + 1)
    if k in ("submultpoly", "multpoly", "multpolyzero", "generalpoly", "generalpolylog", "oddsupport"):
        _check_poly(k, vals, full, spec.C, spec.gamma)
    if k in ("multexp", "expsmallc", "expsmallcunita", "explargec"):
        _check_exp(k, vals, full, spec.A, spec.c)
    if k == "primepowerpartition":
        _check_exp(k, vals, _prime_powers_upto(N), spec.A, spec.c)
    if k == "trunclow":
        for n in range(2, min(spec.N, N) + 1):
            if vals[n]:
                raise HypothesisViolation(k, n, f"f must vanish on 2..{spec.N}")
        _check_poly(k, vals, range(spec.N + 1, N + 1), spec.C, spec.gamma)
    if k == "trunchigh":
        for n in range(spec.N + 1, N + 1):
            if vals[n]:
                raise HypothesisViolation(k, n, f"f must vanish beyond {spec.N}")
        _check_poly(k, vals, range(2, min(spec.N, N) + 1), spec.C, spec.gamma)
    if k == "oddsupport":
        for n in range(2, N + 1, 2):
            if vals[n]:
                raise HypothesisViolation(k, n, "f must vanish on even n")
    if k == "multpolyzero":
        for n in _prime_powers_upto(N):
            if vals[n] and is_prime(n) is False:
                raise HypothesisViolation(k, n, "f(p^k) must vanish for k >= 2")
    if k in MULTIPLICATIVE_KINDS and (k != "primepowerpartition" or needs_composites):
        bad = multiplicative_counterexample(lambda n: vals[n], N)
        if bad is not None:
            raise HypothesisViolation(k, bad, f"not {MULT}")
    elif k == "submultpoly" and N >= 2:
        rep = check_multiplicativity(lambda n: vals[n], N)
        if not rep.holds(SUB):
            raise HypothesisViolation(k, rep.counterexamples[SUB], f"not {SUB}")


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class BoundReport:
    n: int
    inverse_abs: mpq
    bound: mpq
    ratio: float
    passed: bool

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def as_row(self) -> dict[str, object]:
        return {
            "n": self.n,
            "inv_abs_num": str(self.inverse_abs.numerator),
            "inv_abs_den": str(self.inverse_abs.denominator),
            "bound": format_real(self.bound),
            "ratio": format_real(self.ratio),
            "verdict": self.verdict,
        }


@dataclass
class SweepResult:
    spec: BoundSpec
    form: str
    reports: list[BoundReport] = field(repr=False)

    @property
    def checked(self) -> int:
        return len(self.reports)

    @property
    def failures(self) -> list[BoundReport]:
        return [r for r in self.reports if not r.passed]

    @property
    def max_ratio(self) -> float:
        return max((r.ratio for r in self.reports), default=0.0)

    @property
    def argmax(self) -> int | None:
        if not self.reports:
            return None
        return max(self.reports, key=lambda r: r.ratio).n

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict[str, object]:
        return {
            "spec": str(self.spec),
            "form": self.form,
            "checked": self.checked,
            "failures": len(self.failures),
            "max_ratio": self.max_ratio,
            "argmax": self.argmax,
        }

    def summary_line(self) -> str:
        return (f"{self.checked} checked, {len(self.failures)} failures, "
                f"max ratio {format_real(self.max_ratio)} at n={self.argmax}")


def format_real(x) -> str:
    """12 significant digits; works for values far outside the float range."""
    if isinstance(x, float):
        return f"{x:.12g}"
    with mpmath.workdps(20):
        text = mpmath.nstr(_mpf(x), 12, min_fixed=-5, max_fixed=15)
    return text[:-2] if text.endswith(".0") else text


def _ratio(a: mpq, b: mpq) -> float:
    if not a:
        return 0.0
    try:
        return float(a / b)
    except OverflowError:
        return math.inf


def exact_inverse(spec: BoundSpec, f: ArithmeticFunction, N: int) -> InverseTable:
    """``f^-1(1..N)``, rebuilt from prime powers when ``spec`` makes ``f`` multiplicative.

    Values at prime powers depend only on ``f`` at prime powers, so this is
    also exact for the prime-power-only sweeps of the partition bound.
    """
    if spec.kind in MULTIPLICATIVE_KINDS:
        return inverse_multiplicative_table(f, N)
    return inverse_recursive(f, N)


def verify_sweep(
    spec: BoundSpec,
    f: ArithmeticFunction,
    n_range: Iterable[int] | tuple[int, int],
    mode: str = "exhaustive",
    *,
    form: str | None = None,
    sample: int = 1000,
    seed: int = 0,
    inverse: InverseTable | None = None,
) -> SweepResult:
    """Compare exact ``|f^-1(n)|`` with ``spec``'s bound over ``n_range``.

    ``n_range`` is a ``(lo, hi)`` pair or any iterable of integers ``>= 2``.
    In ``random-sample`` mode ``sample`` values are drawn (seeded) from it.
    The hypothesis is checked on every ``n`` up to the largest one swept,
    since ``f^-1(n)`` depends on ``f`` at all divisors; a violation raises
    :class:`HypothesisViolation` and nothing is claimed.
    """
    if isinstance(n_range, tuple) and len(n_range) == 2:
        ns = list(range(n_range[0], n_range[1] + 1))
    else:
        ns = sorted(set(n_range))
    if not ns:
        raise ValueError("empty n range")
    if ns[0] < 2:
        raise ValueError("bounds are stated for n >= 2")
    if mode == "random-sample":
        ns = sorted(random.Random(seed).sample(ns, min(sample, len(ns))))
    elif mode != "exhaustive":
        raise ValueError(f"mode must be 'exhaustive' or 'random-sample', not {mode!r}")
    form = form or spec.forms[0]
    N = ns[-1]
    spf_table(N)
    composites = spec.kind == "primepowerpartition" and any(len(factorize(n)) > 1 for n in ns)
    check_hypothesis(spec, f, N, needs_composites=composites)
    if inverse is None or inverse.limit < N:
        inverse = exact_inverse(spec, f, N)
    if 2 * len(ns) >= N:
        table = bound_table(spec, N, form)
        bound = table.__getitem__
    else:
        bound = lambda n: bound_value(spec, n, form)  # noqa: E731
    reports = []
    for n in ns:
        a = abs(inverse.values[n])
        b = bound(n)
        reports.append(BoundReport(n, a, b, _ratio(a, b), a <= b))
    return SweepResult(spec, form, reports)


def fit_exponential_constant(inverse: InverseTable, c, ns: Iterable[int]) -> float:
    """Smallest ``A~`` with ``|f^-1(n)| <= A~ c^n`` on ``ns``."""
    c = as_rational(c)
    return max(_ratio(abs(inverse.values[n]), c**n) for n in ns)


def reports_to_csv(result: SweepResult, stream: TextIO) -> None:
    w = csv.DictWriter(stream, ["n", "inv_abs_num", "inv_abs_den", "bound", "ratio", "verdict"], lineterminator="\n")
    w.writeheader()
    for r in result.reports:
        w.writerow(r.as_row())


def reports_to_json(result: SweepResult, stream: TextIO) -> None:
    json.dump({"summary": result.summary(), "reports": [r.as_row() for r in result.reports]}, stream, indent=1)
    stream.write("\n")


# ---------------------------------------------------------------------------
# extremal families


def _is_power_of_two(n: int) -> bool:
    return n & (n - 1) == 0


def _log2_exact(n: int) -> int | None:
    return n.bit_length() - 1 if n >= 1 and _is_power_of_two(n) else None


def _integral(gamma) -> int:
    g = Fraction(gamma)
    if g.denominator != 1:
        raise ValueError("this family needs an integral gamma to stay rational")
    return int(g)


def family_shift2() -> ArithmeticFunction:
    """``f(2) = -1``, zero from 3 on; the inverse is 1 on powers of two."""
    return ArithmeticFunction(
        lambda n: 1 if n == 1 else (-1 if n == 2 else 0),
        "shift2",
        inverse_oracle=lambda n: 1 if _is_power_of_two(n) else 0,
    )


def family_hille() -> ArithmeticFunction:
    """``f(n) = -1`` for ``n >= 2``; the inverse is ``H(n)``."""
    return ArithmeticFunction(lambda n: 1 if n == 1 else -1, "hille", inverse_oracle=H)


def family_power(gamma=0) -> ArithmeticFunction:
    """``f(n) = -n^gamma``; the inverse is ``H(n) n^gamma``."""
    g = _integral(gamma)
    return ArithmeticFunction(
        lambda n: 1 if n == 1 else -(mpq(n) ** g),
        f"power:g={g}",
        inverse_oracle=lambda n: H(n) * mpq(n) ** g,
    )


def family_mult2(C=1, gamma=0) -> ArithmeticFunction:
    """``f(2^k) = -C 2^(k gamma)``, zero off powers of two; optimal for the multiplicative bound."""
    C = as_rational(Fraction(C))
    g = _integral(gamma)

    def f(n: int):
        k = _log2_exact(n)
        if k is None:
            return 0
        return 1 if k == 0 else -C * mpq(2) ** (k * g)

    def oracle(n: int):
        k = _log2_exact(n)
        if k is None:
            return 0
        return 1 if k == 0 else C * (C + 1) ** (k - 1) * mpq(2) ** (k * g)

    return ArithmeticFunction(f, f"mult2:C={C},g={g}", inverse_oracle=oracle)


def family_expdecay2(A=1, c=Fraction(1, 2)) -> ArithmeticFunction:
    """``f(2) = -A c^2``, zero from 3 on; the inverse is ``(A c^2)^k`` at ``2^k``."""
    A, c = as_rational(Fraction(A)), as_rational(Fraction(c))

    def oracle(n: int):
        k = _log2_exact(n)
        return 0 if k is None else (A * c * c) ** k

    return ArithmeticFunction(
        lambda n: 1 if n == 1 else (-A * c * c if n == 2 else 0),
        f"expdecay2:A={A},c={c}",
        inverse_oracle=oracle,
    )


def family_expgrowth2(A=1, c=2) -> ArithmeticFunction:
    """``f(2^k) = -A c^(2^k)``, zero off powers of two.  No closed-form inverse."""
    A, c = as_rational(Fraction(A)), as_rational(Fraction(c))

    def f(n: int):
        k = _log2_exact(n)
        if k is None:
            return 0
        return 1 if k == 0 else -A * c**n

    return ArithmeticFunction(f, f"expgrowth2:A={A},c={c}")


def family_ppexp(A=1, c=Fraction(1, 2)) -> ArithmeticFunction:
    """Multiplicative ``f`` with ``f(p^k) = -A c^(p^k)`` on every prime power.

    Its inverse attains the prime-power partition bound with equality.
    """
    A, c = as_rational(Fraction(A)), as_rational(Fraction(c))

    def f(n: int):
        out = mpq(1)
        for p, e in factorize(n):
            out *= -A * c ** (p**e)
        return out

    def oracle(n: int):
        out = mpq(1)
        for p, e in factorize(n):
            out *= prime_power_partition_sum(A, c, p, e)
        return out

    return ArithmeticFunction(f, f"ppexp:A={A},c={c}", inverse_oracle=oracle)


FAMILIES: dict[str, tuple[Callable[..., ArithmeticFunction], tuple[str, ...], str]] = {
    "shift2": (family_shift2, (), "f(2)=-1, f(n)=0 for n>=3; inverse 1 on powers of 2"),
    "hille": (family_hille, (), "f(n)=-1 for n>=2; inverse H(n)"),
    "power": (family_power, ("g",), "f(n)=-n^g (integral g); inverse H(n) n^g"),
    "mult2": (family_mult2, ("C", "g"), "f(2^k)=-C 2^(k g), else 0; inverse C(C+1)^(k-1) 2^(k g)"),
    "expdecay2": (family_expdecay2, ("A", "c"), "f(2)=-A c^2, else 0; inverse (A c^2)^k at 2^k"),
    "expgrowth2": (family_expgrowth2, ("A", "c"), "f(2^k)=-A c^(2^k), else 0; inverse A c^(2^k) + lower order"),
    "ppexp": (family_ppexp, ("A", "c"), "multiplicative, f(p^k)=-A c^(p^k); inverse equals the partition bound"),
}


def extremal_family(text: str) -> ArithmeticFunction:
    """Build a family from ``name`` or ``name:key=value,...`` (e.g. ``mult2:C=3,g=0``)."""
    name, _, rest = text.strip().partition(":")
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")
    ctor, keys, _ = FAMILIES[name]
    kwargs = {}
    for item in filter(None, (t.strip() for t in rest.split(","))):
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in keys:
            raise ValueError(f"family {name} takes {keys}, not {key!r}")
        kwargs["gamma" if key == "g" else key] = Fraction(val.strip())
    return ctor(**kwargs)


# ---------------------------------------------------------------------------
# seeded random functions

_DEN = 2**16


def _rat_pow_floor(n: int, gamma: Fraction) -> mpq:
    """A rational ``q`` with ``0 < q <= n^gamma`` (exact when gamma is integral)."""
    if gamma.denominator == 1:
        return mpq(n) ** int(gamma)
    a, b = gamma.numerator, gamma.denominator
    scale = 2**48
    q = mpq(int(n**float(gamma) * scale * (1 - 1e-12)), scale)
    # verify q^b <= n^a exactly; shrink if rounding fooled us
    while (q**b > mpq(n) ** a) if a >= 0 else (q**b * mpq(n) ** (-a) > 1):
        q = q * (1 - mpq(1, 2**30))
    return q


class _Sampler:
    """Signed uniform factors ``sigma * r`` with ``r`` on the grid ``j / 2^16``."""

    def __init__(self, seed: int):
        self.rng = np.random.default_rng(seed)

    def factor(self, size: int) -> list[mpq]:
        r = self.rng.integers(0, _DEN + 1, size=size)
        s = self.rng.choice([-1, 1], size=size)
        return [mpq(int(a) * int(b), _DEN) for a, b in zip(r, s)]

    def prime(self, choices: Sequence[int]) -> int:
        return int(self.rng.choice(choices))


def random_poly(C, gamma, N: int, seed: int, *, keep: Callable[[int], bool] | None = None) -> ArithmeticFunction:
    """``f(n) = sigma_n r_n C n^gamma`` (rounded down to a rational when needed)."""
    C, gamma = Fraction(C), Fraction(gamma)
    u = _Sampler(seed).factor(N + 1)
    vals = [mpq(1)]
    for n in range(2, N + 1):
        vals.append(u[n] * _rat(C) * _rat_pow_floor(n, gamma) if keep is None or keep(n) else mpq(0))
    return ArithmeticFunction.from_table(vals, f"randpoly[{seed}]", default=None)


def random_exp(A, c, N: int, seed: int) -> ArithmeticFunction:
    """``f(n) = sigma_n r_n A c^n``."""
    A, c = as_rational(Fraction(A)), as_rational(Fraction(c))
    u = _Sampler(seed).factor(N + 1)
    vals = [mpq(1)]
    cn = c
    for n in range(2, N + 1):
        cn *= c
        vals.append(u[n] * A * cn)
    return ArithmeticFunction.from_table(vals, f"randexp[{seed}]", default=None)


def _multiplicative_from_prime_powers(N: int, pp: dict[int, mpq], name: str) -> ArithmeticFunction:
    spf_table(N)
    vals = [mpq(1)]
    for n in range(2, N + 1):
        out = mpq(1)
        for p, e in factorize(n):
            out *= pp[p**e]
            if not out:
                break
        vals.append(out)
    return ArithmeticFunction.from_table(vals, name, default=None)


def random_multiplicative_poly(C, gamma, N: int, seed: int, *, zero_higher_powers: bool = False) -> ArithmeticFunction:
    """Multiplicative ``f`` with ``|f(n)| <= C n^gamma`` for every ``n <= N``.

    One randomly chosen prime carries the full envelope ``C p^(k gamma)`` on
    its powers; all other prime powers use ``min(1, C)`` instead of ``C``, so
    products over several primes stay inside the envelope.
    """
    C, gamma = Fraction(C), Fraction(gamma)
    smp = _Sampler(seed)
    pps = _prime_powers_upto(N)
    u = smp.factor(len(pps))
    dominant = smp.prime([2, 3, 5, 7])
    small = _rat(min(C, Fraction(1)))
    pp = {}
    for q, r in zip(pps, u):
        p = int(spf_table(N)[q])
        if zero_higher_powers and q != p:
            pp[q] = mpq(0)
            continue
        env = _rat(C) if p == dominant else small
        pp[q] = r * env * _rat_pow_floor(q, gamma)
    return _multiplicative_from_prime_powers(N, pp, f"randmultpoly[{seed}]")


def random_multiplicative_exp(A, c, N: int, seed: int, *, prime_powers_only: bool = False) -> ArithmeticFunction:
    """Multiplicative ``f`` with ``|f(n)| <= A c^n`` (``0 < c < 1``) for ``n <= N``.

    One prime carries the full envelope on its powers; the others are scaled
    by ``min(A, 1) c^N`` so that mixed products cannot leave the envelope.
    With ``prime_powers_only`` every prime power gets the full envelope and
    composite values are unconstrained (enough for the partition bound).
    """
    A, c = as_rational(Fraction(A)), as_rational(Fraction(c))
    smp = _Sampler(seed)
    pps = _prime_powers_upto(N)
    u = smp.factor(len(pps))
    dominant = smp.prime([2, 3, 5, 7])
    if not prime_powers_only and not c < 1:
        raise ValueError("the envelope-preserving construction needs c < 1")
    damp = min(A, mpq(1)) * c**N / A
    pp = {}
    for q, r in zip(pps, u):
        p = int(spf_table(N)[q])
        scale = 1 if prime_powers_only or p == dominant else damp
        pp[q] = r * A * c**q * scale
    return _multiplicative_from_prime_powers(N, pp, f"randmultexp[{seed}]")


def random_submultiplicative(C, gamma, N: int, seed: int) -> ArithmeticFunction:
    """``|f(n)| = prod h(p)^e * v^(Omega(n)-1)`` with ``h(p) <= C p^gamma`` and ``C v <= 1``.

    ``|f|`` is submultiplicative because ``v <= 1``, and the envelope holds
    because ``C^Omega v^(Omega-1) <= C``.  Signs are independent per ``n``.
    """
    C, gamma = Fraction(C), Fraction(gamma)
    smp = _Sampler(seed)
    spf_table(N)
    primes = [p for p in range(2, N + 1) if is_prime(p)]
    hp = {p: abs(r) * _rat(C) * _rat_pow_floor(p, gamma) for p, r in zip(primes, smp.factor(len(primes)))}
    v = _rat(min(Fraction(1), 1 / C)) * mpq(int(smp.rng.integers(_DEN // 2, _DEN + 1)), _DEN)
    signs = smp.rng.choice([-1, 1], size=N + 1)
    vals = [mpq(1)]
    for n in range(2, N + 1):
        fac = factorize(n)
        mag = v ** (fac.big_omega - 1)
        for p, e in fac:
            mag *= hp[p] ** e
        vals.append(int(signs[n]) * mag)
    return ArithmeticFunction.from_table(vals, f"randsubmult[{seed}]", default=None)


def random_supermultiplicative(N: int, seed: int, *, growth=2) -> ArithmeticFunction:
    """``|f(n)| = prod h(p)^e * V^(Omega(n)-1)`` with ``V >= 1``: supermultiplicative."""
    smp = _Sampler(seed)
    spf_table(N)
    primes = [p for p in range(2, N + 1) if is_prime(p)]
    hp = {p: abs(r) for p, r in zip(primes, smp.factor(len(primes)))}
    V = 1 + as_rational(Fraction(growth)) * mpq(int(smp.rng.integers(0, _DEN + 1)), _DEN)
    signs = smp.rng.choice([-1, 1], size=N + 1)
    vals = [mpq(1)]
    for n in range(2, N + 1):
        fac = factorize(n)
        mag = V ** (fac.big_omega - 1)
        for p, e in fac:
            mag *= hp[p] ** e
        vals.append(int(signs[n]) * mag)
    return ArithmeticFunction.from_table(vals, f"randsupermult[{seed}]", default=None)


def random_for_spec(spec: BoundSpec, N: int, seed: int) -> ArithmeticFunction:
    """A seeded random function satisfying ``spec``'s hypothesis on ``1..N``."""
    k = spec.kind
    if k == "submultpoly":
        return random_submultiplicative(spec.C, spec.gamma, N, seed)
    if k == "multpoly":
        return random_multiplicative_poly(spec.C, spec.gamma, N, seed)
    if k == "multpolyzero":
        return random_multiplicative_poly(spec.C, spec.gamma, N, seed, zero_higher_powers=True)
    if k == "multexp":
        return random_multiplicative_exp(spec.A, spec.c, N, seed)
    if k == "primepowerpartition":
        return random_multiplicative_exp(spec.A, spec.c, N, seed, prime_powers_only=True)
    if k in ("generalpoly", "generalpolylog"):
        return random_poly(spec.C, spec.gamma, N, seed)
    if k in ("expsmallc", "expsmallcunita", "explargec"):
        return random_exp(spec.A, spec.c, N, seed)
    if k == "trunclow":
        return random_poly(spec.C, spec.gamma, N, seed, keep=lambda n: n > spec.N)
    if k == "trunchigh":
        return random_poly(spec.C, spec.gamma, N, seed, keep=lambda n: n <= spec.N)
    if k == "oddsupport":
        return random_poly(spec.C, spec.gamma, N, seed, keep=lambda n: n % 2 == 1)
    raise ValueError(k)  # pragma: no cover


def _sweep_one(args: tuple[BoundSpec, int, int, str | None]) -> dict[str, object]:
    spec, N, seed, form = args
    f = random_for_spec(spec, N, seed)
    res = verify_sweep(spec, f, (2, N), form=form)
    out = res.summary()
    out["seed"] = seed
    out["failed_n"] = [r.n for r in res.failures]
    return out


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def sweep_random(
    spec: BoundSpec,
    N: int,
    seeds: Iterable[int],
    *,
    form: str | None = None,
    workers: int | None = None,
) -> list[dict[str, object]]:
    """Sweep ``2..N`` for one seeded random function per seed.

    Runs in ``workers`` processes (default: the ``DIRINV_WORKERS``
    environment variable, else 1).  Results come back in seed order.
    """
    tasks = [(spec, N, s, form) for s in seeds]
    workers = workers or default_workers()
    if workers == 1:
        return [_sweep_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_one, tasks))
