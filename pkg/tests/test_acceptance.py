"""Acceptance suite: the twelve release criteria, one PASS/FAIL line each.

Run under pytest (``pytest tests/test_acceptance.py -v``) or directly with
``python3 tests/test_acceptance.py``, which prints the twelve lines and exits
non-zero if any criterion fails.
"""

from __future__ import annotations

import math
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from gmpy2 import mpq

from dirinv import (
    ODD3,
    ArithmeticFunction,
    BoundSpec,
    H,
    ZetaEquation,
    bound_value,
    convolve_upto,
    dmax_bound_holds,
    dmin_bound_holds,
    d_max_upper_bound,
    enumerate_ordered_factorizations,
    factor_sum_extrema,
    fit_exponential_constant,
    h_table,
    hk_table,
    inverse_multiplicative,
    inverse_prime_power,
    inverse_recursive,
    inverse_sum_table,
    klog_bound_holds,
    partition_multinomial_sum,
    prime_power_partition_sum,
    rho,
    eta,
    solve,
    sweep_random,
)
from dirinv.bounds import family_hille, family_mult2, family_ppexp, random_exp, random_multiplicative_poly

CRITERIA: dict[int, tuple[str, object]] = {}


def criterion(num: int, title: str):
    def register(fn):
        CRITERIA[num] = (title, fn)
        return fn

    return register


def random_rational(seed: int, N: int) -> ArithmeticFunction:
    """f(1) = 1 and signed small-height rationals elsewhere (zero with probability 1/121)."""
    rng = np.random.default_rng(seed)
    num = rng.integers(-60, 61, size=N + 1)
    den = rng.integers(1, 60, size=N + 1)
    vals = [mpq(1)] + [mpq(int(num[n]), int(den[n])) for n in range(2, N + 1)]
    return ArithmeticFunction.from_table(vals, f"randq[{seed}]", default=None)


@criterion(1, "growth constants rho and eta")
def c01():
    t = time.perf_counter()
    r = solve(ZetaEquation.full_zeta(2))
    e = solve(ZetaEquation.odd_zeta(2))
    dt = time.perf_counter() - t
    ok = abs(r.value - 1.72865) <= 1e-5 and abs(e.value - 1.37779) <= 1e-5 and dt < 1.0
    return ok, f"rho={r.value:.10f} eta={e.value:.10f} in {dt:.3f}s"


@criterion(2, "convolution round trip f * f^-1 = eps")
def c02():
    N = 10**4
    t = time.perf_counter()
    bad = []
    for seed in range(50):
        f = random_rational(seed, N)
        fv = f.values(N)
        inv = inverse_recursive(fv, N)
        prod = convolve_upto(fv, inv.values)
        if prod[1] != 1 or any(prod[2:]):
            bad.append(seed)
    dt = time.perf_counter() - t
    return not bad and dt < 30, f"50 functions to n={N}, bad seeds {bad}, {dt:.1f}s"


@criterion(3, "inverse routes agree")
def c03():
    N = 5000
    mismatches = 0
    for seed in range(10):
        f = random_rational(100 + seed, N)
        a = inverse_recursive(f, N)
        b = inverse_sum_table(f, N)
        mismatches += sum(a[n] != b[n] for n in range(2, N + 1))
    M = 10**4
    mult_bad = 0
    for seed in range(3):
        g = random_multiplicative_poly(Fraction(1), Fraction(0), M, seed)
        ref = inverse_recursive(g, M)
        mult_bad += sum(inverse_multiplicative(g, n) != ref[n] for n in range(1, M + 1))
    return mismatches == 0 and mult_bad == 0, (
        f"sum vs recursive: {mismatches} mismatches on 10 functions to {N}; "
        f"multiplicative route: {mult_bad} mismatches on 3 functions to {M}"
    )


@criterion(4, "inverse of the Hille function counts ordered factorizations")
def c04():
    N = 10**5
    inv = inverse_recursive(family_hille(), N)
    bad = [n for n in range(1, N + 1) if inv[n] != H(n)]
    enum_bad = [n for n in range(2, 3001) if len(enumerate_ordered_factorizations(n)) != H(n)]
    return not bad and not enum_bad, f"mismatch to {N}: {len(bad)}; enumeration mismatch to 3000: {len(enum_bad)}"


def _strictly_below_power(h: np.ndarray, ns: np.ndarray, expo: float) -> tuple[bool, float, int]:
    """All h < ns^expo?  Float logs decide clear cases; mpmath settles the rest."""
    gap = expo * np.log(ns.astype(np.float64)) - np.log(h.astype(np.float64))
    close = np.nonzero(gap < 1e-9)[0]
    ok = True
    with mpmath.workdps(40):
        for i in close:
            if not mpmath.mpf(int(h[i])) < mpmath.power(int(ns[i]), mpmath.mpf(expo)):
                ok = False
    i = int(np.argmin(gap))
    return ok, math.exp(-float(gap[i])), int(ns[i])


@criterion(5, "H(n) < n^rho and odd H(n) < n^eta")
def c05():
    N = 10**6
    t = time.perf_counter()
    # the lower end of each enclosure: a pass here implies the upper-rounded version
    r_lo, e_lo = rho().lo, eta().lo
    h = h_table(N)
    ns = np.arange(2, N + 1)
    ok_all, worst_all, at_all = _strictly_below_power(h[2:], ns, r_lo)
    ho = h_table(N, ODD3)
    odd = np.arange(3, N + 1, 2)
    ok_odd, worst_odd, at_odd = _strictly_below_power(ho[odd], odd, e_lo)
    dt = time.perf_counter() - t
    return ok_all and ok_odd and dt < 120, (
        f"max H/n^rho={worst_all:.6f} at n={at_all}; max odd H/n^eta={worst_odd:.6f} at n={at_odd}; {dt:.1f}s"
    )


def _hk_check(table: np.ndarray, base, denom: int, ns) -> tuple[bool, list[str]]:
    ok, notes = True, []
    with mpmath.workdps(50):
        for k in range(1, table.shape[0]):
            worst = max((Fraction(int(table[k, n]), n * n) for n in ns if table[k, n]), default=None)
            if worst is None:
                continue
            if k == 1:  # exact: H_1(n) = 1 against n^2/denom
                cap = Fraction(1, denom)
                good = worst <= cap
            else:
                cap = base ** (k - 1) / denom
                good = mpmath.mpf(worst.numerator) / worst.denominator < cap
            ok &= bool(good)
            notes.append(f"k={k}:{float(worst) / float(cap):.4f}")
    return ok, notes


@criterion(6, "H_k(n) layer bounds")
def c06():
    N = 10**4
    with mpmath.workdps(50):
        z2 = mpmath.zeta(2)
        base_all, base_odd = z2 - 1, mpmath.mpf(3) / 4 * z2 - 1
    ok1, n1 = _hk_check(hk_table(N), base_all, 4, range(1, N + 1))
    ok2, n2 = _hk_check(hk_table(N, ODD3), base_odd, 9, range(1, N + 1, 2))
    return ok1 and ok2, f"max ratio per k, all: {' '.join(n1)}; odd: {' '.join(n2)}"


@criterion(7, "extremal multiplicative family attains the bound")
def c07():
    bad = []
    for C, g in [(1, 0), (3, -1), (Fraction(1, 2), 2)]:
        C, g = Fraction(C), Fraction(g)
        f = family_mult2(C, g)
        spec = BoundSpec("multpoly", C=C, gamma=g)
        for k in range(1, 31):
            closed = C * (C + 1) ** (k - 1) * Fraction(2) ** (k * g)
            v = inverse_prime_power(f, 2, k)
            if v != closed or bound_value(spec, 2**k) != abs(v):
                bad.append((C, g, k))
    return not bad, f"k<=30 on three (C,gamma), failures {bad}, ratio 1 on every 2^k"


@criterion(8, "prime-power partition bound is an equality")
def c08():
    bad = []
    for A, c in [(1, Fraction(1, 2)), (2, Fraction(1, 3))]:
        f = family_ppexp(A, c)
        spec = BoundSpec("primepowerpartition", A=A, c=c)
        for p in (2, 3, 5):
            for k in range(1, 9):
                v = abs(inverse_prime_power(f, p, k))
                if v != prime_power_partition_sum(A, c, p, k) or v != bound_value(spec, p**k):
                    bad.append((A, c, p, k))
    ms = [(A, k) for A in (1, 2, Fraction(1, 2), Fraction(-3, 7)) for k in range(1, 21)
          if partition_multinomial_sum(A, k) != A * (A + 1) ** (k - 1)]
    return not bad and not ms, f"partition-bound failures {bad}; multinomial-sum failures {ms}"


def _random_sweeps(spec: BoundSpec, N: int, seeds, form=None) -> tuple[int, int, float]:
    rows = sweep_random(spec, N, seeds, form=form)
    return len(rows), sum(r["failures"] for r in rows), max(float(r["max_ratio"]) for r in rows)


@criterion(9, "general polynomial bound on 200 random functions")
def c09():
    ok, parts = True, []
    for C, g in [(1, 0), (2, -1), (Fraction(1, 2), Fraction(1, 2))]:
        spec = BoundSpec("generalpoly", C=C, gamma=g)
        count, fails, worst = _random_sweeps(spec, 10**4, range(200))
        ok &= fails == 0 and count == 200
        parts.append(f"(C={C},g={g}): {fails} failures, max ratio {worst:.4f}")
    return ok, "; ".join(parts)


@criterion(10, "factor-sum extrema bounds")
def c10():
    N = 2000
    bad, equal, struct_bad = [], 0, []
    for n in range(2, N + 1):
        for k, (lo, hi) in factor_sum_extrema(n).items():
            if not (dmin_bound_holds(n, k, lo) and klog_bound_holds(n, k) and dmax_bound_holds(n, k, hi)):
                bad.append((n, k))
            if hi == d_max_upper_bound(n, k):
                equal += 1
                if n % 2 ** (k - 1):
                    struct_bad.append((n, k))
    return not bad and not struct_bad, (
        f"violations {bad[:5]}; d_max equality at {equal} (n,k) pairs, all with n/2^(k-1) integral: {not struct_bad}"
    )


@criterion(11, "truncated and odd-support variants")
def c11():
    cases = [
        BoundSpec("trunclow", N=5, C=1, gamma=0),
        BoundSpec("trunclow", N=10, C=2, gamma=Fraction(-1, 2)),
        BoundSpec("trunchigh", N=3, C=1, gamma=0),
        BoundSpec("trunchigh", N=10, C=Fraction(1, 2), gamma=1),
        BoundSpec("oddsupport", C=1, gamma=0),
        BoundSpec("oddsupport", C=2, gamma=-1),
    ]
    ok = abs(cases[4].exponent.value - eta().value) < 1e-12
    parts = [f"odd C=1 exponent {cases[4].exponent.value:.10f}"]
    for spec in cases:
        count, fails, worst = _random_sweeps(spec, 10**4, range(20))
        ok &= fails == 0
        parts.append(f"{spec}: {fails}/{count} failed, max ratio {worst:.4f}")
    return ok, "; ".join(parts)


@criterion(12, "exponential regimes")
def c12():
    N, seeds = 5000, range(20)
    ok, parts = True, []
    for A, c in [(1, Fraction(1, 2)), (2, Fraction(1, 2)), (1, 2)]:
        specs = []
        if c < 1:
            specs += [(BoundSpec("expsmallc", A=A, c=c), "omega"), (BoundSpec("expsmallc", A=A, c=c), "log")]
            if A <= 1:
                specs.append((BoundSpec("expsmallcunita", A=A, c=c), None))
        else:
            specs.append((BoundSpec("explargec", A=A, c=c), None))
        for spec, form in specs:
            count, fails, worst = _random_sweeps(spec, N, seeds, form=form)
            ok &= fails == 0
            parts.append(f"{spec}[{form or 'main'}]: {fails}/{count} failed, max ratio {worst:.4f}")
        if c > 1:
            # for c < 1 the inverse is not O(c^n) at all, so a fitted constant is only meaningful here
            fitted = max(
                fit_exponential_constant(inverse_recursive(random_exp(A, c, N, s), N), c, range(2, N + 1))
                for s in range(3)
            )
            parts.append(f"fitted A~ for (A={A},c={c}): {fitted:.6g}")
    return ok, "; ".join(parts)


def run_criterion(num: int) -> tuple[bool, str]:
    title, fn = CRITERIA[num]
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported on the same line
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:2d} ({title}) [{time.perf_counter() - t:.1f}s]: {detail}"
    return ok, line


@pytest.mark.parametrize("num", sorted(CRITERIA), ids=lambda n: f"criterion{n:02d}")
def test_criterion(num, capsys):
    ok, line = run_criterion(num)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = []
    for num in sorted(CRITERIA):
        ok, line = run_criterion(num)
        print(line, flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
