"""Real zeta-type series and the root equations behind the growth exponents.

``zeta_real`` sums ``m^-s`` directly up to a cut-off ``M`` and closes the tail
with an Euler--Maclaurin expansion whose remainder is bounded by the first
omitted term (for real ``s``).  The cut-off is increased until that bound is
below the requested tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

from .factorizations import ALL2, ODD3, FactorSet

__all__ = [
    "DivergenceError",
    "GrowthExponent",
    "NoSignChangeError",
    "ZetaEquation",
    "eta",
    "rho",
    "solve",
    "zeta_factor_set",
    "zeta_real",
    "zeta_tail",
]

POLE_GAP = 1e-6
DEFAULT_ROOT_TOL = 1e-9
DEFAULT_EVAL_TOL = 1e-12

# B_2, B_4, ..., B_20
_BERNOULLI = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30), Fraction(5, 66),
    Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510), Fraction(43867, 798),
    Fraction(-174611, 330),
]
_EM_COEF = [float(b / math.factorial(2 * j + 2)) for j, b in enumerate(_BERNOULLI)]
_EM_TERMS = 8


class DivergenceError(ValueError):
    """The series does not converge at the requested ``s``."""


class NoSignChangeError(ValueError):
    """No bracketing interval with a residual sign change could be found."""


def _em_tail(s: float, M: int) -> tuple[float, float]:
    """``sum_{m >= M} m^-s`` by Euler--Maclaurin, with a remainder bound."""
    lead = M ** (1.0 - s) / (s - 1.0) + 0.5 * M ** (-s)
    terms = []
    rising = s  # s (s+1) ... (s + 2j - 2)
    power = M ** (-s - 1.0)
    for j in range(_EM_TERMS + 1):
        term = _EM_COEF[j] * rising * power
        terms.append(term)
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2)
        power /= M * M
    correction = math.fsum(terms[:-1])
    return lead + correction, 2.0 * abs(terms[-1])


def zeta_tail(s: float, start: int = 1, tol: float = DEFAULT_EVAL_TOL, *, terms: int | None = None) -> float:
    """``sum_{m >= start} m^-s`` for real ``s > 1``.

    The error is at most ``tol * max(1, value)``: absolute for moderate
    values, relative close to the pole where the value is large.

    ``terms`` fixes the number of directly summed terms (mainly for testing
    that the result is insensitive to it); by default it is chosen adaptively.
    """
    if s < 1.0 + POLE_GAP:
        raise DivergenceError(f"s={s} is not above 1 + {POLE_GAP}")
    if start < 1:
        raise ValueError("start must be >= 1")
    M = max(start, 16) if terms is None else start + terms
    while True:
        head = math.fsum(m ** (-s) for m in range(start, M))
        tail, err = _em_tail(s, M)
        if err <= tol * max(1.0, head + tail) or terms is not None:
            break
        M *= 2
        if M > 2**22:
            raise ValueError(f"tolerance {tol} unreachable at s={s}")
    value = head + tail
    # binary64 rounding floor: a few ulps of the result plus summation error
    floor = 8 * math.ulp(value) + M * math.ulp(head)
    if terms is None and tol * max(1.0, value) < floor:
        raise ValueError(f"tolerance {tol} is below binary64 resolution ({floor:.1e}) at s={s}")
    return value


def zeta_real(s: float, tol: float = DEFAULT_EVAL_TOL, *, terms: int | None = None) -> float:
    """Riemann zeta at real ``s >= 1 + 1e-6``.

    >>> abs(zeta_real(2.0) - math.pi**2 / 6) < 1e-12
    True
    """
    return zeta_tail(s, 1, tol, terms=terms)


def zeta_factor_set(P: FactorSet, s: float, tol: float = DEFAULT_EVAL_TOL) -> float:
    """``sum_{m in P} m^-s``.

    Closed forms: ``zeta(s) - 1`` for ``all2`` and ``(1 - 2^-s) zeta(s) - 1``
    for ``odd3``.  Finite sets are summed directly for any real ``s``.  A
    predicate set is summed up to its horizon only, which is not a rigorous
    value of the infinite series; a warning says so.
    """
    if P.kind == "all2":
        return zeta_tail(s, 2, tol)
    if P.kind == "odd3":
        # (1 - 2^-s) zeta(s) - 1 written without cancelling the leading 1
        return zeta_tail(s, 2, tol / 2) - 2.0 ** (-s) * zeta_real(s, tol / 2)
    if P.kind == "finite":
        return math.fsum(m ** (-s) for m in P.members)
    warnings.warn(f"{P.name}: truncated sum up to the horizon, not a rigorous series value", stacklevel=2)
    return math.fsum(m ** (-s) for m in P.members_upto(P.horizon))


@dataclass(frozen=True)
class ZetaEquation:
    """An equation ``residual(s) = 0`` with residual strictly decreasing in ``s``.

    Kinds and their residuals:

    ``zeta``       ``zeta(s) - target``
    ``oddzeta``    ``(1 - 2^-s) zeta(s) - target``
    ``trunclow``   ``zeta(s) - 1/C - sum_{m<=N} m^-s``
    ``finite``     ``sum_{m=2}^{N} m^-s - 1/C``
    ``factorset``  ``zeta_P(s) - target``
    """

    kind: str
    target: float | None = None
    N: int | None = None
    C: Fraction | None = None
    factor_set: FactorSet | None = None
    description: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.target is not None and self.target <= 0:
            raise ValueError("target must be positive")
        if self.C is not None and self.C <= 0:
            raise ValueError("C must be positive")
        if self.N is not None and self.N < 2:
            raise ValueError("N must be >= 2")

    @classmethod
    def full_zeta(cls, target) -> "ZetaEquation":
        t = float(target)
        return cls("zeta", target=t, description=f"zeta(s) = {t:.12g}")

    @classmethod
    def odd_zeta(cls, target) -> "ZetaEquation":
        t = float(target)
        return cls("oddzeta", target=t, description=f"(1-2^-s) zeta(s) = {t:.12g}")

    @classmethod
    def truncated_low(cls, N: int, C) -> "ZetaEquation":
        C = Fraction(C)
        return cls("trunclow", N=int(N), C=C, description=f"zeta(s) = {1 / C} + sum_(m<={N}) m^-s")

    @classmethod
    def finite_set(cls, N: int, C) -> "ZetaEquation":
        C = Fraction(C)
        return cls("finite", N=int(N), C=C, description=f"sum_(m=2..{N}) m^-s = {1 / C}")

    @classmethod
    def factor_set_root(cls, P: FactorSet, target=1) -> "ZetaEquation":
        t = float(target)
        return cls("factorset", target=t, factor_set=P, description=f"zeta_[{P.name}](s) = {t:.12g}")

    # the exponents used by the bounds
    @classmethod
    def varsigma(cls, C) -> "ZetaEquation":
        """``zeta(s) = 1/C + 1``."""
        return cls.full_zeta(1 + 1 / Fraction(C))

    @classmethod
    def upsilon(cls, A, c) -> "ZetaEquation":
        """``zeta(s) = 1/(A c^2) + 1``."""
        return cls.full_zeta(1 + 1 / (Fraction(A) * Fraction(c) ** 2))

    @classmethod
    def odd_varsigma(cls, C) -> "ZetaEquation":
        """``(1 - 2^-s) zeta(s) = 1/C + 1``."""
        return cls.odd_zeta(1 + 1 / Fraction(C))

    @property
    def abscissa(self) -> float:
        if self.kind == "finite":
            return -math.inf
        if self.kind == "factorset":
            a = self.factor_set.abscissa
            if a is None:
                raise DivergenceError(f"{self.factor_set.name}: unknown abscissa of convergence")
            return a
        return 1.0

    def residual(self, s: float, tol: float = DEFAULT_EVAL_TOL) -> float:
        if self.kind == "zeta":
            if self.target <= 1:
                raise NoSignChangeError("zeta(s) > 1 for all real s > 1; target must exceed 1")
            return zeta_real(s, tol) - self.target
        if self.kind == "oddzeta":
            if self.target <= 1:
                raise NoSignChangeError("(1-2^-s) zeta(s) > 1 for s > 1; target must exceed 1")
            return zeta_factor_set(ODD3, s, tol) + 1.0 - self.target
        if self.kind == "trunclow":
            return zeta_tail(s, self.N + 1, tol) - float(1 / self.C)
        if self.kind == "finite":
            return math.fsum(m ** (-s) for m in range(2, self.N + 1)) - float(1 / self.C)
        if self.kind == "factorset":
            P = self.factor_set
            if P.is_finite or P.abscissa is not None:
                return zeta_factor_set(P, s, tol) - self.target
            raise DivergenceError(f"{P.name}: no rigorous evaluation for predicate sets")
        raise ValueError(f"unknown equation kind {self.kind!r}")


@dataclass(frozen=True)
class GrowthExponent:
    """A root with a certified enclosure ``lo <= root <= hi``.

    ``boundary`` marks a root that is not strictly positive, which can only
    happen for finite-set equations (e.g. ``N = 2, C = 1`` gives ``s = 0``).
    Bounds that grow with the exponent should use ``hi``.
    """

    value: float
    lo: float
    hi: float
    equation: ZetaEquation
    boundary: bool = False

    def __float__(self) -> float:
        return self.value

    @property
    def width(self) -> float:
        return self.hi - self.lo


def solve(equation: ZetaEquation, tol: float = DEFAULT_ROOT_TOL, eval_tol: float = DEFAULT_EVAL_TOL) -> GrowthExponent:
    """Bracket and bisect the unique real root of ``equation``.

    The initial bracket ``[1 + 1e-3, 64]`` is widened on demand: the lower
    end moves halfway to the abscissa of convergence (or doubles downwards
    for finite sets), the upper end doubles.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    res = lambda s: equation.residual(s, eval_tol)  # noqa: E731
    floor = equation.abscissa
    lo, hi = 1.0 + 1e-3, 64.0
    step = 1.0
    while res(lo) <= 0:
        if floor == -math.inf:
            lo -= step
            step *= 2
            if lo < -1e6:
                raise NoSignChangeError(f"no sign change for {equation.description}")
        else:
            lo = floor + (lo - floor) / 2
            if lo - floor < POLE_GAP:
                raise NoSignChangeError(f"no sign change above the abscissa for {equation.description}")
    while res(hi) >= 0:
        hi *= 2
        if hi > 1e6:
            raise NoSignChangeError(f"no sign change below s=1e6 for {equation.description}")
    finite = equation.kind == "finite"
    if finite and lo < 0.0 < hi and res(0.0) == 0.0:
        return GrowthExponent(0.0, 0.0, 0.0, equation, boundary=True)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            raise ValueError(f"tolerance {tol} below floating resolution near s={mid}")
        r = res(mid)
        if r == 0.0:
            lo = hi = mid
            break
        if abs(r) <= eval_tol:
            raise ValueError(
                f"tolerance {tol} unachievable: residual {r:.1e} at s={mid} is within evaluation error {eval_tol:.0e}"
            )
        if r > 0:
            lo = mid
        else:
            hi = mid
    return GrowthExponent(0.5 * (lo + hi), lo, hi, equation, boundary=finite and lo <= 0.0)


@cache
def rho(P: FactorSet = ALL2) -> GrowthExponent:
    """``rho(P)``: the root of ``zeta_P(s) = 1`` (1.72865... for ``all2``)."""
    return solve(ZetaEquation.factor_set_root(P, 1))


@cache
def eta() -> GrowthExponent:
    """``rho`` of the odd factor set ``{3, 5, 7, ...}`` (1.37779...)."""
    return solve(ZetaEquation.odd_zeta(2))
