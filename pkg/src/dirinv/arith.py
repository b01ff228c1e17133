"""Exact arithmetic functions under Dirichlet convolution.

Values are exact rationals (``gmpy2.mpq``).  An arithmetic function is always
normalised so that ``f(1) == 1``; the inverse of ``a*f`` is ``f^-1 / a``, so a
caller holding ``f(1) = a != 0`` should divide by ``a`` first (see
:func:`normalize`).

Three independent routes to the Dirichlet inverse are provided:

* :func:`inverse_recursive` -- the divisor recursion
  ``f^-1(n) = -sum_{d | n, d < n} f(n/d) f^-1(d)``;
* :func:`inverse_sum_formula` / :func:`inverse_sum_table` -- the signed sum over
  all ordered factorizations ``n = d_1 ... d_k`` with ``d_i >= 2``;
* :func:`inverse_multiplicative` -- prime-power reconstruction, valid when
  ``f`` is multiplicative.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np
from gmpy2 import mpq
from sympy import factorint, isprime

__all__ = [
    "ArithmeticFunction",
    "InverseTable",
    "MultiplicativityReport",
    "NormalizationError",
    "PrimeFactorization",
    "ResourceLimitError",
    "as_rational",
    "big_omega",
    "check_multiplicativity",
    "convolve",
    "convolve_upto",
    "divisors",
    "epsilon",
    "factorize",
    "inverse_multiplicative",
    "inverse_multiplicative_table",
    "inverse_prime_power",
    "inverse_recursive",
    "inverse_sum_formula",
    "inverse_sum_table",
    "inverse_totally_multiplicative",
    "is_prime",
    "mobius",
    "multiplicative_counterexample",
    "normalize",
    "prime_power_inverses",
    "small_omega",
    "spf_table",
    "tau",
]

ZERO = mpq(0)
ONE = mpq(1)
MAX_N = 2**63 - 1
DEFAULT_TUPLE_CEILING = 10**7


class NormalizationError(ValueError):
    """Raised when an arithmetic function does not satisfy f(1) = 1."""


class ResourceLimitError(RuntimeError):
    """Raised when an enumeration would exceed its configured ceiling."""


def as_rational(x) -> mpq:
    """Convert ``x`` to an exact ``mpq``.

    Accepts ints, ``Fraction``, gmpy2 numbers and strings such as ``"-3/4"``.
    Floats are rejected: silently importing binary rounding error defeats the
    point of exact identities.
    """
    if isinstance(x, float):
        raise TypeError(f"float {x!r} is not an exact rational; use Fraction or a 'p/q' string")
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


# ---------------------------------------------------------------------------
# factorization utilities

_spf = np.zeros(0, dtype=np.int64)


def spf_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for ``0..limit`` (entries 0 and 1 are 0).

    The table is cached at module level and only ever grows, so later calls to
    :func:`factorize` on small ``n`` avoid trial division entirely.
    """
    global _spf
    if limit < len(_spf):
        return _spf[: limit + 1]
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(limit + 1, dtype=np.int64)
    unset = spf == 0
    spf[unset] = idx[unset]
    spf[:2] = 0
    _spf = spf
    return spf


@dataclass(frozen=True)
class PrimeFactorization:
    """Canonical factorization ``n = prod p_j ** e_j`` with ascending primes."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def big_omega(self) -> int:
        return sum(e for _, e in self.factors)

    @property
    def small_omega(self) -> int:
        return len(self.factors)

    @property
    def divisor_count(self) -> int:
        return math.prod(e + 1 for _, e in self.factors)

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**i for d in divs for i in range(e + 1)]
        divs.sort()
        return divs


def factorize(n: int) -> PrimeFactorization:
    """Factor ``1 <= n <= 2**63 - 1``.

    Uses the cached smallest-prime-factor table when it covers ``n`` and
    ``sympy.factorint`` otherwise.

    >>> factorize(12).factors
    ((2, 2), (3, 1))
    """
    n = int(n)
    if not 1 <= n <= MAX_N:
        raise ValueError(f"factorize needs 1 <= n <= 2**63-1, got {n}")
    if n < len(_spf):
        out: list[tuple[int, int]] = []
        m = n
        while m > 1:
            p = int(_spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        return PrimeFactorization(n, tuple(out))
    return PrimeFactorization(n, tuple(sorted((int(p), int(e)) for p, e in factorint(n).items())))


def divisors(n: int) -> list[int]:
    return factorize(n).divisors()


def is_prime(n: int) -> bool:
    """Deterministic primality for 64-bit inputs."""
    return bool(isprime(int(n)))


def big_omega(n: int) -> int:
    return factorize(n).big_omega


def small_omega(n: int) -> int:
    return factorize(n).small_omega


def tau(n: int) -> int:
    return factorize(n).divisor_count


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if fac.small_omega % 2 else 1


def epsilon(n: int) -> mpq:
    """Identity of Dirichlet convolution."""
    return ONE if n == 1 else ZERO


# ---------------------------------------------------------------------------
# arithmetic functions


class ArithmeticFunction:
    """A normalised map ``n -> f(n)`` with exact rational values.

    ``evaluator`` is called at most once per ``n``; results are memoised.
    ``inverse_oracle``, when set, is a closed form for ``f^-1`` known
    independently of any inversion routine (used by extremal families).
    """

    __slots__ = ("name", "_evaluator", "_memo", "inverse_oracle", "domain_limit")

    def __init__(
        self,
        evaluator: Callable[[int], object],
        name: str = "f",
        *,
        inverse_oracle: Callable[[int], object] | None = None,
        domain_limit: int | None = None,
    ):
        self.name = name
        self._evaluator = evaluator
        self._memo: dict[int, mpq] = {}
        self.inverse_oracle = inverse_oracle
        self.domain_limit = domain_limit
        one = self(1)
        if one != 1:
            raise NormalizationError(
                f"{name}(1) = {one}, expected 1; divide by f(1) first "
                f"(the inverse of a*f is f^-1/a), e.g. via normalize()"
            )

    def __call__(self, n: int) -> mpq:
        try:
            return self._memo[n]
        except KeyError:
            pass
        if n < 1 or (self.domain_limit is not None and n > self.domain_limit):
            raise ValueError(f"{self.name} is defined on 1..{self.domain_limit}, got n={n}")
        v = as_rational(self._evaluator(n))
        self._memo[n] = v
        return v

    def __repr__(self) -> str:
        return f"ArithmeticFunction({self.name!r})"

    def values(self, N: int) -> list[mpq]:
        """``[0, f(1), ..., f(N)]`` (index 0 is a placeholder)."""
        return [ZERO] + [self(n) for n in range(1, N + 1)]

    @classmethod
    def from_table(
        cls,
        table: Mapping[int, object] | Sequence[object],
        name: str = "f",
        *,
        default: object | None = 0,
    ) -> "ArithmeticFunction":
        """Build from explicit values.

        A sequence is read as ``f(1), f(2), ...``.  With ``default=None`` the
        function is undefined past the largest listed ``n``; otherwise
        unlisted ``n`` take ``default``.
        """
        if isinstance(table, Mapping):
            data = {int(k): as_rational(v) for k, v in table.items()}
        else:
            data = {i + 1: as_rational(v) for i, v in enumerate(table)}
        if 1 not in data:
            raise NormalizationError(f"{name}: the value at n=1 is mandatory")
        limit = max(data) if default is None else None
        fill = None if default is None else as_rational(default)
        return cls(lambda n: data.get(n, fill), name, domain_limit=limit)


def normalize(evaluator: Callable[[int], object], name: str = "f") -> tuple[ArithmeticFunction, mpq]:
    """Split ``g`` with ``g(1) = a != 0`` into ``(g/a, a)``.

    Then ``g^-1 = (g/a)^-1 / a``.
    """
    a = as_rational(evaluator(1))
    if a == 0:
        raise NormalizationError(f"{name}(1) = 0: not invertible under Dirichlet convolution")
    return ArithmeticFunction(lambda n: as_rational(evaluator(n)) / a, name), a


def convolve(f: Callable[[int], object], g: Callable[[int], object], n: int) -> mpq:
    """``(f * g)(n) = sum_{d | n} f(n/d) g(d)``."""
    total = ZERO
    for d in divisors(n):
        total += as_rational(f(n // d)) * as_rational(g(d))
    return total


def convolve_upto(fv: Sequence[mpq], gv: Sequence[mpq]) -> list[mpq]:
    """Convolution of two value lists indexed ``1..N`` (index 0 ignored)."""
    N = min(len(fv), len(gv)) - 1
    out = [ZERO] * (N + 1)
    for d in range(1, N + 1):
        a = fv[d]
        if not a:
            continue
        for m in range(1, N // d + 1):
            b = gv[m]
            if b:
                out[d * m] += a * b
    return out


@dataclass
class InverseTable:
    """Materialised values ``f^-1(1..limit)``."""

    limit: int
    values: list[mpq] = field(repr=False)

    def __getitem__(self, n: int) -> mpq:
        if not 1 <= n <= self.limit:
            raise IndexError(f"n={n} outside 1..{self.limit}")
        return self.values[n]

    def __len__(self) -> int:
        return self.limit

    def __iter__(self) -> Iterator[mpq]:
        return iter(self.values[1:])

    def scaled(self, factor) -> "InverseTable":
        factor = as_rational(factor)
        return InverseTable(self.limit, [v * factor for v in self.values])

    def as_function(self, name: str = "f^-1") -> ArithmeticFunction:
        vals = self.values
        return ArithmeticFunction(lambda n: vals[n], name, domain_limit=self.limit)


def _check_normalized(fv: Sequence[mpq], name: str) -> None:
    if len(fv) > 1 and fv[1] != 1:
        raise NormalizationError(f"{name}(1) = {fv[1]}, expected 1")


def inverse_recursive(f: ArithmeticFunction | Sequence[mpq], N: int) -> InverseTable:
    """Dirichlet inverse on ``1..N`` by the divisor recursion.

    Implemented as a forward sieve: once ``f^-1(d)`` is final, its
    contribution ``f(j) f^-1(d)`` is pushed to every multiple ``d*j``.  Cost is
    ``O(sum_{n <= N} tau(n))`` exact operations, fewer when ``f`` is sparse.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    fv = f.values(N) if isinstance(f, ArithmeticFunction) else list(f[: N + 1])
    _check_normalized(fv, getattr(f, "name", "f"))
    support = [j for j in range(2, N + 1) if fv[j]]
    inv = [ZERO] * (N + 1)
    acc = [ZERO] * (N + 1)
    inv[1] = ONE
    for d in range(1, N + 1):
        if d > 1:
            v = inv[d] = -acc[d]
            acc[d] = None  # free memory early
            if not v:
                continue
        else:
            v = ONE
        lim = N // d
        for j in support:
            if j > lim:
                break
            acc[d * j] += fv[j] * v
    return InverseTable(N, inv)


def inverse_sum_formula(f: ArithmeticFunction, n: int, *, ceiling: int = DEFAULT_TUPLE_CEILING) -> mpq:
    """``f^-1(n)`` as the signed sum over ordered factorizations of ``n``.

    ``sum_k (-1)^k sum_{d_1...d_k = n, d_i >= 2} f(d_1)...f(d_k)``, enumerated
    tuple by tuple.  Raises :class:`ResourceLimitError` once more than
    ``ceiling`` factor tuples (including prefixes) have been visited.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if f(1) != 1:
        raise NormalizationError(f"{f.name}(1) != 1")
    if n == 1:
        return ONE
    divs = divisors(n)[1:]
    fvals = {d: f(d) for d in divs}
    total = ZERO
    visited = 0

    def walk(m: int, value: mpq) -> None:
        # value = (-1)^k f(d_1)...f(d_k) for the prefix already chosen
        nonlocal total, visited
        for d in divs:
            if d > m:
                break
            if m % d:
                continue
            fd = fvals[d]
            visited += 1
            if visited > ceiling:
                raise ResourceLimitError(f"more than {ceiling} factor tuples for n={n}")
            if not fd:
                continue
            v = -value * fd
            if d == m:
                total += v
            else:
                walk(m // d, v)

    walk(n, ONE)
    return total


def inverse_sum_table(f: ArithmeticFunction, N: int, *, ceiling: int = DEFAULT_TUPLE_CEILING) -> InverseTable:
    """The ordered-factorization sum for every ``n <= N`` at once.

    Walks every tuple ``(d_1, ..., d_k)`` with ``d_i >= 2`` and product at
    most ``N`` exactly once, adding ``(-1)^k prod f(d_i)`` to the product's
    slot.  No previously computed inverse value is ever reused, which keeps
    this route independent of :func:`inverse_recursive`.
    """
    fv = f.values(N)
    _check_normalized(fv, f.name)
    support = [j for j in range(2, N + 1) if fv[j]]
    acc = [ZERO] * (N + 1)
    acc[1] = ONE
    visited = 0
    limit = sys.getrecursionlimit()
    if N.bit_length() + 50 > limit:
        sys.setrecursionlimit(N.bit_length() + 100)

    def walk(m: int, value: mpq) -> None:
        nonlocal visited
        lim = N // m
        for d in support:
            if d > lim:
                break
            visited += 1
            if visited > ceiling:
                raise ResourceLimitError(f"more than {ceiling} factor tuples below N={N}")
            v = -value * fv[d]
            acc[m * d] += v
            walk(m * d, v)

    walk(1, ONE)
    return InverseTable(N, acc)


def prime_power_inverses(f: Callable[[int], object], p: int, k: int) -> list[mpq]:
    """``[f^-1(1), f^-1(p), ..., f^-1(p^k)]`` from the prime-power recursion.

    Only the values ``f(p^j)`` enter, so the result is valid for any ``f``
    (multiplicative or not).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 0:
        raise ValueError("k must be >= 0")
    fp = [ONE] + [as_rational(f(p**j)) for j in range(1, k + 1)]
    inv = [ONE]
    for j in range(1, k + 1):
        s = ZERO
        for m in range(j):
            s += fp[j - m] * inv[m]
        inv.append(-s)
    return inv


def inverse_prime_power(f: Callable[[int], object], p: int, k: int) -> mpq:
    return prime_power_inverses(f, p, k)[k]


def inverse_multiplicative(f: Callable[[int], object], n: int) -> mpq:
    """``f^-1(n)`` assuming ``f`` is multiplicative (not checked here)."""
    out = ONE
    for p, e in factorize(n):
        out *= inverse_prime_power(f, p, e)
    return out


def _split_smallest_prime_power(n: int, spf: np.ndarray) -> tuple[int, int]:
    """``(p^e, n / p^e)`` for the smallest prime ``p`` of ``n``."""
    p = int(spf[n])
    q, m = p, n // p
    while m % p == 0:
        q *= p
        m //= p
    return q, m


def inverse_multiplicative_table(f: Callable[[int], object], N: int) -> InverseTable:
    """``f^-1(1..N)`` for multiplicative ``f`` (not checked here).

    One recursion per prime power, then a single product per ``n``: about
    ``N`` exact multiplications instead of the ``N log N`` of the sieve.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    _check_normalized([ZERO, as_rational(f(1))], getattr(f, "name", "f"))
    spf = spf_table(N)
    inv = [ZERO] * (N + 1)
    inv[1] = ONE
    for p in range(2, N + 1):
        if spf[p] != p:
            continue
        k = 1
        while p ** (k + 1) <= N:
            k += 1
        for j, v in enumerate(prime_power_inverses(f, p, k)[1:], 1):
            inv[p**j] = v
    for n in range(6, N + 1):
        q, m = _split_smallest_prime_power(n, spf)
        if m > 1:
            inv[n] = inv[m] * inv[q]
    return InverseTable(N, inv)


def inverse_totally_multiplicative(f: Callable[[int], object], n: int) -> mpq:
    """``mu(n) f(n)``; correct only for totally multiplicative ``f``."""
    return mobius(n) * as_rational(f(n))


TOTAL = "totally-multiplicative"
MULT = "multiplicative"
SUPER = "supermultiplicative-abs"
SUB = "submultiplicative-abs"
LABELS = (TOTAL, MULT, SUPER, SUB)


@dataclass(frozen=True)
class MultiplicativityReport:
    """Outcome of an exhaustive pair scan over ``m * n <= N``.

    ``counterexamples`` maps every label to the first failing pair ``(m, n)``
    in scan order, or ``None`` when the property held throughout.
    """

    N: int
    counterexamples: dict[str, tuple[int, int] | None]

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(k for k, v in self.counterexamples.items() if v is None)

    def holds(self, label: str) -> bool:
        return self.counterexamples[label] is None

    @property
    def classification(self) -> tuple[str, ...]:
        found = tuple(lab for lab in LABELS if self.holds(lab))
        return found or ("none",)


def multiplicative_counterexample(f: Callable[[int], object], N: int) -> tuple[int, int] | None:
    """A coprime pair ``(m, n)`` with ``m * n <= N`` and ``f(mn) != f(m) f(n)``, or None.

    Linear time: for ``f(1) = 1`` it is enough that ``f(n) = f(n / p^e) f(p^e)``
    for the smallest prime ``p`` of each ``n``, since by induction this gives
    ``f(n) = prod f(p^e)`` over the whole range.
    """
    vals = [ZERO] + [as_rational(f(n)) for n in range(1, N + 1)]
    if vals[1] == 0:
        return next(((1, n) for n in range(2, N + 1) if vals[n]), None)
    if vals[1] != 1:
        return (1, 1)
    spf = spf_table(N)
    for n in range(6, N + 1):
        q, m = _split_smallest_prime_power(n, spf)
        if m > 1 and vals[n] != vals[m] * vals[q]:
            return (min(m, q), max(m, q))
    return None


def check_multiplicativity(f: Callable[[int], object], N: int) -> MultiplicativityReport:
    """Classify ``f`` on all pairs ``(m, n)`` with ``m * n <= N``."""
    if N < 2:
        raise ValueError("N must be >= 2")
    vals = [ZERO] + [as_rational(f(n)) for n in range(1, N + 1)]
    absv = [abs(v) for v in vals]
    found: dict[str, tuple[int, int] | None] = dict.fromkeys(LABELS)
    for m in range(1, math.isqrt(N) + 1):
        for n in range(m, N // m + 1):
            prod = vals[m] * vals[n]
            mn = vals[m * n]
            if found[TOTAL] is None and prod != mn:
                found[TOTAL] = (m, n)
            if found[MULT] is None and prod != mn and math.gcd(m, n) == 1:
                found[MULT] = (m, n)
            aprod = absv[m] * absv[n]
            if found[SUPER] is None and aprod > absv[m * n]:
                found[SUPER] = (m, n)
            if found[SUB] is None and aprod < absv[m * n]:
                found[SUB] = (m, n)
        if all(v is not None for v in found.values()):
            break
    return MultiplicativityReport(N, found)

