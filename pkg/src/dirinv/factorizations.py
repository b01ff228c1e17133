"""Ordered factorizations, integer partitions and extremal factor sums.

``H(n, P)`` counts ordered factorizations ``n = d_1 ... d_k`` with every
``d_i`` drawn from a factor set ``P`` of integers ``>= 2``; ``H_k`` fixes the
length ``k``.  ``H(1, P) = 1`` (empty product) so that the divisor recursion
``H(n, P) = sum_{d | n, d in P} H(n/d, P)`` closes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator

import mpmath
import numpy as np
from gmpy2 import mpq

from .arith import ResourceLimitError, as_rational, divisors

__all__ = [
    "ALL2",
    "ODD3",
    "CountOverflowError",
    "FactorSet",
    "H",
    "H_k",
    "Partition",
    "d_max_k",
    "d_max_upper_bound",
    "d_min_k",
    "d_min_lower_bound",
    "dmax_bound_holds",
    "dmin_bound_holds",
    "enumerate_ordered_factorizations",
    "e_log_bound",
    "factor_sum_extrema",
    "h_table",
    "hk_table",
    "klog_bound_holds",
    "multinomial",
    "partition_multinomial_sum",
    "partitions",
]

U64_MAX = 2**64 - 1
DEFAULT_TUPLE_CEILING = 10**7
PARTITION_CEILING = 60

OrderedFactorization = tuple[int, ...]


class CountOverflowError(OverflowError):
    """A factorization count left the unsigned 64-bit range."""


def _checked(x: int) -> int:
    if x > U64_MAX:
        raise CountOverflowError(f"count {x} exceeds 2**64-1")
    return x


@dataclass(frozen=True)
class FactorSet:
    """A universe ``P`` of admissible factors, all ``>= 2``.

    Use the constructors :meth:`all_from_2`, :meth:`odd_from_3`,
    :meth:`explicit` and :meth:`truncated` rather than the raw fields.  A
    predicate set is only meaningful up to its ``horizon``; asking about any
    ``n`` beyond it raises.
    """

    kind: str
    members: tuple[int, ...] = ()
    predicate: Callable[[int], bool] | None = None
    horizon: int | None = None
    name: str = ""

    @classmethod
    def all_from_2(cls) -> "FactorSet":
        return cls("all2", name="all2")

    @classmethod
    def odd_from_3(cls) -> "FactorSet":
        return cls("odd3", name="odd3")

    @classmethod
    def explicit(cls, members: Iterable[int]) -> "FactorSet":
        ms = tuple(sorted({int(m) for m in members}))
        if not ms:
            raise ValueError("an explicit factor set needs at least one member")
        if ms[0] < 2:
            raise ValueError(f"factor set members must be >= 2, got {ms[0]}")
        return cls("finite", ms, name="list:" + ",".join(map(str, ms)))

    @classmethod
    def truncated(cls, predicate: Callable[[int], bool], horizon: int, name: str = "pred") -> "FactorSet":
        if horizon < 2:
            raise ValueError("horizon must be >= 2")
        return cls("predicate", predicate=predicate, horizon=int(horizon), name=f"{name}@{horizon}")

    @classmethod
    def parse(cls, text: str) -> "FactorSet":
        """``all2``, ``odd3`` or ``list:2,3,5``."""
        text = text.strip()
        if text == "all2":
            return ALL2
        if text == "odd3":
            return ODD3
        if text.startswith("list:"):
            return cls.explicit(int(t) for t in text[5:].split(",") if t.strip())
        raise ValueError(f"unknown factor set {text!r}; expected all2, odd3 or list:a,b,...")

    def __str__(self) -> str:
        return self.name

    def __contains__(self, d: int) -> bool:
        if d < 2:
            return False
        if self.kind == "all2":
            return True
        if self.kind == "odd3":
            return d % 2 == 1
        if self.kind == "finite":
            return d in self._member_set
        self.check_horizon(d)
        return bool(self.predicate(d))

    @cached_property
    def _member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @cached_property
    def min_element(self) -> int:
        """The least member, written varrho in the bounds on ``H_k``."""
        if self.kind == "all2":
            return 2
        if self.kind == "odd3":
            return 3
        if self.kind == "finite":
            return self.members[0]
        for d in range(2, self.horizon + 1):
            if self.predicate(d):
                return d
        raise ValueError(f"{self.name} has no member up to its horizon")

    @property
    def abscissa(self) -> float | None:
        """Abscissa of convergence of ``sum_{m in P} m^-s``.

        ``None`` for predicate sets, where it cannot be read off a predicate.
        """
        if self.kind in ("all2", "odd3"):
            return 1.0
        if self.kind == "finite":
            return -math.inf
        return None

    def check_horizon(self, n: int) -> None:
        if self.kind == "predicate" and n > self.horizon:
            raise ValueError(f"{self.name}: membership undefined beyond horizon {self.horizon} (n={n})")

    def members_upto(self, N: int) -> list[int]:
        if self.kind == "all2":
            return list(range(2, N + 1))
        if self.kind == "odd3":
            return list(range(3, N + 1, 2))
        if self.kind == "finite":
            return [m for m in self.members if m <= N]
        self.check_horizon(N)
        return [m for m in range(2, N + 1) if self.predicate(m)]


ALL2 = FactorSet.all_from_2()
ODD3 = FactorSet.odd_from_3()


# ---------------------------------------------------------------------------
# enumeration


def enumerate_ordered_factorizations(
    n: int,
    P: FactorSet = ALL2,
    k: int | None = None,
    *,
    ceiling: int = DEFAULT_TUPLE_CEILING,
) -> list[OrderedFactorization]:
    """All ordered factorizations of ``n`` over ``P``, in lexicographic order.

    >>> enumerate_ordered_factorizations(12, k=2)
    [(2, 6), (3, 4), (4, 3), (6, 2)]
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if k is not None and k < 1:
        raise ValueError("k must be >= 1")
    P.check_horizon(n)
    cand = [d for d in divisors(n)[1:] if d in P]
    out: list[OrderedFactorization] = []
    visited = 0

    def walk(m: int, prefix: tuple[int, ...]) -> None:
        nonlocal visited
        depth = len(prefix) + 1
        for d in cand:
            if d > m:
                break
            if m % d:
                continue
            visited += 1
            if visited > ceiling:
                raise ResourceLimitError(f"more than {ceiling} factor tuples for n={n}")
            if d == m:
                if k is None or depth == k:
                    out.append(prefix + (d,))
            elif k is None or depth < k:
                walk(m // d, prefix + (d,))

    walk(n, ())
    return out


# ---------------------------------------------------------------------------
# counting by recursion

_H_CACHE: dict[FactorSet, dict[int, int]] = {}
_HK_CACHE: dict[FactorSet, dict[tuple[int, int], int]] = {}


def H(n: int, P: FactorSet = ALL2) -> int:
    """Number of ordered factorizations of ``n`` over ``P`` (``H(1, P) = 1``).

    >>> H(12)
    8
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    P.check_horizon(n)
    cache = _H_CACHE.setdefault(P, {1: 1})
    return _h(n, P, cache)


def _h(n: int, P: FactorSet, cache: dict[int, int]) -> int:
    try:
        return cache[n]
    except KeyError:
        pass
    total = 0
    for d in divisors(n)[1:]:
        if d in P:
            total += _h(n // d, P, cache)
    cache[n] = _checked(total)
    return cache[n]


def H_k(n: int, k: int, P: FactorSet = ALL2) -> int:
    """Ordered factorizations of ``n`` over ``P`` into exactly ``k`` factors."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    P.check_horizon(n)
    cache = _HK_CACHE.setdefault(P, {})
    return _hk(n, k, P, cache)


def _hk(n: int, k: int, P: FactorSet, cache: dict[tuple[int, int], int]) -> int:
    if k == 0:
        return 1 if n == 1 else 0
    if k == 1:
        return 1 if n in P else 0
    if n < 2**k:
        return 0
    key = (n, k)
    try:
        return cache[key]
    except KeyError:
        pass
    total = 0
    for d in divisors(n)[1:]:
        if d in P:
            total += _hk(n // d, k - 1, P, cache)
    cache[key] = _checked(total)
    return cache[key]


def _table_guard(N: int) -> None:
    # H(n) <= n^1.7287, so int64 cannot overflow while N^1.73 < 2^63.
    if N > 10**10:
        raise ResourceLimitError(f"table size N={N} beyond the int64-safe range")


def h_table(N: int, P: FactorSet = ALL2) -> np.ndarray:
    """``H(n, P)`` for ``0 <= n <= N`` as an int64 array (entry 0 is 0).

    A forward sieve over the same recursion as :func:`H`: when ``H(d)`` is
    final it is added to ``H(d*j)`` for every ``j`` in ``P``.
    """
    _table_guard(N)
    P.check_horizon(N)
    out = np.zeros(N + 1, dtype=np.int64)
    out[1] = 1
    if P.kind == "all2":
        for d in range(1, N // 2 + 1):
            v = out[d]
            if v:
                out[2 * d :: d] += v
    elif P.kind == "odd3":
        for d in range(1, N // 3 + 1, 2):
            v = out[d]
            if v:
                out[3 * d :: 2 * d] += v
    else:
        ms = np.array(P.members_upto(N), dtype=np.int64)
        for d in range(1, N // int(ms[0]) + 1 if len(ms) else 1):
            v = out[d]
            if v:
                tgt = d * ms[ms <= N // d]
                out[tgt] += v
    return out


def hk_table(N: int, P: FactorSet = ALL2, K: int | None = None) -> np.ndarray:
    """``H_k(n, P)`` as a ``(K+1, N+1)`` int64 array, row ``k`` for length ``k``.

    Row 0 is the identity (1 at ``n = 1``); row ``k`` is row ``k-1``
    convolved with the indicator of ``P``.  ``K`` defaults to the largest
    length any ``n <= N`` can have.
    """
    _table_guard(N)
    P.check_horizon(N)
    rho_min = P.min_element
    if K is None:
        K = max(1, int(math.log(N, rho_min) + 1e-9)) if N >= rho_min else 1
    out = np.zeros((K + 1, N + 1), dtype=np.int64)
    out[0, 1] = 1
    ms = np.array(P.members_upto(N), dtype=np.int64)
    for k in range(1, K + 1):
        prev, cur = out[k - 1], out[k]
        for d in np.nonzero(prev[: N // rho_min + 1])[0]:
            d = int(d)
            v = prev[d]
            if P.kind == "all2":
                cur[2 * d :: d] += v
            elif P.kind == "odd3":
                cur[3 * d :: 2 * d] += v
            else:
                cur[d * ms[ms <= N // d]] += v
    return out


# ---------------------------------------------------------------------------
# partitions


def multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


@dataclass(frozen=True)
class Partition:
    """Parts in non-increasing order, e.g. ``(3, 1, 1)``."""

    parts: tuple[int, ...]

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        """Run lengths of equal parts, ``l_1, ..., l_m``."""
        runs: list[int] = []
        prev = None
        for p in self.parts:
            if p == prev:
                runs[-1] += 1
            else:
                runs.append(1)
                prev = p
        return tuple(runs)

    @property
    def arrangements(self) -> int:
        """Multinomial ``l! / (l_1! ... l_m!)``: distinct orderings of the parts."""
        return multinomial(self.multiplicities)


def partitions(m: int) -> list[Partition]:
    """All partitions of ``m`` in reverse lexicographic order.

    >>> [p.parts for p in partitions(4)]
    [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    """
    if not 1 <= m <= PARTITION_CEILING:
        raise ValueError(f"partitions(m) supports 1 <= m <= {PARTITION_CEILING}, got {m}")
    out: list[Partition] = []

    def gen(rest: int, cap: int, prefix: tuple[int, ...]) -> None:
        if rest == 0:
            out.append(Partition(prefix))
            return
        for first in range(min(rest, cap), 0, -1):
            gen(rest - first, first, prefix + (first,))

    gen(m, m, ())
    return out


def partition_multinomial_sum(A, k: int) -> mpq:
    """``sum over partitions of k`` of ``multinomial * A^l``; equals ``A (A+1)^(k-1)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    A = as_rational(A)
    total = mpq(0)
    for part in partitions(k):
        total += part.arrangements * A ** len(part)
    return total


# ---------------------------------------------------------------------------
# extremal factor sums


def factor_sum_extrema(n: int, *, ceiling: int = DEFAULT_TUPLE_CEILING) -> dict[int, tuple[int, int]]:
    """``{k: (d_min_k(n), d_max_k(n))}`` for every feasible length ``k``."""
    out: dict[int, tuple[int, int]] = {}
    for t in enumerate_ordered_factorizations(n, ALL2, ceiling=ceiling):
        s = sum(t)
        k = len(t)
        lo, hi = out.get(k, (s, s))
        out[k] = (min(lo, s), max(hi, s))
    return out


def d_min_k(n: int, k: int, *, ceiling: int = DEFAULT_TUPLE_CEILING) -> float | int:
    """Least ``d_1 + ... + d_k`` over factorizations ``n = d_1...d_k``, ``d_i >= 2``.

    Returns ``math.inf`` when no such factorization exists.
    """
    ts = enumerate_ordered_factorizations(n, ALL2, k, ceiling=ceiling)
    return min((sum(t) for t in ts), default=math.inf)


def d_max_k(n: int, k: int, *, ceiling: int = DEFAULT_TUPLE_CEILING) -> float | int:
    """Largest factor sum over ``k``-factor factorizations; ``-math.inf`` if none."""
    ts = enumerate_ordered_factorizations(n, ALL2, k, ceiling=ceiling)
    return max((sum(t) for t in ts), default=-math.inf)


def d_min_lower_bound(n: int, k: int) -> float:
    """``k * n**(1/k)``."""
    return k * n ** (1.0 / k)


def e_log_bound(n: int) -> float:
    """``e * ln n``, the minimum of ``x n^(1/x)`` over real ``x > 0``."""
    return math.e * math.log(n)


def d_max_upper_bound(n: int, k: int) -> mpq:
    """``2(k-1) + n / 2^(k-1)`` (exact)."""
    return mpq(2 * (k - 1)) + mpq(n, 2 ** (k - 1))


def dmin_bound_holds(n: int, k: int, dmin: float | int) -> bool:
    """Exact test of ``dmin >= k n^(1/k)``, i.e. ``(dmin/k)^k >= n``."""
    if dmin == math.inf:
        return True
    return mpq(int(dmin), k) ** k >= n


def klog_bound_holds(n: int, k: int) -> bool:
    """``k n^(1/k) >= e ln n``, evaluated at 50 significant digits."""
    with mpmath.workdps(50):
        return k * mpmath.root(n, k) >= mpmath.e * mpmath.log(n)


def dmax_bound_holds(n: int, k: int, dmax: float | int) -> bool:
    if dmax == -math.inf:
        return True
    return int(dmax) <= d_max_upper_bound(n, k)
