import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.functions.combinatorial.numbers import partition as npartitions
from sympy.utilities.iterables import partitions as sympy_partitions

from dirinv import (
    ALL2,
    ODD3,
    CountOverflowError,
    FactorSet,
    H,
    H_k,
    ResourceLimitError,
    big_omega,
    d_max_k,
    d_max_upper_bound,
    d_min_k,
    d_min_lower_bound,
    dmax_bound_holds,
    dmin_bound_holds,
    e_log_bound,
    enumerate_ordered_factorizations,
    h_table,
    hk_table,
    klog_bound_holds,
    multinomial,
    partition_multinomial_sum,
    partitions,
)
from dirinv.factorizations import _checked

from oracles import brute_factorizations

SMALL = FactorSet.explicit([5, 3, 2, 3])


def test_factor_set_basics():
    assert SMALL.members == (2, 3, 5) and SMALL.min_element == 2
    assert 4 not in SMALL and 5 in SMALL
    assert 9 in ODD3 and 8 not in ODD3 and 1 not in ALL2
    assert ODD3.min_element == 3
    assert FactorSet.parse("list:7,3") == FactorSet.explicit([3, 7])
    with pytest.raises(ValueError):
        FactorSet.explicit([1, 2])
    with pytest.raises(ValueError):
        FactorSet.parse("primes")


def test_predicate_set_horizon():
    sq = FactorSet.truncated(lambda d: math.isqrt(d) ** 2 == d, 100, "squares")
    assert sq.min_element == 4
    assert H(64, sq) == len(brute_factorizations(64, lambda d: math.isqrt(d) ** 2 == d))
    with pytest.raises(ValueError, match="horizon"):
        H(101, sq)
    with pytest.raises(ValueError):
        enumerate_ordered_factorizations(200, sq)


def test_enumeration_examples():
    got = enumerate_ordered_factorizations(12)
    assert sorted(got) == sorted([(12,), (2, 6), (6, 2), (3, 4), (4, 3), (2, 2, 3), (2, 3, 2), (3, 2, 2)])
    assert got == sorted(got)
    assert enumerate_ordered_factorizations(8, ODD3) == []
    assert enumerate_ordered_factorizations(97) == [(97,)]
    assert enumerate_ordered_factorizations(12, k=2) == [(2, 6), (3, 4), (4, 3), (6, 2)]


def test_enumeration_ceiling():
    with pytest.raises(ResourceLimitError):
        enumerate_ordered_factorizations(2**16, ceiling=500)


@pytest.mark.parametrize("n, P, expected", [(12, ALL2, 8), (64, ALL2, 32), (45, ODD3, 8), (1, ALL2, 1), (1, ODD3, 1)])
def test_h_examples(n, P, expected):
    assert H(n, P) == expected


def test_h45_odd_matches_brute_force():
    tuples = brute_factorizations(45, lambda d: d % 2 == 1)
    assert len(tuples) == 8
    assert H(45, ODD3) == 8


def test_hk_examples():
    assert H_k(12, 2) == 4 and H_k(12, 3) == 3 and H_k(12, 1) == 1
    assert H_k(8, 1, ODD3) == 0 and H_k(9, 1, ODD3) == 1
    assert H_k(1, 0) == 1 and H_k(5, 0) == 0


@pytest.mark.parametrize(
    "P, allowed",
    [(ALL2, lambda d: True), (ODD3, lambda d: d % 2 == 1), (SMALL, lambda d: d in (2, 3, 5))],
    ids=["all2", "odd3", "list235"],
)
def test_recursion_matches_enumeration(P, allowed):
    for n in range(2, 3001):
        tuples = enumerate_ordered_factorizations(n, P)
        assert H(n, P) == len(tuples)
        by_k = np.bincount([len(t) for t in tuples], minlength=big_omega(n) + 1)
        for k in range(1, big_omega(n) + 1):
            assert H_k(n, k, P) == by_k[k]
    for n in range(2, 200):
        assert sorted(enumerate_ordered_factorizations(n, P)) == sorted(brute_factorizations(n, allowed))


@pytest.mark.parametrize("P", [ALL2, ODD3, SMALL], ids=str)
def test_tables_match_scalar_recursion(P):
    N = 5000
    h = h_table(N, P)
    hk = hk_table(N, P)
    assert [int(h[n]) for n in range(1, N + 1)] == [H(n, P) for n in range(1, N + 1)]
    assert np.array_equal(hk.sum(axis=0)[1:], h[1:])


def test_layer_sum_to_1e5():
    N = 10**5
    hk = hk_table(N)
    assert np.array_equal(hk.sum(axis=0), h_table(N))


def test_hk_is_convolution_of_layers():
    # H_k = H_{k-1} * H_1 exactly, n <= 10^4
    N = 10**4
    hk = hk_table(N)
    ind = (np.arange(N + 1) >= 2).astype(np.int64)
    for k in range(2, hk.shape[0]):
        conv = np.zeros(N + 1, dtype=np.int64)
        for d in range(1, N + 1):
            if hk[k - 1, d]:
                conv[2 * d :: d] += hk[k - 1, d] * ind[2 : N // d + 1]
        assert np.array_equal(conv, hk[k])


def test_dirichlet_series_tail_shrinks():
    s = 3
    hk = hk_table(1000)
    # k = 1 is an exact identity at every M; for k >= 2 the truncation gap shrinks
    for k in (1, 2, 3, 4):
        gaps = []
        for M in (100, 1000):
            lhs = mpmath.fsum(int(hk[k, m]) * mpmath.mpf(m) ** -s for m in range(1, M + 1))
            rhs = (mpmath.fsum(mpmath.mpf(m) ** -s for m in range(1, M + 1)) - 1) ** k
            gaps.append(abs(lhs - rhs))
        if k == 1:
            assert max(gaps) < mpmath.mpf(10) ** -12
        else:
            assert 0 < gaps[1] < gaps[0]


def test_overflow_is_reported():
    with pytest.raises(CountOverflowError):
        _checked(2**64)
    assert _checked(2**64 - 1) == 2**64 - 1


# ---------------------------------------------------------------- partitions


def test_partitions_of_five_as_displayed():
    assert [p.parts for p in partitions(5)] == [(5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1)]
    assert [p.parts for p in partitions(1)] == [(1,)]
    assert len(partitions(10)) == 42


def test_partitions_against_sympy():
    for m in range(1, 31):
        ours = partitions(m)
        assert len(ours) == npartitions(m)
        theirs = {tuple(sorted((k for k, v in d.items() for _ in range(v)), reverse=True)) for d in sympy_partitions(m)}
        assert {p.parts for p in ours} == theirs
        assert all(p.total == m for p in ours)
    with pytest.raises(ValueError):
        partitions(61)


def test_multiplicities_and_arrangements():
    p = partitions(5)[3]
    assert p.parts == (3, 1, 1) and p.multiplicities == (1, 2) and p.arrangements == 3
    assert multinomial([2, 1, 1]) == 12


@pytest.mark.parametrize("A, k, expected", [(1, 3, 4), (2, 4, 54), (Fraction(1, 2), 1, Fraction(1, 2))])
def test_partition_multinomial_examples(A, k, expected):
    assert partition_multinomial_sum(A, k) == expected


@settings(max_examples=50, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=9), st.integers(1, 22))
def test_partition_multinomial_closed_form(A, k):
    assert partition_multinomial_sum(A, k) == A * (A + 1) ** (k - 1)


def test_arrangements_count_compositions():
    # sum of arrangements over partitions of k = number of compositions = 2^(k-1)
    for k in range(1, 25):
        assert sum(p.arrangements for p in partitions(k)) == 2 ** (k - 1)


# ---------------------------------------------------------------- factor sums


def test_factor_sum_examples():
    assert (d_min_k(12, 2), d_max_k(12, 2)) == (7, 8)
    for k in range(1, 12):
        assert d_min_k(2**k, k) == 2 * k
    assert d_min_k(6, 3) == math.inf and d_max_k(6, 3) == -math.inf


def test_factor_sum_bound_examples():
    assert d_min_lower_bound(12, 2) == pytest.approx(2 * math.sqrt(12))
    assert d_min_lower_bound(12, 2) <= 7
    assert d_max_upper_bound(12, 2) == 8
    assert d_min_lower_bound(1, 1) == 1 and d_max_upper_bound(1, 1) == 1 and e_log_bound(1) == 0


def test_factor_sum_bounds_small_range():
    for n in range(2, 400):
        for k in range(1, big_omega(n) + 1):
            lo, hi = d_min_k(n, k), d_max_k(n, k)
            assert dmin_bound_holds(n, k, lo) and klog_bound_holds(n, k) and dmax_bound_holds(n, k, hi)


def test_bound_predicates_detect_violations():
    assert not dmin_bound_holds(12, 2, 6)
    assert not dmax_bound_holds(12, 2, 9)
    assert dmin_bound_holds(12, 5, math.inf) and dmax_bound_holds(12, 5, -math.inf)
