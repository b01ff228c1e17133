"""Deliberately naive reference implementations used only by the tests."""

from fractions import Fraction


def brute_factorizations(n, allowed=lambda d: d >= 2):
    """Every ordered factorization of n by trial division over 2..n."""
    if n == 1:
        return [()]
    out = []
    for d in range(2, n + 1):
        if n % d == 0 and allowed(d):
            out.extend((d,) + t for t in brute_factorizations(n // d, allowed))
    return out


def frac(x):
    """Plain Fraction with Python int parts (gmpy2 values converted)."""
    return Fraction(int(x.numerator), int(x.denominator))


def naive_inverse(f, N):
    """f^-1 on 1..N with Fractions and a full divisor scan."""
    g = [Fraction(0), Fraction(1)]
    for n in range(2, N + 1):
        g.append(-sum(frac(f(n // d)) * g[d] for d in range(1, n) if n % d == 0))
    return g


def naive_mobius(n):
    k, p = 0, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            k += 1
        p += 1
    if n > 1:
        k += 1
    return (-1) ** k
