"""
Dirichlet inverses, three ways
==============================

"""

from fractions import Fraction

from dirinv import (
    ArithmeticFunction,
    convolve,
    inverse_multiplicative,
    inverse_recursive,
    inverse_sum_formula,
    mobius,
)

# the constant function 1 has the Moebius function as its inverse
one = ArithmeticFunction(lambda n: 1, "one")
inv = inverse_recursive(one, 30)
print("1^-1(1..30):", [int(v) for v in inv])
print("mu(1..30):  ", [mobius(n) for n in range(1, 31)])

# a rational-valued f; the recursion and the signed factorization sum agree
f = ArithmeticFunction(lambda n: Fraction(1, n) if n % 3 else Fraction(-2, n), "f")
table = inverse_recursive(f, 60)
for n in (10, 30, 42):
    print(n, table[n], inverse_sum_formula(f, n))

# f * f^-1 is the identity: 1 at n = 1, zero elsewhere
g = table.as_function()
print("(f*f^-1)(1..12):", [int(convolve(f, g, n)) for n in range(1, 13)])

# multiplicative f only needs its values on prime powers
h = ArithmeticFunction(lambda n: n, "id")
print("id^-1(30) =", inverse_multiplicative(h, 30), " mu(30)*30 =", mobius(30) * 30)
