"""
Growth exponents from zeta equations
====================================

"""

import numpy as np

from dirinv import ODD3, ZetaEquation, eta, h_table, rho, solve, zeta_real

# rho solves zeta(s) = 2; it controls how fast H(n) can grow
r = rho()
print("rho =", r.value, "enclosure", (r.lo, r.hi))
print("zeta(rho) =", zeta_real(r.value))

# odd factors only: (1 - 2^-s) zeta(s) = 2
print("eta =", eta().value)

# the ratio H(n) / n^rho stays well below 1
N = 10**5
n = np.arange(2, N + 1)
ratio = h_table(N)[2:] / n**r.value
print("max H(n)/n^rho up to 1e5:", ratio.max())
odd = np.arange(3, N + 1, 2)
print("max odd H(n)/n^eta:", (h_table(N, ODD3)[odd] / odd**eta().value).max())

# other equations behind the bounds: a constant C changes the target value
for C in ("1/2", "1", "2"):
    print("varsigma for C =", C, "->", solve(ZetaEquation.varsigma(C)).value)
print("finite set {2,3}, C=1 ->", solve(ZetaEquation.finite_set(3, 1)).value)
