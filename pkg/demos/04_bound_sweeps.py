"""
Checking bounds on |f^-1(n)|
============================

"""

import io

from dirinv import BoundSpec, extremal_family, inverse_recursive, random_for_spec, reports_to_csv, verify_sweep
from dirinv.bounds import fit_exponential_constant, random_exp

# |f(n)| <= 1 gives |f^-1(n)| <= n^rho; the Hille function f = -1 is the worst case
spec = BoundSpec.parse("generalpoly:C=1,g=0")
res = verify_sweep(spec, extremal_family("hille"), (2, 5000))
print(res.summary_line())

# a random function under the same hypothesis sits far below the bound
res = verify_sweep(spec, random_for_spec(spec, 5000, seed=1), (2, 5000))
print(res.summary_line())

# multiplicative f(2^k) = -3 2^-k reaches the bound exactly on powers of two
spec = BoundSpec.parse("multpoly:C=3,g=-1")
res = verify_sweep(spec, extremal_family("mult2:C=3,g=-1"), [2**k for k in range(1, 13)])
buf = io.StringIO()
reports_to_csv(res, buf)
print(buf.getvalue())

# exponential growth |f(n)| <= 2^n; fit the empirical constant
N = 2000
inv = inverse_recursive(random_exp(1, 2, N, seed=0), N)
print("fitted A~:", fit_exponential_constant(inv, 2, range(2, N + 1)))
