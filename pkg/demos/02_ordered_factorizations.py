"""
Counting ordered factorizations
===============================

"""

import numpy as np

from dirinv import ODD3, FactorSet, H, H_k, enumerate_ordered_factorizations, h_table, hk_table

# every way to write 12 as an ordered product of factors >= 2
for t in enumerate_ordered_factorizations(12):
    print(" * ".join(map(str, t)))
print("H(12) =", H(12))

# restricting the factors: odd ones only, or an explicit list
print("H(45) over odd factors:", H(45, ODD3))
print("H(30) over {2,3,5}:", H(30, FactorSet.explicit([2, 3, 5])))

# tables are int64 arrays indexed by n
h = h_table(10**5)
print("largest H(n) up to 1e5:", h.max(), "at n =", int(np.argmax(h)))

# split by the number of factors; the layers add back up to H
hk = hk_table(1000)
print("H_k(720) for k = 1..8:", [int(x) for x in hk[1:9, 720]], "sum", int(hk[:, 720].sum()), "=", H(720))
print("H_2(12) =", H_k(12, 2))
