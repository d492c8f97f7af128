"""Joint spectrum of a commuting pair concentrates on a subtorus.

For the pair T1(x, y) = (x + alpha, y + x), T2(x, y) = (x, y + beta), the
observable e(y) has joint spectral measure carried by the line n1 = 0: the
T1-direction contributes only through the common rotation factor.
"""

import numpy as np

from nillab.catalog import catalog_build
from nillab.spectral import Observable, joint_autocorrelation, subtorus_support_test

sys = catalog_build("z2_skew")
f = Observable.character(2, (0, 1))
series = joint_autocorrelation(sys, f, (8, 8), 1 << 14, seed=4)

print("|c(n1, n2)| on the grid (rows n1 = -8..8, cols n2 = -8..8):")
K = 8
for n1 in range(-K, K + 1):
    row = " ".join(
        "%.2f" % abs(series.value(n1, n2)) for n2 in range(-K, K + 1)
    )
    print(("n1=%+d  " % n1) + row)

print()
print("support on {n1 = 0}: %s" % subtorus_support_test(series, (1, 0)))
print("support on {n2 = 0}: %s" % subtorus_support_test(series, (0, 1)))
