"""Tail ratio P(S >= x) / Q(x) for equal weights against the bounds.

Prints the largest ratio for several ``n`` and where it occurs, then a
coarse table of h1, c2 Q and the classical bound.
"""

import numpy as np

from radgauss import constants, edelman_bound, gauss_tail, h1
from radgauss.rademacher import ratio_curve

C = constants()
xs = np.round(np.arange(1, 601) * 0.005, 12)

print(f"c1 = {C.c1:.6f}  c2 = {C.c2:.6f}  c3 = {C.c3:.6f}")
print("\n   n   sup ratio   at x")
for n in (2, 3, 5, 10, 30, 100, 1000):
    pts = ratio_curve(np.ones(n), xs)
    r = np.array([p.ratio for p in pts])
    i = int(np.argmax(r))
    print(f"{n:4d}   {r[i]:9.5f}   {xs[i]:.3f}")

print("\n    x      h1(x)   c2 Q(x)   classical")
for x in (0.5, 1.0, 1.2, np.sqrt(2), 1.6, np.sqrt(3), 2.0, 3.0):
    print(f"{x:6.3f}  {h1(x):8.5f}  {C.c2 * gauss_tail(x):8.5f}  {edelman_bound(x):9.5f}")
