"""Replay the prefix induction on random weight vectors and search small n."""

import numpy as np

from radgauss import constants, random_weights
from radgauss.verifier import search_worst_ratio, verify_induction

C = constants()
rng = np.random.default_rng(1)
grid = np.round(np.arange(-100, 501) * 0.01, 12)

bad = ties = 0
for _ in range(100):
    rep = verify_induction(random_weights(int(rng.integers(1, 17)), rng), grid)
    bad += not rep.certified
    ties += rep.details["ties"]
print(f"100 random vectors: {bad} violations, {ties} ties")

print("\n   n     x     best ratio   / c1")
for n, x in [(2, np.sqrt(2)), (4, np.sqrt(2)), (6, 1.5), (8, 2.0)]:
    w, r = search_worst_ratio(n, x, restarts=2)
    print(f"{n:4d}  {x:5.3f}  {r:10.6f}   {r / C.c1:.4f}")
