"""Replay of the induction over prefixes of a weight vector."""

from __future__ import annotations

import math
import time

import numpy as np

from ..bounds import C2, h1
from ..errors import DomainError
from ..gaussian import gauss_tail
from ..rademacher import ATOMS_MAX_N, Weights, exact_tail, normalize
from .report import CERTIFIED, REFUTED, VerificationReport

__all__ = ["verify_induction", "TIE_TOL", "CK_TOL"]

#: Sums within this distance of a threshold count as ties.
TIE_TOL = 1e-12
#: Tolerance on the Chapman-Kolmogorov residual (in probability).
CK_TOL = 1e-12


def _count_ge(sorted_sums, t):
    return sorted_sums.size - np.searchsorted(sorted_sums, t, side="left")


def verify_induction(w, grid):
    """Check the tail bounds and the Chapman-Kolmogorov step for every prefix.

    For ``m = 1..n`` let ``S_m`` be the sum of the first ``m`` weighted signs
    and ``sigma_m`` its standard deviation.  At every grid point the check
    asserts ``P(S_m >= sigma_m x) <= h1(x)`` and ``<= c2 Q(x)``, and replays
    ``P(S_m >= t) = P(S_{m-1} >= t - a_m)/2 + P(S_{m-1} >= t + a_m)/2`` at
    ``t = sigma_m x`` against direct enumeration of ``S_m``.

    A bound counts as violated only when it fails even with sums within
    ``TIE_TOL`` of the threshold left out; failures that need tied sums are
    reported in ``details["ties"]``, not as refutations.

    Parameters
    ----------
    w : Weights or array_like
        Normalized if needed.
    grid : array_like
        Points ``x``.

    Returns
    -------
    VerificationReport
        ``certified_sup`` is the largest ``tail - bound`` seen (with ties
        counted in the tail); ``witness`` is ``{m, x, lhs, rhs, check}``.
    """
    t0 = time.perf_counter()
    w = w if isinstance(w, Weights) else normalize(w)
    if w.n > ATOMS_MAX_N:
        raise DomainError(f"induction replay enumerates 2**n sums; n = {w.n} exceeds {ATOMS_MAX_N}")
    xs = np.asarray(grid, dtype=float).ravel()
    if xs.size == 0 or not np.all(np.isfinite(xs)):
        raise DomainError("grid must be non-empty and finite")
    h1x = np.atleast_1d(h1(xs))
    c2q = C2 * np.atleast_1d(gauss_tail(xs))
    bound = np.minimum(h1x, c2q)

    prev = np.zeros(1)
    sq = []
    sup = -math.inf
    ck_max = 0.0
    ties = 0
    checks = 0
    witness = None
    for m, a in enumerate(w.values, start=1):
        sq.append(a * a)
        sigma = math.sqrt(math.fsum(sq))
        cur = np.sort(np.concatenate((prev - a, prev + a)), kind="stable")
        t = sigma * xs
        total = float(cur.size)
        incl = _count_ge(cur, t - TIE_TOL) / total
        excl = _count_ge(cur, t + TIE_TOL) / total
        sup = max(sup, float(np.max(incl - bound)))
        checks += 2 * xs.size
        for name, rhs in (("h1", h1x), ("c2*Q", c2q)):
            hard = excl > rhs
            ties += int(np.count_nonzero((incl > rhs) & ~hard))
            if hard.any() and witness is None:
                i = int(np.argmax(hard))
                witness = {"m": m, "x": float(xs[i]), "lhs": float(excl[i]), "rhs": float(rhs[i]), "check": name}
        # Chapman-Kolmogorov: integer counts on both sides
        lhs = _count_ge(cur, t - TIE_TOL)
        rhs = _count_ge(prev, t - a - TIE_TOL) + _count_ge(prev, t + a - TIE_TOL)
        resid = float(np.max(np.abs(lhs - rhs))) / total
        ck_max = max(ck_max, resid)
        if resid > CK_TOL and witness is None:
            i = int(np.argmax(np.abs(lhs - rhs)))
            witness = {"m": m, "x": float(xs[i]), "lhs": float(lhs[i] / total),
                       "rhs": float(rhs[i] / total), "check": "chapman-kolmogorov"}
        prev = cur

    mitm = exact_tail(w, xs)
    direct = _count_ge(prev, xs) / float(prev.size)
    details = {
        "n": w.n,
        "grid_points": int(xs.size),
        "ties": ties,
        "ck_max_residual": ck_max,
        "mitm_max_diff": float(np.max(np.abs(np.atleast_1d(mitm) - direct))),
        "tie_tol": TIE_TOL,
    }
    return VerificationReport(
        region="induction",
        status=REFUTED if witness is not None else CERTIFIED,
        certified_sup=sup,
        boxes_processed=checks,
        max_depth=w.n,
        elapsed_ms=round((time.perf_counter() - t0) * 1000.0, 3),
        details=details,
        witness=witness,
    )
