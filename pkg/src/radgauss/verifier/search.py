"""Local search for weight vectors with a large tail ratio ``P(S >= x) / Q(x)``."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ..gaussian import gauss_tail
from ..rademacher import exact_tail, normalize, signed_sums

__all__ = ["search_worst_ratio", "SEARCH_MAX_N", "TIE_SLACK"]

SEARCH_MAX_N = 20
#: The tail is evaluated at ``x - TIE_SLACK`` so that a configuration placed
#: exactly on a tie keeps its atom despite rounding.
TIE_SLACK = 1e-12
_NEAREST = 24
_GRID = 17


def _ratio(w, x, qx):
    return exact_tail(normalize(w), x - TIE_SLACK) / qx


def _candidates(w, i, x):
    """Values of ``w[i]`` at which some signed sum reaches ``x * |w|``.

    With ``s`` a signed sum of the other weights and ``B**2`` their squared
    norm, ``s + t = x sqrt(B**2 + t**2)`` gives
    ``(1 - x**2) t**2 + 2 s t + s**2 - x**2 B**2 = 0``.
    """
    others = np.delete(w, i)
    b2 = float(others @ others)
    if others.size == 0:
        return np.array([1.0])
    sums = np.unique(signed_sums(others))
    target = x * np.sqrt(b2 + w[i] ** 2) - w[i]
    near = sums[np.argsort(np.abs(sums - target), kind="stable")[:_NEAREST]]
    alpha = 1.0 - x * x
    beta = 2.0 * near
    gamma = near * near - x * x * b2
    with np.errstate(invalid="ignore", divide="ignore"):
        if abs(alpha) < 1e-14:
            roots = -gamma / beta
        else:
            disc = np.sqrt(beta * beta - 4.0 * alpha * gamma)
            roots = np.concatenate(((-beta + disc) / (2 * alpha), (-beta - disc) / (2 * alpha)))
    scale = np.sqrt(b2) if b2 > 0 else 1.0
    grid = np.linspace(0.0, 2.0 * scale, _GRID)
    cand = np.concatenate((roots, grid))
    cand = cand[np.isfinite(cand) & (cand >= 0) & (cand <= 10.0 * scale)]
    cand = np.unique(np.concatenate((cand, cand * (1 + 1e-9))))
    if b2 == 0:
        cand = cand[cand > 0]
    return cand


def _ascend(w, x, qx, max_sweeps):
    best = _ratio(w, x, qx)
    for _ in range(max_sweeps):
        improved = False
        for i in range(w.size):
            for t in _candidates(w, i, x):
                trial = w.copy()
                trial[i] = t
                if not np.any(trial > 0):
                    continue
                r = _ratio(trial, x, qx)
                if r > best:
                    best, w, improved = r, trial, True
        if not improved:
            break
    return normalize(w).values.copy(), best


def search_worst_ratio(n, x, restarts=4, seed=0, max_sweeps=10):
    """Coordinate ascent for ``max_w P(S_w >= x) / Q(x)`` over unit weight vectors.

    The starts are the ``n`` vectors with ``k`` equal leading weights and
    zeros elsewhere (``k = 1..n``), then ``restarts`` seeded random vectors.
    Each coordinate move tries the values where a signed sum crosses the
    threshold (the only places the tail can change) plus a coarse grid, and
    keeps strict improvements.

    Returns
    -------
    (Weights, float)
        Best vector found and its ratio.
    """
    n = int(n)
    if not (1 <= n <= SEARCH_MAX_N):
        raise DomainError(f"n must lie in [1, {SEARCH_MAX_N}]")
    if not np.isfinite(x):
        raise DomainError("x must be finite")
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    qx = gauss_tail(float(x))
    rng = np.random.default_rng(seed)
    best_w, best_r = None, -np.inf
    starts = [np.r_[np.ones(k), np.zeros(n - k)] for k in range(n, 0, -1)]
    starts += [np.abs(rng.standard_normal(n)) + 1e-3 for _ in range(restarts)]
    for start in starts:
        w, r = _ascend(normalize(start).values.copy(), float(x), qx, max_sweeps)
        if r > best_r:
            best_w, best_r = w, r
    return normalize(best_w), float(best_r)
