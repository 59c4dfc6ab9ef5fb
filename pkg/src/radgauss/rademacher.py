"""Tail probabilities of weighted Rademacher sums ``S = sum a_i eps_i``.

Exact tails come from enumerating signed partial sums (meet in the middle for
``n <= 40``); equal weights have a closed binomial form; anything larger falls
back to seeded Monte Carlo.  Self-normalized sums ``sum X_i / sqrt(sum X_i**2)``
are simulated for a few orthant-symmetric families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import BudgetError, DomainError
from .gaussian import gauss_tail

__all__ = [
    "AtomDistribution",
    "RatioPoint",
    "TailEstimate",
    "Weights",
    "atom_distribution",
    "equal_weights_tail",
    "exact_tail",
    "mc_tail",
    "normalize",
    "random_weights",
    "ratio_curve",
    "selfnorm_mc_tail",
    "signed_sums",
]

MITM_MAX_N = 40
ATOMS_MAX_N = 26
ATOM_TOL = 1e-12
NORM_TOL = 1e-12


@dataclass(frozen=True)
class Weights:
    """Canonical coefficient vector: non-negative, sorted descending, unit norm.

    Build with :func:`normalize`; the constructor only validates.
    """

    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size == 0:
            raise DomainError("weights must be non-empty")
        if not np.all(np.isfinite(vals)):
            raise DomainError("weights must be finite")
        if np.any(vals < 0) or np.any(np.diff(vals) > 0):
            raise DomainError("weights must be non-negative and sorted descending; use normalize()")
        if abs(math.fsum(vals * vals) - 1.0) > NORM_TOL:
            raise DomainError("weights must have unit Euclidean norm; use normalize()")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return self.values.size

    def __len__(self):
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())

    def __eq__(self, other):
        return isinstance(other, Weights) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    @property
    def is_equal(self):
        """True when all weights coincide."""
        return bool(np.all(self.values == self.values[0]))


def normalize(values):
    """Canonical unit-norm form of a coefficient vector.

    Signs are dropped and entries sorted in decreasing order; neither changes
    the law of the sum.  Each entry is ``sqrt(v_i**2 / sum v**2)`` so that,
    e.g., two equal weights give ``a`` with ``2a == sqrt(2.0)`` exactly.

    Raises
    ------
    DomainError
        If all entries are zero or some entry is not finite.
    """
    vals = np.abs(np.asarray(values, dtype=float).ravel())
    if vals.size == 0 or not np.all(np.isfinite(vals)):
        raise DomainError("weights must be finite and non-empty")
    scale = vals.max()
    if scale == 0:
        raise DomainError("weights must not all be zero")
    vals = vals / scale
    sq = vals * vals
    a = np.sqrt(sq / math.fsum(sq))
    return Weights(np.sort(a)[::-1])


def random_weights(n, rng):
    """Gaussian entries, absolute values, normalized."""
    return normalize(np.abs(rng.standard_normal(n)) + 0.0)


def signed_sums(a):
    """All ``2**n`` values of ``sum a_i eps_i`` (as doubles, by repeated doubling)."""
    sums = np.zeros(1)
    for w in np.asarray(a, dtype=float):
        sums = np.concatenate((sums + w, sums - w))
    return sums


def _as_weights(w):
    return w if isinstance(w, Weights) else normalize(w)


def _count_pairs(left, right_sorted, x, strict):
    # number of pairs with fl(l + r) >= x (or > x); fl(l + r) is monotone in r
    side = "right" if strict else "left"
    idx = np.searchsorted(right_sorted, x - left, side=side)
    m = right_sorted.size
    ok = (lambda s: s > x) if strict else (lambda s: s >= x)
    while True:
        # step down while the previous partner still qualifies
        prev = np.clip(idx - 1, 0, m - 1)
        down = (idx > 0) & ok(left + right_sorted[prev])
        # step up while the current partner fails
        cur = np.clip(idx, 0, m - 1)
        up = (idx < m) & ~ok(left + right_sorted[cur])
        if not (down.any() or up.any()):
            break
        idx = idx - down + up
    return (m - idx).sum(axis=-1)


def exact_tail(w, x, strict=False):
    """``P(S >= x)`` (or ``P(S > x)`` with ``strict``) by meet in the middle.

    The weights are split into two halves, all signed partial sums of each
    half are listed, one list is sorted, and pairs are counted by binary
    search.  Atom comparisons use the double-precision sums as computed.

    Parameters
    ----------
    w : Weights or array_like
        Coefficients; normalized if not already a :class:`Weights`.
    x : float or array_like
    strict : bool

    Raises
    ------
    BudgetError
        If ``n > 40``; use :func:`mc_tail` instead.
    """
    w = _as_weights(w)
    if w.n > MITM_MAX_N:
        raise BudgetError(f"exact_tail enumerates 2**(n/2) sums; n = {w.n} exceeds {MITM_MAX_N}, use mc_tail")
    xs = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xs)):
        raise DomainError("x must be finite")
    k = w.n // 2
    left = signed_sums(w.values[:k])
    right = np.sort(signed_sums(w.values[k:]))
    flat = xs.ravel()
    counts = np.empty(flat.size, dtype=np.int64)
    chunk = max(1, (1 << 22) // left.size)
    for s in range(0, flat.size, chunk):
        xc = flat[s:s + chunk, None]
        counts[s:s + chunk] = _count_pairs(left[None, :], right, xc, strict)
    probs = counts / float(2 ** w.n)
    return float(probs[0]) if xs.ndim == 0 else probs.reshape(xs.shape)


@dataclass(frozen=True)
class AtomDistribution:
    """The law of ``S`` as atoms (strictly increasing locations, masses)."""

    locations: np.ndarray
    masses: np.ndarray

    def tail(self, x, strict=False):
        """Total mass at locations ``>= x`` (``> x`` if strict)."""
        side = "right" if strict else "left"
        idx = np.searchsorted(self.locations, x, side=side)
        suffix = np.concatenate((np.cumsum(self.masses[::-1])[::-1], [0.0]))
        out = suffix[idx]
        return float(out) if np.ndim(x) == 0 else out

    def __len__(self):
        return self.locations.size

    def items(self):
        return list(zip(self.locations.tolist(), self.masses.tolist()))


def atom_distribution(w, tol=ATOM_TOL):
    """Enumerate all ``2**n`` sums and merge those within ``tol`` of a neighbour.

    Each merged atom sits at the midpoint of its cluster, which keeps the
    distribution exactly symmetric.  Adversarial near-coincident weights can
    be mis-merged.
    """
    w = _as_weights(w)
    if w.n > ATOMS_MAX_N:
        raise BudgetError(f"atom_distribution is limited to n <= {ATOMS_MAX_N}")
    sums = np.sort(signed_sums(w.values))
    breaks = np.flatnonzero(np.diff(sums) > tol) + 1
    starts = np.concatenate(([0], breaks))
    ends = np.concatenate((breaks, [sums.size]))
    loc = 0.5 * (sums[starts] + sums[ends - 1])
    mass = (ends - starts) / float(sums.size)
    return AtomDistribution(loc, mass)


@lru_cache(maxsize=64)
def _binomial_suffix(n):
    # suffix[k] = sum_{j >= k} C(n, j), exact integers
    suffix = [0] * (n + 2)
    for k in range(n, -1, -1):
        suffix[k] = suffix[k + 1] + math.comb(n, k)
    return tuple(suffix)


def _equal_tail_one(n, x, step, suffix, strict):
    fx = Fraction(x)
    fstep = Fraction(step)

    def ok(k):
        val = (2 * k - n) * fstep
        return val > fx if strict else val >= fx

    k = math.ceil((n + x / step) / 2) if step > 0 else 0
    k = min(max(k, 0), n + 1)
    while k > 0 and ok(k - 1):
        k -= 1
    while k <= n and not ok(k):
        k += 1
    return suffix[k] / 2 ** n


def equal_weights_tail(n, x, strict=False):
    """``P(S >= x)`` for ``n`` equal weights, from exact binomial sums.

    The atoms are ``(2k - n) w`` with ``w = sqrt(1/n)`` as a double, and the
    comparison with ``x`` is done in exact rational arithmetic; ``n = 2``
    therefore puts an atom exactly at ``sqrt(2.0)``.
    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    xs = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xs)):
        raise DomainError("x must be finite")
    step = math.sqrt(1.0 / n)
    suffix = _binomial_suffix(n)
    out = np.array([_equal_tail_one(n, float(t), step, suffix, strict) for t in xs.ravel()])
    return float(out[0]) if xs.ndim == 0 else out.reshape(xs.shape)


class RatioPoint(NamedTuple):
    x: float
    tail: float
    gauss_tail: float
    ratio: float


def ratio_curve(w, grid):
    """``P(S >= x) / Q(x)`` over a grid.

    Equal weights use :func:`equal_weights_tail` (any ``n``); otherwise
    :func:`exact_tail`, which may raise :class:`BudgetError`.

    Returns
    -------
    list of RatioPoint
    """
    w = _as_weights(w)
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0 or not np.all(np.isfinite(grid)):
        raise DomainError("grid must be non-empty and finite")
    q = gauss_tail(grid)
    if np.any(q <= 0):
        raise DomainError("gaussian tail underflows on the grid")
    tails = equal_weights_tail(w.n, grid) if w.is_equal else exact_tail(w, grid)
    tails = np.atleast_1d(tails)
    return [RatioPoint(float(x), float(t), float(g), float(t / g)) for x, t, g in zip(grid, tails, q)]


@dataclass(frozen=True)
class TailEstimate:
    """A Monte Carlo proportion with its binomial standard error."""

    estimate: float
    std_error: float
    samples: int
    seed: int
    hits: int = field(default=0, compare=False)

    @classmethod
    def from_counts(cls, hits, samples, seed):
        p = hits / samples
        return cls(p, math.sqrt(p * (1.0 - p) / samples), int(samples), int(seed), int(hits))


def _block_rng(seed, block):
    # counter-based stream per block: reproducible and independent of sharding
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)).jumped(block))


def _blocks(samples, n):
    rows = max(1, min(samples, (1 << 21) // max(n, 1)))
    for b, start in enumerate(range(0, samples, rows)):
        yield b, min(rows, samples - start)


def mc_tail(w, x, samples, seed=0):
    """Monte Carlo estimate of ``P(S >= x)``; deterministic for a fixed seed."""
    w = _as_weights(w)
    samples = int(samples)
    if samples < 1:
        raise DomainError("samples must be >= 1")
    hits = 0
    for b, rows in _blocks(samples, w.n):
        rng = _block_rng(seed, b)
        eps = rng.integers(0, 2, size=(rows, w.n), dtype=np.int8) * 2 - 1
        s = eps @ w.values
        hits += int(np.count_nonzero(s >= x))
    return TailEstimate.from_counts(hits, samples, seed)


_FAMILIES = {
    "two-point": "two-point",
    "symmetric-two-point": "two-point",
    "uniform": "uniform",
    "symmetric-uniform": "uniform",
    "gaussian": "gaussian",
    "centered-gaussian": "gaussian",
}


def _family_scales(family, params, n):
    params = np.asarray(params if params is not None else [], dtype=float).ravel()
    if not np.all(np.isfinite(params)) or np.any(params < 0):
        raise DomainError("family parameters must be finite and non-negative")
    if family == "two-point":
        if params.size != n:
            raise DomainError("two-point family needs one scale per index")
        if not np.any(params > 0):
            raise DomainError("two-point scales must not all be zero")
        return params
    if params.size == 0:
        return np.ones(n)
    if params.size == 1:
        return np.full(n, params[0])
    if params.size != n:
        raise DomainError("scales must have length 1 or n")
    return params


def _draw(family, scales, rng, rows):
    n = scales.size
    if family == "uniform":
        z = rng.uniform(-1.0, 1.0, size=(rows, n))
    else:
        z = rng.standard_normal((rows, n))
    return z * scales


def selfnorm_mc_tail(family, params, n, x, samples, seed=0):
    """Monte Carlo estimate of ``P(V >= x)``, ``V = sum X_i / sqrt(sum X_i**2)``.

    Parameters
    ----------
    family : str
        ``"symmetric-two-point"`` (``X_i = s_i eps_i``, ``params`` = the ``n``
        scales), ``"symmetric-uniform"`` (``s_i U(-1, 1)``) or
        ``"centered-gaussian"`` (``s_i N(0, 1)``); for the last two ``params``
        holds one common scale or ``n`` scales and may be empty.
    params : sequence of float
    n, samples, seed : int
    x : float

    Rows with every ``X_i = 0`` are discarded and redrawn.
    """
    key = _FAMILIES.get(str(family).lower())
    if key is None:
        raise DomainError(f"unknown family {family!r}; choose from {sorted(set(_FAMILIES))}")
    n = int(n)
    samples = int(samples)
    if n < 1 or samples < 1:
        raise DomainError("n and samples must be >= 1")
    scales = _family_scales(key, params, n)
    if not np.any(scales > 0):
        raise DomainError("scales must not all be zero")
    # for two-point laws V is exactly a Rademacher sum with normalized weights
    a = normalize(scales).values if key == "two-point" else None
    hits = 0
    for b, rows in _blocks(samples, n):
        rng = _block_rng(seed, b)
        if a is not None:
            eps = rng.integers(0, 2, size=(rows, n), dtype=np.int8) * 2.0 - 1.0
            hits += int(np.count_nonzero(eps @ a >= x))
            continue
        X = _draw(key, scales, rng, rows)
        ss = np.einsum("ij,ij->i", X, X)
        while True:
            bad = ss == 0
            if not bad.any():
                break
            X[bad] = _draw(key, scales, rng, int(bad.sum()))
            ss = np.einsum("ij,ij->i", X, X)
        V = X.sum(axis=1) / np.sqrt(ss)
        hits += int(np.count_nonzero(V >= x))
    return TailEstimate.from_counts(hits, samples, seed)
