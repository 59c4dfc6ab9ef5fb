"""Comparison functions for the Rademacher tail.

``g`` and ``h`` are Gaussian-tail majorants, ``h1`` is the five-branch
piecewise majorant used for the induction, and ``K`` measures how much the
one-step recursion can overshoot ``h1``:

    K(a, x) = h1(u) + h1(v) - 2 h1(x),   u, v = (x -+ a) / sqrt(1 - a**2).

Every point function has an interval counterpart (suffix ``_interval``)
returning a certified enclosure over an input interval.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SplitRequired
from .gaussian import constants, gauss_tail, gauss_tail_interval, phi, phi_interval
from .interval import Interval, _squeeze, as_interval, pad_down, pad_up

__all__ = [
    "Branch",
    "H1",
    "KQuery",
    "PiecewiseBound",
    "K",
    "K_interval",
    "edelman_bound",
    "g",
    "h",
    "h1",
    "h1_branch",
    "u",
    "v",
]

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)

_C = constants()
C1 = _C.c1
C2 = _C.c2

# Enclosures of the irrational constants.  The doubles sqrt(2) and sqrt(3)
# are within half an ulp of the true values, so one ulp each side suffices.
SQRT2_I = Interval.around(SQRT2, 1)
SQRT3_I = Interval.around(SQRT3, 1)
C1_I = (4.0 * gauss_tail_interval(SQRT2_I)).reciprocal()
_R3_I = phi_interval(SQRT3_I) / gauss_tail_interval(SQRT3_I)
C2_I = C1_I * (1.0 + (1.0 + _R3_I) / 250.0)
C1_250_I = C1_I / 250.0


# -- point functions --------------------------------------------------------


def _arr(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _out_shape(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def g(x):
    """``(c1/250) (251 Q(x) + phi(x))``, the Gaussian-type branch of ``h1``."""
    arr = _arr(x)
    return _out(C1 / 250.0 * (251.0 * gauss_tail(arr) + phi(arr)), x)


def h(x):
    """``c2 Q(x)``, the scaled Gaussian tail."""
    arr = _arr(x)
    return _out(C2 * gauss_tail(arr), x)


class Branch(str, enum.Enum):
    """Which piece of ``h1`` applies."""

    ONE = "one"
    HALF = "half"
    CHEBYSHEV = "chebyshev"
    G = "g"
    H = "h"


@dataclass(frozen=True)
class BranchPiece:
    """One branch of a piecewise function on ``[left, right]``.

    ``closed_left`` / ``closed_right`` say whether the endpoint itself is
    assigned to this branch.
    """

    tag: Branch
    left: float
    right: float
    closed_left: bool
    closed_right: bool
    formula: str

    def contains(self, x):
        above = x >= self.left if self.closed_left else x > self.left
        below = x <= self.right if self.closed_right else x < self.right
        return above & below


class PiecewiseBound:
    """The majorant ``h1``.

    ========================  ===============
    range                     value
    ========================  ===============
    ``x <= 0``                ``1``
    ``0 < x <= 1``            ``1/2``
    ``1 <= x < sqrt 2``       ``1/(2 x**2)``
    ``sqrt 2 <= x <= sqrt 3`` ``g(x)``
    ``x >= sqrt 3``           ``h(x)``
    ========================  ===============

    At each breakpoint the larger one-sided limit is taken, so the function is
    upper semicontinuous.  The doubles ``sqrt(2)`` and ``sqrt(3)`` stand for
    the breakpoints themselves.
    """

    breakpoints = (0.0, 1.0, SQRT2, SQRT3)
    branches = (
        BranchPiece(Branch.ONE, -math.inf, 0.0, False, True, "1"),
        BranchPiece(Branch.HALF, 0.0, 1.0, False, True, "1/2"),
        BranchPiece(Branch.CHEBYSHEV, 1.0, SQRT2, False, False, "1/(2x^2)"),
        BranchPiece(Branch.G, SQRT2, SQRT3, True, True, "g(x)"),
        BranchPiece(Branch.H, SQRT3, math.inf, False, False, "h(x)"),
    )

    def branch_index(self, x):
        arr = _arr(x)
        idx = np.full(arr.shape, 4, dtype=int)
        for i in (3, 2, 1, 0):
            idx = np.where(self.branches[i].contains(arr), i, idx)
        return idx

    def branch(self, x):
        idx = self.branch_index(x)
        if np.ndim(idx) == 0:
            return self.branches[int(idx)].tag
        return np.array([b.tag for b in self.branches], dtype=object)[idx]

    def __call__(self, x):
        arr = _arr(x)
        idx = self.branch_index(arr)
        with np.errstate(divide="ignore"):
            cheb = 0.5 / (arr * arr)
        vals = np.choose(idx, [np.ones_like(arr), np.full_like(arr, 0.5), cheb, g(arr), h(arr)])
        return _out(vals, x)


H1 = PiecewiseBound()


def h1(x):
    """Evaluate the piecewise majorant; see :class:`PiecewiseBound`."""
    return H1(x)


def h1_branch(x):
    """Branch tag (:class:`Branch`) of ``h1`` applying at ``x``."""
    return H1.branch(x)


def _check_a(a):
    arr = _arr(a)
    if np.any(arr < 0) or np.any(arr >= 1):
        raise DomainError("a must lie in [0, 1); use K for the a = 1 extension")
    return arr


def u(a, x):
    """``(x - a) / sqrt(1 - a**2)`` for ``0 <= a < 1``."""
    a_ = _check_a(a)
    x_ = _arr(x)
    return _out_shape((x_ - a_) / np.sqrt((1.0 - a_) * (1.0 + a_)))


def v(a, x):
    """``(x + a) / sqrt(1 - a**2)`` for ``0 <= a < 1``."""
    a_ = _check_a(a)
    x_ = _arr(x)
    return _out_shape((x_ + a_) / np.sqrt((1.0 - a_) * (1.0 + a_)))


@dataclass(frozen=True)
class KQuery:
    """A point ``(a, x)`` at which to evaluate :func:`K`."""

    a: float
    x: float

    def __post_init__(self):
        if not (0.0 <= self.a <= 1.0):
            raise DomainError(f"a = {self.a!r} outside [0, 1]")
        if not math.isfinite(self.x):
            raise DomainError("x must be finite")


def K(q, x=None):
    """Overshoot ``h1(u) + h1(v) - 2 h1(x)``, extended by ``-2 g(x)`` at ``a = 1``.

    Parameters
    ----------
    q : KQuery or float or array_like
        Either a :class:`KQuery` or the ``a`` coordinate(s), in which case
        ``x`` must be given too.
    x : float or array_like, optional
    """
    if isinstance(q, KQuery):
        a_, x_ = np.asarray(q.a, dtype=float), np.asarray(q.x, dtype=float)
        like = 0.0
    else:
        a_, x_ = np.broadcast_arrays(_arr(q), _arr(x))
        like = a_
        if np.any(a_ < 0) or np.any(a_ > 1):
            raise DomainError("a must lie in [0, 1]")
    edge = a_ >= 1.0
    a_in = np.where(edge, 0.0, a_)
    s = np.sqrt((1.0 - a_in) * (1.0 + a_in))
    uu = (x_ - a_in) / s
    vv = (x_ + a_in) / s
    val = H1(uu) + H1(vv) - 2.0 * H1(x_)
    val = np.where(edge, -2.0 * g(x_), val)
    return _out(val, like)


def edelman_bound(x):
    """``Q(x - ln(c3)/x)``, the classical comparison bound, for ``x > 0``."""
    arr = _arr(x)
    if np.any(arr <= 0):
        raise DomainError("edelman_bound requires x > 0")
    return _out(gauss_tail(arr - math.log(_C.c3) / arr), x)


# -- interval enclosures ----------------------------------------------------


def g_interval(y):
    """Enclosure of ``g`` over ``y`` (``g`` is decreasing for ``y > -251``)."""
    y = as_interval(y)
    return C1_250_I * (251.0 * gauss_tail_interval(y) + phi_interval(y))


def h_interval(y):
    """Enclosure of ``h`` over ``y``."""
    return C2_I * gauss_tail_interval(as_interval(y))


def chebyshev_interval(y):
    """Enclosure of ``1/(2 y**2)`` over ``y``, ``y > 0``."""
    y = as_interval(y)
    return 0.5 * y.sqr().reciprocal()


def _select(mask, a, b):
    return Interval._make(_squeeze(np.where(mask, a.lo, b.lo)), _squeeze(np.where(mask, a.hi, b.hi)))


def upper_branch_interval(y):
    """Enclosure of ``h1`` over ``y`` known to lie in ``[sqrt 2, inf)``.

    On that range ``h1`` is ``g`` up to ``sqrt 3`` and ``h`` beyond; both are
    decreasing, so a straddled ``sqrt 3`` takes the hull of the two pieces.
    """
    y = as_interval(y)
    gi = g_interval(y)
    hi_ = h_interval(y)
    below = y.hi <= SQRT3_I.lo
    above = y.lo >= SQRT3_I.hi
    # straddling: sup from g at y.lo (g(y.lo) >= g(sqrt3) = h(sqrt3) >= h), inf from h at y.hi
    mix = Interval._make(_squeeze(np.minimum(gi.lo, hi_.lo)), _squeeze(np.maximum(gi.hi, hi_.hi)))
    return _select(below, gi, _select(above, hi_, mix))


def lower_branch_interval(y):
    """Enclosure of ``h1`` over ``y`` known to lie in ``(0, sqrt 2)``.

    There ``h1 = min(1/2, 1/(2 y**2))``, which is non-increasing.
    """
    y = as_interval(y)
    ch = chebyshev_interval(y)
    return Interval._make(_squeeze(np.minimum(0.5, ch.lo)), _squeeze(np.minimum(0.5, ch.hi)))


def u_point(a, x):
    """Enclosure of ``u(a, x)`` at exact float points (arrays allowed; ``a = 1`` gives inf)."""
    A = Interval._make(a, a)
    X = Interval._make(x, x)
    return (X - A) * ((1.0 - A) * (1.0 + A)).sqrt().reciprocal()


def v_point(a, x):
    """Enclosure of ``v(a, x)`` at exact float points."""
    A = Interval._make(a, a)
    X = Interval._make(x, x)
    return (X + A) * ((1.0 - A) * (1.0 + A)).sqrt().reciprocal()


def u_range(a, x):
    """Enclosure of ``u`` over the box ``a x x`` (``x.lo > 1``).

    ``u`` increases in ``x``.  In ``a`` it decreases up to ``a = 1/x`` and
    increases after, with minimum value ``sqrt(x**2 - 1)``.
    """
    a, x = as_interval(a), as_interval(x)
    alo, ahi, xlo, xhi = a.lo, a.hi, x.lo, x.hi
    crit = 1.0 / xlo
    crit_lo, crit_hi = pad_down(crit), pad_up(crit)
    at_lo = u_point(alo, xlo).lo
    at_hi = u_point(ahi, xlo).lo
    floor = (Interval._make(xlo, xlo).sqr() - 1.0).sqrt().lo
    low = np.where(ahi < crit_lo, at_hi, np.where(alo > crit_hi, at_lo, floor))
    high = np.maximum(u_point(alo, xhi).hi, u_point(ahi, xhi).hi)
    return Interval._make(_squeeze(low), _squeeze(high))


def v_range(a, x):
    """Enclosure of ``v`` over a box; ``v`` increases in both arguments."""
    a, x = as_interval(a), as_interval(x)
    return Interval._make(_squeeze(np.maximum(v_point(a.lo, x.lo).lo, x.lo)), v_point(a.hi, x.hi).hi)


_X_DOMAIN = (SQRT2_I.lo, SQRT3_I.hi)


def _check_box(a, x):
    a, x = as_interval(a), as_interval(x)
    if np.any(a.lo < 0) or np.any(a.hi >= 1):
        raise DomainError("a-interval must lie in [0, 1)")
    if np.any(x.lo < _X_DOMAIN[0]) or np.any(x.hi > _X_DOMAIN[1]):
        raise DomainError("x-interval must lie in [sqrt 2, sqrt 3]")
    return a, x


def _straddles_sqrt2(U):
    return ~(U.hi < SQRT2_I.lo) & ~(U.lo >= SQRT2_I.hi)


def h1_interval_upper_domain(U):
    """Enclosure of ``h1`` over ``U`` with ``U.lo > 0``, any position relative to ``sqrt 2``.

    A straddled ``sqrt 2`` gives the hull of both sides.
    """
    U = as_interval(U)
    lower = lower_branch_interval(U)
    upper = upper_branch_interval(U)
    left = U.hi < SQRT2_I.lo
    right = U.lo >= SQRT2_I.hi
    hull = Interval._make(_squeeze(np.minimum(lower.lo, upper.lo)), _squeeze(np.maximum(lower.hi, upper.hi)))
    return _select(left, lower, _select(right, upper, hull))


def K_interval(a, x, allow_straddle=False):
    """Enclosure of ``K`` over the box ``a x x`` inside ``[0, 1) x [sqrt 2, sqrt 3]``.

    On this box ``v >= x >= sqrt 2``, so ``h1(v)`` uses the upper branches;
    ``h1(x) = g(x)``.  The branch of ``h1(u)`` must be fixed over the box
    unless ``allow_straddle`` is set, in which case the (loose) hull of both
    sides of the jump at ``sqrt 2`` is used.

    Raises
    ------
    DomainError
        If the box leaves ``[0, 1) x [sqrt 2, sqrt 3]``.
    SplitRequired
        If the image of ``u`` may contain ``sqrt 2``, where ``h1`` jumps.
    """
    a, x = _check_box(a, x)
    U = u_range(a, x)
    if not allow_straddle and np.any(_straddles_sqrt2(U)):
        raise SplitRequired("u-image straddles sqrt(2); split the box", variable="u")
    V = v_range(a, x)
    return h1_interval_upper_domain(U) + upper_branch_interval(V) - 2.0 * g_interval(x)
