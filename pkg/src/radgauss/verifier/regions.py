"""The sixteen pieces of the closed rectangle ``[0, 1] x [sqrt 2, sqrt 3]``.

Interior pieces are cut out by the signs of ``u - sqrt 2`` and ``v - sqrt 3``
(plus the splits ``x = x_*`` and ``a = 1/sqrt 3``); the curves ``u = sqrt 2``
and ``v = sqrt 3`` and the four sides are pieces of their own.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ..bounds import SQRT2, SQRT2_I, SQRT3, SQRT3_I, g, h, u, v
from ..errors import DomainError
from ..gaussian import constants
from ..interval import Interval, _squeeze

__all__ = [
    "RegionGeometry",
    "RegionId",
    "boundary_u",
    "boundary_u_lower_root",
    "boundary_u_upper_root",
    "boundary_v_root",
    "edge_k",
    "region_of",
]

X_STAR = constants().x_star
INV_SQRT3 = 1.0 / SQRT3
INV_SQRT2 = 1.0 / SQRT2
TWO_SQRT2_3 = 2.0 * SQRT2 / 3.0

XSTAR_I = Interval.around(X_STAR, 4)
INV_SQRT3_I = Interval.around(INV_SQRT3, 2)
INV_SQRT2_I = Interval.around(INV_SQRT2, 2)
TWO_SQRT2_3_I = Interval.around(TWO_SQRT2_3, 2)

EQ_TOL = 1e-12


class RegionId(str, enum.Enum):
    LLe = "LLe"
    LG = "LG"
    GL1 = "GL1"
    GL2 = "GL2"
    GG1 = "GG1"
    GG2 = "GG2"
    GE = "GE"
    ELe = "ELe"
    EG1 = "EG1"
    EG2 = "EG2"
    A1 = "A1"
    A2 = "A2"
    X11 = "X11"
    X12 = "X12"
    X13 = "X13"
    X2 = "X2"

    @classmethod
    def parse(cls, tag):
        if isinstance(tag, cls):
            return tag
        for r in cls:
            if r.value.lower() == str(tag).lower():
                return r
        raise DomainError(f"unknown region {tag!r}")


# -- boundary curves --------------------------------------------------------


def _radicand(x, c, k):
    return np.maximum(c - k * np.asarray(x, dtype=float) ** 2, 0.0)


def boundary_u(x):
    """Both roots in ``a`` of ``u(a, x) = sqrt 2``: ``(x -+ sqrt(6 - 2x**2)) / 3``."""
    return boundary_u_lower_root(x), boundary_u_upper_root(x)


def boundary_u_lower_root(x):
    r = (np.asarray(x, dtype=float) - np.sqrt(_radicand(x, 6.0, 2.0))) / 3.0
    return _squeeze(r)


def boundary_u_upper_root(x):
    r = (np.asarray(x, dtype=float) + np.sqrt(_radicand(x, 6.0, 2.0))) / 3.0
    return _squeeze(r)


def boundary_v_root(x):
    """Root in ``a`` of ``v(a, x) = sqrt 3``: ``(-x + sqrt(12 - 3x**2)) / 4``."""
    r = (-np.asarray(x, dtype=float) + np.sqrt(_radicand(x, 12.0, 3.0))) / 4.0
    return _squeeze(r)


def _root_point(kind, x):
    X = Interval._make(x, x)
    if kind == "u_lower":
        rad = 6.0 - 2.0 * X.sqr()
        return (X - _clamp0(rad).sqrt()) / 3.0
    if kind == "u_upper":
        rad = 6.0 - 2.0 * X.sqr()
        return (X + _clamp0(rad).sqrt()) / 3.0
    rad = 12.0 - 3.0 * X.sqr()
    return (_clamp0(rad).sqrt() - X) / 4.0


def _clamp0(iv):
    # the radicands are non-negative on the true x-range
    return Interval._make(np.maximum(iv.lo, 0.0), np.maximum(iv.hi, 0.0))


def root_interval(kind, X):
    """Enclosure of a boundary root over an x-interval (each root is monotone)."""
    at_lo = _root_point(kind, X.lo)
    at_hi = _root_point(kind, X.hi)
    if kind == "u_lower":  # increasing
        lo, hi = at_lo.lo, at_hi.hi
    else:  # decreasing
        lo, hi = at_hi.lo, at_lo.hi
    lo = np.clip(lo, 0.0, 1.0)
    hi = np.clip(hi, 0.0, 1.0)
    return Interval._make(_squeeze(lo), _squeeze(np.maximum(hi, lo)))


@dataclass(frozen=True)
class RegionGeometry:
    """Boundary curves of the decomposition and their meeting point."""

    x_star: float = X_STAR

    boundary_u = staticmethod(boundary_u)
    boundary_u_lower_root = staticmethod(boundary_u_lower_root)
    boundary_u_upper_root = staticmethod(boundary_u_upper_root)
    boundary_v_root = staticmethod(boundary_v_root)


GEOMETRY = RegionGeometry()


# -- classification ---------------------------------------------------------


def region_of(a, x, tol=EQ_TOL):
    """Tag of the piece containing ``(a, x)``.

    Priority: A1 > A2 > X2 > X11/X12/X13 > curve tags > interior tags.  An
    equality is recognised within ``tol``.

    Raises
    ------
    DomainError
        If the point is outside ``[0, 1] x [sqrt 2, sqrt 3]`` (beyond ``tol``).
    """
    a = float(a)
    x = float(x)
    if not (math.isfinite(a) and math.isfinite(x)):
        raise DomainError("point must be finite")
    if a < 0 or a > 1 or x < SQRT2 - tol or x > SQRT3 + tol:
        raise DomainError(f"({a}, {x}) is outside the rectangle")
    if a == 0:
        return RegionId.A1
    if a == 1:
        return RegionId.A2
    if abs(x - SQRT3) <= tol:
        return RegionId.X2
    if abs(x - SQRT2) <= tol:
        if a < INV_SQRT2:
            return RegionId.X11
        if a < TWO_SQRT2_3:
            return RegionId.X12
        return RegionId.X13
    uu = u(a, x)
    vv = v(a, x)
    low = a < INV_SQRT3
    if abs(uu - SQRT2) <= tol:
        if vv <= SQRT3 + tol:
            return RegionId.ELe
        return RegionId.EG1 if low else RegionId.EG2
    if abs(vv - SQRT3) <= tol and uu > SQRT2:
        return RegionId.GE
    if uu < SQRT2:
        return RegionId.LLe if vv <= SQRT3 else RegionId.LG
    if vv < SQRT3:
        return RegionId.GL1 if x <= X_STAR else RegionId.GL2
    return RegionId.GG1 if low else RegionId.GG2


# -- closed-form values on the one-dimensional pieces ----------------------


def _upper(y):
    # h1 on [sqrt 2, inf)
    y = np.asarray(y, dtype=float)
    return np.where(y <= SQRT3, g(y), h(y))


def _cheb(y):
    return 0.5 / (np.asarray(y, dtype=float) ** 2)


def _uv(a, x):
    s = np.sqrt((1.0 - a) * (1.0 + a))
    return (x - a) / s, (x + a) / s


def edge_k(region, t):
    """``K`` along a one-dimensional piece, with the branch of each term fixed.

    ``t`` is ``x`` for the curves (ELe, GE, EG1, EG2) and for A1/A2, and ``a``
    for the sides X11, X12, X13, X2.  Fixing the branch analytically keeps a
    rounding error in ``u`` or ``v`` from flipping ``h1`` across its jump.
    """
    r = RegionId.parse(region)
    t = np.asarray(t, dtype=float)
    g2 = g(SQRT2)
    if r is RegionId.A1:
        out = np.zeros_like(t)
    elif r is RegionId.A2:
        out = -2.0 * g(t)
    elif r is RegionId.ELe:
        a = np.maximum(boundary_u_lower_root(t), 0.0)
        out = g2 + _upper(_uv(a, t)[1]) - 2.0 * g(t)
    elif r is RegionId.GE:
        a = np.maximum(boundary_v_root(t), 0.0)
        out = _upper(_uv(a, t)[0]) + g(SQRT3) - 2.0 * g(t)
    elif r in (RegionId.EG1, RegionId.EG2):
        root = boundary_u_lower_root if r is RegionId.EG1 else boundary_u_upper_root
        a = np.maximum(root(t), 0.0)
        out = g2 + _upper(_uv(a, t)[1]) - 2.0 * g(t)
    elif r in (RegionId.X11, RegionId.X12, RegionId.X13):
        uu, vv = _uv(t, SQRT2)
        # u >= sqrt 2 on X13 exactly; the clamp absorbs rounding at the corner
        first = _upper(np.maximum(uu, SQRT2)) if r is RegionId.X13 else _cheb(uu)
        out = first + _upper(vv) - 2.0 * g2
    elif r is RegionId.X2:
        uu, vv = _uv(t, SQRT3)
        out = _upper(np.maximum(uu, SQRT2)) + _upper(vv) - 2.0 * g(SQRT3)
    else:
        raise DomainError(f"{r.value} is a two-dimensional piece; use bounds.K")
    return _squeeze(out)
