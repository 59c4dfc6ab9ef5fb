"""Standard normal density, tail and inverse Mills ratio.

The tail is computed from the scaled complementary error function,
``Q(x) = exp(-t**2) * erfcx(t) / 2`` with ``t = x / sqrt(2)``.  The product
``x / sqrt(2)`` and the square ``t**2`` are carried in double-double so that the
argument of ``exp`` is exact to first order; otherwise the rounding of ``t``
alone costs hundreds of ulps once ``x`` is in the thirties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from .errors import DomainError, RangeError
from .interval import Interval, as_interval, pad_down, pad_up

__all__ = [
    "Constants",
    "Interval",
    "constants",
    "gauss_tail",
    "gauss_tail_interval",
    "mills_ratio",
    "phi",
    "phi_interval",
]

# double-double splits of the constants that multiply a rounded argument
_INV_SQRT2_HI = 0.7071067811865476
_INV_SQRT2_LO = -4.833646656726457e-17
_TWO_OVER_SQRT_PI = 1.1283791670955126
_SQRT_2_OVER_PI = 0.7978845608028654
_INV_SQRT_2PI = 0.3989422804014327

#: Largest argument accepted by :func:`mills_ratio`.
MILLS_MAX = 40.0

#: Measured worst-case relative errors, in units of spacing(value), over the tested ranges
#: (see tests/test_gaussian.py); interval enclosures pad by this plus the
#: generic outward padding.
PHI_ULPS = 4
TAIL_ULPS = 9

# Below this size results are (near) subnormal and relative accuracy is lost;
# enclosures fall back to [0, TINY].
TINY = 1e-290


def _two_prod(a, b):
    """Error-free product: ``a*b = p + e`` exactly (Veltkamp/Dekker).

    Non-finite ``p`` comes with a meaningless ``e``; callers mask it.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        p = a * b
        c = 134217729.0 * a
        ah = c - (c - a)
        al = a - ah
        c = 134217729.0 * b
        bh = c - (c - b)
        bl = b - bh
        e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _check(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _scaled_arg(ax):
    # t + t_lo = ax / sqrt(2) to about twice working precision; exact overflow
    # protection for the splitting is unnecessary because |x| is never huge here
    big = ax > 1e150
    axs = np.where(big, 0.0, ax)
    t, e = _two_prod(axs, _INV_SQRT2_HI)
    t_lo = e + axs * _INV_SQRT2_LO
    t = np.where(big, ax * _INV_SQRT2_HI, t)
    return t, t_lo


def _upper_tail(ax):
    """Q(ax) for ax >= 0."""
    t, t_lo = _scaled_arg(ax)
    p, pe = _two_prod(t, t)
    with np.errstate(over="ignore", invalid="ignore"):
        core = erfcx(t) - _TWO_OVER_SQRT_PI * t_lo
        val = 0.5 * np.exp(-p) * ((1.0 - pe) * core)
    return np.where(np.isfinite(p), val, 0.0)


def phi(x):
    """Standard normal density.

    Parameters
    ----------
    x : float or array_like
        Finite argument(s).

    Returns
    -------
    float or ndarray
        ``exp(-x**2/2) / sqrt(2*pi)``.

    Raises
    ------
    DomainError
        For non-finite input.
    """
    arr = _check(x)
    big = np.abs(arr) > 1e150
    xs = np.where(big, 0.0, arr)
    p, pe = _two_prod(xs, xs)
    val = _INV_SQRT_2PI * np.exp(-0.5 * p) * (1.0 - 0.5 * pe)
    return _out(np.where(big, 0.0, val), x)


def gauss_tail(x):
    """Upper tail ``P(Z >= x)`` of the standard normal law.

    Relative error is a few ulps on ``[-10, 37]``; past about 37.5 the value
    is subnormal and only absolute accuracy remains.

    Raises
    ------
    DomainError
        For non-finite input.
    """
    arr = _check(x)
    ax = np.abs(arr)
    q = _upper_tail(ax)
    return _out(np.where(arr >= 0, q, 1.0 - q), x)


def mills_ratio(x):
    """Inverse Mills ratio ``phi(x) / gauss_tail(x)``.

    For ``x >= 0`` the common factor ``exp(-x**2/2)`` is cancelled
    analytically, which leaves ``sqrt(2/pi) / erfcx(x/sqrt(2))``.

    Raises
    ------
    DomainError
        For non-finite input.
    RangeError
        If ``x > 40``, where the tail is no longer representable.
    """
    arr = _check(x)
    if np.any(arr > MILLS_MAX):
        raise RangeError(f"mills_ratio undefined in double precision for x > {MILLS_MAX}")
    ax = np.abs(arr)
    t, t_lo = _scaled_arg(ax)
    # first-order expansion of erfcx about the rounded argument
    ex = erfcx(t)
    pos = _SQRT_2_OVER_PI / (ex + (2.0 * t * ex - _TWO_OVER_SQRT_PI) * t_lo)
    with np.errstate(divide="ignore", invalid="ignore"):
        neg = phi(arr) / (1.0 - _upper_tail(ax))
    return _out(np.where(arr >= 0, pos, neg), x)


# -- constants --------------------------------------------------------------


@dataclass(frozen=True)
class Constants:
    """Numerical constants of the tail comparison.

    Attributes
    ----------
    c1 : float
        ``1 / (4 Q(sqrt 2))``, the lower end of the optimal-constant bracket.
    c2 : float
        ``c1 (1 + (1 + r(sqrt 3)) / 250)``, the proven upper end.
    c3 : float
        ``2 e**3 / 9``.
    x_star : float
        Abscissa where the two boundary curves ``u = sqrt 2`` and
        ``v = sqrt 3`` meet.
    s_star : float
        ``sqrt(1 - a**2)`` at that meeting point.
    """

    c1: float
    c2: float
    c3: float
    x_star: float
    s_star: float

    @property
    def ln_c3(self):
        return math.log(self.c3)

    def as_dict(self):
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3, "ln_c3": self.ln_c3,
                "x_star": self.x_star, "s_star": self.s_star, "c2_over_c1": self.c2 / self.c1}


def _compute_constants():
    c1 = 1.0 / (4.0 * gauss_tail(math.sqrt(2.0)))
    c2 = c1 * (1.0 + (1.0 + mills_ratio(math.sqrt(3.0))) / 250.0)
    c3 = 2.0 * math.exp(3.0) / 9.0
    r6 = 2.0 * math.sqrt(6.0)
    x_star = math.sqrt((5.0 + r6) / (9.0 - r6))
    a_star = (-x_star + math.sqrt(12.0 - 3.0 * x_star * x_star)) / 4.0
    s_star = math.sqrt(1.0 - a_star * a_star)
    return Constants(c1=c1, c2=c2, c3=c3, x_star=x_star, s_star=s_star)


_CONSTANTS = _compute_constants()


def constants():
    """Return the (cached) :class:`Constants`."""
    return _CONSTANTS


# -- interval enclosures ----------------------------------------------------


def _clamp(v):
    # infinite endpoints arise from a -> 1; both functions have settled by 1e300
    return np.clip(v, -1e300, 1e300)


def _tiny_guard(lo, hi):
    # relative accuracy is gone for near-subnormal values; widen to [0, TINY]
    lo = np.where(lo < TINY, 0.0, lo)
    hi = np.where(hi < TINY, TINY, hi)
    return lo, hi


def gauss_tail_interval(x):
    """Enclosure of ``{gauss_tail(t) : t in x}``.

    Uses that the tail is decreasing.  Endpoints are padded by the measured
    evaluation error plus the generic outward padding.

    Parameters
    ----------
    x : Interval or float or (lo, hi)

    Returns
    -------
    Interval
    """
    x = as_interval(x)
    ulps = TAIL_ULPS + 4
    lo = pad_down(gauss_tail(_clamp(x.hi)), ulps)
    hi = pad_up(gauss_tail(_clamp(x.lo)), ulps)
    lo, hi = _tiny_guard(lo, hi)
    lo = np.maximum(lo, 0.0)
    hi = np.minimum(hi, 1.0)
    return Interval._make(_out(lo, x.lo), _out(hi, x.lo))


def phi_interval(x):
    """Enclosure of ``{phi(t) : t in x}``, handling the mode at 0."""
    x = as_interval(x)
    ulps = PHI_ULPS + 4
    flo = phi(_clamp(x.lo))
    fhi = phi(_clamp(x.hi))
    straddle = (x.lo < 0) & (x.hi > 0)
    down = np.minimum(flo, fhi)
    up = np.where(straddle, _INV_SQRT_2PI, np.maximum(flo, fhi))
    lo, hi = _tiny_guard(pad_down(down, ulps), pad_up(up, ulps))
    return Interval._make(_out(np.maximum(lo, 0.0), x.lo), _out(hi, x.lo))
