"""Closed real intervals with outward-padded arithmetic.

Endpoints may be Python floats or numpy arrays of equal shape; an array-valued
``Interval`` is a batch of independent intervals and every operation acts
elementwise.  Results are enclosures: after each operation the endpoints are
pushed outward by a fixed number of ulps, which dominates the rounding error of
the correctly rounded (or nearly so) floating-point primitives underneath.
This is desk-scale certification, not directed rounding.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

#: Outward padding, in units in the last place, applied after every operation.
ULPS = 4


def _as_endpoint(v):
    arr = np.asarray(v, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


def pad_down(v, ulps=ULPS):
    """Move ``v`` down by ``ulps`` units in the last place."""
    with np.errstate(invalid="ignore"):
        out = v - ulps * np.spacing(np.abs(v))
    return np.where(np.isinf(v), v, out) if np.ndim(v) else (v if np.isinf(v) else out)


def pad_up(v, ulps=ULPS):
    """Move ``v`` up by ``ulps`` units in the last place."""
    with np.errstate(invalid="ignore"):
        out = v + ulps * np.spacing(np.abs(v))
    return np.where(np.isinf(v), v, out) if np.ndim(v) else (v if np.isinf(v) else out)


class Interval:
    """Closed interval ``[lo, hi]`` (or a batch of them).

    Parameters
    ----------
    lo, hi : float or array_like
        Endpoints.  ``hi`` defaults to ``lo`` (a point interval, which is *not*
        padded; use :meth:`around` for an enclosure of a computed value).

    Raises
    ------
    DomainError
        If an endpoint is non-finite or ``lo > hi``.
    """

    __slots__ = ("lo", "hi")
    __array_priority__ = 1000  # keep numpy scalars from hijacking operators

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo = _as_endpoint(lo)
        hi = _as_endpoint(hi)
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise DomainError("interval endpoints must be finite")
        if not np.all(lo <= hi):
            raise DomainError(f"invalid interval: lo > hi ({lo!r}, {hi!r})")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _make(cls, lo, hi):
        # Unchecked constructor for internal use; infinite endpoints allowed.
        obj = cls.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @classmethod
    def around(cls, value, ulps=ULPS):
        """Padded enclosure of a floating-point ``value``."""
        value = _as_endpoint(value)
        return cls._make(pad_down(value, ulps), pad_up(value, ulps))

    @classmethod
    def hull_of(cls, *values):
        """Smallest interval containing all given numbers (unpadded)."""
        arr = np.asarray(values, dtype=float)
        return cls(arr.min(axis=0), arr.max(axis=0))

    # -- inspection ---------------------------------------------------------

    @property
    def mid(self):
        return 0.5 * self.lo + 0.5 * self.hi

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def rad(self):
        return 0.5 * (self.hi - self.lo)

    @property
    def mag(self):
        """Largest absolute value in the interval."""
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def contains(self, x):
        return (self.lo <= x) & (x <= self.hi)

    def hull(self, other):
        other = _coerce(other)
        return Interval._make(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def __getitem__(self, idx):
        return Interval._make(self.lo[idx], self.hi[idx])

    def __len__(self):
        return len(self.lo)

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return Interval._make(-self.hi, -self.lo)

    def __add__(self, other):
        other = _coerce(other)
        return Interval._make(pad_down(self.lo + other.lo), pad_up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Interval._make(pad_down(self.lo - other.hi), pad_up(self.hi - other.lo))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        with np.errstate(invalid="ignore", over="ignore"):
            p = np.array([self.lo * other.lo, self.lo * other.hi,
                          self.hi * other.lo, self.hi * other.hi])
        # 0 * inf contributes 0 to the hull
        p = np.where(np.isnan(p), 0.0, p)
        return Interval._make(pad_down(_squeeze(p.min(axis=0))), pad_up(_squeeze(p.max(axis=0))))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other) * self.reciprocal()

    def reciprocal(self):
        """``1/X`` for an interval not containing zero in its interior.

        An endpoint at exactly zero produces an infinite endpoint.
        """
        lo, hi = np.asarray(self.lo, dtype=float), np.asarray(self.hi, dtype=float)
        if np.any((lo < 0) & (hi > 0)) or np.any((lo == 0) & (hi == 0)):
            raise DomainError("reciprocal of an interval containing zero")
        with np.errstate(divide="ignore", over="ignore"):
            rlo = np.where(hi == 0, -np.inf, 1.0 / hi)
            rhi = np.where(lo == 0, np.inf, 1.0 / lo)
        return Interval._make(pad_down(_squeeze(rlo)), pad_up(_squeeze(rhi)))

    def sqr(self):
        lo, hi = self.lo, self.hi
        with np.errstate(over="ignore"):
            a, b = lo * lo, hi * hi
        straddle = (lo < 0) & (hi > 0)
        rlo = np.where(straddle, 0.0, np.minimum(a, b))
        rhi = np.maximum(a, b)
        return Interval._make(_squeeze(np.maximum(pad_down(rlo), 0.0)), _squeeze(pad_up(rhi)))

    def sqrt(self):
        if np.any(self.hi < 0):
            raise DomainError("square root of a negative interval")
        lo = np.maximum(self.lo, 0.0)
        return Interval._make(_squeeze(np.maximum(pad_down(np.sqrt(lo)), 0.0)),
                              _squeeze(pad_up(np.sqrt(self.hi))))

    def exp(self):
        with np.errstate(over="ignore"):
            return Interval._make(np.maximum(pad_down(np.exp(self.lo)), 0.0), pad_up(np.exp(self.hi)))


def _squeeze(v):
    return float(v) if np.ndim(v) == 0 else v


def _coerce(value):
    if isinstance(value, Interval):
        return value
    value = _as_endpoint(value)
    return Interval._make(value, value)


def as_interval(value):
    """Interpret ``value`` as an interval: Interval, number, or ``(lo, hi)`` pair."""
    if isinstance(value, Interval):
        return value
    if isinstance(value, (tuple, list)) and len(value) == 2:
        return Interval(value[0], value[1])
    return Interval(value)
