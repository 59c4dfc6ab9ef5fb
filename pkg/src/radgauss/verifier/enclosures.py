"""Vectorized upper bounds for ``K`` and for the Gaussian mixture over boxes.

A box is four arrays ``(alo, ahi, xlo, xhi)``.  On each part of a box where
the branches of ``h1(u)`` and ``h1(v)`` are fixed, ``K`` is a smooth
*surrogate* ``P(u) + Q(v) - 2 g(x)`` with ``P`` in ``{L, g, h}``
(``L(y) = 1/(2 y**2)``) and ``Q`` in ``{g, h}``.  Each surrogate is bounded by
the smaller of its natural interval extension and its mean-value form; the box
bound is the largest surrogate bound over the branch combinations the box can
meet.

Near ``a = 0`` a curvature rule takes over.  With
``G = g(u) + g(v) - 2 g(x)`` one has ``K <= G`` on the rectangle (because
``u >= 1``, ``g >= L`` on ``[1, sqrt 2]`` and ``h <= g`` on ``[sqrt 3, inf)``),
``G(0, x) = 0`` and ``dG/da(0, x) = 0``; so a certified ``d2G/da2 < 0`` on
``[0, a_hi] x X`` gives ``K <= G <= 0`` there.
"""

from __future__ import annotations

import numpy as np

from ..bounds import (
    C1_250_I,
    C2_I,
    SQRT2_I,
    SQRT3_I,
    g_interval,
    h_interval,
    u_point,
    u_range,
    v_point,
    v_range,
)
from ..gaussian import gauss_tail_interval, phi_interval
from ..interval import Interval

#: Boxes with ``a_hi`` at most this try the curvature rule.
CURVATURE_A_MAX = 0.08


def _I(lo, hi=None):
    return Interval._make(lo, lo if hi is None else hi)


def piece_value(p, Y):
    if p == "L":
        return 0.5 * Y.sqr().reciprocal()
    if p == "g":
        return g_interval(Y)
    return h_interval(Y)


def piece_d1(p, Y):
    if p == "L":
        return -(Y.sqr() * Y).reciprocal()
    if p == "g":
        return -(C1_250_I * (251.0 + Y) * phi_interval(Y))
    return -(C2_I * phi_interval(Y))


def g_d2(Y):
    return C1_250_I * phi_interval(Y) * ((251.0 + Y) * Y - 1.0)


def g_d1(Y):
    return piece_d1("g", Y)


def _masks(U, V, u_mode, v_mode):
    n = U.lo.shape
    t = np.ones(n, dtype=bool)
    f = np.zeros(n, dtype=bool)
    if u_mode == "L":
        um = {"L": t, "g": f, "h": f}
    elif u_mode in ("g", "h"):
        um = {"L": f, "g": t if u_mode == "g" else f, "h": t if u_mode == "h" else f}
    else:
        allow_l = u_mode == "auto"
        lmask = (U.lo < SQRT2_I.hi) if allow_l else f
        gside = (U.hi >= SQRT2_I.lo) if allow_l else t
        um = {"L": lmask, "g": gside & (U.lo <= SQRT3_I.hi), "h": gside & (U.hi >= SQRT3_I.lo)}
    if v_mode == "g":
        vm = {"g": t, "h": f}
    elif v_mode == "h":
        vm = {"g": f, "h": t}
    else:
        vm = {"g": V.lo <= SQRT3_I.hi, "h": V.hi >= SQRT3_I.lo}
    return um, vm


def surrogate_bound(alo, ahi, xlo, xhi, u_mode="auto", v_mode="auto"):
    """Upper bound of ``K`` over each box, for the allowed branch pieces.

    ``u_mode`` is ``"L"`` (``u < sqrt 2``), ``"G"`` (``u >= sqrt 2``), a single
    piece ``"g"``/``"h"``, or ``"auto"`` (decided per box).  ``v_mode`` is
    ``"g"``, ``"h"`` or ``"auto"``.

    Returns
    -------
    ndarray
        Upper bounds (``-inf`` never occurs: each box meets some piece).
    """
    A = _I(alo, ahi)
    X = _I(xlo, xhi)
    U = u_range(A, X)
    V = v_range(A, X)
    um, vm = _masks(U, V, u_mode, v_mode)

    ac = 0.5 * alo + 0.5 * ahi
    xc = 0.5 * xlo + 0.5 * xhi
    Uc = u_point(ac, xc)
    Vc = v_point(ac, xc)

    inv_s = ((1.0 - A) * (1.0 + A)).sqrt().reciprocal()
    inv_s3 = inv_s.sqr() * inv_s
    AX = A * X
    ua = (AX - 1.0) * inv_s3
    va = (AX + 1.0) * inv_s3
    dA = A - ac
    dX = X - xc

    gx = -2.0 * g_interval(X)
    gxc = -2.0 * g_interval(_I(xc))
    dgx = -2.0 * g_d1(X)

    upieces = [p for p in ("L", "g", "h") if um[p].any()]
    vpieces = [q for q in ("g", "h") if vm[q].any()]
    ucache = {p: (piece_value(p, U), piece_value(p, Uc), piece_d1(p, U)) for p in upieces}
    vcache = {q: (piece_value(q, V), piece_value(q, Vc), piece_d1(q, V)) for q in vpieces}

    best = np.full(alo.shape, -np.inf)
    with np.errstate(invalid="ignore", over="ignore"):
        for p in upieces:
            Pv, Pc, Pd = ucache[p]
            pa = Pd * ua
            px = Pd * inv_s
            for q in vpieces:
                mask = um[p] & vm[q]
                if not mask.any():
                    continue
                Qv, Qc, Qd = vcache[q]
                nat = (Pv + Qv + gx).hi
                Fa = pa + Qd * va
                Fx = px + Qd * inv_s + dgx
                mvf = (Pc + Qc + gxc + Fa * dA + Fx * dX).hi
                bound = np.where(np.isfinite(mvf), np.minimum(nat, mvf), nat)
                best = np.where(mask, np.maximum(best, bound), best)
    return best


def curvature_bound(alo, ahi, xlo, xhi):
    """Bound from the curvature rule; ``+inf`` where the rule does not apply.

    Where ``d2G/da2 <= M < 0`` on ``[0, a_hi] x X`` the bound is
    ``M a_lo**2 / 2 <= 0``.

    With ``F(y) = (251 + y) phi(y)`` and ``s = sqrt(1 - a**2)``,
    ``(250/c1) d2G/da2 = s**-7 [E (F(u) + F(v)) + O (F(u) - F(v))]
    - s**-6 [phi(u) (1 - a x)**2 + phi(v) (1 + a x)**2]`` where
    ``E = a**2 x (x**2 + 1) + 2 a**4 x`` and ``O = 2 a (1 - x**2) - a**3 (x**2 + 3)``.
    ``F(u) - F(v) = -(2a/s) F'(w)`` for some ``w`` in ``[u, v]``, so every
    odd-in-``a`` part carries an explicit ``a**2`` and the enclosure stays
    tight near ``a = 0``.
    """
    out = np.full(alo.shape, np.inf)
    idx = np.flatnonzero(ahi <= CURVATURE_A_MAX)
    if idx.size == 0:
        return out
    A = _I(np.zeros(idx.size), ahi[idx])
    X = _I(xlo[idx], xhi[idx])
    U = u_range(A, X)
    V = v_range(A, X)
    W = Interval._make(U.lo, V.hi)
    inv_s = ((1.0 - A) * (1.0 + A)).sqrt().reciprocal()
    inv_s6 = (inv_s.sqr() * inv_s).sqr()
    inv_s7 = inv_s6 * inv_s
    A2 = A.sqr()
    X2 = X.sqr()
    E = A2 * X * (X2 + 1.0) + 2.0 * A2.sqr() * X
    # O * 2a, with O as above
    O2a = 2.0 * A2 * (2.0 * (1.0 - X2) - A2 * (X2 + 3.0))
    pu = phi_interval(U)
    pv = phi_interval(V)
    Fsum = (251.0 + U) * pu + (251.0 + V) * pv
    dF = phi_interval(W) * (1.0 - (251.0 + W) * W)
    AX = A * X
    odd = inv_s7 * (E * Fsum - O2a * dF * inv_s)
    even = inv_s6 * (pu * (1.0 - AX).sqr() + pv * (1.0 + AX).sqr())
    gaa = C1_250_I * (odd - even)
    ok = gaa.hi < 0
    bound = (0.5 * _I(gaa.hi) * _I(alo[idx]).sqr()).hi
    out[idx] = np.where(ok, np.minimum(bound, 0.0), np.inf)
    return out


def k_box_bound(alo, ahi, xlo, xhi, u_mode="auto", v_mode="auto", curvature=True):
    """Best available upper bound of ``K`` over each box."""
    b = surrogate_bound(alo, ahi, xlo, xhi, u_mode, v_mode)
    if curvature:
        b = np.minimum(b, curvature_bound(alo, ahi, xlo, xhi))
    return b


# -- Gaussian mixture -------------------------------------------------------


def mixture_bound(alo, ahi, xlo, xhi):
    """Upper bound of ``Q(u)/2 + Q(v)/2 - Q(x)`` over each box."""
    A = _I(alo, ahi)
    X = _I(xlo, xhi)
    U = u_range(A, X)
    V = v_range(A, X)
    ac = 0.5 * alo + 0.5 * ahi
    xc = 0.5 * xlo + 0.5 * xhi
    nat = (0.5 * gauss_tail_interval(U) + 0.5 * gauss_tail_interval(V) - gauss_tail_interval(X)).hi
    Mc = 0.5 * gauss_tail_interval(u_point(ac, xc)) + 0.5 * gauss_tail_interval(v_point(ac, xc)) \
        - gauss_tail_interval(_I(xc))
    inv_s = ((1.0 - A) * (1.0 + A)).sqrt().reciprocal()
    inv_s3 = inv_s.sqr() * inv_s
    AX = A * X
    pu = phi_interval(U)
    pv = phi_interval(V)
    Ma = -0.5 * (pu * ((AX - 1.0) * inv_s3) + pv * ((AX + 1.0) * inv_s3))
    Mx = -0.5 * ((pu + pv) * inv_s) + phi_interval(X)
    with np.errstate(invalid="ignore", over="ignore"):
        mvf = (Mc + Ma * (A - ac) + Mx * (X - xc)).hi
    return np.where(np.isfinite(mvf), np.minimum(nat, mvf), nat)
