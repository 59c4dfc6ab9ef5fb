"""Certification runs for the sixteen pieces, the whole rectangle and the x >= sqrt 3 mixture."""

from __future__ import annotations

import math
import time

import numpy as np
from scipy.stats import qmc

from ..bounds import C1, SQRT2, SQRT2_I, SQRT3, SQRT3_I, K, g_interval, h1, u_range, v_range
from ..errors import DomainError
from ..gaussian import gauss_tail, phi
from ..interval import Interval
from . import bnb
from .enclosures import k_box_bound, mixture_bound
from .regions import (
    INV_SQRT2_I,
    INV_SQRT3,
    INV_SQRT3_I,
    TWO_SQRT2_3_I,
    X_STAR,
    XSTAR_I,
    RegionId,
    boundary_u_lower_root,
    boundary_u_upper_root,
    boundary_v_root,
    edge_k,
    root_interval,
)
from .report import CERTIFIED, INCONCLUSIVE, REFUTED, VerificationReport

__all__ = [
    "certify_g_above_chebyshev",
    "mixture",
    "quadratic_coefficient",
    "verify_all",
    "verify_mixture_x_ge_sqrt3",
    "verify_rectangle",
    "verify_region",
    "witness_scan",
]

X_LO = SQRT2_I.lo
X_HI = SQRT3_I.hi

#: In the x >= sqrt 3 mixture run, boxes with a_hi at most this use the
#: monotonicity-in-a argument instead of an enclosure.
MIXTURE_RULE_A = 0.05


# -- interior pieces --------------------------------------------------------

# tag: (u piece, v piece, root box, filter)
_INTERIOR = {
    RegionId.LLe: ("L", "g", (0.0, 1.0, X_LO, X_HI)),
    RegionId.LG: ("L", "h", (0.0, 1.0, X_LO, X_HI)),
    RegionId.GL1: ("G", "g", (0.0, 1.0, X_LO, XSTAR_I.hi)),
    RegionId.GL2: ("G", "g", (0.0, 1.0, XSTAR_I.lo, X_HI)),
    RegionId.GG1: ("G", "h", (0.0, INV_SQRT3_I.hi, X_LO, X_HI)),
    RegionId.GG2: ("G", "h", (INV_SQRT3_I.lo, 1.0, X_LO, X_HI)),
}

_CURVES = {
    RegionId.ELe: ("u_lower", "g", "g", (X_LO, XSTAR_I.hi)),
    RegionId.GE: ("v", "G", "g", (XSTAR_I.lo, X_HI)),
    RegionId.EG1: ("u_lower", "g", "h", (XSTAR_I.lo, X_HI)),
    RegionId.EG2: ("u_upper", "g", "h", (X_LO, X_HI)),
}

_EDGES = {
    RegionId.X11: (SQRT2_I, "L", (0.0, INV_SQRT2_I.hi)),
    RegionId.X12: (SQRT2_I, "L", (INV_SQRT2_I.lo, TWO_SQRT2_3_I.hi)),
    RegionId.X13: (SQRT2_I, "G", (TWO_SQRT2_3_I.lo, 1.0)),
    RegionId.X2: (SQRT3_I, "G", (0.0, 1.0)),
}

_ROOTS = {"u_lower": boundary_u_lower_root, "u_upper": boundary_u_upper_root, "v": boundary_v_root}


def _interior_discard(tag):
    s2lo, s2hi, s3lo, s3hi = SQRT2_I.lo, SQRT2_I.hi, SQRT3_I.lo, SQRT3_I.hi

    def discard(alo, ahi, xlo, xhi):
        A = Interval._make(alo, ahi)
        X = Interval._make(xlo, xhi)
        U = u_range(A, X)
        V = v_range(A, X)
        if tag in (RegionId.LLe, RegionId.LG):
            out = U.lo >= s2hi
        else:
            out = U.hi <= s2lo
        if tag in (RegionId.LLe,):
            out |= V.lo > s3hi
        elif tag in (RegionId.GL1, RegionId.GL2):
            out |= V.lo >= s3hi
        else:
            out |= V.hi <= s3lo
        return out

    return discard


def _interior_predicate(tag, a, x):
    s = np.sqrt((1.0 - a) * (1.0 + a))
    uu = (x - a) / s
    vv = (x + a) / s
    inside = (a > 0) & (a < 1) & (x > SQRT2) & (x < SQRT3)
    if tag is RegionId.LLe:
        m = (uu < SQRT2) & (vv <= SQRT3)
    elif tag is RegionId.LG:
        m = (uu < SQRT2) & (vv > SQRT3)
    elif tag is RegionId.GL1:
        m = (uu > SQRT2) & (vv < SQRT3) & (x <= X_STAR)
    elif tag is RegionId.GL2:
        m = (uu > SQRT2) & (vv < SQRT3) & (x > X_STAR)
    elif tag is RegionId.GG1:
        m = (uu > SQRT2) & (vv > SQRT3) & (a < INV_SQRT3)
    else:
        m = (uu > SQRT2) & (vv > SQRT3) & (a >= INV_SQRT3)
    return inside & m


def _centre(alo, ahi, xlo, xhi):
    return 0.5 * alo + 0.5 * ahi, 0.5 * xlo + 0.5 * xhi


def _interior_witness(tag):
    def witness(alo, ahi, xlo, xhi):
        a, x = _centre(alo, ahi, xlo, xhi)
        a = np.clip(a, 0.0, 1.0)
        val = K(a, x)
        return np.where(_interior_predicate(tag, a, x), val, -np.inf), a, x

    return witness


def _problem(region):
    r = RegionId.parse(region)
    if r in _INTERIOR:
        um, vm, root = _INTERIOR[r]
        return bnb.Problem(
            name=r.value,
            root=root,
            bound=lambda alo, ahi, xlo, xhi: k_box_bound(alo, ahi, xlo, xhi, um, vm),
            discard=_interior_discard(r),
            witness=_interior_witness(r),
        )
    if r in _CURVES:
        kind, um, vm, (x0, x1) = _CURVES[r]
        root_fn = _ROOTS[kind]

        def bound(alo, ahi, xlo, xhi):
            A = root_interval(kind, Interval._make(xlo, xhi))
            return k_box_bound(A.lo, A.hi, xlo, xhi, um, vm)

        def witness(alo, ahi, xlo, xhi):
            xc = np.clip(0.5 * xlo + 0.5 * xhi, SQRT2, SQRT3)
            return edge_k(r, xc) + np.zeros_like(xc), np.maximum(root_fn(xc), 0.0) + np.zeros_like(xc), xc

        return bnb.Problem(name=r.value, root=(0.0, 1.0, x0, x1), bound=bound, witness=witness, split="x")
    if r in _EDGES:
        X, um, (a0, a1) = _EDGES[r]
        xfix = SQRT2 if X is SQRT2_I else SQRT3

        def bound(alo, ahi, xlo, xhi):
            return k_box_bound(alo, np.minimum(ahi, 1.0), xlo, xhi, um, "auto")

        def witness(alo, ahi, xlo, xhi):
            ac = 0.5 * alo + 0.5 * ahi
            ok = ac < 1.0
            val = np.where(ok, edge_k(r, np.where(ok, ac, 0.0)), -np.inf)
            return val, ac, np.full_like(ac, xfix)

        return bnb.Problem(name=r.value, root=(a0, a1, X.lo, X.hi), bound=bound, witness=witness, split="a")
    raise DomainError(f"no box problem for region {r.value}")


def verify_region(region, threshold=0.0, max_boxes=10**7, max_depth=80, workers=1):
    """Certify ``K <= threshold`` on one piece of the rectangle.

    Two-dimensional pieces are bisected over their bounding box, discarding
    boxes that certainly miss the piece; the curves are bisected in ``x``
    (with ``a`` enclosed through the boundary root) and the sides in ``a``.
    A box is accepted once its upper bound is at most ``threshold``.

    Returns
    -------
    VerificationReport
    """
    if threshold < 0:
        raise DomainError("threshold must be >= 0")
    if max_boxes < 1 or max_depth < 0:
        raise DomainError("budgets must be positive")
    r = RegionId.parse(region)
    t0 = time.perf_counter()
    if r is RegionId.A1:
        xs = np.linspace(SQRT2, SQRT3, 257)
        resid = float(np.max(np.abs(K(np.zeros_like(xs), xs))))
        return VerificationReport(
            r.value, CERTIFIED if resid == 0.0 else REFUTED, 0.0, 1, 0,
            round((time.perf_counter() - t0) * 1000.0, 3),
            {"method": "identity u = v = x at a = 0", "sampled_max_abs": resid, "threshold": float(threshold)},
        )
    if r is RegionId.A2:
        up = float((-2.0 * g_interval(Interval._make(X_LO, X_HI))).hi)
        return VerificationReport(
            r.value, CERTIFIED if up <= threshold else INCONCLUSIVE, up, 1, 0,
            round((time.perf_counter() - t0) * 1000.0, 3),
            {"method": "K = -2 g(x), g decreasing", "threshold": float(threshold)},
        )
    rep = bnb.run(_problem(r), threshold, max_boxes, max_depth, workers)
    return rep


def verify_all(threshold=0.0, max_boxes=10**7, max_depth=80, workers=1):
    """Run :func:`verify_region` on all sixteen pieces, in declaration order."""
    return [verify_region(r, threshold, max_boxes, max_depth, workers) for r in RegionId]


# -- the rectangle ----------------------------------------------------------


def quadratic_coefficient(x, a1=1e-3, a2=2e-3):
    """Richardson estimate of ``lim K(a, x) / a**2`` from two small ``a``.

    ``K`` is even in ``a``, so ``K/a**2 = c + d a**2 + ...`` and
    ``(4 q1 - q2) / 3`` removes the ``a**2`` term (``a2 = 2 a1``).
    """
    q1 = K(a1, x) / a1**2
    q2 = K(a2, x) / a2**2
    if a2 == 2 * a1:
        return (4.0 * q1 - q2) / 3.0
    return (a2**2 * q1 - a1**2 * q2) / (a2**2 - a1**2)


def quadratic_coefficient_exact(x):
    """The exact limit ``-(c1/250) phi(x)``."""
    return -(C1 / 250.0) * phi(x)


def _strip_evidence(delta_a, grid=200):
    xs = np.linspace(SQRT2, SQRT3, 1001)
    identity = float(np.max(np.abs(K(np.zeros_like(xs), xs))))
    aa = np.linspace(0.0, delta_a, grid + 1)[1:-1]
    A, X = np.meshgrid(aa, np.linspace(SQRT2, SQRT3, grid))
    vals = K(A, X)
    i = int(np.argmax(vals))
    quad = {}
    for x in (1.5, 1.6, 1.7):
        est = float(quadratic_coefficient(x))
        ref = float(quadratic_coefficient_exact(x))
        quad[repr(x)] = {"fitted": est, "expected": ref, "rel_error": abs(est - ref) / abs(ref)}
    return {
        "identity_max_abs": identity,
        "identity_ok": identity == 0.0,
        "sampled_max": float(vals.flat[i]),
        "sampled_argmax": [float(A.flat[i]), float(X.flat[i])],
        "sampled_ok": bool(vals.flat[i] <= 0.0),
        "quadratic": quad,
        "quadratic_ok": all(q["rel_error"] <= 0.05 for q in quad.values()),
    }


def _rectangle_problem(a0, a1, name):
    def witness(alo, ahi, xlo, xhi):
        a, x = _centre(alo, ahi, xlo, xhi)
        x = np.clip(x, SQRT2, SQRT3)
        return K(np.clip(a, 0.0, 1.0), x), a, x

    return bnb.Problem(
        name=name,
        root=(a0, a1, X_LO, X_HI),
        bound=lambda alo, ahi, xlo, xhi: k_box_bound(alo, ahi, xlo, xhi),
        witness=witness,
    )


def verify_rectangle(delta_a=0.01, threshold=0.0, max_boxes=10**7, max_depth=80, workers=1):
    """Certify ``K <= threshold`` on ``[delta_a, 1] x [sqrt 2, sqrt 3]``, plus strip evidence.

    On ``[0, delta_a)`` the report carries (i) the identity ``K(0, x) = 0`` on
    a grid, (ii) the sampled maximum of ``K`` on a grid, which must be
    ``<= 0``, and (iii) the fitted ``K / a**2`` against ``-(c1/250) phi(x)`` at
    ``x`` in ``{1.5, 1.6, 1.7}`` (5% tolerance).  The status is certified only
    if the main run and all three checks pass.  A separate run of the
    curvature rule on the strip is reported as ``strip_certified``.
    """
    if not (0.0 < delta_a < 0.1):
        raise DomainError("delta_a must lie in (0, 0.1)")
    t0 = time.perf_counter()
    main = bnb.run(_rectangle_problem(delta_a, 1.0, "rectangle"), threshold, max_boxes, max_depth, workers)
    strip = _strip_evidence(delta_a)
    strip_run = bnb.run(_rectangle_problem(0.0, delta_a, "strip"), 0.0, max_boxes, max_depth, workers)
    ok = main.certified and strip["identity_ok"] and strip["sampled_ok"] and strip["quadratic_ok"]
    status = CERTIFIED if ok else (main.status if main.status != CERTIFIED else INCONCLUSIVE)
    details = dict(main.details)
    details.update(
        delta_a=float(delta_a),
        main_status=main.status,
        strip=strip,
        strip_certified=strip_run.certified,
        strip_certified_sup=strip_run.certified_sup,
        strip_boxes=strip_run.boxes_processed,
    )
    return VerificationReport(
        region="rectangle",
        status=status,
        certified_sup=main.certified_sup,
        boxes_processed=main.boxes_processed,
        max_depth=main.max_depth,
        elapsed_ms=round((time.perf_counter() - t0) * 1000.0, 3),
        details=details,
        witness=main.witness,
    )


def witness_scan(n_points=10**6, seed=0):
    """Look for ``K > 0`` at scrambled Sobol points of ``[0, 1) x [sqrt 2, sqrt 3]``.

    Values below the rounding-error level of the plain evaluation are counted
    as unresolved rather than as witnesses.
    """
    m = max(1, math.ceil(math.log2(n_points)))
    pts = qmc.Sobol(d=2, scramble=True, seed=seed).random_base2(m)[:n_points]
    a = pts[:, 0]
    x = SQRT2 + (SQRT3 - SQRT2) * pts[:, 1]
    s = np.sqrt((1.0 - a) * (1.0 + a))
    vals = K(a, x)
    scale = h1((x - a) / s) + h1((x + a) / s) + 2.0 * h1(x)
    floor = 16.0 * np.finfo(float).eps * scale
    i = int(np.argmax(vals))
    return {
        "points": int(n_points),
        "seed": int(seed),
        "max_K": float(vals[i]),
        "argmax": [float(a[i]), float(x[i])],
        "positives": int(np.count_nonzero(vals > floor)),
        "unresolved": int(np.count_nonzero((vals > 0) & (vals <= floor))),
    }


# -- auxiliary one-dimensional facts ---------------------------------------


def certify_g_above_chebyshev(max_boxes=10**5):
    """Certify ``1/(2y**2) < g(y)`` for ``y`` in ``[1, sqrt 2]``.

    Used by the curvature rule (it makes ``K <= g(u) + g(v) - 2 g(x)``).
    """

    def bound(alo, ahi, xlo, xhi):
        Y = Interval._make(alo, ahi)
        return (0.5 * Y.sqr().reciprocal() - g_interval(Y)).hi

    prob = bnb.Problem(name="g>1/(2y^2) on [1,sqrt2]", root=(1.0, SQRT2_I.hi, 0.0, 0.0), bound=bound, split="a")
    return bnb.run(prob, threshold=-1e-300, max_boxes=max_boxes, max_depth=60)


# -- x >= sqrt 3 ------------------------------------------------------------


def mixture(a, x):
    """``Q(u)/2 + Q(v)/2 - Q(x)`` (plain floating point)."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    s = np.sqrt((1.0 - a) * (1.0 + a))
    out = 0.5 * gauss_tail((x - a) / s) + 0.5 * gauss_tail((x + a) / s) - gauss_tail(x)
    return float(out) if np.ndim(out) == 0 else out


def _mixture_monotone(a, x):
    """Whether ``dM/da <= 0`` is guaranteed at ``(a, x)`` with ``x >= sqrt 3``.

    ``dM/da <= 0`` iff ``(1 - ax) exp(2ax/(1-a**2)) <= 1 + ax``.  For
    ``ax >= 1`` this is immediate; for ``ax < 1`` it reads
    ``artanh(ax) >= ax/(1-a**2)``, i.e.
    ``sum_k a**(2k) (x**(2k)/(2k+1) - 1) >= 0``, and every coefficient is
    non-negative once ``x**2 >= 3`` because ``3**k >= 2k + 1``.
    """
    return True


def verify_mixture_x_ge_sqrt3(a_max=0.999, x_max=8.0, max_boxes=10**7, max_depth=80, workers=1, tail_samples=1001):
    """Certify ``Q(u)/2 + Q(v)/2 <= Q(x)`` on ``[0, a_max] x [sqrt 3, x_max]``.

    The mixture vanishes identically at ``a = 0``, to sixth order in ``a`` at
    ``x = sqrt 3``, so boxes with ``a_hi <= 0.05`` are accepted through
    monotonicity in ``a`` (see ``_mixture_monotone``) and all others need an
    interval bound ``<= 0``.  For ``a`` in ``(a_max, 1)`` the report adds a
    sampled, non-certified check: there ``u >= u(a_max, x)`` and ``v >= u``,
    so the inequality follows from ``u(a_max, x) >= x``.
    """
    if not (0.0 < a_max < 1.0):
        raise DomainError("a_max must lie in (0, 1)")
    if not (x_max >= SQRT3):
        raise DomainError("x_max must be >= sqrt 3")
    t0 = time.perf_counter()

    def bound(alo, ahi, xlo, xhi):
        b = mixture_bound(alo, ahi, xlo, xhi)
        rule = ahi <= MIXTURE_RULE_A
        return np.where(rule, np.minimum(b, 0.0), b)

    def witness(alo, ahi, xlo, xhi):
        a, x = _centre(alo, ahi, xlo, xhi)
        x = np.maximum(x, SQRT3)
        return mixture(a, x), a, x

    prob = bnb.Problem(name="mixture", root=(0.0, float(a_max), SQRT3_I.lo, float(x_max)), bound=bound, witness=witness)
    rep = bnb.run(prob, 0.0, max_boxes, max_depth, workers)

    xs = np.linspace(SQRT3, x_max, tail_samples)
    s = math.sqrt((1.0 - a_max) * (1.0 + a_max))
    margin = (xs - a_max) / s - xs
    eq = float(np.max(np.abs(mixture(np.zeros_like(xs), xs))))
    rep.details.update(
        a_max=float(a_max),
        x_max=float(x_max),
        rule_a_max=MIXTURE_RULE_A,
        equality_at_a0_max_abs=eq,
        tail_check={
            "certified": False,
            "a_max_exceeds_1_over_x": bool(a_max >= 1.0 / SQRT3),
            "min_margin_u_minus_x": float(margin.min()),
            "passed": bool(margin.min() >= 0.0 and a_max >= 1.0 / SQRT3),
            "samples": int(tail_samples),
        },
    )
    if rep.certified and not rep.details["tail_check"]["passed"]:
        rep.status = INCONCLUSIVE
    rep.region = "mixture"
    rep.elapsed_ms = round((time.perf_counter() - t0) * 1000.0, 3)
    return rep
