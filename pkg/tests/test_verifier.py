import math

import numpy as np
import pytest

from radgauss import K, constants, exact_tail, g, h1, normalize, phi
from radgauss.bounds import SQRT2, SQRT3
from radgauss.errors import DomainError
from radgauss.verifier import (
    RegionId,
    boundary_u,
    boundary_u_lower_root,
    boundary_u_upper_root,
    boundary_v_root,
    certify_g_above_chebyshev,
    edge_k,
    mixture,
    quadratic_coefficient,
    region_of,
    search_worst_ratio,
    verify_induction,
    verify_mixture_x_ge_sqrt3,
    verify_rectangle,
    verify_region,
    witness_scan,
)
from radgauss.verifier import bnb
from radgauss.verifier.enclosures import curvature_bound, k_box_bound, mixture_bound
from radgauss.verifier.certify import _interior_predicate, _problem

C = constants()
X_STAR = C.x_star
INV_SQRT3 = 1 / SQRT3


# -- geometry ---------------------------------------------------------------


def test_region_of_examples():
    assert region_of(0, 1.6) is RegionId.A1
    assert region_of(1, 1.5) is RegionId.A2
    assert region_of(0.2, SQRT3) is RegionId.X2
    assert region_of(0.5, SQRT2) is RegionId.X11
    assert region_of(0.8, SQRT2) is RegionId.X12
    assert region_of(0.95, SQRT2) is RegionId.X13
    assert region_of(boundary_u_lower_root(1.5), 1.5) is RegionId.ELe
    assert region_of(boundary_v_root(1.65), 1.65) is RegionId.GE
    assert region_of(boundary_u_lower_root(1.65), 1.65) is RegionId.EG1
    assert region_of(boundary_u_upper_root(1.5), 1.5) is RegionId.EG2
    for a, x in [(-0.1, 1.5), (1.1, 1.5), (0.5, 1.0), (0.5, 2.0)]:
        with pytest.raises(DomainError):
            region_of(a, x)
    assert RegionId.parse("gl1") is RegionId.GL1
    with pytest.raises(DomainError):
        RegionId.parse("nope")


def test_region_cover_agrees_with_direct_comparisons():
    tags = set()
    for a in np.linspace(0, 1, 400):
        for x in np.linspace(SQRT2, SQRT3, 400):
            r = region_of(a, x)
            tags.add(r)
            if 0 < a < 1 and SQRT2 < x < SQRT3 and r.value[:2] in ("LL", "LG", "GL", "GG"):
                s = math.sqrt((1 - a) * (1 + a))
                uu, vv = (x - a) / s, (x + a) / s
                assert (r.value[0] == "L") == (uu < SQRT2)
                if r is not RegionId.LLe:
                    assert (r.value[1] == "G") == (vv > SQRT3)
                assert bool(_interior_predicate(r, np.array(a), np.array(x)))
    assert {RegionId.LLe, RegionId.LG, RegionId.GL1, RegionId.GL2, RegionId.GG1, RegionId.GG2, RegionId.A1,
            RegionId.A2, RegionId.X2} <= tags


def test_boundary_roots():
    xs = np.linspace(SQRT2, SQRT3, 201)
    lo, hi = boundary_u(xs)
    for a in (lo, hi):
        ok = (a >= 0) & (a < 1)
        s = np.sqrt(1 - a[ok] ** 2)
        np.testing.assert_allclose((xs[ok] - a[ok]) / s, SQRT2, atol=1e-12)
    a = boundary_v_root(xs)
    np.testing.assert_allclose((xs + a) / np.sqrt(1 - a * a), SQRT3, atol=1e-12)
    assert abs(boundary_u_lower_root(SQRT2)) < 1e-15
    assert abs(boundary_u_lower_root(X_STAR) - boundary_v_root(X_STAR)) < 1e-10


def test_edge_spot_values():
    assert abs(edge_k("ELe", SQRT2)) < 1e-15
    assert edge_k("GE", X_STAR) == pytest.approx(-3.0133e-6, rel=1e-4)
    assert abs(edge_k("GE", SQRT3)) < 1e-15
    assert edge_k("X13", 2 * SQRT2 / 3) == pytest.approx(-0.25287, rel=1e-4)
    assert edge_k("X11", 1e-9) == pytest.approx(0.25 - g(SQRT2), abs=1e-9)
    assert edge_k("A2", 1.6) == -2 * g(1.6)
    with pytest.raises(DomainError):
        edge_k("GL1", 1.5)


# -- enclosures -------------------------------------------------------------


def _sample_boxes(rng, count, amax=1.0):
    alo = rng.uniform(0, amax, count)
    ahi = np.minimum(alo + rng.uniform(0, 0.05, count), 0.999)
    xlo = rng.uniform(SQRT2, SQRT3 - 1e-3, count)
    xhi = np.minimum(xlo + rng.uniform(0, 0.02, count), SQRT3)
    return alo, ahi, xlo, xhi


def _grid_points(box, k=5):
    alo, ahi, xlo, xhi = box
    s = np.linspace(0, 1, k)
    A = np.minimum(alo[:, None, None] + s[None, :, None] * (ahi - alo)[:, None, None], ahi[:, None, None])
    X = np.minimum(xlo[:, None, None] + s[None, None, :] * (xhi - xlo)[:, None, None], xhi[:, None, None])
    return np.broadcast_arrays(A, X)


def test_box_bound_dominates_samples():
    rng = np.random.default_rng(0)
    box = _sample_boxes(rng, 3000)
    ub = k_box_bound(*box)
    A, X = _grid_points(box)
    assert np.all(K(A, X).reshape(len(ub), -1).max(axis=1) <= ub)


def test_box_bound_near_zero_dominates_samples():
    rng = np.random.default_rng(1)
    box = _sample_boxes(rng, 3000, amax=0.03)
    ub = k_box_bound(*box)
    cb = curvature_bound(*box)
    assert np.isfinite(cb).mean() > 0.1
    A, X = _grid_points(box)
    assert np.all(K(A, X).reshape(len(ub), -1).max(axis=1) <= ub)


@pytest.mark.parametrize("tag", ["LLe", "LG", "GL1", "GL2", "GG1", "GG2"])
def test_region_bounds_dominate_samples_inside_region(tag):
    r = RegionId.parse(tag)
    prob = _problem(r)
    rng = np.random.default_rng(7)
    box = _sample_boxes(rng, 2000)
    ub = prob.bound(*box)
    A, X = _grid_points(box)
    vals = np.where(_interior_predicate(r, A, X), K(A, X), -np.inf)
    assert np.all(vals.reshape(len(ub), -1).max(axis=1) <= ub)


def test_mixture_bound_dominates_samples():
    rng = np.random.default_rng(3)
    alo = rng.uniform(0, 0.99, 2000)
    ahi = np.minimum(alo + rng.uniform(0, 0.05, 2000), 0.999)
    xlo = rng.uniform(SQRT3, 7.9, 2000)
    xhi = xlo + rng.uniform(0, 0.1, 2000)
    ub = mixture_bound(alo, ahi, xlo, xhi)
    A, X = _grid_points((alo, ahi, xlo, xhi))
    assert np.all(mixture(A, X).reshape(len(ub), -1).max(axis=1) <= ub)


# -- certification ----------------------------------------------------------


@pytest.mark.parametrize("tag", [r.value for r in RegionId])
def test_every_region_certified(tag):
    rep = verify_region(tag)
    assert rep.status == "certified", rep.to_dict()
    assert rep.certified_sup <= 0.0
    assert rep.boxes_processed >= 1


def test_trivial_regions():
    rep = verify_region("A1", max_boxes=1)
    assert rep.certified and rep.certified_sup == 0.0
    rep = verify_region("A2")
    assert rep.certified and rep.certified_sup < -2 * g(SQRT3) + 1e-12


def test_budget_exhaustion_is_inconclusive():
    rep = verify_region("GL1", max_boxes=50)
    assert rep.status == "inconclusive"
    rep = verify_region("GL1", max_depth=3)
    assert rep.status == "inconclusive"
    with pytest.raises(DomainError):
        verify_region("GL1", threshold=-1.0)


def test_refutation_carries_witness():
    prob = bnb.Problem(
        name="toy",
        root=(0.0, 1.0, 0.0, 1.0),
        bound=lambda alo, ahi, xlo, xhi: ahi - 0.5,
        witness=lambda alo, ahi, xlo, xhi: (0.5 * (alo + ahi) - 0.5, 0.5 * (alo + ahi), 0.5 * (xlo + xhi)),
    )
    rep = bnb.run(prob)
    assert rep.status == "refuted"
    assert rep.witness["value"] > 0 and rep.witness["a"] > 0.5


def test_determinism_across_workers():
    r1 = verify_region("GL2", workers=1).to_dict(timing=False)
    r4 = verify_region("GL2", workers=4).to_dict(timing=False)
    assert r1 == r4


def test_rectangle_validation_and_strip_helpers():
    with pytest.raises(DomainError):
        verify_rectangle(0.0)
    with pytest.raises(DomainError):
        verify_rectangle(0.2)
    assert K(0.5, 1.5) < 0
    for x in (1.5, 1.6, 1.7):
        ref = -(C.c1 / 250) * phi(x)
        assert abs(quadratic_coefficient(x) - ref) <= 0.05 * abs(ref)


def test_witness_scan_small():
    res = witness_scan(4096, seed=1)
    assert res["points"] == 4096 and res["positives"] == 0


def test_g_above_chebyshev():
    rep = certify_g_above_chebyshev()
    assert rep.certified and rep.certified_sup < 0


def test_mixture_points_and_validation():
    assert mixture(0.0, 2.0) == 0.0
    assert mixture(0.5, SQRT3) < 0
    with pytest.raises(DomainError):
        verify_mixture_x_ge_sqrt3(a_max=1.0)
    with pytest.raises(DomainError):
        verify_mixture_x_ge_sqrt3(x_max=1.5)


def test_mixture_small_run():
    rep = verify_mixture_x_ge_sqrt3(0.9, 4.0)
    assert rep.certified
    assert rep.details["tail_check"]["passed"] and not rep.details["tail_check"]["certified"]


# -- induction and search ---------------------------------------------------


def test_induction_examples():
    grid = np.r_[np.round(np.arange(-100, 501) * 0.01, 12), SQRT2]
    rep = verify_induction([1, 1], grid)
    assert rep.certified
    assert exact_tail([1, 1], SQRT2) == 0.25 <= h1(SQRT2)
    rep = verify_induction([1], [0.5])
    assert rep.certified and rep.certified_sup == 0.0
    rng = np.random.default_rng(4)
    rep = verify_induction(np.abs(rng.standard_normal(10)), grid)
    assert rep.certified and rep.details["ck_max_residual"] <= 1e-12
    assert rep.details["mitm_max_diff"] == 0.0


def test_induction_rejects_large_n_and_empty_grid():
    with pytest.raises(DomainError):
        verify_induction(np.ones(27), [0.0])
    with pytest.raises(DomainError):
        verify_induction([1], [])


def test_search_examples():
    w, r = search_worst_ratio(2, SQRT2)
    np.testing.assert_allclose(w.values, normalize([1, 1]).values)
    assert abs(r - C.c1) <= 1e-6
    w, r = search_worst_ratio(1, 0.5)
    assert r == pytest.approx(0.5 / (1 - 0.6914624612740131), rel=1e-12)
    w, r = search_worst_ratio(6, SQRT2)
    assert r <= C.c2
    assert abs(r - C.c1) <= 1e-6
    assert search_worst_ratio(5, 1.3, restarts=2, seed=3) == search_worst_ratio(5, 1.3, restarts=2, seed=3)
    with pytest.raises(DomainError):
        search_worst_ratio(21, 1.0)
