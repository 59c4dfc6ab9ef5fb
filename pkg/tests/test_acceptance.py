"""Acceptance criteria, one test each.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible even under
output capture).  Run ``python tests/test_acceptance.py`` for the lines alone.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from radgauss import constants, exact_tail, gauss_tail, h, h1, random_weights, selfnorm_mc_tail
from radgauss.bounds import SQRT2, SQRT3, g
from radgauss.gaussian import _compute_constants
from radgauss.rademacher import equal_weights_tail, ratio_curve
from radgauss.verifier import edge_k, verify_induction, verify_mixture_x_ge_sqrt3, verify_rectangle, witness_scan

C = constants()


def _rel(a, b):
    return abs(a - b) / abs(b)


def criterion_1():
    t0 = time.perf_counter()
    c = _compute_constants()
    dt = time.perf_counter() - t0
    ratio = c.c2 / c.c1
    ok = (round(c.c1, 2) == 3.18 and round(c.c2, 2) == 3.22 and 1.012 <= ratio <= 1.013
          and round(c.c3, 2) == 4.46 and dt < 1.0)
    return ok, f"c1={c.c1:.6f} c2={c.c2:.6f} c2/c1={ratio:.6f} c3={c.c3:.6f} time={dt * 1e3:.1f}ms"


def criterion_2():
    t = exact_tail([1 / SQRT2, 1 / SQRT2], SQRT2)
    ratio = t / gauss_tail(SQRT2)
    ok = t == 0.25 and abs(ratio - C.c1) <= 1e-9
    return ok, f"tail={t!r} ratio-c1={ratio - C.c1:.3e}"


def criterion_3():
    e1 = 2 * 1.0**2 * h(1.0)
    e2 = 2 * SQRT2**2 * h(SQRT2)
    xs = np.linspace(1.0, SQRT2, 10_002)[1:-1]
    m = float(np.min(h(xs) / h1(xs)))
    ok = 1.012 <= e1 <= 1.022 and 1.012 <= e2 <= 1.022 and m >= 1.01
    return ok, f"2x^2 h(x): x=1 {e1:.5f}, x=sqrt2 {e2:.5f}; min h/h1={m:.5f}"


def criterion_4():
    vals = [
        ("g(sqrt2)-1/4", g(SQRT2) - 0.25, 2.8660e-3),
        ("K on GE at x*", edge_k("GE", C.x_star), -3.0133e-6),
        ("X13 corner", edge_k("X13", 2 * SQRT2 / 3), -0.25287),
    ]
    ok = all(_rel(v, ref) <= 1e-4 for _, v, ref in vals)
    return ok, "; ".join(f"{name}={v:.6g} (rel {_rel(v, ref):.1e})" for name, v, ref in vals)


def criterion_5():
    t0 = time.perf_counter()
    rep = verify_rectangle(delta_a=0.01, threshold=0.0)
    dt = time.perf_counter() - t0
    strip = rep.details["strip"]
    quad = strip["quadratic"]
    scan = witness_scan(10**6, seed=0)
    ok = rep.certified and rep.boxes_processed <= 10**7 and dt < 300 and strip["quadratic_ok"]
    worst = max(q["rel_error"] for q in quad.values())
    return ok, (f"status={rep.status} sup={rep.certified_sup:.3e} boxes={rep.boxes_processed} time={dt:.1f}s "
                f"strip: identity={strip['identity_ok']} sampled_max={strip['sampled_max']:.2e} "
                f"quad max rel err={worst:.1e}; scan positives={scan['positives']}/{scan['points']}")


def criterion_6():
    t0 = time.perf_counter()
    rep = verify_mixture_x_ge_sqrt3(0.999, 8.0)
    dt = time.perf_counter() - t0
    eq = rep.details["equality_at_a0_max_abs"]
    ok = rep.certified and dt < 120 and eq <= 1e-14
    return ok, f"status={rep.status} boxes={rep.boxes_processed} time={dt:.1f}s |M(0,x)|<={eq:.1e}"


def criterion_7():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    grid = np.round(np.arange(-100, 501) * 0.01, 12)
    bad = 0
    ties = 0
    ck = 0.0
    sup = -math.inf
    for _ in range(500):
        rep = verify_induction(random_weights(int(rng.integers(1, 23)), rng), grid)
        bad += not rep.certified
        ties += rep.details["ties"]
        ck = max(ck, rep.details["ck_max_residual"])
        sup = max(sup, rep.certified_sup)
    dt = time.perf_counter() - t0
    ok = bad == 0 and sup <= 0 and ck <= 1e-12 and dt < 600
    return ok, f"violations={bad} ties={ties} max(tail-bound)={sup:.3g} ck residual={ck:.1e} time={dt:.1f}s"


def _naive(a, xs):
    eps = np.array(list(itertools.product((1.0, -1.0), repeat=len(a))))
    s = eps @ a
    return np.count_nonzero(s[:, None] >= xs[None, :], axis=0) / float(len(s))


def criterion_8():
    rng = np.random.default_rng(8)
    mism = 0
    for _ in range(100):
        w = random_weights(int(rng.integers(1, 17)), rng)
        xs = rng.uniform(-2.5, 2.5, 20)
        mism += int(not np.array_equal(exact_tail(w, xs), _naive(w.values, xs)))
    worst = 0.0
    for x in np.arange(0.0, 6.01, 0.5):
        q, _ = integrate.quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi), x, np.inf,
                              epsabs=0, epsrel=1e-13, limit=200)
        worst = max(worst, _rel(gauss_tail(x), q))
    ok = mism == 0 and worst <= 1e-12
    return ok, f"MITM mismatches={mism}/100; max rel err of Q vs quadrature={worst:.1e}"


def criterion_9():
    n = 100
    xs = np.round(np.arange(1, 601) * 0.005, 12)
    pts = ratio_curve(np.ones(n), xs)
    tails = np.array([p.tail for p in pts])
    ratios = np.array([p.ratio for p in pts])
    # the tail may change between consecutive grid points only if an atom
    # (2k - n) * step lies in [x_i, x_{i+1}) (closed tail); compared exactly
    step = Fraction(math.sqrt(1.0 / n))
    atoms = [(2 * k - n) * step for k in range(n + 1)]
    jumps = np.diff(tails) != 0
    has_atom = np.array([any(Fraction(a) <= t < Fraction(b) for t in atoms) for a, b in zip(xs[:-1], xs[1:])])
    piecewise = bool(np.all(jumps == has_atom))
    ok_tail = np.array_equal(tails, equal_weights_tail(n, xs))
    interior = (ratios[1:-1] > ratios[:-2]) & (ratios[1:-1] >= ratios[2:])
    maxima = int(np.count_nonzero(interior))
    sup = float(ratios.max())
    ok = piecewise and ok_tail and maxima >= 10 and sup < C.c2
    return ok, f"piecewise={piecewise} local maxima={maxima} sup R={sup:.5f} < c2={C.c2:.5f}"


def criterion_10():
    out = []
    ok = True
    fams = [("symmetric-two-point", list(np.arange(1.0, 11.0))), ("symmetric-uniform", None),
            ("centered-gaussian", None)]
    for fam, params in fams:
        for x in (1.0, 2.0, 2.5):
            e = selfnorm_mc_tail(fam, params, 10, x, 10**6, seed=12345)
            good = e.estimate <= C.c2 * gauss_tail(x) + 5 * e.std_error
            ok &= good
            out.append(f"{fam.split('-')[-1]}@{x}:{e.estimate:.4f}")
    return ok, " ".join(out)


CRITERIA = [
    (1, "constants", criterion_1),
    (2, "two equal weights at sqrt 2", criterion_2),
    (3, "h against 1/(2x^2) on [1, sqrt 2]", criterion_3),
    (4, "spot values", criterion_4),
    (5, "certified rectangle", criterion_5),
    (6, "mixture inequality for x >= sqrt 3", criterion_6),
    (7, "induction sweep", criterion_7),
    (8, "oracle equivalence", criterion_8),
    (9, "equal-weight ratio curve, n = 100", criterion_9),
    (10, "self-normalized audit", criterion_10),
]


def _line(k, name, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d} ({name}): {detail}"


@pytest.mark.parametrize("k, name, fn", CRITERIA, ids=[f"criterion_{k}" for k, _, _ in CRITERIA])
def test_criterion(k, name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(k, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    for k, name, fn in CRITERIA:
        print(_line(k, name, *fn()), flush=True)
