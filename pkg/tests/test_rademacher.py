import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radgauss import (
    Weights,
    atom_distribution,
    constants,
    equal_weights_tail,
    exact_tail,
    gauss_tail,
    h1,
    mc_tail,
    normalize,
    random_weights,
    ratio_curve,
    selfnorm_mc_tail,
)
from radgauss.errors import BudgetError, DomainError

C = constants()
SQRT2 = math.sqrt(2.0)


def naive_tail(a, x):
    eps = np.array(list(itertools.product((1.0, -1.0), repeat=len(a))))
    sums = eps @ np.asarray(a)
    return np.count_nonzero(sums[:, None] >= np.asarray(x)[None, :], axis=0) / float(len(sums))


def test_normalize_examples():
    w = normalize([1, 1])
    np.testing.assert_allclose(w.values, [1 / SQRT2, 1 / SQRT2], rtol=0, atol=2e-16)
    assert 2 * w.values[0] == SQRT2
    np.testing.assert_allclose(normalize([-3, 4]).values, [0.8, 0.6], rtol=1e-15)
    assert normalize([1]).values.tolist() == [1.0]
    with pytest.raises(DomainError):
        normalize([0, 0])
    with pytest.raises(DomainError):
        normalize([1, float("nan")])


def test_weights_validation_and_immutability():
    w = normalize([3, 1, 2])
    assert w.n == 3 and len(w) == 3
    assert np.all(np.diff(w.values) <= 0)
    with pytest.raises(ValueError):
        w.values[0] = 0.0
    with pytest.raises(DomainError):
        Weights([0.6, 0.8])
    with pytest.raises(DomainError):
        Weights([1.0, 1.0])
    assert normalize([2, 2, 2]).is_equal


def test_exact_tail_examples():
    assert exact_tail([1, 1], SQRT2) == 0.25
    assert exact_tail([1], 0.0) == 0.5
    assert exact_tail([0.6, 0.8], -3.0) == 1.0
    assert exact_tail([1, 1], SQRT2, strict=True) == 0.0
    assert exact_tail([1, 1], np.array([0.0, 3.0])).tolist() == [0.75, 0.0]


def test_exact_tail_budget():
    with pytest.raises(BudgetError):
        exact_tail(np.ones(41), 0.0)


def test_mitm_matches_naive_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 17))
        w = random_weights(n, rng)
        xs = rng.uniform(-3, 3, 20)
        assert np.array_equal(exact_tail(w, xs), naive_tail(w.values, xs))


def test_atom_distribution():
    d = atom_distribution([1, 1])
    assert len(d) == 3
    np.testing.assert_allclose(d.locations, [-SQRT2, 0.0, SQRT2], atol=1e-15)
    assert d.masses.tolist() == [0.25, 0.5, 0.25]
    assert atom_distribution([1]).items() == [(-1.0, 0.5), (1.0, 0.5)]
    d4 = atom_distribution(np.ones(4))
    assert (d4.masses * 16).tolist() == [1, 4, 6, 4, 1]
    with pytest.raises(BudgetError):
        atom_distribution(np.ones(27))


def test_atoms_symmetric_and_match_tail():
    rng = np.random.default_rng(5)
    for _ in range(20):
        w = random_weights(int(rng.integers(1, 14)), rng)
        d = atom_distribution(w)
        assert math.fsum(d.masses) == pytest.approx(1.0, abs=1e-12)
        assert np.all(np.diff(d.locations) > 0)
        np.testing.assert_allclose(d.locations, -d.locations[::-1], atol=1e-15)
        np.testing.assert_array_equal(d.masses, d.masses[::-1])
        xs = rng.uniform(-2, 2, 30)
        np.testing.assert_array_equal(d.tail(xs), exact_tail(w, xs))
        np.testing.assert_allclose(exact_tail(w, -xs), 1 - d.tail(xs, strict=True), rtol=0, atol=1e-15)


def test_equal_weights_tail():
    assert equal_weights_tail(2, SQRT2) == 0.25
    expected = Fraction(1, 2) + Fraction(math.comb(100, 50), 2**101)
    assert equal_weights_tail(100, 0.0) == float(expected)
    xs = np.linspace(-4.3, 4.3, 173)
    np.testing.assert_array_equal(equal_weights_tail(16, xs), exact_tail(np.ones(16), xs))
    with pytest.raises(DomainError):
        equal_weights_tail(0, 1.0)


def test_ratio_curve_examples():
    (p,) = ratio_curve([1, 1], [SQRT2])
    assert p.tail == 0.25
    assert abs(p.ratio - C.c1) <= 1e-9
    (p,) = ratio_curve([0.3, 0.4, 0.5], [-5.0])
    assert p.tail == 1.0 and p.ratio == pytest.approx(1 / gauss_tail(-5.0))
    pts = ratio_curve(np.ones(100), np.round(np.arange(1, 601) * 0.005, 12))
    assert max(q.ratio for q in pts) < C.c2
    with pytest.raises(DomainError):
        ratio_curve([1], [])


def test_chebyshev_monotone_and_majorant():
    rng = np.random.default_rng(2)
    xs = np.round(np.arange(-100, 501) * 0.01, 12)
    pos = xs > 0
    for _ in range(30):
        w = random_weights(int(rng.integers(1, 15)), rng)
        t = exact_tail(w, xs)
        assert np.all(np.diff(t) <= 0)
        assert np.all(t[pos] <= 0.5 / xs[pos] ** 2)
        assert np.all(t <= h1(xs))
        assert np.all(t <= C.c2 * gauss_tail(xs))


def test_mc_tail():
    e = mc_tail([1], 0.0, 100_000, seed=3)
    assert abs(e.estimate - 0.5) <= 5 * e.std_error
    assert e.std_error == pytest.approx(math.sqrt(e.estimate * (1 - e.estimate) / e.samples))
    e = mc_tail([1, 1], SQRT2, 100_000, seed=4)
    assert abs(e.estimate - 0.25) <= 5 * e.std_error
    e = mc_tail(np.ones(1000), 2.0, 20_000, seed=5)
    assert abs(e.estimate - equal_weights_tail(1000, 2.0)) <= 5 * e.std_error
    assert mc_tail([1, 2], 0.5, 5000, seed=9) == mc_tail([1, 2], 0.5, 5000, seed=9)
    with pytest.raises(DomainError):
        mc_tail([1], 0.0, 0)


def test_selfnorm_examples():
    e = selfnorm_mc_tail("symmetric-two-point", [1 / SQRT2, 1 / SQRT2], 2, SQRT2, 100_000, seed=1)
    assert abs(e.estimate - 0.25) <= 5 * e.std_error
    e = selfnorm_mc_tail("centered-gaussian", [], 5, 0.0, 100_000, seed=2)
    assert abs(e.estimate - 0.5) <= 5 * e.std_error
    e = selfnorm_mc_tail("symmetric-uniform", None, 10, 2.0, 100_000, seed=3)
    assert e.estimate <= C.c2 * gauss_tail(2.0) + 5 * e.std_error
    with pytest.raises(DomainError):
        selfnorm_mc_tail("cauchy", [], 3, 1.0, 10)
    with pytest.raises(DomainError):
        selfnorm_mc_tail("two-point", [1.0], 3, 1.0, 10)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.01, 10), min_size=1, max_size=12), st.floats(-3, 3))
def test_tail_property_against_naive(vals, x):
    w = normalize(vals)
    assert exact_tail(w, x) == naive_tail(w.values, [x])[0]
