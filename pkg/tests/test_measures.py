from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shapthresh import functions as fn
from shapthresh.exceptions import SpecError
from shapthresh.functions import BooleanFunction
from shapthresh.measures import (
    influence,
    influences,
    STREAM_SIZE,
    moments,
    mu,
    mu_derivative,
    sample_cube,
    sample_mu,
    signed_influence,
    stream_rng,
    total_influence,
)

from conftest import brute_influence, brute_mu


def test_mu_examples():
    assert mu(fn.and_(2), 0.5) == pytest.approx(0.25, abs=1e-15)
    assert mu(fn.and_(2), 0.3) == pytest.approx(0.09, abs=1e-15)
    assert mu(fn.tribes(2, 2), 0.5) == pytest.approx(0.4375, abs=1e-15)
    assert mu(fn.majority(3), 0.5) == pytest.approx(0.5, abs=1e-15)


def test_influence_examples():
    assert influence(fn.majority(3), 1, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert influence(fn.and_(2), 1, 0.3) == pytest.approx(0.3, abs=1e-15)
    d = fn.dictator(5, 1)
    for p in (0.1, 0.5, 0.77):
        assert influence(d, 3, p) == 0.0


def test_total_influence_examples():
    assert total_influence(fn.and_(2), 0.5) == pytest.approx(1.0, abs=1e-15)
    assert total_influence(fn.majority(3), 0.5) == pytest.approx(1.5, abs=1e-15)
    for n in (1, 3, 6):
        assert total_influence(fn.parity(n), 0.5) == pytest.approx(n, abs=1e-12)


def test_mu_derivative_examples():
    assert mu_derivative(fn.and_(2), 0.5) == pytest.approx(1.0, abs=1e-14)
    assert mu_derivative(fn.majority(3), 0.5) == pytest.approx(1.5, abs=1e-14)
    assert mu_derivative(fn.or_(2), 0.25) == pytest.approx(1.5, abs=1e-14)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_bias_out_of_range(p):
    with pytest.raises(SpecError):
        mu(fn.and_(2), p)
    with pytest.raises(SpecError):
        influence(fn.and_(2), 1, p)


def test_coordinate_out_of_range():
    with pytest.raises(SpecError):
        influence(fn.and_(2), 0, 0.5)
    with pytest.raises(SpecError):
        influence(fn.and_(2), 3, 0.5)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(1, 8),
    seed=st.integers(0, 2**32 - 1),
    num=st.integers(1, 19),
)
def test_pivot_influence_matches_definition(n, seed, num):
    table = np.random.default_rng(seed).random(1 << n) < 0.5
    f = BooleanFunction(n, table)
    p = Fraction(num, 20)
    for k in range(1, n + 1):
        assert influence(f, k, float(p)) == pytest.approx(float(brute_influence(table, n, k, p)), abs=1e-12)
    assert mu(f, float(p)) == pytest.approx(float(brute_mu(table, n, p)), abs=1e-12)


def test_pivot_influence_n10(rng):
    table = rng.random(1 << 10) < 0.4
    f = BooleanFunction(10, table)
    p = Fraction(3, 10)
    for k in (1, 5, 10):
        assert influence(f, k, 0.3) == pytest.approx(float(brute_influence(table, 10, k, p)), abs=1e-12)


def test_russo_on_monotone_builtins(zoo):
    worst = 0.0
    for f in zoo.values():
        if not f.is_monotone():
            continue
        for k in range(1, 100):
            p = k / 100
            worst = max(worst, abs(mu_derivative(f, p) - total_influence(f, p)))
    assert worst <= 1e-9


def test_russo_signed_for_non_monotone():
    f = fn.parity(3)
    for p in (0.2, 0.5, 0.7):
        signed = sum(signed_influence(f, k, p) for k in range(1, 4))
        assert mu_derivative(f, p) == pytest.approx(signed, abs=1e-12)


def test_mu_monotone_in_p(zoo):
    grid = np.linspace(0.01, 0.99, 50)
    for f in zoo.values():
        if f.is_monotone() and not f.is_constant():
            vals = [mu(f, p) for p in grid]
            assert all(b > a for a, b in zip(vals, vals[1:])), f.name


@pytest.mark.parametrize("n", [3, 5, 9])
def test_majority_influences_equal(n):
    inf = influences(fn.majority(n), 0.37)
    assert np.all(inf == inf[0])


def test_moments_invariants(zoo):
    for f in zoo.values():
        m = moments(f, 0.4)
        assert 0.0 <= m.mu <= 1.0
        assert np.all((m.influences >= 0) & (m.influences <= 1))
        assert abs(m.total_influence - sum(m.influences)) <= 1e-12
        if f.is_monotone():
            assert abs(m.mu_derivative - m.total_influence) <= 1e-9


def _within(est, exact, k=4):
    return abs(est.estimate - exact) <= k * est.stderr


def test_sample_mu_constant():
    one = fn.constant(3, 1)
    est = sample_mu(one, 3, 0.3, 1000, seed=7)
    assert est.estimate == 1.0 and est.stderr == 0.0


def test_sample_mu_and2():
    est = sample_mu(fn.and_(2), 2, 0.5, 10**5, seed=11)
    assert _within(est, 0.25)


def test_sample_mu_majority9():
    f = fn.majority(9)
    est = sample_mu(f, 9, 0.6, 10**5, seed=3)
    assert _within(est, mu(f, 0.6))


def test_sample_mu_deterministic():
    f = fn.tribes(3, 3)
    a = sample_mu(f, 9, 0.5, 20000, seed=5)
    b = sample_mu(f, 9, 0.5, 20000, seed=5)
    c = sample_mu(f, 9, 0.5, 20000, seed=6)
    assert a == b
    assert a != c


def test_sample_mu_streams_reconstruct():
    # two full streams keyed by (seed, 0) and (seed, 1)
    f = fn.majority(5)
    est = sample_mu(f, 5, 0.5, 2 * STREAM_SIZE, seed=1)
    vals = np.concatenate([f(sample_cube(stream_rng(1, j), 5, 0.5, STREAM_SIZE)) for j in (0, 1)])
    assert est.estimate == vals.mean()
