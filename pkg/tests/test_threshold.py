import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from shapthresh import functions as fn
from shapthresh.exceptions import DomainError, SpecError
from shapthresh.measures import influence, mu
from shapthresh.threshold import (
    banzhaf_shapley_report,
    influence_profile_scan,
    low_influence_point,
    p_alpha,
    shapley_interval_bound,
    shapley_interval_report,
    threshold_interval,
)

MAJ_NS = (5, 9, 13, 17, 21)


def test_p_alpha_examples():
    assert p_alpha(fn.and_(2), 0.5) == pytest.approx(math.sqrt(0.5), abs=1e-12)
    for n in (1, 3, 5, 9, 21):
        assert p_alpha(fn.majority(n), 0.5) == pytest.approx(0.5, abs=1e-12)
    assert p_alpha(fn.or_(2), 0.75) == pytest.approx(0.5, abs=1e-12)


def test_p_alpha_domain_errors():
    with pytest.raises(DomainError):
        p_alpha(fn.constant(3, 1), 0.5)
    with pytest.raises(DomainError):
        p_alpha(fn.parity(3), 0.5)
    with pytest.raises(SpecError):
        p_alpha(fn.majority(3), 1.0)


def test_dictator_interval():
    rep = threshold_interval(fn.dictator(1, 1), 0.1)
    assert rep.p_lo == pytest.approx(0.1, abs=1e-12)
    assert rep.p_hi == pytest.approx(0.9, abs=1e-12)
    assert rep.length == pytest.approx(0.8, abs=1e-12)
    assert rep.witness_set == [1]
    assert rep.min_max_influence == 1.0
    assert rep.grid_size == 101 and len(rep.grid) == 101


def test_tribes_closed_form_roots():
    rep = threshold_interval(fn.tribes(3, 3), 0.25)
    for alpha, got in ((0.25, rep.p_lo), (0.75, rep.p_hi)):
        want = brentq(lambda p: 1 - (1 - p**3) ** 3 - alpha, 0, 1, xtol=1e-15)
        assert got == pytest.approx(want, abs=1e-12)


def test_majority_scaling():
    consts = [threshold_interval(fn.majority(n), 1 / 3).length * math.sqrt(n) for n in MAJ_NS]
    assert max(consts) / min(consts) <= 1.5


def test_majority_length_decreases():
    assert threshold_interval(fn.majority(9), 1 / 3).length < threshold_interval(fn.majority(5), 1 / 3).length


def test_profile_scan_majority9():
    f = fn.majority(9)
    rep = influence_profile_scan(f, 1 / 3, 101)
    assert set(rep.witness_set) <= set(range(1, 10))
    assert rep.min_max_influence >= influence(f, 1, rep.p_lo) - 1e-15
    for row in rep.grid:
        assert row.max_influence == pytest.approx(influence(f, 1, row.p), abs=1e-15)


def test_profile_scan_tribes_exact():
    f = fn.tribes(2, 2)
    rep = influence_profile_scan(f, 0.3, 11)
    for row in rep.grid:
        # pivotal iff partner is 1 and the other tribe is not complete
        want = row.p * (1 - row.p**2)
        assert row.max_influence == pytest.approx(want, abs=1e-14)
        assert row.total_influence == pytest.approx(4 * want, abs=1e-14)
    assert rep.witness_set == [1]


def test_report_invariants(zoo):
    for f in zoo.values():
        if not f.is_monotone() or f.is_constant():
            continue
        rep = threshold_interval(f, 0.2, 11)
        assert abs(mu(f, rep.p_lo) - 0.2) <= 1e-10
        assert abs(mu(f, rep.p_hi) - 0.8) <= 1e-10
        assert rep.p_lo <= rep.p_hi


@settings(max_examples=20, deadline=None)
@given(a=st.floats(0.01, 0.98), b=st.floats(0.01, 0.98), n=st.sampled_from([3, 5, 9]))
def test_p_alpha_monotone_in_alpha(a, b, n):
    lo, hi = sorted((a, b))
    f = fn.majority(n)
    assert p_alpha(f, lo) <= p_alpha(f, hi) + 1e-12
    assert abs(mu(f, p_alpha(f, lo)) - lo) <= 1e-10


def test_interval_nesting():
    f = fn.tribes(3, 3)
    r1, r2 = threshold_interval(f, 0.05, 5), threshold_interval(f, 0.2, 5)
    assert r1.p_lo <= r2.p_lo and r2.p_hi <= r1.p_hi


def test_low_influence_point_examples():
    d = low_influence_point(fn.dictator(1, 1), 0.2, 0.8)
    assert d.total_influence == 1.0 and d.bound == pytest.approx(10.0) and d.within_bound
    a = low_influence_point(fn.and_(2), 0.5, 0.9)
    assert a.p == 0.5
    f = fn.majority(9)
    rep = threshold_interval(f, 1 / 3)
    lip = low_influence_point(f, rep.p_lo, rep.p_hi)
    assert lip.total_influence <= 6 * rep.s


def test_shapley_interval_report():
    r = shapley_interval_report(fn.dictator(1, 1), 0.1)
    assert r.vacuous and r.ratio is None and r.max_shapley == 1.0
    t = shapley_interval_report(fn.tribes(3, 3), 1 / 3)
    assert t.max_shapley == pytest.approx(1 / 9, abs=1e-12) and not t.vacuous
    assert t.witness_inequality_holds
    ratios = [shapley_interval_report(fn.majority(n), 1 / 3).ratio for n in MAJ_NS]
    assert all(math.isfinite(x) and x > 0 for x in ratios)
    assert max(ratios) / min(ratios) < 3


def test_banzhaf_shapley_report():
    f = fn.majority(9)
    r = banzhaf_shapley_report(f, 0.25)
    assert r.max_banzhaf == pytest.approx(math.comb(8, 4) / 256, abs=1e-15)
    assert r.max_shapley == pytest.approx(1 / 9, abs=1e-12)
    assert r.empirical_constant is not None
    jt = banzhaf_shapley_report(fn.judge_or_tribes(16, 0.1, 4, 4), 0.25)
    assert jt.argmax_shapley == 1
    d = banzhaf_shapley_report(fn.dictator(1, 1), 0.25)
    assert d.vacuous and d.empirical_constant is None
    with pytest.raises(DomainError):
        banzhaf_shapley_report(fn.and_(4), 0.1)


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
def test_interval_bound_monotone_builtins(zoo, eps):
    for f in zoo.values():
        if f.is_monotone() and not f.is_constant():
            chk = shapley_interval_bound(f, eps)
            assert chk.holds, (f.name, chk)


def test_report_serialisation():
    rep = threshold_interval(fn.majority(5), 0.1, 5)
    data = json.loads(rep.to_json())
    assert data["grid_size"] == 5 and len(data["grid"]) == 5
    lines = rep.to_csv().strip().split("\n")
    assert lines[0] == "p,max_influence,argmax,total_influence" and len(lines) == 6
    assert float(lines[1].split(",")[0]) == rep.p_lo
