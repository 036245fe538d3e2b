from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from conftest import eigen
from periodrh.criteria import (
    INCONCLUSIVE,
    SUFFICIENT_PASS,
    EigenTable,
    constellation_k0,
    criterion_constants,
    format_distance,
    main_criterion,
    positive_combination_check,
    probability_scan,
    scan_vectors,
    u_bound,
    u_bound_check,
    u_star,
)
from periodrh.errors import BudgetExceededError, InvalidArgumentError
from periodrh.modforms import linear_combination
from periodrh.zeros import UNIMODULAR, find_roots


def test_constants_at_120():
    a, b, g, d = criterion_constants(120, 1)
    with mp.workdps(50):
        assert abs(a - 4 * mpmath.exp(2 * mpmath.pi) / 2**30) < mpmath.mpf(10) ** -45
        assert abs(a - 1.99e-6) < 1e-8
        x = 2 * mpmath.pi
        assert abs(d - (mpmath.exp(-x) - x**60 / mpmath.factorial(60) * mpmath.exp(x))) < mpmath.mpf(10) ** -45
        assert abs(g - mpmath.exp(x) * x**30 / mpmath.factorial(30)) < mpmath.mpf(10) ** -45
    assert a + b + g < d


@pytest.mark.parametrize("k", [150, 180, 220, 300])
def test_published_constant_bounds(k):
    _, _, g, d = criterion_constants(k, 1)
    assert d > 0.001867
    assert g < 1e-10


def test_constants_on_grid():
    deltas = []
    for k in range(42, 301, 2):
        a, b, g, d = criterion_constants(k, 1)
        assert a > 0 and b > 0 and g > 0
        if k >= 52:
            assert d > 0
        deltas.append(d)
    # increasing until it saturates at e^(-2 pi) within the working digits
    assert all(y >= x for x, y in zip(deltas, deltas[1:]))
    assert deltas[0] < 0


def test_constants_errors():
    for k, N in ((10, 1), (13, 1), (24, 0), (24, 3)):
        with pytest.raises(InvalidArgumentError):
            criterion_constants(k, N)


def test_positive_combination_threshold():
    assert not positive_combination_check(110)
    assert positive_combination_check(120)
    assert all(positive_combination_check(k) for k in range(120, 301, 2))
    with pytest.raises(InvalidArgumentError):
        positive_combination_check(13)


def test_main_criterion_delta(delta):
    report = main_criterion(delta, direct_check=True)
    assert report.overall == INCONCLUSIVE
    assert not report.key_inequality_holds and not report.h_condition_holds
    assert report.zero_report.verdict == UNIMODULAR
    with mp.workdps(50):
        assert report.lhs == report.c_upper * report.alpha + report.c_upper * report.beta + report.gamma
    d = report.to_json_dict()
    assert d["direct_check"]["verdict"] == UNIMODULAR
    assert d["overall"] == INCONCLUSIVE


def test_main_criterion_large_weights():
    f120 = eigen(120)[1][0]
    r = main_criterion(f120, c_upper=1)
    assert r.overall == SUFFICIENT_PASS and r.reason == ""
    assert r.c_upper_source == "given"
    f110 = eigen(110)[1][0]
    r = main_criterion(f110, c_upper=1)
    assert r.overall == INCONCLUSIVE and r.h_condition_holds and not r.key_inequality_holds
    assert r.c_upper * r.beta > r.delta


def test_main_criterion_sources():
    assert main_criterion(eigen(24)[1][0]).c_upper_source == "deligne"
    g = linear_combination((1, 1), 24, forms=eigen(24)[1])
    assert main_criterion(g).c_upper_source == "deligne"


def test_u_bound_values():
    assert abs(u_bound(180) - 3.063e7) / 3.063e7 < 1e-3
    with mp.workdps(50):
        assert abs(u_bound(184) / u_bound(180) - 2) < mpmath.mpf(10) ** -40
    for k in (180, 200, 240):
        assert u_bound(k) < u_star(k)
    assert u_star(150) == 100


def test_u_bound_check_examples():
    r = u_bound_check([2, -1] + [0] * 13, 180)
    assert r.ineq_holds and r.theorem_applies
    assert r.sum_abs == 3 and r.abs_sum == 1
    assert not u_bound_check([1, -1, 2, -2], 180).ineq_holds
    r = u_bound_check([1, 2, 3], 180)
    assert r.c_minus == 0 and r.pm_condition_holds
    assert not u_bound_check([1], 120).theorem_applies
    with pytest.raises(InvalidArgumentError):
        u_bound_check([0, 0], 180)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-100, 100), min_size=1, max_size=20).filter(any), st.integers(90, 150))
def test_u_bound_conditions_agree(coeffs, half_k):
    # the C+/C- form and the sum form are equivalent for the same U
    r = u_bound_check(coeffs, 2 * half_k)
    assert r.c_plus >= 0 and r.c_minus >= 0
    assert r.ineq_holds == r.pm_condition_holds


def test_constellations():
    assert constellation_k0([1], []) == 180
    assert constellation_k0([1, 1], [1]) == 180
    with pytest.raises(InvalidArgumentError):
        constellation_k0([1], [1])
    with pytest.raises(InvalidArgumentError):
        constellation_k0([1, -1], [])


@settings(max_examples=40, deadline=None)
@given(st.floats(1.0, 1e6), st.floats(0.0, 1.0))
def test_constellation_k0_is_minimal(total_c, frac):
    # almost-balanced families push k0 upwards
    total_a = total_c * frac * (1 - 1e-9)
    k0 = constellation_k0([total_c], [total_a])
    assert k0 >= 180 and k0 % 2 == 0
    ratio = lambda k: (u_bound(k) - 1) / (u_bound(k) + 1)
    assert total_a <= ratio(k0) * total_c
    if k0 > 180:
        assert total_a > ratio(k0 - 2) * total_c
    # every member at k >= k0 passes the U-bound check
    assert u_bound_check([total_c, -total_a], k0).pm_condition_holds


def test_format_distance():
    assert format_distance(mpmath.mpf(10) ** -40, 64) == "<1e-32"
    assert format_distance(mpmath.mpf("0.00123"), 64) == "1.23e-3"


def test_scan_exhaustive_delta():
    res = probability_scan(12, 1, mode="exhaustive")
    assert res.total == 2 and res.p_hat == 1 and res.unimodular_count == 2
    assert [s.vector for s in res.records] == [(-1,), (1,)]
    assert res.soundness_violations == ()
    assert res.to_json_dict()["p_hat"] == "1/1"


def test_scan_weight_24():
    res = probability_scan(24, 1, mode="exhaustive")
    assert res.total == 8
    assert res.zero_sum_count == 2
    assert res.p_hat == Fraction(res.unimodular_count, 8)
    again = probability_scan(24, 1, mode="exhaustive")
    assert again.to_json_dict() == res.to_json_dict()


def test_scan_montecarlo_determinism():
    a = probability_scan(24, 3, samples=12, seed=5)
    b = probability_scan(24, 3, samples=12, seed=5)
    assert a.to_json_dict() == b.to_json_dict()
    assert scan_vectors(24, 3, "montecarlo", 12, 5) == scan_vectors(24, 3, "montecarlo", 12, 5)
    assert all(any(v) for v in scan_vectors(24, 3, "montecarlo", 50, 1))


def test_scan_workers_agree():
    a = probability_scan(24, 2, mode="exhaustive")
    b = probability_scan(24, 2, mode="exhaustive", workers=2)
    assert a.to_json_dict() == b.to_json_dict()


def test_scan_errors():
    with pytest.raises(BudgetExceededError):
        probability_scan(24, 10, mode="exhaustive", budget=100)
    with pytest.raises(InvalidArgumentError):
        probability_scan(24, 1)
    with pytest.raises(InvalidArgumentError):
        probability_scan(24, 0, mode="exhaustive")
    with pytest.raises(InvalidArgumentError):
        probability_scan(24, 1, mode="grid")


def test_scaling_invariance():
    table = EigenTable.build(36)
    for vec in ((1, -2, 3), (2, 1, 0)):
        base = find_roots(table.combine_p(vec))
        scaled = find_roots(table.combine_p(tuple(5 * c for c in vec)))
        assert base.verdict == scaled.verdict
        assert table.vanishing_order(vec) == table.vanishing_order(tuple(5 * c for c in vec))
    assert table.vanishing_order((1, -1, 0)) >= 2
