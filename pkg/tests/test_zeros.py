import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from oracles import poly_from_roots
from periodrh.errors import InvalidArgumentError
from periodrh.periodpoly import half_polynomial_q, modified_polynomial_p
from periodrh.zeros import (
    IN_DISK,
    NEITHER,
    UNIMODULAR,
    classify,
    eq_h2,
    find_roots,
    h_disk_criterion,
    h_root_guesses,
    h_zero_report,
    is_self_reciprocal,
    sample_t_lower_bound,
    t_lower_bound,
    truncated_exp,
    unimodularity_report,
)


def _matched(found, expected):
    """Max distance under a greedy matching of two root lists."""
    rest = list(found)
    worst = 0
    for e in expected:
        i = min(range(len(rest)), key=lambda j: abs(rest[j] - e))
        worst = max(worst, abs(rest.pop(i) - e))
    return worst


def test_simple_verdicts():
    r = unimodularity_report([1, 0, 1])
    assert r.verdict == UNIMODULAR and r.reliable and r.degree == 2
    assert r.self_reciprocal and r.cohn_check
    assert _matched(r.roots, [1j, -1j]) < 1e-60
    r = unimodularity_report([1, -2.5, 1])  # (z - 2)(z - 1/2)
    assert r.verdict == NEITHER
    assert _matched(r.roots, [2, 0.5]) < 1e-60
    r = find_roots([1, -3, 1])
    with mp.workdps(80):
        golden = (3 + mpmath.sqrt(5)) / 2
        assert _matched(r.roots, [golden, 1 / golden]) < 1e-60
    assert find_roots([0.25, 0, 1]).verdict == IN_DISK


def test_classify_tolerance():
    assert classify([mpmath.mpf(1) + 1e-12], 1e-10)[2] == UNIMODULAR
    assert classify([mpmath.mpf("0.5")], 1e-10)[2] == IN_DISK
    assert classify([mpmath.mpf(1) + 1e-8], 1e-10)[2] == NEITHER


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.tuples(st.floats(0.2, 3), st.floats(-math.pi, math.pi)),
        min_size=1,
        max_size=12,
    ).filter(lambda rs: all(abs(cmath.rect(*a) - cmath.rect(*b)) > 1e-3 for i, a in enumerate(rs) for b in rs[:i]))
)
def test_recovers_prescribed_roots(polar):
    with mp.workdps(80):
        roots = [mpmath.mpc(cmath.rect(r, t)) for r, t in polar]
        coeffs = poly_from_roots(roots)
        report = find_roots(coeffs, precision=64)
        assert report.reliable
        assert _matched(report.roots, roots) < 1e-40


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.floats(0.01, 3.13), min_size=1, max_size=10).filter(
        lambda ts: all(abs(a - b) > 1e-3 for i, a in enumerate(ts) for b in ts[:i])
    )
)
def test_unimodular_products_are_detected(angles):
    with mp.workdps(80):
        roots = []
        for t in angles:
            roots += [mpmath.expjpi(t / math.pi), mpmath.expjpi(-t / math.pi)]
        coeffs = [mpmath.re(c) for c in poly_from_roots(roots)]
        report = unimodularity_report(coeffs)
    assert report.self_reciprocal
    assert report.verdict == UNIMODULAR
    assert report.cohn_check


def test_seed_determinism():
    coeffs = [3, -1, 4, 1, -5, 9, 2, -6]
    a, b = find_roots(coeffs, seed=11), find_roots(coeffs, seed=11)
    assert a.roots == b.roots and a.residuals == b.residuals
    c = find_roots(coeffs, seed=12)
    assert _matched(c.roots, a.roots) < 1e-50


def test_stripping_and_zero_roots():
    r = find_roots([0, 0, 1, 0, 1])
    assert r.zero_roots == 2 and r.degree == 4
    assert sum(1 for z in r.roots if z == 0) == 2
    r = find_roots([1, 0, 1, mpmath.mpf(10) ** -50])
    assert r.dropped_leading == 1 and r.degree == 2
    r = find_roots([1, 0, 1, mpmath.mpf(10) ** -50], strip=False)
    assert r.dropped_leading == 0 and r.degree == 3
    with pytest.raises(InvalidArgumentError):
        find_roots([])
    with pytest.raises(InvalidArgumentError):
        find_roots([0, 0])
    with pytest.raises(InvalidArgumentError):
        find_roots([5])


def test_reversal_inverts_roots():
    coeffs = [2, -3, 5, 7, -1, 4]
    a = find_roots(coeffs)
    b = find_roots(list(reversed(coeffs)))
    with mp.workdps(60):
        assert _matched([1 / z for z in a.roots], b.roots) < 1e-40


def test_self_reciprocal_detection():
    assert is_self_reciprocal([1, 2, 1])
    assert is_self_reciprocal([1, 0, -1])
    assert not is_self_reciprocal([1, 2, 3])


def test_report_json_and_csv():
    r = unimodularity_report([1, 0, 1])
    d = r.to_json_dict()
    assert d["verdict"] == UNIMODULAR and len(d["roots"]) == 2
    rows = r.csv_rows()
    assert len(rows) == 2 and len(rows[0]) == 4


def test_delta_polynomials(delta_values):
    p = modified_polynomial_p(delta_values)
    assert unimodularity_report(p.coeffs).verdict == UNIMODULAR
    # q_Delta has zeros outside the disk, so the q-route gives no information here
    q = half_polynomial_q(delta_values)
    report = unimodularity_report(q.coeffs)
    assert report.verdict == NEITHER
    assert min(abs(z) for z in report.roots) < 1 < max(abs(z) for z in report.roots)


def test_truncated_exp():
    t = truncated_exp(1, 1)
    with mp.workdps(30):
        assert t.t_coeffs[0] == 1 and abs(t.t_coeffs[1] - 2 * mpmath.pi) < 1e-25
    assert t.h_coeffs == tuple(reversed(t.t_coeffs))
    t = truncated_exp(5, 2)
    with mp.workdps(30):
        x = 4 * mpmath.pi
        assert abs(t.t_coeffs[5] - x**5 / 120) < 1e-20
    with pytest.raises(InvalidArgumentError):
        truncated_exp(0, 1)


def test_h_guesses_are_close_to_roots():
    for m, N in ((20, 1), (60, 2)):
        guesses = h_root_guesses(m, N)
        roots = find_roots(truncated_exp(m, N, 90).h_coeffs, strip=False).roots
        assert _matched(guesses, roots) < 0.05


@pytest.mark.parametrize("m", [20, 21, 37, 64, 99])
def test_h_zero_report_in_disk(m):
    r = h_zero_report(m, 1)
    assert r.reliable and r.degree == m
    assert r.verdict in (IN_DISK, UNIMODULAR)


def test_h_small_m_outside_disk():
    # for small degree the zeros still lie outside the unit disk
    assert h_zero_report(3, 1).verdict == NEITHER
    assert h_zero_report(10, 1).verdict == NEITHER


def test_h_disk_criterion():
    c = h_disk_criterion(210, 1)
    assert c.holds and c.eq_h2 and c.lower_bound > 0
    holds, bound = h_disk_criterion(1000, 1, precision=200)
    with mp.workdps(200):
        assert holds and abs(bound - mpmath.exp(-2 * mpmath.pi)) < mpmath.mpf(10) ** -100
    assert h_disk_criterion(20, 1).small_n_case
    assert not h_disk_criterion(19, 1).holds
    assert not h_disk_criterion(100, 2).holds
    with pytest.raises(InvalidArgumentError):
        h_disk_criterion(0, 1)


def test_eq_h2_values():
    for m in (210, 500, 1000):
        assert eq_h2(m, 1)
    assert not eq_h2(100, 1)
    lhs = 4 * math.pi + 422 * math.log(2 * math.pi)
    rhs = 211 * math.log(211) - 210
    assert eq_h2(210, 1) == (lhs < rhs)


def test_sampled_minimum_respects_bound():
    low = sample_t_lower_bound(210, 1, 1000, 42)
    assert low >= t_lower_bound(210, 1)
    assert sample_t_lower_bound(210, 1, 50, 3) == sample_t_lower_bound(210, 1, 50, 3)
    with pytest.raises(InvalidArgumentError):
        sample_t_lower_bound(10, 1, 10, 0)
    # at m = 20 the bound itself is negative, so the sample minimum trivially exceeds it
    assert sample_t_lower_bound(20, 1, 200, 1) >= t_lower_bound(20, 1)
