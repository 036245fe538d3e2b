import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from conftest import eigen, lvalues
from oracles import delta_even_shape, delta_odd_shape
from periodrh.errors import InvalidArgumentError
from periodrh.lfunctions import combine
from periodrh.periodpoly import (
    PeriodPolynomial,
    compare_r_displays,
    half_polynomial_q,
    modified_polynomial_p,
    odd_even_parts,
    p_from_q,
    period_polynomial_r,
    reconstruct_p_from_q,
    reflect,
    rv_closed_form,
    rv_series_values,
    rv_transform,
    self_reciprocity_residual,
    zeta_checks,
)
from periodrh.zeros import find_roots

TIGHT = mpmath.mpf(10) ** -40


def _proportional(got, shape):
    """Max deviation of got from c * shape, with c fitted on the largest shape entry."""
    pivot = max(range(len(shape)), key=lambda n: abs(shape[n]))
    c = got[pivot] / mpmath.mpf(shape[pivot].numerator) * shape[pivot].denominator
    scale = max(abs(g) for g in got)
    return max(abs(g - c * mpmath.mpf(s.numerator) / s.denominator) for g, s in zip(got, shape)) / scale


def test_delta_r_matches_classical_shape(delta_values):
    r = period_polynomial_r(delta_values)
    odd, even = odd_even_parts(r)
    with mp.workdps(r.digits):
        assert _proportional(odd.coeffs, delta_odd_shape()) < TIGHT
        assert _proportional(even.coeffs, delta_even_shape()) < TIGHT
        # odd part is real and even part purely imaginary for this weight
        assert all(abs(mpmath.im(c)) < TIGHT * abs(c) for c in odd.coeffs if c)
        assert all(abs(mpmath.re(c)) < TIGHT * abs(c) for c in even.coeffs if c)
        assert all(abs(a + b - c) < TIGHT for a, b, c in zip(odd.coeffs, even.coeffs, r.coeffs))


def test_r_constant_term(delta_values):
    r = period_polynomial_r(delta_values)
    with mp.workdps(r.digits):
        expected = -mpmath.factorial(10) / mpmath.mpc(0, 2 * mpmath.pi) ** 11 * delta_values.L(11)
        assert abs(r.coeffs[0] - expected) < TIGHT


@pytest.mark.parametrize("k", [12, 16, 20])
def test_r_display_ratio_is_binomial(k):
    ratios = compare_r_displays(lvalues(k))
    assert ratios
    with mp.workdps(60):
        for n, ratio in ratios.items():
            # the two displays differ by the factor binom(k-2, n) up to a common unit
            unit = ratio / math.comb(k - 2, n)
            first = next(iter(ratios.values())) / math.comb(k - 2, next(iter(ratios)))
            assert abs(unit - first) < mpmath.mpf(10) ** -30


def test_r_and_p_roots_share_moduli(delta_values):
    r = period_polynomial_r(delta_values)
    p = modified_polynomial_p(delta_values)
    mr = sorted(float(abs(z)) for z in find_roots(r.coeffs).roots)
    mq = sorted(float(abs(z)) for z in find_roots(p.coeffs).roots)
    assert max(abs(a - b) for a, b in zip(mr, mq)) < 1e-12


def test_period_maps_are_linear():
    _, forms = eigen(24)
    v1, v2 = (lvalues(24, j) for j in range(2))
    mixed = combine([v1, v2], [3, -2])
    for build in (period_polynomial_r, modified_polynomial_p, half_polynomial_q):
        a, b, m = build(v1), build(v2), build(mixed)
        with mp.workdps(m.digits):
            scale = max(abs(c) for c in m.coeffs)
            assert max(abs(3 * x - 2 * y - z) for x, y, z in zip(a.coeffs, b.coeffs, m.coeffs)) < TIGHT * scale


def test_q_shape(delta_values):
    q = half_polynomial_q(delta_values)
    assert q.degree == 5 and len(q.coeffs) == 6
    assert abs(q.coeffs[-1] - delta_values.L(11)) < TIGHT
    assert q.flags == ()
    # vanishing central value forces the constant term to zero
    q26 = half_polynomial_q(lvalues(26))
    assert abs(q26.coeffs[0]) < TIGHT


@pytest.mark.parametrize("k", [12, 24, 26, 30])
def test_reconstruct_and_self_reciprocity(k):
    for j in range(len(eigen(k)[1])):
        values = lvalues(k, j)
        p = modified_polynomial_p(values)
        q = half_polynomial_q(values)
        bound = mpmath.mpf(10) ** -(values.precision - 10)
        scale = max(abs(c) for c in p.coeffs)
        assert reconstruct_p_from_q(q, values=values) < bound * scale
        assert reconstruct_p_from_q(q, k=k, p=p) < bound * scale
        assert self_reciprocity_residual(p) < bound * scale
        assert self_reciprocity_residual(p_from_q(q)) < bound * scale


def test_structural_errors(delta_values):
    q = half_polynomial_q(delta_values)
    p = modified_polynomial_p(delta_values)
    with pytest.raises(InvalidArgumentError):
        reconstruct_p_from_q(q, k=14)
    with pytest.raises(InvalidArgumentError):
        reconstruct_p_from_q(q)
    with pytest.raises(InvalidArgumentError):
        p_from_q(p)
    with pytest.raises(InvalidArgumentError):
        odd_even_parts(p)
    with pytest.raises(InvalidArgumentError):
        PeriodPolynomial("x", 12, (1,), 0)


def _series_oracle(u, n_values):
    """Coefficients of U(x) / (1-x)^(d+1) by d+1 rounds of prefix sums."""
    d = len(u) - 1
    a = list(u) + [0] * (n_values - len(u))
    for _ in range(d + 1):
        total, out = 0, []
        for c in a:
            total += c
            out.append(total)
        a = out
    return a[:n_values]


def test_rv_small_cases():
    with mp.workdps(30):
        z = rv_transform([1])
        assert z.degree == 0 and abs(z.coeffs[0] - 1) < TIGHT
        z = rv_transform([1, 1])
        assert abs(z.coeffs[0] - 1) < TIGHT and abs(z.coeffs[1] + 2) < TIGHT
    with pytest.raises(InvalidArgumentError):
        rv_transform([1, -1])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=9).filter(lambda u: sum(u) != 0))
def test_rv_interpolates_series(u):
    z = rv_transform(u, precision=40)
    d = len(u) - 1
    with mp.workdps(z.digits):
        ref = _series_oracle(u, 2 * d + 3)
        for n, target in enumerate(ref):
            assert abs(z(-n) - target) < mpmath.mpf(10) ** -30 * max(1, abs(target))
        closed = rv_closed_form([mpmath.mpf(c) for c in u])
        assert max(abs(a - b) for a, b in zip(closed, z.coeffs)) < mpmath.mpf(10) ** -30 * max(1, max(map(abs, z.coeffs)))
        assert rv_series_values([mpmath.mpf(c) for c in u], 3) == [mpmath.mpf(x) for x in _series_oracle(u, 3)]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.05, 3.1), min_size=1, max_size=5), st.floats(0.5, 3))
def test_rv_unimodular_inputs_land_on_critical_line(angles, lead):
    # U = lead * prod (z^2 - 2 cos t z + 1) is real, self-reciprocal and unimodular with U(1) != 0
    with mp.workdps(60):
        u = [mpmath.mpf(lead)]
        for t in angles:
            c = -2 * mpmath.cos(t)
            nxt = [mpmath.mpf(0)] * (len(u) + 2)
            for i, a in enumerate(u):
                nxt[i] += a
                nxt[i + 1] += c * a
                nxt[i + 2] += a
            u = nxt
        z = rv_transform(u, precision=40)
        check = zeta_checks(z, precision=40)
    assert check.functional_equation_residual < 1e-30
    assert check.max_line_deviation < 1e-10


def test_reflect_is_involution():
    with mp.workdps(30):
        c = [mpmath.mpf(x) for x in (3, -1, 4, 1, -5)]
        assert max(abs(a - b) for a, b in zip(reflect(reflect(c)), c)) < TIGHT


def test_zeta_polynomial_of_delta(delta_values):
    p = modified_polynomial_p(delta_values)
    z = rv_transform(p)
    assert z.degree == 10
    check = zeta_checks(z, precision=64)
    assert check.functional_equation_residual < mpmath.mpf(10) ** -50
    assert check.max_line_deviation < 1e-10
    assert len(check.roots) == 10
