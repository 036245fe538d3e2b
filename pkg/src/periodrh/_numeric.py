"""Precision bookkeeping and small arithmetic helpers used by several modules."""

import math
from functools import lru_cache

import mpmath
from mpmath import mp

GUARD_DIGITS = 20


def default_precision(k):
    """Working precision in decimal digits for weight ``k``."""
    return max(64, 2 * k)


@lru_cache(maxsize=None)
def lambda_magnitude_digits(k):
    """log10 of the largest completed critical value scale, Gamma(k-1)/(2 pi)^(k-1)."""
    val = math.lgamma(k - 1) - (k - 1) * math.log(2 * math.pi)
    return max(0, math.ceil(val / math.log(10)))


def working_digits(k, precision):
    """Internal digits so that absolute errors on Lambda values stay below 10^-precision."""
    return precision + lambda_magnitude_digits(k) + GUARD_DIGITS


def divisor_count(n):
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count


def divisor_sigma(n, power):
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**power
            e = n // d
            if e != d:
                total += e**power
        d += 1
    return total


def tail_term_bound(k, n, c_upper):
    """Bound on the n-th term of the incomplete-gamma series for any critical s.

    Valid for 2*pi*n > k. Uses sigma_0(n) <= 2 sqrt(n) and
    Gamma(a, x) <= x^(a-1) e^(-x) / (1 - (a-1)/x) for x > a - 1, which bounds the
    bracket (2 pi n)^-s Gamma(s, 2 pi n) + (2 pi n)^(s-k) Gamma(k-s, 2 pi n)
    by 2 e^(-2 pi n) / (2 pi n - k).
    """
    x = 2 * mpmath.pi * n
    return 4 * mpmath.mpf(c_upper) * mpmath.power(n, mpmath.mpf(k) / 2) * mpmath.exp(-x) / (x - k)


def series_tail_bound(k, n_last, c_upper):
    """Bound on the sum of all series terms with index > n_last.

    Requires n_last + 1 >= k / pi, where consecutive term bounds shrink by at most
    e^(k/(2n) - 2 pi) <= e^(-3 pi / 2) < 0.01.
    """
    with mp.workdps(30):
        return tail_term_bound(k, n_last + 1, c_upper) / (1 - mpmath.exp(-3 * mpmath.pi / 2))


def series_terms(k, precision, c_upper=1):
    """Smallest n_last with series_tail_bound(k, n_last, c_upper) < 10^-(precision + 10)."""
    n = max(math.ceil(0.3665 * precision) + 10, math.ceil(k / math.pi))
    target = mpmath.mpf(10) ** (-(precision + 10))
    with mp.workdps(30):
        while series_tail_bound(k, n, c_upper) >= target:
            n += 1
    return n


def to_decimal_string(x, digits):
    """Deterministic decimal string for an mpf/mpc/int value."""
    if isinstance(x, mpmath.mpc):
        return [to_decimal_string(x.real, digits), to_decimal_string(x.imag, digits)]
    with mp.workdps(digits):
        return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False, min_fixed=1, max_fixed=0)


def from_decimal_string(s):
    if isinstance(s, list):
        return mpmath.mpc(mpmath.mpf(s[0]), mpmath.mpf(s[1]))
    return mpmath.mpf(s)
