"""Critical values of modular L-functions.

The completed values Lambda(f, s) = (2 pi)^-s Gamma(s) L(f, s) for s = 1..k-1
are computed from the rapidly convergent series

    Lambda(f, s) = sum_n c(n) [ (2 pi n)^-s Gamma(s, 2 pi n)
                                + eps (2 pi n)^(s-k) Gamma(k-s, 2 pi n) ],

obtained by splitting the Mellin integral of f(iy) at y = 1, with
eps = (-1)^(k/2). The truncation point is chosen from an explicit tail bound
(see ``_numeric.series_tail_bound``).
"""

from dataclasses import dataclass

import mpmath
from mpmath import mp

from ._numeric import (
    series_tail_bound,
    series_terms,
    to_decimal_string,
)
from .errors import InsufficientPrecisionError, InvalidArgumentError, NumericalError


@dataclass(frozen=True)
class CriticalLValues:
    """Lambda(f, s) and L(f, s) for s = 1..k-1, stored at index s - 1."""

    k: int
    epsilon: int
    lambda_values: tuple
    l_values: tuple
    trunc_bound: mpmath.mpf
    precision: int
    digits: int
    unverified_tail: bool = False
    provenance: tuple = ()

    def Lambda(self, s):
        return self.lambda_values[s - 1]

    def L(self, s):
        return self.l_values[s - 1]

    def scaled(self, a):
        with mp.workdps(self.digits):
            a = mpmath.mpf(a)
            return CriticalLValues(
                self.k,
                self.epsilon,
                tuple(a * v for v in self.lambda_values),
                tuple(a * v for v in self.l_values),
                abs(a) * self.trunc_bound,
                self.precision,
                self.digits,
                self.unverified_tail,
                self.provenance,
            )

    def to_json_dict(self):
        return {
            "k": self.k,
            "epsilon": self.epsilon,
            "precision": self.precision,
            "lambda": [to_decimal_string(v, self.precision) for v in self.lambda_values],
            "L": [to_decimal_string(v, self.precision) for v in self.l_values],
            "trunc_bound": to_decimal_string(self.trunc_bound, 10),
            "unverified_tail": self.unverified_tail,
            "provenance": _jsonable(self.provenance),
        }


def _jsonable(prov):
    if not prov:
        return None
    kind, data = prov
    if isinstance(data, tuple):
        data = [str(x) if not isinstance(x, int) else x for x in data]
    return {"kind": kind, "data": data}


def _l_from_lambda(k, lam):
    two_pi = 2 * mpmath.pi
    return tuple(mpmath.power(two_pi, s) / mpmath.factorial(s - 1) * lam[s - 1] for s in range(1, k))


def combine(values, coeffs):
    """Critical values of sum_j coeffs[j] f_j from those of the f_j (before normalization)."""
    if len(values) != len(coeffs):
        raise InvalidArgumentError("one coefficient per value table is required")
    first = values[0]
    k, digits = first.k, first.digits
    with mp.workdps(digits):
        cs = [mpmath.mpf(c) for c in coeffs]
        lam = tuple(
            mpmath.fsum(c * v.lambda_values[i] for c, v in zip(cs, values) if c) for i in range(k - 1)
        )
        l_vals = tuple(mpmath.fsum(c * v.l_values[i] for c, v in zip(cs, values) if c) for i in range(k - 1))
        bound = mpmath.fsum(abs(c) * v.trunc_bound for c, v in zip(cs, values))
    return CriticalLValues(
        k,
        first.epsilon,
        lam,
        l_vals,
        bound,
        first.precision,
        digits,
        any(v.unverified_tail for v in values),
        ("combination", tuple(coeffs)),
    )


def incomplete_gamma_integer(s, x, precision=50):
    """Upper incomplete gamma Gamma(s, x) = (s-1)! e^-x sum_{j<s} x^j / j! for integer s >= 1."""
    if s < 1 or x < 0:
        raise InvalidArgumentError("need s >= 1 and x >= 0")
    with mp.workdps(precision):
        x = mpmath.mpf(x)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        for j in range(1, s):
            term = term * x / j
            total += term
        return mpmath.factorial(s - 1) * mpmath.exp(-x) * total


def _normalized_gammas(k, x):
    """G[s] = Gamma(s, x) / x^s for s = 1..k-1 via G[s+1] = (s G[s] + e^-x) / x."""
    ex = mpmath.exp(-x)
    g = [None, ex / x]
    for s in range(1, k - 1):
        g.append((s * g[s] + ex) / x)
    return g


def completed_lvalues(f, c_upper=None):
    """All critical values of the normalized cusp form ``f``.

    ``c_upper`` overrides the coefficient constant used for the truncation
    bound. Without it, the Deligne-type upper estimate is used when the form has
    a known eigen-decomposition; otherwise twice the observed lower estimate is
    used and the result is flagged ``unverified_tail``.
    """
    from .modforms import deligne_constant_estimate

    k, precision, digits = f.k, f.precision, f.digits
    unverified = False
    if c_upper is None:
        lower, upper = deligne_constant_estimate(f, min(f.n_terms - 1, 50))
        if upper is None:
            c_upper, unverified = 2 * lower, True
        else:
            c_upper = upper
    n_last = series_terms(k, precision, c_upper)
    if f.n_terms <= n_last:
        raise InsufficientPrecisionError(
            f"Lambda series at k={k}, P={precision} needs c(n) up to n={n_last}, have {f.n_terms - 1}"
        )
    eps = -1 if (k // 2) % 2 else 1
    with mp.workdps(digits):
        acc = [mpmath.mpf(0)] * (k - 1)
        two_pi = 2 * mpmath.pi
        for n in range(f.N, n_last + 1):
            c = f.coeffs[n]
            if not c:
                continue
            g = _normalized_gammas(k, two_pi * n)
            for s in range(1, k):
                acc[s - 1] += c * (g[s] + eps * g[k - s])
        lam = tuple(acc)
        l_vals = _l_from_lambda(k, lam)
        # tail of the series plus an allowance for rounding at the working digits
        scale = max([mpmath.mpf(1)] + [abs(v) for v in lam])
        bound = series_tail_bound(k, n_last, c_upper) + mpmath.mpf(10) ** (-(digits - 5)) * scale
    return CriticalLValues(k, eps, lam, l_vals, bound, precision, digits, unverified, f.provenance)


def oracle_lambda_integral(f, s, precision=40):
    """Lambda(f, s) by quadrature of int_1^oo f(iy) (y^(s-1) + eps y^(k-s-1)) dy.

    Independent of the incomplete-gamma series; meant for verification.
    """
    k = f.k
    if not 1 <= s <= k - 1:
        raise InvalidArgumentError(f"s must lie in 1..{k - 1}")
    eps = -1 if (k // 2) % 2 else 1
    with mp.workdps(precision + 10):
        coeffs = [mpmath.mpf(c) for c in f.coeffs]
        two_pi = 2 * mpmath.pi
        cutoff = mpmath.mpf(10) ** (-(precision + 15))

        def fiy(y):
            q = mpmath.exp(-two_pi * y)
            total = mpmath.mpf(0)
            qn = mpmath.power(q, f.N)
            for n in range(f.N, len(coeffs)):
                term = coeffs[n] * qn
                total += term
                if qn * mpmath.power(n, k) < cutoff:
                    break
                qn *= q
            return total

        def integrand(y):
            return fiy(y) * (mpmath.power(y, s - 1) + eps * mpmath.power(y, k - s - 1))

        # the integrand peaks near y ~ k / (2 pi) and decays like e^(-2 pi y) y^k
        peak = max(2, k / (2 * float(mpmath.pi)))
        points = [1, 2] + [peak * t for t in (1, 2, 4, 8) if peak * t > 2] + [mpmath.inf]
        value, err = mpmath.quad(integrand, points, error=True, maxdegree=10)
        if err > mpmath.mpf(10) ** (-(precision - 10)) * max(1, abs(value)):
            raise NumericalError("quadrature did not converge", {"error": err, "s": s})
        return +value


@dataclass(frozen=True)
class TailBounds:
    k: int
    N: int
    c_upper: mpmath.mpf
    e1: mpmath.mpf
    e2: mpmath.mpf


def tail_bounds(k, N, c_upper, precision=50):
    """Uniform bounds |L(f,s) - N^-s| < e1 (s >= 3k/4) and |L(f,s)| < e2 (s >= k/2)."""
    if k < 12 or not 1 <= N or 12 * N > k:
        raise InvalidArgumentError(f"need k >= 12 and 1 <= N <= k/12, got k={k}, N={N}")
    with mp.workdps(precision):
        c = mpmath.mpf(c_upper)
        e1 = 4 * c / mpmath.power(N + 1, mpmath.mpf(k) / 4)
        e2 = 2 * c * (
            2 * mpmath.sqrt(k) * mpmath.log(2 * k)
            - 2 * mpmath.sqrt(N - 1)
            + 1
            + mpmath.power(2, mpmath.mpf(k) / 2 + 1) * mpmath.exp(-mpmath.pi * k)
        )
    return TailBounds(k, N, c, e1, e2)


def lemma_constant(precision=30):
    """zeta(3/2)^2 / 4 - 1/2, the constant the central-value bound must dominate."""
    with mp.workdps(precision):
        return mpmath.zeta(mpmath.mpf(3) / 2) ** 2 / 4 - mpmath.mpf(1) / 2


def lemma_g(x, precision=30):
    """g(x) = sqrt(x) log(2x) - sqrt(x) + 2^(x/2) e^(-pi x)."""
    with mp.workdps(precision):
        x = mpmath.mpf(x)
        return mpmath.sqrt(x) * mpmath.log(2 * x) - mpmath.sqrt(x) + mpmath.power(2, x / 2) * mpmath.exp(-mpmath.pi * x)


@dataclass(frozen=True)
class FunctionalEquationCheck:
    lambda_residual: mpmath.mpf
    l_identity_residual: mpmath.mpf

    @property
    def max_residual(self):
        return max(self.lambda_residual, self.l_identity_residual)


def functional_equation_residuals(values):
    k, w, eps = values.k, values.k - 2, values.epsilon
    with mp.workdps(values.digits):
        lam_res = max(abs(values.Lambda(s) - eps * values.Lambda(k - s)) for s in range(1, k))
        two_pi = 2 * mpmath.pi
        l_res = mpmath.mpf(0)
        for n in range(0, w + 1):
            rhs = (
                eps
                * mpmath.power(two_pi, w - 2 * n)
                * mpmath.factorial(n)
                / mpmath.factorial(w - n)
                * values.L(n + 1)
            )
            l_res = max(l_res, abs(values.L(w - n + 1) - rhs))
    return FunctionalEquationCheck(lam_res, l_res)


def verify_functional_equation(values):
    """max over s of |Lambda(s) - eps Lambda(k-s)|, together with the equivalent
    identity between L(f, w-n+1) and L(f, n+1); returns the larger residual."""
    return functional_equation_residuals(values).max_residual
