"""Period polynomials built from critical L-values, their structural identities,
and the Rodriguez-Villegas transform to zeta polynomials."""

from dataclasses import dataclass

import mpmath
from mpmath import mp

from ._numeric import to_decimal_string
from .errors import InvalidArgumentError
from .zeros import find_roots

KINDS = ("r", "p", "q", "generic")


@dataclass(frozen=True)
class PeriodPolynomial:
    """Coefficients in ascending powers of z; ``flags`` holds e.g. ``"degenerate-leading"``."""

    kind: str
    k: int
    coeffs: tuple
    degree: int
    digits: int = 64
    flags: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown kind {self.kind!r}")

    def __call__(self, z):
        with mp.workdps(self.digits):
            return mpmath.polyval(list(reversed(self.coeffs)), z)

    def scaled(self, a):
        with mp.workdps(self.digits):
            return PeriodPolynomial(self.kind, self.k, tuple(a * c for c in self.coeffs), self.degree, self.digits, self.flags)

    def to_json_dict(self, digits=None):
        digits = digits or self.digits
        return {
            "kind": self.kind,
            "k": self.k,
            "degree": self.degree,
            "coeffs": [to_decimal_string(c, digits) for c in self.coeffs],
            "flags": list(self.flags),
        }

    def csv_rows(self, digits=40):
        rows = []
        for n, c in enumerate(self.coeffs):
            c = mpmath.mpmathify(c)
            re_, im_ = (c.real, c.imag) if isinstance(c, mpmath.mpc) else (c, mpmath.mpf(0))
            rows.append((n, to_decimal_string(re_, digits), to_decimal_string(im_, digits)))
        return rows


def period_polynomial_r(values):
    """r_f(z) = -(k-2)!/(2 pi i)^(k-1) sum_{n=0}^{k-2} (2 pi i z)^n / n! L(f, k-n-1)."""
    k = values.k
    with mp.workdps(values.digits):
        two_pi_i = mpmath.mpc(0, 2 * mpmath.pi)
        front = -mpmath.factorial(k - 2) / two_pi_i ** (k - 1)
        coeffs = tuple(front * two_pi_i**n / mpmath.factorial(n) * values.L(k - n - 1) for n in range(k - 1))
    return PeriodPolynomial("r", k, coeffs, k - 2, values.digits)


def period_polynomial_r_completed(values):
    """The companion display sum_{n=1}^{k-2} i^(n+k-1) Lambda(f, k-n-1) z^n.

    Kept only to compare against ``period_polynomial_r``; see ``compare_r_displays``.
    """
    k = values.k
    with mp.workdps(values.digits):
        coeffs = [mpmath.mpc(0)] + [mpmath.mpc(0, 1) ** (n + k - 1) * values.Lambda(k - n - 1) for n in range(1, k - 1)]
    return PeriodPolynomial("generic", k, tuple(coeffs), k - 2, values.digits)


def compare_r_displays(values):
    """Ratios coeff_n(r_f) / coeff_n(completed display) for 1 <= n <= k-2 where defined."""
    r = period_polynomial_r(values)
    alt = period_polynomial_r_completed(values)
    out = {}
    with mp.workdps(values.digits):
        for n in range(1, values.k - 1):
            if abs(alt.coeffs[n]) > mpmath.mpf(10) ** (-(values.precision // 2)):
                out[n] = r.coeffs[n] / alt.coeffs[n]
    return out


def modified_polynomial_p(values):
    """p_f(z) = sum_{n=0}^{w} L(f, w-n+1) (2 pi z)^n / n!, real and self-reciprocal."""
    k, w = values.k, values.k - 2
    with mp.workdps(values.digits):
        two_pi = 2 * mpmath.pi
        coeffs = tuple(values.L(w - n + 1) * two_pi**n / mpmath.factorial(n) for n in range(w + 1))
    return PeriodPolynomial("p", k, coeffs, w, values.digits)


def half_polynomial_q(values):
    """q_f(z) of degree m = k/2 - 1 with i^k p_f(z) = z^m q_f(z) + i^k z^m q_f(1/z)."""
    k, w = values.k, values.k - 2
    m = w // 2
    with mp.workdps(values.digits):
        two_pi = 2 * mpmath.pi
        coeffs = [values.L(k // 2) * two_pi**m / mpmath.factorial(m) / 2]
        # coefficient of z^j is L(f, w - n + 1) (2 pi)^n / n! with n = m - j
        for j in range(1, m + 1):
            n = m - j
            coeffs.append(values.L(w - n + 1) * two_pi**n / mpmath.factorial(n))
        flags = ()
        if abs(coeffs[-1]) < mpmath.mpf(10) ** (-(values.precision // 2)):
            flags = ("degenerate-leading",)
    return PeriodPolynomial("q", k, tuple(coeffs), m, values.digits, flags)


def p_from_q(q):
    """Right-hand side z^m q(z) + i^k z^m q(1/z), divided by i^k, as a degree-w polynomial."""
    if q.kind != "q":
        raise InvalidArgumentError("expected a polynomial of kind q")
    k = q.k
    m = k // 2 - 1
    eps = -1 if (k // 2) % 2 else 1
    with mp.workdps(q.digits):
        out = [mpmath.mpf(0)] * (2 * m + 1)
        for j, c in enumerate(q.coeffs):
            out[m + j] += c
            out[m - j] += eps * c
        # i^k = eps = 1 / eps
        out = [eps * c for c in out]
    return PeriodPolynomial("p", k, tuple(out), 2 * m, q.digits)


def reconstruct_p_from_q(q, k=None, p=None, values=None):
    """Max coefficient deviation between p_f and its reconstruction from q_f.

    Pass either ``p`` directly or the ``values`` it is built from.
    """
    if k is not None and k != q.k:
        raise InvalidArgumentError("weight mismatch")
    rebuilt = p_from_q(q)
    if p is None:
        if values is None:
            raise InvalidArgumentError("need p or the critical values to compare against")
        p = modified_polynomial_p(values)
    with mp.workdps(q.digits):
        return max(abs(a - b) for a, b in zip(rebuilt.coeffs, p.coeffs))


def self_reciprocity_residual(p):
    """max_n |a_n - eps a_(w-n)| with eps = i^k, i.e. how far p(z) = i^k z^w p(1/z) fails."""
    eps = -1 if (p.k // 2) % 2 else 1
    w = p.degree
    with mp.workdps(p.digits):
        return max(abs(p.coeffs[n] - eps * p.coeffs[w - n]) for n in range(w + 1))


def odd_even_parts(r):
    """Split r into the parts with odd and even powers of z."""
    if r.kind != "r":
        raise InvalidArgumentError("expected a polynomial of kind r")
    zero = mpmath.mpc(0)
    odd = tuple(c if n % 2 else zero for n, c in enumerate(r.coeffs))
    even = tuple(zero if n % 2 else c for n, c in enumerate(r.coeffs))
    return (
        PeriodPolynomial("generic", r.k, odd, r.degree, r.digits, ("odd-part",)),
        PeriodPolynomial("generic", r.k, even, r.degree, r.digits, ("even-part",)),
    )


@dataclass(frozen=True)
class ZetaPolynomial:
    """Z(s) with coefficients in ascending powers of s."""

    degree: int
    coeffs: tuple
    source: object = None
    digits: int = 64

    def __call__(self, s):
        with mp.workdps(self.digits):
            return mpmath.polyval(list(reversed(self.coeffs)), s)

    def to_json_dict(self, digits=None):
        digits = digits or self.digits
        return {"degree": self.degree, "coeffs": [to_decimal_string(c, digits) for c in self.coeffs]}


def _newton_interpolate(values):
    """Monomial coefficients (ascending) of the polynomial P with P(-n) = values[n], n = 0..d."""
    d = len(values) - 1
    # divided differences on nodes x_n = -n
    nodes = [-n for n in range(d + 1)]
    table = list(values)
    divided = [table[0]]
    for level in range(1, d + 1):
        table = [(table[i + 1] - table[i]) / (nodes[i + level] - nodes[i]) for i in range(len(table) - 1)]
        divided.append(table[0])
    coeffs = [mpmath.mpf(0)] * (d + 1)
    coeffs[0] = divided[d]
    deg = 0
    for level in range(d - 1, -1, -1):
        # coeffs <- coeffs * (s - nodes[level]) + divided[level]
        shifted = [mpmath.mpf(0)] * (d + 1)
        for i in range(deg + 1):
            shifted[i + 1] += coeffs[i]
            shifted[i] -= nodes[level] * coeffs[i]
        shifted[0] += divided[level]
        coeffs = shifted
        deg += 1
    return coeffs


def rv_series_values(u, n_values):
    """Z(-n) for n < n_values: coefficients of U(x) / (1-x)^(d+1)."""
    d = len(u) - 1
    out = []
    for n in range(n_values):
        out.append(mpmath.fsum(u[j] * mpmath.binomial(n - j + d, d) for j in range(min(n, d) + 1)))
    return out


def rv_transform(U, precision=64):
    """Rodriguez-Villegas transform of a real polynomial U with U(1) != 0."""
    coeffs = U.coeffs if isinstance(U, PeriodPolynomial) else tuple(U)
    digits = U.digits if isinstance(U, PeriodPolynomial) else precision + 10
    with mp.workdps(digits):
        u = [mpmath.mpf(mpmath.re(c)) if isinstance(mpmath.mpmathify(c), mpmath.mpc) else mpmath.mpf(c) for c in coeffs]
        d = len(u) - 1
        if abs(mpmath.fsum(u)) <= mpmath.mpf(10) ** (-(precision // 2)) * max(1, max(abs(c) for c in u)):
            raise InvalidArgumentError("U(1) vanishes; the transform is undefined")
        z = _newton_interpolate(rv_series_values(u, d + 1))
    return ZetaPolynomial(d, tuple(z), U, digits)


def rv_closed_form(u):
    """Z(s) = sum_j u_j binomial(d - j - s, d) expanded in powers of s (independent check)."""
    d = len(u) - 1
    total = [mpmath.mpf(0)] * (d + 1)
    for j, uj in enumerate(u):
        # binomial(a - s, d) = prod_{i<d} (a - i - s) / d!
        poly = [mpmath.mpf(1)]
        a = d - j
        for i in range(d):
            c0 = mpmath.mpf(a - i)
            nxt = [mpmath.mpf(0)] * (len(poly) + 1)
            for t, c in enumerate(poly):
                nxt[t] += c * c0
                nxt[t + 1] -= c
            poly = nxt
        fact = mpmath.factorial(d)
        for t, c in enumerate(poly):
            total[t] += uj * c / fact
    return total


def reflect(coeffs):
    """Coefficients of Z(1 - s) from those of Z(s)."""
    d = len(coeffs) - 1
    out = [mpmath.mpf(0)] * (d + 1)
    for n, c in enumerate(coeffs):
        # (1 - s)^n = sum_t binom(n, t) (-s)^t
        for t in range(n + 1):
            out[t] += c * mpmath.binomial(n, t) * (-1) ** t
    return out


@dataclass(frozen=True)
class ZetaCheck:
    functional_equation_residual: mpmath.mpf
    max_line_deviation: mpmath.mpf
    roots: tuple


def zeta_checks(Z, precision=64, seed=0):
    """Residual of Z(s) = (-1)^d Z(1-s) and the worst |Re(rho) - 1/2| over the roots."""
    with mp.workdps(Z.digits):
        sign = -1 if Z.degree % 2 else 1
        refl = reflect(Z.coeffs)
        scale = max([mpmath.mpf(1)] + [abs(c) for c in Z.coeffs])
        fe = max(abs(a - sign * b) for a, b in zip(Z.coeffs, refl)) / scale
        if Z.degree >= 1:
            report = find_roots(Z.coeffs, precision=precision, seed=seed)
            roots = report.roots
            dev = max(abs(mpmath.re(r) - mpmath.mpf(1) / 2) for r in roots)
        else:
            roots, dev = (), mpmath.mpf(0)
    return ZetaCheck(fe, dev, tuple(roots))
