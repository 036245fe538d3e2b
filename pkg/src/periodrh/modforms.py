"""Level-one modular forms: exact q-expansions, the Miller basis, Hecke matrices
and a numerically diagonalized eigenbasis.

All q-series arithmetic is exact (Python integers and ``Fraction``). Eigenforms
are computed by diagonalizing the integer matrix of T_2 in the Miller basis at
high precision with mpmath.
"""

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath
from mpmath import mp

from ._numeric import (
    divisor_count,
    divisor_sigma,
    from_decimal_string,
    series_terms,
    to_decimal_string,
    working_digits,
)
from .errors import (
    InsufficientPrecisionError,
    InvalidArgumentError,
    PrecisionEscalationError,
)

CACHE_SCHEMA_VERSION = 1


def _exact(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    raise TypeError(f"q-series coefficients must be int or Fraction, got {type(c).__name__}")


@dataclass(frozen=True)
class QSeries:
    """Truncated q-expansion ``sum coeffs[n] q^n`` with exact rational coefficients."""

    weight: int
    coeffs: tuple

    def __post_init__(self):
        if self.weight < 4 or self.weight % 2:
            raise InvalidArgumentError(f"weight must be an even integer >= 4, got {self.weight}")
        object.__setattr__(self, "coeffs", tuple(_exact(c) for c in self.coeffs))
        if not self.coeffs:
            raise InvalidArgumentError("a q-series needs at least one coefficient")

    @property
    def n_terms(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def is_cuspidal(self):
        return self.coeffs[0] == 0

    def truncate(self, n_terms):
        if n_terms > self.n_terms:
            raise InsufficientPrecisionError(f"cannot extend {self.n_terms} terms to {n_terms}")
        return QSeries(self.weight, self.coeffs[:n_terms])

    def _check_compatible(self, other):
        if self.weight != other.weight:
            raise InvalidArgumentError(f"weights differ: {self.weight} vs {other.weight}")

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        self._check_compatible(other)
        n = min(self.n_terms, other.n_terms)
        return QSeries(self.weight, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])])

    def __neg__(self):
        return QSeries(self.weight, [-a for a in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            n = min(self.n_terms, other.n_terms)
            a, b = self.coeffs, other.coeffs
            out = [0] * n
            for i in range(n):
                ai = a[i]
                if ai == 0:
                    continue
                for j in range(n - i):
                    out[i + j] += ai * b[j]
            return QSeries(self.weight + other.weight, out)
        if isinstance(other, (int, Fraction)):
            return QSeries(self.weight, [other * a for a in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def exact_div(self, d):
        """Divide by an integer, asserting that every coefficient stays integral."""
        out = []
        for c in self.coeffs:
            if isinstance(c, int) and c % d == 0:
                out.append(c // d)
            else:
                out.append(Fraction(c) / d)
        return QSeries(self.weight, out)


def eisenstein_series(weight, n_terms):
    """Normalized E_4 or E_6 to ``n_terms`` coefficients."""
    if weight not in (4, 6):
        raise InvalidArgumentError(f"only E_4 and E_6 are provided, got weight {weight}")
    if n_terms < 1:
        raise InvalidArgumentError("n_terms must be >= 1")
    factor, power = (240, 3) if weight == 4 else (-504, 5)
    return QSeries(weight, [1] + [factor * divisor_sigma(n, power) for n in range(1, n_terms)])


def delta_series(n_terms):
    """Ramanujan's Delta = (E_4^3 - E_6^2) / 1728 with integer coefficients tau(n)."""
    if n_terms < 2:
        raise InvalidArgumentError("n_terms must be >= 2")
    e4 = eisenstein_series(4, n_terms)
    e6 = eisenstein_series(6, n_terms)
    delta = (e4 * e4 * e4 - e6 * e6).exact_div(1728)
    if not all(isinstance(c, int) for c in delta.coeffs):
        raise ArithmeticError("non-integral coefficient in Delta")
    return delta


def dim_cusp_forms(k):
    if k < 4 or k % 2:
        raise InvalidArgumentError(f"weight must be even and >= 4, got {k}")
    dim_mk = k // 12 if k % 12 == 2 else k // 12 + 1
    return dim_mk - 1


def _power(series, e):
    out = None
    for _ in range(e):
        out = series if out is None else out * series
    return out


def miller_basis(k, n_terms):
    """Echelonized integral basis g_1..g_r of S_k with g_i = q^i + O(q^(r+1))."""
    r = dim_cusp_forms(k)
    if n_terms <= r:
        raise InvalidArgumentError(f"need n_terms > dim S_k = {r}, got {n_terms}")
    if r == 0:
        return []
    e = k - 12 * r
    e4 = eisenstein_series(4, n_terms)
    e6 = eisenstein_series(6, n_terms)
    a, b = {0: (0, 0), 4: (1, 0), 6: (0, 1), 8: (2, 0), 10: (1, 1), 14: (2, 1)}[e]
    tail = _power(e4, a)
    if b:
        tail = e6 if tail is None else tail * e6
    e6sq = e6 * e6
    delta = delta_series(n_terms)

    gens = []
    delta_pow = delta
    for i in range(1, r + 1):
        g = delta_pow
        e6_part = _power(e6sq, r - i)
        if e6_part is not None:
            g = g * e6_part
        if tail is not None:
            g = g * tail
        gens.append(g)
        delta_pow = delta_pow * delta

    # gens[i-1] = q^i + ..., so back-substitution is unitriangular and stays integral
    for i in range(r - 1, -1, -1):
        for j in range(i + 1, r):
            c = gens[i][j + 1]
            if c:
                gens[i] = gens[i] - c * gens[j]
    for i, g in enumerate(gens):
        assert all(g[j + 1] == (1 if i == j else 0) for j in range(r))
    return gens


def hecke_operator_matrix(k, p, basis):
    """Integer matrix M with T_p g_i = sum_j M[i][j] g_j in the Miller basis."""
    r = len(basis)
    for g in basis:
        if g.n_terms < p * r + 1:
            raise InsufficientPrecisionError(
                f"T_{p} on a dimension-{r} space needs {p * r + 1} coefficients, have {g.n_terms}"
            )
    pk = p ** (k - 1)
    rows = []
    for g in basis:
        row = []
        for n in range(1, r + 1):
            v = g[p * n]
            if n % p == 0:
                v += pk * g[n // p]
            row.append(v)
        rows.append(tuple(row))
    return tuple(rows)


def matmul_exact(a, b):
    n, m, q = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(m)) for j in range(q)) for i in range(n))


@dataclass(frozen=True)
class EigenSystem:
    k: int
    r: int
    t2_matrix: tuple
    eigenvalues: tuple
    eigenvectors: tuple  # row j: eigenform j in Miller-basis coordinates, first entry 1
    residual: mpmath.mpf
    digits: int


@dataclass(frozen=True)
class CuspForm:
    """Normalized numerical cusp form f = q^N + sum_{n>N} c(n) q^n.

    ``coeffs[n]`` is c(n) for 0 <= n < len(coeffs); ``coeffs[0]`` is always 0.
    ``leading`` is the raw leading value divided out during normalization and
    ``provenance`` is ``("eigenform", j)`` or ``("combination", vector)``.
    """

    k: int
    N: int
    coeffs: tuple
    provenance: tuple
    precision: int
    leading: mpmath.mpf = mpmath.mpf(1)
    digits: int = 0

    def __post_init__(self):
        if self.k < 12 or self.k % 2:
            raise InvalidArgumentError(f"cusp forms of level one need even k >= 12, got {self.k}")
        if self.N < 1 or 12 * self.N > self.k:
            raise InvalidArgumentError(f"vanishing order {self.N} violates N <= k/12 at k={self.k}")
        if len(self.coeffs) <= self.N:
            raise InsufficientPrecisionError("coefficient list ends before the leading term")
        tol = mpmath.mpf(10) ** (-(self.precision // 2))
        if abs(self.coeffs[self.N] - 1) > tol:
            raise InvalidArgumentError("cusp form is not normalized at its leading term")
        if any(abs(self.coeffs[n]) > tol for n in range(self.N)):
            raise InvalidArgumentError("nonzero coefficient below the vanishing order")
        if not self.digits:
            object.__setattr__(self, "digits", working_digits(self.k, self.precision))

    @property
    def n_terms(self):
        return len(self.coeffs)

    def combination_vector(self):
        kind, data = self.provenance
        if kind == "combination":
            return tuple(data)
        if kind == "eigenform":
            return None
        return None

    def is_eigenform(self):
        return self.provenance[0] == "eigenform"


def _eigen_decompose(t2, digits):
    r = len(t2)
    with mp.workdps(digits):
        # eigenforms are left eigenvectors of M, i.e. eigenvectors of M^T
        a = mpmath.matrix([[t2[j][i] for j in range(r)] for i in range(r)])
        vals, vecs = mpmath.eig(a)
        pairs = []
        for j in range(r):
            lam = vals[j]
            v = [vecs[i, j] for i in range(r)]
            if abs(v[0]) == 0:
                raise ArithmeticError("eigenvector with vanishing first coefficient")
            v = [x / v[0] for x in v]
            pairs.append((mpmath.re(lam), [mpmath.re(x) for x in v], lam, v))
        pairs.sort(key=lambda t: t[0])
        residual = mpmath.mpf(0)
        imag = mpmath.mpf(0)
        for lam_re, v_re, lam, v in pairs:
            imag = max(imag, abs(mpmath.im(lam)), max(abs(mpmath.im(x)) for x in v))
            av = a * mpmath.matrix(v_re)
            num = max(abs(av[i] - lam_re * v_re[i]) for i in range(r))
            residual = max(residual, num / max(abs(x) for x in v_re))
        return [p[0] for p in pairs], [p[1] for p in pairs], residual, imag


def _eigen_system(k, t2, digits):
    r = len(t2)
    for attempt in range(4):
        vals, vecs, residual, imag = _eigen_decompose(t2, digits)
        with mp.workdps(digits):
            threshold = mpmath.mpf(10) ** (-(digits // 2))
            gaps = [vals[i + 1] - vals[i] for i in range(r - 1)]
            ok = residual < threshold and imag < threshold
            ok = ok and all(g > 10 * residual for g in gaps)
        if ok:
            return EigenSystem(k, r, t2, tuple(vals), tuple(tuple(v) for v in vecs), residual, digits)
        if attempt < 3:
            digits *= 2
    raise PrecisionEscalationError(
        f"T_2 eigenbasis at k={k} not resolved after 3 precision doublings", suggested=2 * digits
    )


def default_n_terms(k, precision):
    """Coefficients needed so completed L-values truncate below 10^-(precision+10)."""
    # slack on the coefficient constant so moderate linear combinations also fit
    return series_terms(k, working_digits(k, precision), c_upper=10**6) + 1


def eigenforms(k, precision=None, n_terms=None, cache_dir=None):
    """Normalized Hecke eigenforms of S_k with numerical coefficients.

    Returns ``(EigenSystem, [CuspForm, ...])`` ordered by increasing T_2 eigenvalue.
    Coefficients are reproduced with relative error below 10^-digits measured
    against the Deligne scale sigma_0(n) n^((k-1)/2), where ``digits`` is the
    internal working precision for weight ``k``.
    """
    from ._numeric import default_precision

    if k < 12 or k % 2:
        raise InvalidArgumentError(f"need even k >= 12, got {k}")
    if dim_cusp_forms(k) == 0:
        raise InvalidArgumentError(f"S_{k} is zero-dimensional")
    precision = precision or default_precision(k)
    n_terms = n_terms or default_n_terms(k, precision)
    if cache_dir is not None:
        cached = load_eigen_cache(cache_dir, k, precision, n_terms)
        if cached is not None:
            return cached

    r = dim_cusp_forms(k)
    basis = miller_basis(k, max(n_terms, 2 * r + 1))
    t2 = hecke_operator_matrix(k, 2, basis)
    digits = working_digits(k, precision)

    extra = 20
    for _ in range(4):
        system = _eigen_system(k, t2, digits + extra)
        with mp.workdps(system.digits):
            forms_raw, loss = _expand_eigenforms(k, system, basis, n_terms)
        if loss + 5 <= system.digits - digits:
            break
        extra = math.ceil(loss) + 20
    else:
        raise PrecisionEscalationError(f"cancellation at k={k} exceeds escalation budget", digits + extra)

    forms = []
    with mp.workdps(digits):
        for j, raw in enumerate(forms_raw):
            coeffs = tuple(+c for c in raw)
            forms.append(
                CuspForm(k, 1, coeffs, ("eigenform", j), precision, mpmath.mpf(1), digits)
            )
    if cache_dir is not None:
        save_eigen_cache(cache_dir, system, forms, precision, n_terms)
    return system, forms


def _expand_eigenforms(k, system, basis, n_terms):
    """Coefficients sum_i x_i g_i(n); also returns the worst cancellation in digits."""
    loss = 0.0
    forms = []
    half = mpmath.mpf(k - 1) / 2
    scales = [mpmath.mpf(1)] + [divisor_count(n) * mpmath.power(n, half) for n in range(1, n_terms)]
    for vec in system.eigenvectors:
        coeffs = [mpmath.mpf(0)]
        for n in range(1, n_terms):
            terms = [x * g[n] for x, g in zip(vec, basis) if g[n]]
            c = mpmath.fsum(terms)
            if terms:
                mag = max(abs(t) for t in terms)
                ratio = mag / scales[n]
                if ratio > 1:
                    loss = max(loss, float(mpmath.log10(ratio)))
            coeffs.append(c)
        forms.append(coeffs)
    return forms, loss


def linear_combination(coeffs, k, precision=None, forms=None):
    """Normalized cusp form sum_j coeffs[j] f_j over the eigenbasis.

    The vanishing order N is the first index where the combined coefficient is
    not negligible relative to the sizes of its summands.
    """
    from ._numeric import default_precision

    precision = precision or default_precision(k)
    if forms is None:
        _, forms = eigenforms(k, precision)
    if len(coeffs) != len(forms):
        raise InvalidArgumentError(f"expected {len(forms)} coefficients, got {len(coeffs)}")
    if all(c == 0 for c in coeffs):
        raise InvalidArgumentError("all combination coefficients are zero")
    digits = forms[0].digits
    n_terms = min(f.n_terms for f in forms)
    with mp.workdps(digits):
        cs = [mpmath.mpf(c) for c in coeffs]
        raw = [mpmath.fsum(c * f.coeffs[n] for c, f in zip(cs, forms)) for n in range(n_terms)]
        tol = mpmath.mpf(10) ** (-(precision // 2))
        N = None
        for n in range(1, n_terms):
            size = mpmath.fsum(abs(c * f.coeffs[n]) for c, f in zip(cs, forms))
            if abs(raw[n]) > tol * max(size, 1):
                N = n
                break
        if N is None or 12 * N > k:
            raise InvalidArgumentError("combination vanishes to order beyond k/12; it is numerically zero")
        lead = raw[N]
        normalized = [mpmath.mpf(0)] * N + [x / lead for x in raw[N:]]
        normalized[N] = mpmath.mpf(1)
    return CuspForm(k, N, tuple(normalized), ("combination", tuple(coeffs)), precision, lead, digits)


def deligne_constant_estimate(f, n_max):
    """Bracket the minimal C with |c(n)| <= C sigma_0(n) n^((k-1)/2).

    ``lower`` is the maximum ratio seen for N <= n <= n_max. ``upper`` is the
    triangle-inequality bound sum |a_j| / |leading| for forms with a known
    eigen-decomposition (1 for an eigenform) and ``None`` otherwise.
    """
    if f.n_terms <= n_max:
        raise InsufficientPrecisionError(f"need {n_max + 1} coefficients, have {f.n_terms}")
    with mp.workdps(f.digits):
        half = mpmath.mpf(f.k - 1) / 2
        lower = max(
            abs(f.coeffs[n]) / (divisor_count(n) * mpmath.power(n, half)) for n in range(f.N, n_max + 1)
        )
        kind, data = f.provenance
        if kind == "eigenform":
            upper = mpmath.mpf(1)
        elif kind == "combination":
            upper = mpmath.fsum(abs(mpmath.mpf(c)) for c in data) / abs(f.leading)
        else:
            upper = None
    return lower, upper


def jenkins_rouse_terms(k, first_coeffs):
    """The two summands (without the sqrt(log k) factor) of the explicit bound
    from the first r = dim S_k coefficients c(1..r)."""
    s1 = 11 * mpmath.sqrt(mpmath.fsum(abs(c) ** 2 / mpmath.power(m, k - 1) for m, c in enumerate(first_coeffs, 1)))
    front = mpmath.exp(mpmath.mpf("18.72")) * mpmath.power(mpmath.mpf("41.41"), mpmath.mpf(k) / 2)
    front /= mpmath.power(k, mpmath.mpf(k - 1) / 2)
    s2 = front * abs(mpmath.fsum(c * mpmath.exp(-mpmath.mpf("7.288") * m) for m, c in enumerate(first_coeffs, 1)))
    return s1, s2


def jenkins_rouse_bound(f):
    """Explicit upper bound for C_f depending only on c(1), ..., c(r)."""
    r = dim_cusp_forms(f.k)
    if f.n_terms <= r:
        raise InsufficientPrecisionError(f"need c(1..{r})")
    with mp.workdps(f.digits):
        s1, s2 = jenkins_rouse_terms(f.k, [f.coeffs[m] for m in range(1, r + 1)])
        return mpmath.sqrt(mpmath.log(f.k)) * (s1 + s2)


# ---------------------------------------------------------------------------
# eigenform cache: <cache_dir>/<k>/<precision>/eigen_<n_terms>.json


def _cache_path(cache_dir, k, precision, n_terms):
    return Path(cache_dir) / str(k) / str(precision) / f"eigen_{n_terms}.json"


def save_eigen_cache(cache_dir, system, forms, precision, n_terms):
    path = _cache_path(cache_dir, system.k, precision, n_terms)
    path.parent.mkdir(parents=True, exist_ok=True)
    digits = forms[0].digits if forms else system.digits
    record = {
        "schema_version": CACHE_SCHEMA_VERSION,
        "k": system.k,
        "r": system.r,
        "precision": precision,
        "n_terms": n_terms,
        "digits": digits,
        "eigen_digits": system.digits,
        "t2_matrix": [list(row) for row in system.t2_matrix],
        "eigenvalues": [to_decimal_string(v, system.digits) for v in system.eigenvalues],
        "eigenvectors": [[to_decimal_string(x, system.digits) for x in v] for v in system.eigenvectors],
        "residual": to_decimal_string(system.residual, 20),
        "eigenforms": [[to_decimal_string(c, digits) for c in f.coeffs] for f in forms],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(record, sort_keys=True))
    os.replace(tmp, path)
    return path


def load_eigen_cache(cache_dir, k, precision, n_terms):
    path = _cache_path(cache_dir, k, precision, n_terms)
    if not path.exists():
        return None
    record = json.loads(path.read_text())
    if record.get("schema_version") != CACHE_SCHEMA_VERSION:
        return None
    with mp.workdps(record["eigen_digits"]):
        system = EigenSystem(
            record["k"],
            record["r"],
            tuple(tuple(row) for row in record["t2_matrix"]),
            tuple(from_decimal_string(v) for v in record["eigenvalues"]),
            tuple(tuple(from_decimal_string(x) for x in v) for v in record["eigenvectors"]),
            from_decimal_string(record["residual"]),
            record["eigen_digits"],
        )
    forms = []
    with mp.workdps(record["digits"]):
        for j, cs in enumerate(record["eigenforms"]):
            coeffs = tuple(from_decimal_string(c) for c in cs)
            forms.append(CuspForm(k, 1, coeffs, ("eigenform", j), precision, mpmath.mpf(1), record["digits"]))
    return system, forms
