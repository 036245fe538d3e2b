"""Polynomial zeros at high precision, unimodularity verdicts, and the
truncated-exponential polynomials T_{m,N}, H_{m,N}.

Polynomials are given as coefficient sequences in ascending powers.
"""

import cmath
import math
from dataclasses import dataclass

import gmpy2
import mpmath
import numpy as np
from mpmath import mp

from ._numeric import to_decimal_string
from .errors import InvalidArgumentError, NumericalError

DEFAULT_TOLERANCE = 1e-10

UNIMODULAR = "unimodular"
IN_DISK = "in_disk"
NEITHER = "neither"


def rng(seed):
    """Counter-based generator; the only source of randomness in the package."""
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class ZeroReport:
    degree: int
    roots: tuple
    residuals: tuple
    max_circle_distance: mpmath.mpf
    max_disk_excess: mpmath.mpf
    verdict: str
    tolerance: float
    reliable: bool
    precision: int
    seed: int = 0
    method: str = "aberth"
    iterations: int = 0
    scale: mpmath.mpf = mpmath.mpf(1)
    dropped_leading: int = 0
    zero_roots: int = 0
    self_reciprocal: bool = None
    cohn_check: bool = None

    @property
    def max_modulus(self):
        return max((abs(z) for z in self.roots), default=mpmath.mpf(0))

    def to_json_dict(self):
        digits = self.precision
        return {
            "degree": self.degree,
            "roots": [to_decimal_string(mpmath.mpc(z), digits) for z in self.roots],
            "residuals": [to_decimal_string(r, 6) for r in self.residuals],
            "max_circle_distance": to_decimal_string(self.max_circle_distance, 10),
            "max_disk_excess": to_decimal_string(self.max_disk_excess, 10),
            "verdict": self.verdict,
            "tolerance": repr(self.tolerance),
            "reliable": self.reliable,
            "precision": self.precision,
            "seed": self.seed,
            "method": self.method,
            "iterations": self.iterations,
            "scale": to_decimal_string(self.scale, 20),
            "dropped_leading": self.dropped_leading,
            "zero_roots": self.zero_roots,
            "self_reciprocal": self.self_reciprocal,
            "cohn_check": self.cohn_check,
        }

    def csv_rows(self):
        """Rows (re, im, abs, residual) as decimal strings."""
        digits = min(self.precision, 40)
        with mp.workdps(self.precision):
            return [
                (
                    to_decimal_string(mpmath.re(z), digits),
                    to_decimal_string(mpmath.im(z), digits),
                    to_decimal_string(abs(z), digits),
                    to_decimal_string(r, 6),
                )
                for z, r in zip(self.roots, self.residuals)
            ]


def classify(roots, tol):
    """(max_circle_distance, max_disk_excess, verdict) for a list of roots."""
    if not roots:
        return mpmath.mpf(0), mpmath.mpf(0), UNIMODULAR
    circle = max(abs(abs(z) - 1) for z in roots)
    excess = max(mpmath.mpf(0), max(abs(z) for z in roots) - 1)
    if circle < tol:
        verdict = UNIMODULAR
    elif excess <= tol:
        verdict = IN_DISK
    else:
        verdict = NEITHER
    return circle, excess, verdict


def _horner(coeffs, z):
    p = coeffs[-1]
    dp = 0 * p
    for c in coeffs[-2::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _initial_points(log_abs, seed):
    """Starting points on circles whose radii come from the upper convex hull
    of (j, log|b_j|), with seeded angular jitter."""
    d = len(log_abs) - 1
    pts = [j for j in range(d + 1) if log_abs[j] > -math.inf]
    hull = []
    for j in pts:
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # drop i1 if it lies on or below the chord from i0 to j
            if (log_abs[i1] - log_abs[i0]) * (j - i0) <= (log_abs[j] - log_abs[i0]) * (i1 - i0):
                hull.pop()
            else:
                break
        hull.append(j)
    u = rng(seed).random(d)
    out = []
    for i0, i1 in zip(hull, hull[1:]):
        n = i1 - i0
        radius = math.exp((log_abs[i0] - log_abs[i1]) / n)
        for t in range(n):
            k = len(out)
            theta = 2 * math.pi * (t + u[k]) / n + 2 * math.pi * k / d
            out.append(complex(radius * math.cos(theta), radius * math.sin(theta)))
    return out


def _aberth_numpy(b, start, max_iter=500):
    """Double-precision Aberth-Ehrlich; returns (last finite iterate or None, iterations, converged)."""
    b = np.asarray(b, dtype=np.complex128)
    if not np.all(np.isfinite(b)) or b[-1] == 0:
        return None, 0, False
    z = np.asarray(start, dtype=np.complex128)
    d = len(z)
    best, stalled = np.inf, 0
    with np.errstate(all="ignore"):
        for it in range(1, max_iter + 1):
            p = np.full(d, b[-1], dtype=np.complex128)
            dp = np.zeros(d, dtype=np.complex128)
            for c in b[-2::-1]:
                dp = dp * z + p
                p = p * z + c
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = (1.0 / diff).sum(axis=1)
            w = ratio / (1 - ratio * s)
            if not np.all(np.isfinite(w)):
                return (z if np.all(np.isfinite(z)) else None), it, False
            z = z - w
            rel = np.max(np.abs(w) / np.maximum(1.0, np.abs(z)))
            if rel < 1e-13:
                return z, it, True
            # corrections stuck at the rounding floor of an ill-conditioned polynomial
            if rel < 1e-6:
                stalled = stalled + 1 if rel > 0.5 * best else 0
                if stalled >= 5:
                    return z, it, True
            best = min(best, rel)
    return z, max_iter, False


def _mpf_to_gmpy(x):
    sign, man, exp, _ = x._mpf_
    if not man:
        return gmpy2.mpfr(0)
    v = gmpy2.mul_2exp(gmpy2.mpfr(man), exp)
    return -v if sign else v


def _to_gmpy(z):
    z = mpmath.mpmathify(z)
    if isinstance(z, mpmath.mpc):
        return gmpy2.mpc(_mpf_to_gmpy(z.real), _mpf_to_gmpy(z.imag))
    return gmpy2.mpc(_mpf_to_gmpy(z), 0)


def _from_gmpy(z):
    def conv(x):
        man, exp = x.as_mantissa_exp()
        return mpmath.mpf((int(man), int(exp)))

    return mpmath.mpc(conv(z.real), conv(z.imag))


def _aberth_gmpy(b, z, digits, max_iter=40):
    """Polish approximate roots by Aberth-Ehrlich steps in gmpy2.

    Each step runs at roughly three times the bits of the previous correction,
    capped at the full working precision, since convergence is cubic. Roots
    already converged at the current bit level are held fixed until the level
    rises, so stragglers do not cost a sweep over every root.
    """
    full = int(digits * 3.33) + 16
    d = len(z)
    with gmpy2.context(gmpy2.get_context(), precision=full + 64):
        gb = [_to_gmpy(c) for c in b]
        gz = [gmpy2.mpc(complex(x)) if isinstance(x, complex) else _to_gmpy(x) for x in z]
    one = gmpy2.mpfr(1)
    acc = 40
    best_cb = 0
    level = None
    cbs = [0] * d
    for it in range(1, max_iter + 1):
        bits = min(full, 3 * acc + 64)
        if bits != level:
            active = range(d)
            level = bits
        else:
            active = [i for i in range(d) if cbs[i] < bits - 16]
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            corr = {}
            for i in active:
                zi = gz[i]
                p = gb[-1]
                dp = gmpy2.mpc(0)
                for c in gb[-2::-1]:
                    dp = dp * zi + p
                    p = p * zi + c
                if p == 0:
                    corr[i] = None
                    continue
                ratio = p / dp
                s = gmpy2.mpc(0)
                for j in range(d):
                    if j != i:
                        s += 1 / (zi - gz[j])
                corr[i] = ratio / (1 - ratio * s)
            for i, c in corr.items():
                if c is None:
                    cbs[i] = full
                    continue
                gz[i] = gz[i] - c
                rel = abs(c) / max(one, abs(gz[i]))
                if not gmpy2.is_finite(rel):
                    return None, it, False
                cbs[i] = full if rel == 0 else int(-gmpy2.log2(rel))
        cb = min(cbs)
        if bits == full:
            # stop at full accuracy, or once corrections no longer shrink
            if cb >= full - 20 or (cb > 64 and cb <= best_cb):
                return [_from_gmpy(x) for x in gz], it, True
            best_cb = max(best_cb, cb)
        acc = max(acc, min(bits - 8, 3 * cb))
    return [_from_gmpy(x) for x in gz], max_iter, False


def _residuals(coeffs, roots, big, digits):
    """|p(z)| / (big max(1, |z|)^d) for each root, evaluated in gmpy2."""
    d = len(coeffs) - 1
    with gmpy2.context(gmpy2.get_context(), precision=int(digits * 3.33) + 16):
        gc = [_to_gmpy(c) for c in coeffs]
        gbig = _mpf_to_gmpy(mpmath.mpf(big))
        out = []
        for z in roots:
            gz = _to_gmpy(z)
            p = gc[-1]
            for c in gc[-2::-1]:
                p = p * gz + c
            r = abs(p) / (gbig * max(gmpy2.mpfr(1), abs(gz)) ** d)
            man, exp = r.as_mantissa_exp()
            out.append(mpmath.mpf((int(man), int(exp))))
    return out


def _companion_roots(b):
    d = len(b) - 1
    lead = b[-1]
    m = mpmath.matrix(d, d)
    for i in range(1, d):
        m[i, i - 1] = 1
    for i in range(d):
        m[i, d - 1] = -b[i] / lead
    vals = mpmath.eig(m, left=False, right=False)
    return list(vals)


def find_roots(poly, precision=64, tol=DEFAULT_TOLERANCE, seed=0, strip=True, start=None):
    """All complex roots of ``poly`` (ascending coefficients) with a ZeroReport.

    Leading coefficients below 10^-(precision/2) of the largest coefficient are
    treated as a degree drop; trailing ones of that size as exact zero roots.
    With ``strip=False`` only exactly zero coefficients are removed, for input
    whose small coefficients are known to be exact. ``start`` optionally gives
    approximations to all roots (of the stripped polynomial), which replace the
    double precision stage.
    The remaining polynomial is rescaled so that the geometric mean of the root
    moduli is 1, solved by Aberth-Ehrlich iteration (double precision start,
    then polished at full precision), and residuals are checked by Horner
    evaluation of the original coefficients.
    """
    digits = precision + 10
    with mp.workdps(digits):
        a = [mpmath.mpmathify(c) for c in poly]
        if not a:
            raise InvalidArgumentError("empty polynomial")
        big = max(abs(c) for c in a)
        if big == 0:
            raise InvalidArgumentError("zero polynomial")
        thresh = big * mpmath.mpf(10) ** (-(precision // 2)) if strip else mpmath.mpf(0)
        dropped = 0
        while len(a) > 1 and abs(a[-1]) <= thresh:
            a.pop()
            dropped += 1
        zero_roots = 0
        while len(a) > 1 and abs(a[0]) <= thresh:
            a.pop(0)
            zero_roots += 1
        d = len(a) - 1
        if d + zero_roots < 1:
            raise InvalidArgumentError("polynomial has degree 0 after stripping negligible coefficients")

        roots = []
        method = "none"
        iters = 0
        scale = mpmath.mpf(1)
        if d >= 1:
            scale = mpmath.root(abs(a[0] / a[-1]), d)
            b = [c * scale**j for j, c in enumerate(a)]
            bmax = max(abs(c) for c in b)
            b = [c / bmax for c in b]
            converged = False
            if start is not None and len(start) == d:
                y, iters, converged = _aberth_gmpy(b, [complex(z) / float(scale) for z in start], digits, 100)
                method = "aberth-guided"
            log_abs = [float(mpmath.log(abs(c))) if c else -math.inf for c in b]
            start = _initial_points(log_abs, seed)
            approx, settled = None, False
            if not converged:
                try:
                    approx, it2, settled = _aberth_numpy([complex(c) for c in b], start)
                    iters += it2
                except (OverflowError, ValueError):
                    pass
            if approx is not None:
                y, it2, converged = _aberth_gmpy(b, [complex(z) for z in approx], digits, 40 if settled else 300)
                iters += it2
                method = "aberth"
            if not converged:
                y, it2, converged = _aberth_gmpy(b, start, digits, max_iter=1000)
                iters += it2
                method = "aberth-restart"
            if not converged:
                y0 = _companion_roots(b)
                y, it2, converged = _aberth_gmpy(b, y0, digits, max_iter=200)
                iters += it2
                method = "companion"
            if not converged:
                raise NumericalError(
                    "root iteration did not converge", {"degree": d, "precision": precision, "seed": seed}
                )
            roots = [scale * z for z in y]

        roots = sorted(roots, key=lambda z: (float(mpmath.arg(z)), float(abs(z))))
        roots = [mpmath.mpc(0)] * zero_roots + roots
        full = list(a)
        full = [mpmath.mpf(0)] * zero_roots + full
        residuals = _residuals(full, roots, big, digits)
        limit = mpmath.mpf(10) ** (-(precision / 3))
        reliable = all(r < limit for r in residuals)
        circle, excess, verdict = classify(roots, tol)
    return ZeroReport(
        degree=len(roots),
        roots=tuple(roots),
        residuals=tuple(residuals),
        max_circle_distance=circle,
        max_disk_excess=excess,
        verdict=verdict,
        tolerance=tol,
        reliable=reliable,
        precision=precision,
        seed=seed,
        method=method,
        iterations=iters,
        scale=scale,
        dropped_leading=dropped,
        zero_roots=zero_roots,
    )


def is_self_reciprocal(poly, tol=DEFAULT_TOLERANCE):
    """For real coefficients: a_j = eps a_(d-j) with eps = +-1, relative to the largest coefficient."""
    a = [mpmath.mpmathify(c) for c in poly]
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    big = max(abs(c) for c in a)
    d = len(a) - 1
    for eps in (1, -1):
        if all(abs(a[j] - eps * a[d - j]) <= tol * big for j in range(d + 1)):
            return True
    return False


def derivative(poly):
    return [j * c for j, c in enumerate(poly)][1:]


def unimodularity_report(poly, tol=DEFAULT_TOLERANCE, precision=64, seed=0, cohn=True, strip=True, start=None):
    """Roots plus the unimodular / in_disk / neither verdict.

    For real self-reciprocal input the verdict is cross-checked against Cohn's
    criterion: the derivative must have all its zeros in |z| <= 1 + tol.
    """
    report = find_roots(poly, precision=precision, tol=tol, seed=seed, strip=strip, start=start)
    with mp.workdps(precision + 10):
        coeffs = [mpmath.mpmathify(c) for c in poly]
        real = all(mpmath.im(c) == 0 for c in coeffs)
        selfrec = real and is_self_reciprocal(coeffs, tol)
        cohn_ok = None
        if cohn and selfrec and len(coeffs) > 2:
            dreport = find_roots(derivative(coeffs), precision=precision, tol=tol, seed=seed)
            cohn_ok = bool(dreport.max_modulus <= 1 + tol)
    return _replace(report, self_reciprocal=selfrec if real else None, cohn_check=cohn_ok)


def _replace(report, **changes):
    from dataclasses import replace

    return replace(report, **changes)


@dataclass(frozen=True)
class TruncExp:
    """T_{m,N}(z) = sum_{n<=m} (2 pi N z)^n / n! and its reversal H_{m,N}(z) = z^m T_{m,N}(1/z)."""

    m: int
    N: int
    t_coeffs: tuple
    h_coeffs: tuple


def truncated_exp(m, N, precision=64):
    if m < 1 or N < 1:
        raise InvalidArgumentError("need m, N >= 1")
    with mp.workdps(precision):
        x = 2 * mpmath.pi * N
        t = [mpmath.mpf(1)]
        for n in range(1, m + 1):
            t.append(t[-1] * x / n)
    return TruncExp(m, N, tuple(t), tuple(reversed(t)))


def h_root_guesses(m, N):
    """Approximate zeros of H_{m,N} from the large-degree asymptotics of the
    partial sums s_m of exp.

    With n = m + 1 the zeros u of s_m(n u) nearly solve
    n (log u + 1 - u) = log(sqrt(2 pi n) (1 - u)) + 2 pi i j; each is refined by
    Newton's method from the limiting curve |u e^(1-u)| = 1. Returns None if the
    guesses fail to separate, so callers fall back to generic starts.
    """
    n = m + 1
    log_front = math.log(math.sqrt(2 * math.pi * n))
    out = []
    for j in range(1, m + 1):
        theta = 2 * math.pi * (j - 0.5) / m
        u = -complex(mpmath.lambertw(-cmath.exp(-1 + 1j * theta)))
        g = n * (cmath.log(u) + 1 - u) - log_front - cmath.log(1 - u)
        branch = round(g.imag / (2 * math.pi))
        for _ in range(30):
            g = n * (cmath.log(u) + 1 - u) - log_front - cmath.log(1 - u) - 2j * math.pi * branch
            step = g / (n * (1 / u - 1) + 1 / (1 - u))
            u -= step
            if abs(step) < 1e-15:
                break
        # T_{m,N}(z) = s_m(2 pi N z); H roots are reciprocals of T roots
        out.append(2 * math.pi * N / (n * u))
    if len({(round(z.real, 9), round(z.imag, 9)) for z in out}) < m:
        return None
    return out


def h_zero_report(m, N, precision=64, tol=DEFAULT_TOLERANCE, seed=0):
    """Direct root check of H_{m,N}, started from the asymptotic guesses."""
    h = truncated_exp(m, N, precision + 20).h_coeffs
    guesses = h_root_guesses(m, N) if m >= 4 else None
    return unimodularity_report(h, tol=tol, precision=precision, seed=seed, strip=False, start=guesses)


def t_lower_bound(m, N, precision=64):
    """e^(-2 pi N) - (2 pi N)^(m+1) / (m+1)! e^(2 pi N): lower bound for |T_{m,N}| on |z| <= 1."""
    with mp.workdps(precision):
        a = 2 * mpmath.pi * N
        return mpmath.exp(-a) - mpmath.power(a, m + 1) / mpmath.factorial(m + 1) * mpmath.exp(a)


def eq_h2(m, N):
    """4 pi N + (2m + 2) log(2 pi N) < (m + 1) log(m + 1) - m."""
    with mp.workdps(30):
        lhs = 4 * mpmath.pi * N + (2 * m + 2) * mpmath.log(2 * mpmath.pi * N)
        rhs = (m + 1) * mpmath.log(m + 1) - m
        return bool(lhs < rhs)


@dataclass(frozen=True)
class HCriterion:
    holds: bool
    lower_bound: mpmath.mpf
    eq_h2: bool
    n_in_range: bool
    small_n_case: bool

    def __iter__(self):
        yield self.holds
        yield self.lower_bound


def h_disk_criterion(m, N, precision=64):
    """Whether the known sufficient conditions put all zeros of H_{m,N} in the closed unit disk.

    True for N = 1 and m >= 20, or for m >= 210 with N <= log(m) / 4 and the
    elementary inequality ``eq_h2`` verified. Unpacks as ``(holds, lower_bound)``.
    """
    if m < 1 or N < 1:
        raise InvalidArgumentError("need m, N >= 1")
    small = N == 1 and m >= 20
    in_range = m >= 210 and N <= math.log(m) / 4
    h2 = eq_h2(m, N)
    holds = small or (in_range and h2)
    return HCriterion(holds, t_lower_bound(m, N, precision), h2, in_range, small)


def sample_t_lower_bound(m, N, n_samples, seed, precision=30):
    """Minimum of |T_{m,N}(z)| over points drawn uniformly from the closed unit disk."""
    if not h_disk_criterion(m, N).holds:
        raise InvalidArgumentError(f"disk criterion does not hold at m={m}, N={N}")
    gen = rng(seed)
    radii = np.sqrt(gen.random(n_samples))
    phases = 2 * np.pi * gen.random(n_samples)
    t = truncated_exp(m, N, precision).t_coeffs
    with mp.workdps(precision):
        best = None
        for r, th in zip(radii, phases):
            z = mpmath.mpc(float(r * np.cos(th)), float(r * np.sin(th)))
            v = abs(_horner(t, z)[0])
            best = v if best is None else min(best, v)
    return best
