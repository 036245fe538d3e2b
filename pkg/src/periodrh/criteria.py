"""Sufficient criteria for unimodular period polynomials and randomized scans
that compare them with direct zero location."""

import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from ._numeric import default_precision, to_decimal_string
from .errors import BudgetExceededError, InvalidArgumentError, NumericalError
from .lfunctions import completed_lvalues
from .modforms import (
    deligne_constant_estimate,
    dim_cusp_forms,
    eigenforms,
    jenkins_rouse_bound,
)
from .periodpoly import modified_polynomial_p
from .zeros import DEFAULT_TOLERANCE, UNIMODULAR, find_roots, h_disk_criterion, rng, unimodularity_report

CONST_DIGITS = 50


@dataclass(frozen=True)
class CriterionConstants:
    alpha: mpmath.mpf
    beta: mpmath.mpf
    gamma: mpmath.mpf
    delta: mpmath.mpf

    def __iter__(self):
        return iter((self.alpha, self.beta, self.gamma, self.delta))


def _check_weight_order(k, N):
    if k < 12 or k % 2:
        raise InvalidArgumentError(f"need even k >= 12, got {k}")
    if N < 1 or 12 * N > k:
        raise InvalidArgumentError(f"need 1 <= N <= k/12, got N={N} at k={k}")


def criterion_constants(k, N=1, precision=CONST_DIGITS):
    """alpha_{k,N}, beta_k (both per unit C_f), gamma_{k,N}, delta_{k,N}."""
    _check_weight_order(k, N)
    w = k - 2
    q = k // 4
    with mp.workdps(precision):
        two_pi = 2 * mpmath.pi
        e2pi = mpmath.exp(two_pi)
        alpha = 4 * e2pi / mpmath.power(N + 1, mpmath.mpf(k) / 4)
        beta = 4 * e2pi * two_pi**q * (mpmath.sqrt(k) * mpmath.log(2 * k) + 1) / mpmath.factorial(q)
        x = two_pi * N
        gamma = mpmath.exp(x) * x**q / (mpmath.power(N, w + 1) * mpmath.factorial(q))
        delta = (mpmath.exp(-x) - x ** (k // 2) / mpmath.factorial(k // 2) * mpmath.exp(x)) / mpmath.power(N, w + 1)
    return CriterionConstants(alpha, beta, gamma, delta)


@dataclass(frozen=True)
class CriterionReport:
    k: int
    N: int
    c_lower: mpmath.mpf
    c_upper: mpmath.mpf
    c_upper_source: str
    alpha: mpmath.mpf
    beta: mpmath.mpf
    gamma: mpmath.mpf
    delta: mpmath.mpf
    lhs: mpmath.mpf
    rhs: mpmath.mpf
    key_inequality_holds: bool
    h_condition_holds: bool
    overall: str
    reason: str = ""
    zero_report: object = None

    def to_json_dict(self):
        fmt = lambda x: None if x is None else to_decimal_string(x, 20)
        out = {
            "k": self.k,
            "N": self.N,
            "c_lower": fmt(self.c_lower),
            "c_upper": fmt(self.c_upper),
            "c_upper_source": self.c_upper_source,
            "alpha": fmt(self.alpha),
            "beta": fmt(self.beta),
            "gamma": fmt(self.gamma),
            "delta": fmt(self.delta),
            "lhs": fmt(self.lhs),
            "rhs": fmt(self.rhs),
            "key_inequality_holds": self.key_inequality_holds,
            "h_condition_holds": self.h_condition_holds,
            "overall": self.overall,
            "reason": self.reason,
        }
        if self.zero_report is not None:
            z = self.zero_report
            out["direct_check"] = {
                "verdict": z.verdict,
                "max_circle_distance": fmt(z.max_circle_distance),
                "reliable": z.reliable,
                "cohn_check": z.cohn_check,
            }
        return out


SUFFICIENT_PASS = "sufficient-pass"
INCONCLUSIVE = "fail-inconclusive"


def main_criterion(f, c_upper=None, direct_check=False, tol=DEFAULT_TOLERANCE, seed=0):
    """Evaluate the explicit sufficient condition for unimodularity of r_f.

    The coefficient constant C_f is replaced by an upper bound: ``c_upper`` if
    given, the Deligne bound for forms with known eigen-decomposition, or the
    Jenkins-Rouse bound otherwise. With ``direct_check`` the report also carries
    the zero locations of p_f computed directly.
    """
    k, N = f.k, f.N
    lower, upper = deligne_constant_estimate(f, min(f.n_terms - 1, 100))
    if c_upper is not None:
        source = "given"
    elif upper is not None:
        c_upper, source = upper, "deligne"
    else:
        c_upper, source = jenkins_rouse_bound(f), "jenkins-rouse"
    consts = criterion_constants(k, N)
    h = h_disk_criterion(k // 2 - 1, N)
    zero_report = None
    if direct_check:
        values = completed_lvalues(f)
        p = modified_polynomial_p(values)
        zero_report = unimodularity_report(p.coeffs, tol=tol, precision=f.precision, seed=seed)
    with mp.workdps(CONST_DIGITS):
        c = mpmath.mpf(c_upper)
        lhs = c * consts.alpha + c * consts.beta + consts.gamma
        rhs = consts.delta
        key = bool(lhs < rhs)
    reasons = []
    if not key:
        reasons.append("key inequality fails")
    if not h.holds:
        reasons.append(f"disk criterion for H_(m,N) not met at m={k // 2 - 1}, N={N}")
    overall = SUFFICIENT_PASS if key and h.holds else INCONCLUSIVE
    return CriterionReport(
        k, N, lower, c, source, consts.alpha, consts.beta, consts.gamma, consts.delta,
        lhs, rhs, key, h.holds, overall, "; ".join(reasons), zero_report,
    )


def u_bound(k):
    """U(k) = 0.001865 / (4 e^(2 pi)) 2^(k/4)."""
    with mp.workdps(CONST_DIGITS):
        return mpmath.mpf("0.001865") / (4 * mpmath.exp(2 * mpmath.pi)) * mpmath.power(2, mpmath.mpf(k) / 4)


def u_star(k):
    """U*(k) = 100 (7/3)^((k-150)/2)."""
    with mp.workdps(CONST_DIGITS):
        return 100 * mpmath.power(mpmath.mpf(7) / 3, mpmath.mpf(k - 150) / 2)


@dataclass(frozen=True)
class UBoundReport:
    k: int
    u: mpmath.mpf
    u_star: mpmath.mpf
    sum_abs: mpmath.mpf
    abs_sum: mpmath.mpf
    c_plus: mpmath.mpf
    c_minus: mpmath.mpf
    ineq_holds: bool
    pm_condition_holds: bool
    theorem_applies: bool

    def to_json_dict(self):
        fmt = lambda x: to_decimal_string(x, 20)
        return {
            "k": self.k,
            "u": fmt(self.u),
            "u_star": fmt(self.u_star),
            "sum_abs": fmt(self.sum_abs),
            "abs_sum": fmt(self.abs_sum),
            "c_plus": fmt(self.c_plus),
            "c_minus": fmt(self.c_minus),
            "ineq_holds": self.ineq_holds,
            "pm_condition_holds": self.pm_condition_holds,
            "theorem_applies": self.theorem_applies,
        }


def u_bound_check(coeffs, k):
    """Both forms of the coefficient-cancellation condition for sum_j c_j f_j.

    ``theorem_applies`` is False below weight 180, where the conditions are
    still evaluated but carry no guarantee.
    """
    if all(c == 0 for c in coeffs):
        raise InvalidArgumentError("all coefficients are zero")
    u = u_bound(k)
    with mp.workdps(CONST_DIGITS):
        cs = [mpmath.mpf(c) for c in coeffs]
        sum_abs = mpmath.fsum(abs(c) for c in cs)
        abs_sum = abs(mpmath.fsum(cs))
        c_plus = mpmath.fsum(c for c in cs if c > 0)
        c_minus = -mpmath.fsum(c for c in cs if c < 0)
        ratio = (u - 1) / (u + 1)
        ineq = bool(sum_abs <= u * abs_sum)
        pm = bool(c_plus <= ratio * c_minus or c_minus <= ratio * c_plus)
    return UBoundReport(k, u, u_star(k), sum_abs, abs_sum, c_plus, c_minus, ineq, pm, k >= 180)


def _constellation_holds(k, total_c, total_a):
    u = u_bound(k)
    with mp.workdps(CONST_DIGITS):
        return total_a <= (u - 1) / (u + 1) * total_c


def constellation_k0(c, a):
    """Smallest even k >= 180 from which every member of the constellation family passes."""
    if any(x < 0 for x in c) or any(x < 0 for x in a):
        raise InvalidArgumentError("constellation vectors must be non-negative")
    with mp.workdps(CONST_DIGITS):
        total_c = mpmath.fsum(mpmath.mpf(x) for x in c)
        total_a = mpmath.fsum(mpmath.mpf(x) for x in a)
    if total_c <= total_a:
        raise InvalidArgumentError("need sum(c) > sum(a)")
    lo = 180
    if _constellation_holds(lo, total_c, total_a):
        return lo
    step = 2
    hi = lo + step
    while not _constellation_holds(hi, total_c, total_a):
        lo = hi
        step *= 2
        hi = lo + step
    # invariant: fails at lo, holds at hi; both even
    while hi - lo > 2:
        mid = lo + ((hi - lo) // 4) * 2
        if _constellation_holds(mid, total_c, total_a):
            hi = mid
        else:
            lo = mid
    return hi


def positive_combination_check(k):
    """Whether alpha + beta + gamma < delta at N = 1 and H_{k/2-1,1} has its zeros in the disk.

    This is the sufficient condition for every non-negative combination of
    eigenforms when C_f <= 1.
    """
    if k < 12 or k % 2:
        raise InvalidArgumentError(f"need even k >= 12, got {k}")
    a, b, g, d = criterion_constants(k, 1)
    with mp.workdps(CONST_DIGITS):
        key = a + b + g < d
    return bool(key and h_disk_criterion(k // 2 - 1, 1).holds)


# ---------------------------------------------------------------------------
# scans


@dataclass(frozen=True)
class ScanSample:
    index: int
    vector: tuple
    N: int
    verdict: str
    max_circle_distance: str
    positive_theorem: bool
    u_bound_pass: bool
    main_criterion_pass: bool

    @property
    def theorem_backed(self):
        return self.positive_theorem or self.u_bound_pass or self.main_criterion_pass


@dataclass(frozen=True)
class ScanResult:
    k: int
    X: int
    mode: str
    samples: int
    seed: int
    precision: int
    tolerance: float
    total: int
    unimodular_count: int
    zero_sum_count: int
    p_hat: Fraction
    records: tuple = ()
    soundness_violations: tuple = ()

    def to_json_dict(self):
        return {
            "k": self.k,
            "X": self.X,
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "precision": self.precision,
            "tolerance": repr(self.tolerance),
            "total": self.total,
            "unimodular_count": self.unimodular_count,
            "zero_sum_count": self.zero_sum_count,
            "p_hat": f"{self.p_hat.numerator}/{self.p_hat.denominator}",
            "p_hat_decimal": f"{float(self.p_hat):.12f}",
            "soundness_violations": [list(s.vector) for s in self.soundness_violations],
            "records": [
                {
                    "index": s.index,
                    "vector": list(s.vector),
                    "N": s.N,
                    "verdict": s.verdict,
                    "max_circle_distance": s.max_circle_distance,
                    "positive_theorem": s.positive_theorem,
                    "u_bound_pass": s.u_bound_pass,
                    "main_criterion_pass": s.main_criterion_pass,
                }
                for s in self.records
            ],
        }

    def csv_rows(self):
        return [
            (" ".join(str(c) for c in s.vector), s.N, s.verdict, s.max_circle_distance)
            for s in self.records
        ]


def format_distance(d, precision):
    """Circle distance rendered stably: anything below 10^-(precision/2) is noise."""
    floor = mpmath.mpf(10) ** (-(precision // 2))
    if d < floor:
        return f"<1e-{precision // 2}"
    return mpmath.nstr(d, 6, min_fixed=1, max_fixed=0)


@dataclass
class EigenTable:
    """Per-weight data shared read-only by all scan samples."""

    k: int
    precision: int
    forms: list
    p_coeffs: list  # p_f coefficient vectors of the eigenforms (unnormalized combination is linear)

    @classmethod
    def build(cls, k, precision=None, cache_dir=None):
        precision = precision or default_precision(k)
        _, forms = eigenforms(k, precision, cache_dir=cache_dir)
        p_coeffs = [modified_polynomial_p(completed_lvalues(f)).coeffs for f in forms]
        return cls(k, precision, forms, p_coeffs)

    def combine_p(self, vector):
        digits = self.forms[0].digits
        with mp.workdps(digits):
            return [
                mpmath.fsum(c * col[n] for c, col in zip(vector, self.p_coeffs) if c)
                for n in range(len(self.p_coeffs[0]))
            ]

    def vanishing_order(self, vector):
        if sum(vector) != 0:
            return 1
        digits = self.forms[0].digits
        with mp.workdps(digits):
            tol = mpmath.mpf(10) ** (-(self.precision // 2))
            for n in range(2, self.forms[0].n_terms):
                terms = [c * f.coeffs[n] for c, f in zip(vector, self.forms) if c]
                if abs(mpmath.fsum(terms)) > tol * max(1, max(abs(t) for t in terms)):
                    return n
        raise NumericalError("combination vanishes identically", {"vector": vector})


def _classify_sample(table, index, vector, seed, tol, c_consts, h_holds):
    k, precision = table.k, table.precision
    p = table.combine_p(vector)
    report = None
    for attempt in range(2):
        report = find_roots(p, precision=precision, tol=tol, seed=seed + attempt)
        if report.reliable:
            break
    else:
        raise NumericalError("unreliable roots in scan sample", {"vector": vector, "k": k})
    N = table.vanishing_order(vector)
    positive = k >= 120 and (all(c >= 0 for c in vector) or all(c <= 0 for c in vector))
    ub = u_bound_check(vector, k)
    u_pass = ub.theorem_applies and ub.ineq_holds
    main_pass = False
    if N == 1 and h_holds:
        with mp.workdps(CONST_DIGITS):
            c_up = ub.sum_abs / ub.abs_sum
            a, b, g, d = c_consts
            main_pass = bool(c_up * a + c_up * b + g < d)
    return ScanSample(
        index,
        tuple(vector),
        N,
        report.verdict,
        format_distance(report.max_circle_distance, precision),
        positive,
        u_pass,
        main_pass,
    )


def _sample_seed(seed, index):
    return (seed * 1_000_003 + index) % (2**63)


def _run_chunk(args):
    table, items, seed, tol, consts, h_holds = args
    return [
        _classify_sample(table, i, v, _sample_seed(seed, i), tol, consts, h_holds) for i, v in items
    ]


def scan_vectors(k, X, mode, samples, seed):
    """Integer coefficient vectors for a scan, in a deterministic order."""
    r = dim_cusp_forms(k)
    if mode == "exhaustive":
        return [v for v in itertools.product(range(-X, X + 1), repeat=r) if any(v)]
    gen = rng(seed)
    out = []
    while len(out) < samples:
        v = tuple(int(x) for x in gen.integers(-X, X + 1, size=r))
        if any(v):
            out.append(v)
    return out


def probability_scan(
    k,
    X,
    mode="montecarlo",
    samples=None,
    seed=0,
    precision=None,
    tol=DEFAULT_TOLERANCE,
    budget=100_000,
    workers=1,
    keep_records=True,
    table=None,
    cache_dir=None,
):
    """Fraction of integer combinations in [-X, X]^r whose period polynomial is unimodular.

    Every sample is classified by locating the zeros of p_f directly; the
    sufficient criteria are evaluated alongside and any sample they certify
    but the zeros contradict is reported in ``soundness_violations``.
    """
    if k < 12 or k % 2:
        raise InvalidArgumentError(f"need even k >= 12, got {k}")
    if X < 1:
        raise InvalidArgumentError("X must be >= 1")
    r = dim_cusp_forms(k)
    if mode == "exhaustive":
        size = (2 * X + 1) ** r - 1
        if size > budget:
            raise BudgetExceededError(f"exhaustive scan needs {size} samples, budget is {budget}")
        samples = size
    elif mode == "montecarlo":
        if not samples or samples < 1:
            raise InvalidArgumentError("Monte Carlo mode needs a positive sample count")
    else:
        raise InvalidArgumentError(f"unknown mode {mode!r}")

    precision = precision or default_precision(k)
    if table is None:
        table = EigenTable.build(k, precision, cache_dir=cache_dir)
    vectors = scan_vectors(k, X, mode, samples, seed)
    consts = tuple(criterion_constants(k, 1)) if k >= 12 else None
    h_holds = h_disk_criterion(k // 2 - 1, 1).holds
    items = list(enumerate(vectors))

    if workers > 1 and len(items) > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [items[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_run_chunk, [(table, c, seed, tol, consts, h_holds) for c in chunks])
            records = sorted((s for part in parts for s in part), key=lambda s: s.index)
    else:
        records = _run_chunk((table, items, seed, tol, consts, h_holds))

    total = len(records)
    unimodular = sum(1 for s in records if s.verdict == UNIMODULAR)
    zero_sum = sum(1 for s in records if sum(s.vector) == 0)
    violations = tuple(s for s in records if s.theorem_backed and s.verdict != UNIMODULAR)
    return ScanResult(
        k,
        X,
        mode,
        samples,
        seed,
        precision,
        tol,
        total,
        unimodular,
        zero_sum,
        Fraction(unimodular, total),
        tuple(records) if keep_records else (),
        violations,
    )
