"""Command-line interface: ``periodrh <subcommand> ...``.

Exit codes: 0 success, 2 invalid arguments, 3 numerical failure, 4 budget exceeded.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import mpmath
from mpmath import mp

from . import __version__
from ._numeric import default_precision, to_decimal_string
from .criteria import (
    main_criterion,
    positive_combination_check,
    probability_scan,
    u_bound_check,
)
from .errors import (
    BudgetExceededError,
    InsufficientPrecisionError,
    InvalidArgumentError,
    NumericalError,
    PeriodRHError,
    PrecisionEscalationError,
)
from .lfunctions import completed_lvalues, functional_equation_residuals
from .modforms import dim_cusp_forms, eigenforms, linear_combination
from .periodpoly import (
    half_polynomial_q,
    modified_polynomial_p,
    period_polynomial_r,
    reconstruct_p_from_q,
    rv_transform,
    self_reciprocity_residual,
    zeta_checks,
)
from .report import CACHE_ENV, Result, RunConfig, emit_report
from .zeros import h_disk_criterion, h_zero_report, unimodularity_report

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_BUDGET = 0, 2, 3, 4

ZERO_HEADER = ("re", "im", "abs", "residual")
POLY_HEADER = ("n", "re", "im")


def _combo(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _precision_for(k, config):
    return config.precision or default_precision(k)


def _cache(config):
    return config.cache_dir


def _select_form(k, args, config):
    """The eigenform ``--eigenform j`` (default 0), or the ``--combo`` combination."""
    precision = _precision_for(k, config)
    _, forms = eigenforms(k, precision, cache_dir=_cache(config))
    combo = getattr(args, "combo", None)
    if combo:
        return linear_combination(combo, k, precision, forms)
    j = getattr(args, "eigenform", 0) or 0
    if not 0 <= j < len(forms):
        raise InvalidArgumentError(f"eigenform index {j} out of range 0..{len(forms) - 1}")
    return forms[j]


def _form_label(f):
    kind, data = f.provenance
    return f"k{f.k}-f{data}" if kind == "eigenform" else f"k{f.k}-c" + "_".join(str(c) for c in data)


def _poly_rows(coeffs, digits=40):
    rows = []
    for n, c in enumerate(coeffs):
        c = mpmath.mpmathify(c)
        rows.append((n, to_decimal_string(mpmath.re(c), digits), to_decimal_string(mpmath.im(c), digits)))
    return rows


# ---------------------------------------------------------------------------
# subcommands; each returns a Result


def cmd_eigenforms(args, config):
    k = args.k
    precision = _precision_for(k, config)
    system, forms = eigenforms(k, precision, cache_dir=_cache(config))
    terms = min(args.terms, forms[0].n_terms - 1)
    digits = min(precision, 40)
    payload = {
        "k": k,
        "dimension": system.r,
        "precision": precision,
        "n_terms": forms[0].n_terms,
        "t2_eigenvalues": [to_decimal_string(v, digits) for v in system.eigenvalues],
        "eigen_residual": to_decimal_string(system.residual, 6),
        "forms": [[to_decimal_string(f.coeffs[n], digits) for n in range(1, terms + 1)] for f in forms],
    }
    header = ("n",) + tuple(f"f{j}" for j in range(len(forms)))
    rows = [(n,) + tuple(to_decimal_string(f.coeffs[n], digits) for f in forms) for n in range(1, terms + 1)]
    return Result("eigenforms", f"eigenforms-k{k}", payload, header, rows, precision)


def cmd_lvalues(args, config):
    f = _select_form(args.k, args, config)
    values = completed_lvalues(f)
    fe = functional_equation_residuals(values)
    payload = values.to_json_dict()
    payload["N"] = f.N
    payload["functional_equation_residual"] = to_decimal_string(fe.max_residual, 6)
    digits = min(values.precision, 40)
    header = ("s", "Lambda", "L")
    rows = [
        (s, to_decimal_string(values.Lambda(s), digits), to_decimal_string(values.L(s), digits))
        for s in range(1, values.k)
    ]
    return Result("lvalues", f"lvalues-{_form_label(f)}", payload, header, rows, values.precision)


def _period(kind, values):
    if kind == "r":
        return period_polynomial_r(values)
    if kind == "p":
        return modified_polynomial_p(values)
    return half_polynomial_q(values)


def cmd_period(args, config):
    f = _select_form(args.k, args, config)
    values = completed_lvalues(f)
    poly = _period(args.kind, values)
    payload = poly.to_json_dict(values.precision)
    payload["N"] = f.N
    return Result(
        "period", f"period-{args.kind}-{_form_label(f)}", payload, POLY_HEADER, _poly_rows(poly.coeffs),
        values.precision,
    )


def _read_poly_file(path, precision):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read {path}: {exc.strerror or exc}")
    text = text.strip()
    if text.startswith("[") or text.startswith("{"):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("coeffs") or data.get("result", {}).get("coeffs")
        items = data
    else:
        items = text.replace(",", " ").split()
    if not items:
        raise InvalidArgumentError(f"{path} holds no coefficients")
    with mp.workdps(precision + 10):
        out = []
        for item in items:
            if isinstance(item, list):
                out.append(mpmath.mpc(mpmath.mpf(item[0]), mpmath.mpf(item[1])))
            else:
                try:
                    out.append(mpmath.mpmathify(str(item).replace("i", "j")))
                except (ValueError, TypeError):
                    raise InvalidArgumentError(f"cannot parse coefficient {item!r} in {path}")
    return out


def cmd_zeros(args, config):
    if (args.poly_file is None) == (args.from_period is None):
        raise InvalidArgumentError("give exactly one of a polynomial file or --from-period K")
    if args.poly_file is not None:
        precision = config.precision or 64
        coeffs = _read_poly_file(args.poly_file, precision)
        name = "zeros-" + Path(args.poly_file).stem
    else:
        f = _select_form(args.from_period, args, config)
        values = completed_lvalues(f)
        coeffs = _period(args.kind, values).coeffs
        precision = values.precision
        name = f"zeros-{args.kind}-{_form_label(f)}"
    report = unimodularity_report(coeffs, tol=config.tolerance, precision=precision, seed=config.seed)
    return Result("zeros", name, report.to_json_dict(), ZERO_HEADER, report.csv_rows(), precision)


def cmd_criterion(args, config):
    f = _select_form(args.k, args, config)
    report = main_criterion(f, direct_check=not args.no_direct, tol=config.tolerance, seed=config.seed)
    payload = report.to_json_dict()
    return Result("criterion", f"criterion-{_form_label(f)}", payload, precision=f.precision)


def cmd_ubound(args, config):
    r = dim_cusp_forms(args.k)
    if len(args.combo) != r:
        raise InvalidArgumentError(f"need {r} coefficients at k={args.k}, got {len(args.combo)}")
    report = u_bound_check(args.combo, args.k)
    payload = report.to_json_dict()
    payload["coeffs"] = list(args.combo)
    return Result("ubound", f"ubound-k{args.k}", payload)


def cmd_hpoly(args, config):
    m, N = args.m, args.N
    precision = config.precision or 64
    h = h_disk_criterion(m, N)
    report = h_zero_report(m, N, precision=precision, tol=config.tolerance, seed=config.seed)
    payload = {
        "m": m,
        "N": N,
        "criterion_holds": h.holds,
        "eq_h2": h.eq_h2,
        "t_lower_bound": to_decimal_string(h.lower_bound, 20),
        "zeros": report.to_json_dict(),
    }
    return Result("hpoly", f"hpoly-m{m}-N{N}", payload, ZERO_HEADER, report.csv_rows(), precision)


def cmd_scan(args, config):
    if args.exhaustive and args.samples:
        raise InvalidArgumentError("--exhaustive and --samples are exclusive")
    mode = "exhaustive" if args.exhaustive else "montecarlo"
    result = probability_scan(
        args.k,
        args.X,
        mode=mode,
        samples=args.samples,
        seed=config.seed,
        precision=config.precision,
        tol=config.tolerance,
        budget=config.budget,
        workers=config.threads,
        cache_dir=_cache(config),
    )
    header = ("vector", "N", "verdict", "max_circle_distance")
    name = f"scan-k{args.k}-X{args.X}-" + ("exhaustive" if args.exhaustive else f"n{args.samples}-s{config.seed}")
    return Result("scan", name, result.to_json_dict(), header, result.csv_rows(), result.precision)


def _zeta_payload(values, seed):
    p = modified_polynomial_p(values)
    Z = rv_transform(p, values.precision)
    check = zeta_checks(Z, values.precision, seed)
    digits = min(values.precision, 40)
    return Z, {
        "zeta": Z.to_json_dict(digits),
        "functional_equation_residual": to_decimal_string(check.functional_equation_residual, 6),
        "max_line_deviation": to_decimal_string(check.max_line_deviation, 6),
        "roots": [to_decimal_string(mpmath.mpc(r), digits) for r in check.roots],
    }


def cmd_zeta(args, config):
    f = _select_form(args.k, args, config)
    values = completed_lvalues(f)
    Z, payload = _zeta_payload(values, config.seed)
    payload["k"] = f.k
    payload["N"] = f.N
    return Result("zeta", f"zeta-{_form_label(f)}", payload, POLY_HEADER, _poly_rows(Z.coeffs), values.precision)


def cmd_report(args, config):
    """Every stage of the pipeline for each eigenform (or the given combination)."""
    k = args.k
    precision = _precision_for(k, config)
    _, forms = eigenforms(k, precision, cache_dir=_cache(config))
    if args.combo:
        forms = [linear_combination(args.combo, k, precision, forms)]
    sections = []
    rows = []
    for f in forms:
        values = completed_lvalues(f)
        fe = functional_equation_residuals(values)
        p = modified_polynomial_p(values)
        q = half_polynomial_q(values)
        r_report = unimodularity_report(
            period_polynomial_r(values).coeffs, tol=config.tolerance, precision=precision, seed=config.seed
        )
        crit = main_criterion(f, tol=config.tolerance, seed=config.seed)
        _, zeta = _zeta_payload(values, config.seed)
        label = _form_label(f)
        sections.append(
            {
                "form": label,
                "N": f.N,
                "functional_equation_residual": to_decimal_string(fe.max_residual, 6),
                "p_from_q_residual": to_decimal_string(reconstruct_p_from_q(q, p=p), 6),
                "self_reciprocity_residual": to_decimal_string(self_reciprocity_residual(p), 6),
                "r_zeros": {
                    "verdict": r_report.verdict,
                    "max_circle_distance": to_decimal_string(r_report.max_circle_distance, 6),
                    "reliable": r_report.reliable,
                },
                "criterion": crit.to_json_dict(),
                "zeta_line_deviation": zeta["max_line_deviation"],
                "zeta_functional_equation_residual": zeta["functional_equation_residual"],
            }
        )
        rows.append((label, r_report.verdict, to_decimal_string(r_report.max_circle_distance, 6), crit.overall))
    payload = {"k": k, "precision": precision, "dimension": dim_cusp_forms(k), "forms": sections}
    if k >= 42:
        payload["positive_combination_check"] = positive_combination_check(k)
    header = ("form", "r_verdict", "r_max_circle_distance", "criterion")
    return Result("report", f"report-k{k}", payload, header, rows, precision)


# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--precision", type=int, help="decimal digits (default max(64, 2k))")
    p.add_argument("--tolerance", type=float, default=1e-10, help="unit-circle tolerance (default 1e-10)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache-dir", help=f"eigenform cache directory (default ${CACHE_ENV})")
    p.add_argument("--no-cache", action="store_true", help="recompute everything, ignore the cache")
    p.add_argument("--threads", type=int, default=1, help="worker processes for scans")
    p.add_argument("--budget", type=int, default=100_000, help="largest exhaustive scan allowed")
    p.add_argument("--output", choices=("json", "csv", "both"), default="json")
    p.add_argument("--out", help="directory for report files (default: stdout)")
    p.add_argument("--content-addressed", action="store_true", help="name files by content digest")
    p.add_argument("--no-timestamp", action="store_true", help="omit the generation time")


def _add_form_args(p, combo_required=False):
    p.add_argument("--combo", type=_combo, required=combo_required, help="integer coefficients c1,c2,... on the eigenbasis")
    if not combo_required:
        p.add_argument("--eigenform", type=int, default=0, help="eigenform index when no --combo is given")


def build_parser():
    parser = argparse.ArgumentParser(prog="periodrh", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"periodrh {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("eigenforms", help="normalized Hecke eigenbasis of S_k")
    p.add_argument("k", type=int)
    p.add_argument("--terms", type=int, default=10, help="coefficients shown per form")
    p.set_defaults(func=cmd_eigenforms)

    p = sub.add_parser("lvalues", help="critical values Lambda(f, s), L(f, s)")
    p.add_argument("k", type=int)
    _add_form_args(p)
    p.set_defaults(func=cmd_lvalues)

    p = sub.add_parser("period", help="period polynomial r_f, p_f or q_f")
    p.add_argument("k", type=int)
    p.add_argument("--kind", choices=("r", "p", "q"), default="r")
    _add_form_args(p)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("zeros", help="zeros of a polynomial file or of a period polynomial")
    p.add_argument("poly_file", nargs="?", help="coefficients in ascending order (JSON list or whitespace separated)")
    p.add_argument("--from-period", type=int, metavar="K", help="use the period polynomial at weight K")
    p.add_argument("--kind", choices=("r", "p", "q"), default="p")
    _add_form_args(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("criterion", help="explicit sufficient criterion, with the direct zero check")
    p.add_argument("k", type=int)
    p.add_argument("--no-direct", action="store_true", help="skip the direct zero check")
    _add_form_args(p)
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("ubound", help="coefficient cancellation condition for a combination")
    p.add_argument("k", type=int)
    _add_form_args(p, combo_required=True)
    p.set_defaults(func=cmd_ubound)

    p = sub.add_parser("hpoly", help="zeros of H_{m,N} and the disk criterion")
    p.add_argument("m", type=int)
    p.add_argument("N", type=int)
    p.set_defaults(func=cmd_hpoly)

    p = sub.add_parser("scan", help="fraction of integer combinations with unimodular r_f")
    p.add_argument("k", type=int)
    p.add_argument("X", type=int)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("zeta", help="zeta polynomial of p_f")
    p.add_argument("k", type=int)
    _add_form_args(p)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("report", help="full pipeline for every eigenform at weight k")
    p.add_argument("k", type=int)
    p.add_argument("--combo", type=_combo)
    p.set_defaults(func=cmd_report)

    for action in sub.choices.values():
        _add_common(action)
    return parser


def config_from_args(args):
    cache_dir = None if args.no_cache else (args.cache_dir or os.environ.get(CACHE_ENV) or None)
    return RunConfig(
        precision=args.precision,
        tolerance=args.tolerance,
        cache_dir=cache_dir,
        seed=args.seed,
        budget=args.budget,
        output=args.output,
        out_dir=args.out,
        content_addressed=args.content_addressed,
        timestamp=not args.no_timestamp,
        threads=args.threads,
    )


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        config = config_from_args(args)
        result = args.func(args, config)
        paths = emit_report(result, config, stream=stdout)
        for path in paths:
            print(path, file=sys.stderr)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvalidArgumentError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, InsufficientPrecisionError, PrecisionEscalationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except PeriodRHError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
