"""Delta from its q-expansion to the zeros of its zeta polynomial."""

import mpmath

from periodrh import modforms
from periodrh.criteria import main_criterion
from periodrh.lfunctions import completed_lvalues, verify_functional_equation
from periodrh.periodpoly import modified_polynomial_p, period_polynomial_r, rv_transform, zeta_checks
from periodrh.zeros import unimodularity_report

_, (delta,) = modforms.eigenforms(12)
print("tau(1..8):", [int(mpmath.nint(delta.coeffs[n])) for n in range(1, 9)])

values = completed_lvalues(delta)
print("L(Delta, 6) =", mpmath.nstr(values.L(6), 20))
print("functional equation residual:", mpmath.nstr(verify_functional_equation(values), 3))

r = period_polynomial_r(values)
report = unimodularity_report(r.coeffs, precision=values.precision)
print("r_Delta zeros:", report.verdict, "max ||z|-1| =", mpmath.nstr(report.max_circle_distance, 3))
for z in report.roots:
    print("   ", mpmath.nstr(z, 12), " arg/pi =", mpmath.nstr(mpmath.arg(z) / mpmath.pi, 8))

# the explicit criterion needs large weight, so Delta is left undecided by it
crit = main_criterion(delta)
print("main criterion:", crit.overall, "-", crit.reason)

z = zeta_checks(rv_transform(modified_polynomial_p(values)))
print("zeta polynomial: max |Re(rho) - 1/2| =", mpmath.nstr(z.max_line_deviation, 3))
