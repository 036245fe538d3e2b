"""Zeros of H_{m,1}(z) = z^m T_{m,1}(1/z), the reversed truncated exponential.

They leave the unit disk for small m and stay inside from m = 20 on.
"""

import mpmath

from periodrh.zeros import h_disk_criterion, h_zero_report

for m in (5, 10, 15, 19, 20, 30, 60, 120):
    report = h_zero_report(m, 1)
    holds = h_disk_criterion(m, 1).holds
    print(f"m={m:4d}  max |z| = {mpmath.nstr(report.max_modulus, 8):>12}  {report.verdict:8s}  criterion: {holds}")
