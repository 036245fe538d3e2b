"""Where the explicit sufficient criterion starts to apply."""

import mpmath

from periodrh.criteria import criterion_constants, positive_combination_check

print(" k   alpha+beta+gamma   delta      positive check")
for k in range(100, 131, 2):
    a, b, g, d = criterion_constants(k, 1)
    print(f"{k:4d}  {mpmath.nstr(a + b + g, 6):>14}  {mpmath.nstr(d, 6):>10}   {positive_combination_check(k)}")
