"""
How close to MDS distance do the availability codes get?
========================================================

At rate 1/2 the distance bound divided by the MDS distance n - k + 1,
for the zigzag family (k = r * t**r) and for affine planes (k = q**2).
"""

from lrcavail.analysis import asymptotic_report, format_table

print(format_table(asymptotic_report("zigzag", 2, range(2, 11))))
print(format_table(asymptotic_report("zigzag", 3, range(3, 8))))
print(format_table(asymptotic_report("affine", 2, [2, 3, 4, 5, 7, 8, 9, 11, 13])))
