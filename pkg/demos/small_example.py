"""
A (7, 3) binary code where every data symbol has two repair groups
==================================================================

Three data bits, four parities.  Each data bit can be rebuilt from two
disjoint sets of at most two other symbols, yet the code only reaches
distance 3 while the bounds allow 4.
"""

import itertools

from lrcavail import encode, erase, repair_symbol, verify_availability
from lrcavail.analysis import bound_thm1, bound_thm2, codebook_from_code, dmin_exact, subcode_bound
from lrcavail.fixtures import example1_code

code = example1_code()
n, k, r, t = code.params
print(f"(n, k, r, t) = {(n, k, r, t)}")

# every codeword
for m in itertools.product(range(2), repeat=3):
    print(m, "->", encode(code, list(m)).tolist())

# the two repair groups of each data bit, 1-based
rep = verify_availability(code)
for s in range(k):
    groups = [[u + 1 for u in e["group"]] for e in rep.groups[s]]
    print(f"symbol {s + 1}: groups {groups}")

# lose bit 1 and rebuild it both ways
cw = encode(code, [1, 0, 1]).tolist()
rx = erase(cw, [0])
print("received", ["?" if v is None else v for v in rx])
print("rebuilt from group 1:", repair_symbol(code, rx, 0, 0))
print("rebuilt from group 2:", repair_symbol(code, rx, 0, 1))

# distance against the bounds
d = dmin_exact(code, mode="weight-enum")
print(f"d_min = {d.d_min}, bound_thm1 = {bound_thm1(n, k, r, t)}, bound_thm2 = {bound_thm2(n, k, r, t)}")
print("a minimum-weight codeword:", d.witness_codeword)

# the subcode argument, step by step
tr = subcode_bound(codebook_from_code(code), code.groups, r, t, 2)
for s in tr.steps:
    print(f"fix symbol {s.index + 1}: groups cover {[u + 1 for u in s.union]}, "
          f"subcode {s.prev_size} -> {s.size}")
print(f"fixed coordinates {sorted(i + 1 for i in tr.fixed)}, implied bound {tr.bound}")
