"""
Master fields of all loops with at most three crossings
=======================================================

Every closed curve with at most three transverse self-crossings is stored
as a combinatorial map under fixtures/golden.  For each one we run the
exact recursion and print the resulting exponential polynomial in the
face areas, next to the reference value stored with the fixture.
"""

import time

from masterfield.exppoly import parse_exppoly
from masterfield.master_field import phi_symbolic
from masterfield.suites import golden_fixtures

start = time.perf_counter()
for name, mf, expected in golden_fixtures():
    result = phi_symbolic(mf.loops[0], mf.labels)
    mark = "ok" if result.expr == parse_exppoly(expected) else "MISMATCH"
    print(f"{name}  {mark:8}  {result}")
print(f"\n{time.perf_counter() - start:.2f}s")
