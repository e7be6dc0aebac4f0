"""
The figure-eight loop at finite N
=================================

A figure-eight whose small lobe sits inside the big one has an outer
ring of area s (winding number 1) and an inner disk of area t
(winding number 2).  Its master field is exp(-s/2 - t)(1 - t).  Here we
compare it with the Wilson loop expectation in U(N), O(N) and Sp(N) as
N grows, together with the a priori bound on the gap.
"""

import json

from masterfield.master_field import finite_N_bound, phi_finite_N, phi_symbolic
from masterfield.planar_loops import load_map
from masterfield.suites import fixture_dir

mf = load_map(json.loads((fixture_dir() / "figure8.json").read_text()))
loop = mf.loops[0]
result = phi_symbolic(loop, mf.labels)
print("Phi =", result)

s, t = 0.7, 0.3
face = {name: f for f, name in mf.labels.items()}
areas = {face["s"]: s, face["t"]: t}
exact = result.evaluate({"s": s, "t": t})
print(f"at s={s}, t={t}: Phi = {exact:.12f}\n")

# the gap shrinks like 1/N^2 for unitary groups and like 1/N otherwise
print(f"{'kind':>4} {'N':>5} {'Phi^N':>16} {'gap':>10} {'bound':>10}")
for kind in ("C", "R", "H"):
    for N in (2, 4, 16, 64):
        value = phi_finite_N(loop, kind, N, areas)
        bound = finite_N_bound(loop, kind, N, areas)
        print(f"{kind:>4} {N:>5} {value:16.12f} {abs(value - exact):10.2e} {bound:10.2e}")
