"""
Moments of the unitary Brownian motion
======================================

The moments E[tr U_t^n] of a Brownian motion on U(N) converge to the
moments mu_n(t) of the free unitary Brownian motion.  The finite-N values
come from a linear system on the symmetric group; the limit has a closed
form.
"""

import numpy as np

from masterfield.moment_systems import finite_moments, mu_closed

t = 1.0
print(f"{'n':>2} {'mu_n(t)':>12} " + " ".join(f"{'U(' + str(N) + ')':>12}" for N in (2, 8, 32)))
for n in range(1, 6):
    row = [finite_moments("U", n, N, t) for N in (2, 8, 32)]
    print(f"{n:>2} {mu_closed(n, t):12.8f} " + " ".join(f"{v:12.8f}" for v in row))

# N^2 times the gap settles down: the corrections are of order 1/N^2
for N in (4, 8, 16, 32):
    gap = finite_moments("U", 3, N, t) - mu_closed(3, t)
    print(f"N={N:>2}: N^2 * gap = {N * N * gap:.6f}")

ts = np.linspace(0, 4, 9)
print("\nmu_2 changes sign at t = 1:", np.round([mu_closed(2, x) for x in ts], 4))
