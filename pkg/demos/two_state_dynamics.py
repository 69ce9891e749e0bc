"""Two nonorthogonal states driven apart by a PT-symmetric Hamiltonian.

We fix omega = 1 and theta = pi/2 and follow the pair with overlap
cos(pi/3) = 0.5 for three couplings s: below, well above, and at the
critical value. Above it the renormalised states become orthogonal twice
per period; at it the two times merge at t = pi/2.
"""

import math

import numpy as np

from ptqsd import ptcore, qsd2

eps = math.pi / 3
pair = qsd2.make_pair(eps)
s_crit = qsd2.critical_s(eps)
print(f"overlap <psi1|psi2> = {pair.overlap.real:.3f}, critical s = {s_crit:.6f}")

for s in (1.1, 3.0, s_crit):
    h = qsd2.hamiltonian_for_s(s)
    ot = qsd2.orthogonality_times(eps, h)
    print(f"\ns = {s:.4f} (alpha = {h.alpha:.4f})")
    print(f"  orthogonality times: t0 = {ot.t0:.5f}, t1 = {ot.t1:.5f}")
    for t in (0.0, ot.t0, math.pi / 2, ot.t1):
        v = ptcore.physical_evolution(ptcore.propagator(h, t))
        d = qsd2.evolved_trace_distance(pair, h, t)
        l1, l2 = ptcore.dissipation(v, pair.psi1), ptcore.dissipation(v, pair.psi2)
        print(f"  t = {t:.4f}: D = {d:.6f}, loss(psi1) = {l1:.4f}, loss(psi2) = {l2:.4f}")

# with a smaller initial separation the same s never suffices
print("\neps = pi/6, s = 1.1:", qsd2.orthogonality_times(math.pi / 6, qsd2.hamiltonian_for_s(1.1)))

# t0 shrinks towards zero as the matrix elements of H grow
for s in np.geomspace(1.05, 1e3, 5):
    t0 = qsd2.orthogonality_times(eps, qsd2.hamiltonian_for_s(s)).t0
    print(f"s = {s:9.3f}: t0 = {t0:.5f}")
