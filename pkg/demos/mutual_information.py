"""Information gained by PT discrimination compared with Hermitian strategies.

The lossy channel plus a projective measurement on the (orthogonal)
evolved states is a three-outcome POVM: "lost", "psi1", "psi2". Its mutual
information starts at the unambiguous-discrimination value at the critical
coupling and grows with s.
"""

import math

import numpy as np

from ptqsd import qmath, qsd2

eps = math.pi / 3
pair = qsd2.make_pair(eps)
s_crit = qsd2.critical_s(eps)
print(f"USD baseline: {qsd2.usd_baseline(eps):.4f} bits")
print(f"MED (Helstrom) baseline: {qsd2.med_baseline(eps):.4f} bits")

h = qsd2.critical_hamiltonian(eps)
povm = qsd2.discrimination_povm(pair, h, math.pi / 2)
for name, e in zip(("lost", "psi1", "psi2"), povm.elements):
    p = [max(np.trace(qmath.projector(k) @ e).real, 0.0) for k in (pair.psi1, pair.psi2)]
    print(f"  P({name} | psi1) = {p[0]:.4f}, P({name} | psi2) = {p[1]:.4f}")

print("\n       s    I_PT (bits)")
for s in np.geomspace(s_crit, 100, 8):
    print(f"{s:8.4f}    {qsd2.pt_mutual_information(eps, s):.6f}")
