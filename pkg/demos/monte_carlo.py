"""Simulated photon counting: dissipation, tomography and error bars.

Every point is repeated over independently seeded trials; the error bar
is the sample standard deviation. With shots=None the simulator uses
exact probabilities and reproduces the analytic curves.
"""

import math

from ptqsd import photonlab, qsd2

eps, s = math.pi / 3, 1.1
ot = qsd2.orthogonality_times(eps, qsd2.hamiltonian_for_s(s))
times = [0.0, ot.t0, math.pi / 2, ot.t1]

for shots in (None, 30_000, 1_000):
    label = "exact" if shots is None else f"{shots} shots"
    print(f"\n{label}:")
    for r in photonlab.experiment_two_state(eps, s, times, shots=shots, trials=10, seed=1):
        print(
            f"  t = {r.t:.4f}: D = {r.d_mean:.4f} +/- {r.d_std:.4f} (theory {r.d_theory:.4f}), "
            f"loss1 = {r.dissipation1_mean:.4f} +/- {r.dissipation1_std:.4f}"
        )

print("\nthree states, beta = pi/3:")
for r in photonlab.experiment_three_state(math.pi / 3, [0.4, 0.8, 1.2, 1.5], seed=1):
    print(f"  alpha = {r.alpha:.3f}: P3 = {r.p3_mean:.4f} +/- {r.p3_std:.4f} (theory {r.p3_theory:.4f})")
