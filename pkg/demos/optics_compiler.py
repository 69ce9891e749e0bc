"""Turning the nonunitary propagator into a list of wave plates.

The propagator is factored as c T M W: T and W become quarter/half/quarter
wave-plate sequences and M = diag(1, m) becomes an interferometer with a
half-wave plate in the V arm. The scale c only sets the overall photon
budget and is dropped on the bench.
"""

import math

import numpy as np

from ptqsd import optics, ptcore, qmath, qsd2

h = qsd2.hamiltonian_for_s(3.0)
t0 = qsd2.orthogonality_times(math.pi / 3, h).t0
u = ptcore.propagator(h, t0).matrix
d = optics.decompose_lossy(u)
print("reconstruction error:", qmath.frobenius(d.reconstruct() - u))
sheet = optics.bench_sheet(d)
print(sheet.to_text())

bench = optics.bench_jones(sheet)
print("bench vs propagator (up to phase, scale c removed):", qmath.phase_aligned_distance(abs(d.c) * bench, u))

# any unitary compiles to three plates
rng = np.random.default_rng(0)
z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
q, _ = np.linalg.qr(z)
plates = optics.compile_unitary(q)
print("random unitary plates (deg):", [round(math.degrees(a), 4) for a in (plates.q1_angle, plates.h_angle, plates.q2_angle)])
print("round-trip error:", qmath.phase_aligned_distance(plates.jones, q))
