"""Identifying one of three states in at most two measurements.

Stage one rotates the triple into canonical form and evolves it until
psi1 and psi2 are orthogonal; a V click then names psi2. An H click leaves
psi1 or psi3, which stage two separates as a two-state problem. psi3 is
misfiled in stage one with probability |<psi3'|psi2'>|^2.
"""

import math

from ptqsd import qsd3

for beta in (math.pi / 3, math.pi / 2):
    triple = qsd3.canonicalize(*qsd3.symmetric_triple(beta))
    print(f"\nbeta = {beta:.4f}: eps12 = {triple.eps12:.5f}, alpha_c = {triple.alpha_c:.4f}")
    for alpha in (triple.alpha_c, 0.8, 1.2, 1.5):
        r = qsd3.stage_one(triple, alpha)
        print(
            f"  alpha = {alpha:.4f}: t = {r.t:.4f}, o31^2 = {r.o31**2:.4f}, "
            f"o32^2 = {r.o32**2:.4f}, P = ({r.p1:.3f}, {r.p2:.3f}, {r.p3:.4f})"
        )
    st2 = qsd3.stage_two(triple, qsd3.stage_two_alpha(triple, triple.alpha_c))
    print(f"  stage two: eps13 = {st2.eps13:.5f}, t = {st2.t:.4f}, residual overlap {st2.evolved_overlap:.1e}")

# an arbitrary triple
states = [qsd3.BlochState(0.4, 0.1), qsd3.BlochState(1.3, 2.0), qsd3.BlochState(2.2, 4.4)]
triple = qsd3.canonicalize(*states)
r = qsd3.stage_one(triple, max(triple.alpha_c, 1.0))
print(f"\narbitrary triple: alpha_c = {triple.alpha_c:.4f}, P3 = {r.p3:.4f}, phi = {r.phi:.4f}")
