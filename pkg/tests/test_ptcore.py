import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from ptqsd import ptcore, qmath
from ptqsd.errors import BrokenRegime, InvalidParameter


def test_from_alpha_parameters():
    h = ptcore.PtHamiltonian.from_alpha(0.5, omega=2.0)
    assert h.alpha == pytest.approx(0.5)
    assert h.omega == pytest.approx(2.0)
    assert h.s == pytest.approx(2.0 / math.cos(0.5))


def test_eigenvalues_real_and_split_by_two_omega():
    h = ptcore.make_hamiltonian(0.8, 1.3, 1.1)
    ev = np.sort_complex(np.linalg.eigvals(h.matrix))
    np.testing.assert_allclose(ev.imag, 0, atol=1e-12)
    np.testing.assert_allclose(ev.real, [h.e_minus, h.e_plus], atol=1e-12)
    assert h.e_plus - h.e_minus == pytest.approx(2 * h.omega)


def test_alpha_zero_is_hermitian():
    h = ptcore.PtHamiltonian.from_alpha(0.0)
    assert h.is_hermitian
    assert qmath.is_unitary(ptcore.propagator(h, 1.3).matrix)


def test_broken_regime_and_bad_s():
    with pytest.raises(BrokenRegime):
        ptcore.make_hamiltonian(2.0, 1.0)
    with pytest.raises(BrokenRegime):
        ptcore.make_hamiltonian(1.0, 1.0)  # exceptional point
    with pytest.raises(InvalidParameter):
        ptcore.make_hamiltonian(0.1, 0.0)
    with pytest.raises(BrokenRegime):
        ptcore.PtHamiltonian.from_alpha(math.pi / 2)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(0.0, 1.5),
    st.floats(0.2, 3.0),
    st.floats(0.05, math.pi - 0.05),
    st.floats(-10.0, 10.0),
)
def test_propagator_matches_expm(alpha, omega, theta, t):
    h = ptcore.PtHamiltonian.from_alpha(alpha, omega, theta)
    u = ptcore.propagator(h, t).matrix
    ref = expm(-1j * h.matrix * t)
    scale = 1.0 / math.cos(alpha)
    np.testing.assert_allclose(u, ref, atol=1e-9 * scale**2)


def test_propagator_periodic_up_to_phase():
    h = ptcore.PtHamiltonian.from_alpha(0.9)
    u = ptcore.propagator(h, 2 * math.pi / h.omega).matrix
    assert qmath.phase_aligned_distance(u, qmath.IDENTITY) < 1e-12


def test_physical_evolution_is_passive():
    h = ptcore.PtHamiltonian.from_alpha(1.2)
    for t in np.linspace(0, math.pi, 13):
        v = ptcore.physical_evolution(ptcore.propagator(h, t))
        lo, hi, _, _ = qmath.eigs_hermitian2(qmath.dagger(v) @ v)
        assert hi == pytest.approx(1.0, abs=1e-12)
        assert lo >= -1e-12


def test_dissipation_and_normalized_evolution():
    h = ptcore.PtHamiltonian.from_alpha(1.0)
    p = ptcore.propagator(h, 0.7)
    v = ptcore.physical_evolution(p)
    psi = qmath.normalize([1, 1j])
    assert 0 <= ptcore.dissipation(v, psi) <= 1
    a = ptcore.evolve_normalized(v, psi)
    b = qmath.normalize(p.matrix @ psi)
    assert abs(abs(np.vdot(a, b)) - 1) < 1e-12
    with pytest.raises(InvalidParameter):
        ptcore.survival_probability(v, [1, 1])
