"""Discrimination of two nonorthogonal qubit states by PT-symmetric evolution.

The canonical pair with overlap ``cos(epsilon)`` is

    psi_{1,2} = (cos((pi -/+ 2 eps) / 4), -i sin((pi -/+ 2 eps) / 4)).

Under ``U(t)`` the (unnormalised) evolved states become orthogonal when

    sin^2(omega t) = cos^2(a) cos(eps) / (2 sin(a) - 2 sin^2(a) cos(eps)),

which has a solution iff ``cos(eps) <= 2 sin(a) / (1 + sin^2(a))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import ptcore, qmath
from .errors import InvalidParameter, NotDiscriminating
from .ptcore import PtHamiltonian

# ratios this close to 1 are the critical point, where t0 and t1 coincide
CRITICAL_SNAP = 1e-12


def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 < epsilon < math.pi / 2:
        raise InvalidParameter(f"epsilon must lie in (0, pi/2), got {epsilon}")
    return epsilon


@dataclass(frozen=True)
class StatePair:
    epsilon: float

    def __post_init__(self):
        _check_epsilon(self.epsilon)

    @property
    def psi1(self) -> np.ndarray:
        x = (math.pi - 2 * self.epsilon) / 4
        return np.array([math.cos(x), -1j * math.sin(x)])

    @property
    def psi2(self) -> np.ndarray:
        x = (math.pi + 2 * self.epsilon) / 4
        return np.array([math.cos(x), -1j * math.sin(x)])

    @property
    def overlap(self) -> complex:
        return complex(np.vdot(self.psi1, self.psi2))


def make_pair(epsilon: float) -> StatePair:
    return StatePair(_check_epsilon(epsilon))


def evolved_inner_product(pair: StatePair, h: PtHamiltonian, t: float) -> complex:
    """``<psi1| U^dagger U |psi2>`` for the raw (unnormalised) propagator."""
    u = ptcore.propagator(h, t).matrix
    return complex(np.vdot(u @ pair.psi1, u @ pair.psi2))


def renormalized_overlap(pair: StatePair, h: PtHamiltonian, t: float) -> complex:
    """Inner product of the evolved states after postselection."""
    u = ptcore.propagator(h, t).matrix
    a = qmath.normalize(u @ pair.psi1)
    b = qmath.normalize(u @ pair.psi2)
    return complex(np.vdot(a, b))


def evolved_trace_distance(pair: StatePair, h: PtHamiltonian, t: float) -> float:
    """Trace distance between the renormalised evolved states."""
    v = ptcore.physical_evolution(ptcore.propagator(h, t))
    return qmath.trace_distance(
        ptcore.evolve_normalized(v, pair.psi1), ptcore.evolve_normalized(v, pair.psi2)
    )


class OrthogonalityTimes(NamedTuple):
    t0: float
    t1: float


def orthogonality_ratio(epsilon: float, h: PtHamiltonian) -> float | None:
    """Right-hand side for ``sin^2(omega t)``, or None when it is not positive."""
    sa = h.sin_alpha
    ce = math.cos(epsilon)
    den = 2.0 * sa - 2.0 * sa * sa * ce
    if den <= 0.0:
        return None
    return h.cos_alpha**2 * ce / den


def orthogonality_times(epsilon: float, h: PtHamiltonian) -> OrthogonalityTimes | None:
    """The two times in ``[0, pi/omega)`` at which the evolved pair is orthogonal.

    Returns None below the critical value (no solution). At the critical
    value the two times coincide at ``pi / (2 omega)``.
    """
    epsilon = _check_epsilon(epsilon)
    ratio = orthogonality_ratio(epsilon, h)
    if ratio is None or ratio > 1.0 + CRITICAL_SNAP:
        return None
    w = h.omega
    if ratio >= 1.0 - CRITICAL_SNAP:
        t = math.pi / (2 * w)
        return OrthogonalityTimes(t, t)
    x = math.asin(math.sqrt(ratio))
    return OrthogonalityTimes(x / w, (math.pi - x) / w)


def critical_sin_alpha(epsilon: float) -> float:
    """Smaller root of ``cos(eps) = 2 sin(a) / (1 + sin^2(a))``."""
    epsilon = _check_epsilon(epsilon)
    # (1 - sin e) / cos e written without cancellation
    return math.cos(epsilon) / (1.0 + math.sin(epsilon))


def critical_alpha(epsilon: float) -> float:
    return math.asin(critical_sin_alpha(epsilon))


def critical_s(epsilon: float, omega: float = 1.0) -> float:
    sa = critical_sin_alpha(epsilon)
    return omega / math.sqrt((1.0 - sa) * (1.0 + sa))


def critical_hamiltonian(epsilon: float, omega: float = 1.0, theta: float = math.pi / 2):
    return PtHamiltonian.from_alpha(critical_alpha(epsilon), omega, theta)


def hamiltonian_for_s(s: float, omega: float = 1.0, theta: float = math.pi / 2):
    """Hamiltonian with coupling ``s`` and fixed gap ``2 omega`` (``s >= omega``)."""
    if s < omega:
        raise InvalidParameter(f"s={s} is below omega={omega}: no real alpha exists")
    alpha = math.acos(min(1.0, omega / s))
    return PtHamiltonian.from_alpha(alpha, omega, theta)


@dataclass(frozen=True)
class DiscriminationPovm:
    """Three-outcome measurement: ``pi1`` = photon lost, ``pi2`` = "psi1",
    ``pi3`` = "psi2"."""

    pi1: np.ndarray
    pi2: np.ndarray
    pi3: np.ndarray
    priors: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self):
        p1, p2 = self.priors
        if p1 < 0 or p2 < 0 or abs(p1 + p2 - 1.0) > 1e-12:
            raise InvalidParameter(f"priors must be a probability pair, got {self.priors}")
        total = self.pi1 + self.pi2 + self.pi3
        if np.max(np.abs(total - qmath.IDENTITY)) > 1e-10:
            raise InvalidParameter("POVM elements do not sum to the identity")
        for e in self.elements:
            lo, _, _, _ = qmath.eigs_hermitian2(e)
            if lo < -1e-10:
                raise InvalidParameter("POVM element is not positive semidefinite")

    @property
    def elements(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.pi1, self.pi2, self.pi3


def _check_priors(priors) -> tuple[float, float]:
    p1, p2 = (float(p) for p in priors)
    if p1 < 0 or p2 < 0 or abs(p1 + p2 - 1.0) > 1e-12:
        raise InvalidParameter(f"priors must be a probability pair, got {priors}")
    return p1, p2


def discrimination_povm(
    pair: StatePair, h: PtHamiltonian, t: float, priors=(0.5, 0.5)
) -> DiscriminationPovm:
    """POVM realised by the lossy channel followed by a projective measurement
    onto the (orthogonal) evolved states."""
    priors = _check_priors(priors)
    v = ptcore.physical_evolution(ptcore.propagator(h, t))
    phi1 = ptcore.evolve_normalized(v, pair.psi1)
    phi2 = ptcore.evolve_normalized(v, pair.psi2)
    if abs(np.vdot(phi1, phi2)) > 1e-8:
        raise NotDiscriminating(
            f"evolved states have overlap {abs(np.vdot(phi1, phi2)):.3g} at t={t}"
        )
    # complete phi1 exactly so that {phi1, phi2} is an orthonormal basis
    phi2 = qmath.perp(phi1)
    vd = qmath.dagger(v)
    pi2 = vd @ qmath.projector(phi1) @ v
    pi3 = vd @ qmath.projector(phi2) @ v
    pi1 = qmath.IDENTITY - vd @ v
    herm = lambda m: 0.5 * (m + qmath.dagger(m))  # noqa: E731
    return DiscriminationPovm(herm(pi1), herm(pi2), herm(pi3), priors)


def mutual_information_table(priors: Sequence[float], likelihoods) -> float:
    """Classical mutual information (bits) of a channel ``P(j | i)``.

    ``likelihoods[i][j]`` is the probability of outcome ``j`` given input
    ``i``. Terms with zero likelihood contribute nothing.
    """
    p = np.asarray(priors, dtype=float)
    lik = np.clip(np.asarray(likelihoods, dtype=float), 0.0, None)
    marginal = p @ lik
    total = 0.0
    for i in range(lik.shape[0]):
        for j in range(lik.shape[1]):
            q = lik[i, j]
            if q > 0.0 and p[i] > 0.0:
                total += p[i] * q * math.log2(q / marginal[j])
    return max(total, 0.0)


def mutual_information(povm: DiscriminationPovm, rho1, rho2) -> float:
    """Mutual information (bits) between the sender's choice and the outcome."""
    rhos = (qmath.density_matrix(rho1), qmath.density_matrix(rho2))
    lik = [[np.trace(r @ e).real for e in povm.elements] for r in rhos]
    return mutual_information_table(povm.priors, lik)


def pt_mutual_information(epsilon: float, s: float, omega: float = 1.0, which: int = 0):
    """Mutual information of PT discrimination at the orthogonality time.

    Returns None when no orthogonality time exists for this ``s``.
    """
    pair = make_pair(epsilon)
    h = hamiltonian_for_s(s, omega)
    times = orthogonality_times(epsilon, h)
    if times is None:
        return None
    povm = discrimination_povm(pair, h, times[which])
    return mutual_information(povm, pair.psi1, pair.psi2)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def usd_baseline(epsilon: float) -> float:
    """Optimal unambiguous discrimination, equal priors: conclusive with
    probability ``1 - cos(eps)``, each conclusive outcome worth one bit."""
    return 1.0 - math.cos(_check_epsilon(epsilon))


def med_baseline(epsilon: float) -> float:
    """Helstrom (minimum-error) measurement, equal priors: a binary symmetric
    channel with success probability ``(1 + sin(eps)) / 2``."""
    p = 0.5 * (1.0 + math.sin(_check_epsilon(epsilon)))
    return 1.0 - binary_entropy(p)


def usd_povm(pair: StatePair) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Optimal equal-prior USD elements ``(inconclusive, "psi1", "psi2")``."""
    c = abs(pair.overlap)
    e1 = qmath.projector(qmath.perp(pair.psi2)) / (1 + c)
    e2 = qmath.projector(qmath.perp(pair.psi1)) / (1 + c)
    return qmath.IDENTITY - e1 - e2, e1, e2


def helstrom_povm(pair: StatePair) -> tuple[np.ndarray, np.ndarray]:
    """Projectors onto the positive/negative parts of ``rho1 - rho2``."""
    delta = qmath.projector(pair.psi1) - qmath.projector(pair.psi2)
    _, _, v_low, v_high = qmath.eigs_hermitian2(delta)
    return qmath.projector(v_high), qmath.projector(v_low)
