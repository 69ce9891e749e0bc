"""PT-symmetric qubit Hamiltonian, its propagator and the lossy physical channel.

The Hamiltonian family is

    H = [[r e^{i theta}, s], [s, r e^{-i theta}]]
      = r cos(theta) 1 + sigma . (s, 0, i r sin(theta))

with ``sin(alpha) = r sin(theta) / s`` and ``omega = s cos(alpha)``. Only the
unbroken regime ``|sin(alpha)| < 1`` is supported. Units: hbar = 1, and by
convention omega = 1 unless stated otherwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import qmath
from .errors import BrokenRegime, InvalidParameter


@dataclass(frozen=True)
class PtHamiltonian:
    r: float
    s: float
    theta: float = math.pi / 2

    def __post_init__(self):
        for name in ("r", "s", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameter(f"{name} must be finite")
        if self.s <= 0:
            raise InvalidParameter(f"s must be positive, got {self.s}")
        if abs(self.sin_alpha) >= 1.0:
            raise BrokenRegime(
                f"|r sin(theta) / s| = {abs(self.sin_alpha):.6g} >= 1: "
                "PT symmetry is broken (or exactly at the exceptional point)"
            )

    @classmethod
    def from_alpha(cls, alpha: float, omega: float = 1.0, theta: float = math.pi / 2):
        """Hamiltonian with a given ``alpha`` and eigenvalue gap ``2 omega``."""
        if not abs(alpha) < math.pi / 2:
            raise BrokenRegime(f"alpha must lie in (-pi/2, pi/2), got {alpha}")
        if omega <= 0:
            raise InvalidParameter(f"omega must be positive, got {omega}")
        if math.sin(theta) == 0.0 and alpha != 0.0:
            raise InvalidParameter("alpha != 0 needs sin(theta) != 0")
        s = omega / math.cos(alpha)
        r = 0.0 if alpha == 0.0 else s * math.sin(alpha) / math.sin(theta)
        return cls(r, s, theta)

    @property
    def sin_alpha(self) -> float:
        return self.r * math.sin(self.theta) / self.s

    @property
    def alpha(self) -> float:
        return math.asin(self.sin_alpha)

    @property
    def cos_alpha(self) -> float:
        return math.sqrt((1.0 - self.sin_alpha) * (1.0 + self.sin_alpha))

    @property
    def omega(self) -> float:
        return self.s * self.cos_alpha

    @property
    def e_plus(self) -> float:
        return self.r * math.cos(self.theta) + self.omega

    @property
    def e_minus(self) -> float:
        return self.r * math.cos(self.theta) - self.omega

    @property
    def is_hermitian(self) -> bool:
        return self.r * math.sin(self.theta) == 0.0

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.r * cmath.exp(1j * self.theta), self.s],
                [self.s, self.r * cmath.exp(-1j * self.theta)],
            ]
        )


def make_hamiltonian(r: float, s: float, theta: float = math.pi / 2) -> PtHamiltonian:
    return PtHamiltonian(float(r), float(s), float(theta))


@dataclass(frozen=True)
class Propagator:
    """``U(t) = exp(-i H t)`` together with its largest singular value.

    ``phase`` is the scalar ``exp(-i r t cos(theta))`` that multiplies the
    real-structured bracket of the closed form.
    """

    matrix: np.ndarray
    t: float
    sigma_max: float
    phase: complex


def propagator(h: PtHamiltonian, t: float) -> Propagator:
    if not math.isfinite(t):
        raise InvalidParameter("t must be finite")
    wt = h.omega * t
    a = h.alpha
    phase = cmath.exp(-1j * h.r * t * math.cos(h.theta))
    bracket = np.array(
        [
            [math.cos(wt - a), -1j * math.sin(wt)],
            [-1j * math.sin(wt), math.cos(wt + a)],
        ]
    ) / h.cos_alpha
    _, (s_max, _), _ = qmath.svd2(bracket)
    return Propagator(phase * bracket, float(t), s_max, phase)


def physical_evolution(p: Propagator) -> np.ndarray:
    """The passive (never amplifying) channel ``V = U / (phase * sigma_max)``.

    Dropping the overall scale is how a lossy optical setup emulates the
    balanced gain/loss system: after renormalisation ``V`` and ``U`` act
    identically on every state, and ``V^dagger V <= 1``.
    """
    return p.matrix / (p.phase * p.sigma_max)


def survival_probability(v: np.ndarray, psi) -> float:
    """Probability that a photon in state ``psi`` survives the channel ``v``.

    The dissipation (lost-photon fraction) is ``1 - survival``.
    """
    psi = qmath.as_ket(psi)
    if abs(qmath.norm2(psi) - 1.0) > 1e-8:
        raise InvalidParameter("survival_probability requires a normalized state")
    return qmath.norm2(np.asarray(v) @ psi)


def dissipation(v: np.ndarray, psi) -> float:
    return 1.0 - survival_probability(v, psi)


def evolve_normalized(v: np.ndarray, psi) -> np.ndarray:
    """Apply ``v`` and renormalise (postselect on the photon surviving)."""
    return qmath.normalize(np.asarray(v) @ qmath.as_ket(psi))
