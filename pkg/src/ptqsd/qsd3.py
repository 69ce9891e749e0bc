"""Two-stage PT discrimination of three nonorthogonal qubit states.

Stage one rotates the triple so that states 1 and 2 take the canonical pair
form, then evolves for the orthogonality time of that pair. A projective
measurement in the basis of the (orthogonal) evolved states 1 and 2 isolates
state 2. Stage two, on a fresh copy, treats states 1 and 3 as an ordinary
canonical pair.

Evolved, normalised states are parameterised as

    psi'_1 = (cos(d/2), -i sin(d/2))
    psi'_2 = (sin(d/2),  i cos(d/2))          (orthogonal complement)
    psi'_3 = (cos(c/2),  i e^{i phi} sin(c/2)),   |phi| <= pi/2

with ``d = delta`` and ``c = chi`` (signed). ``phi`` measures how far state 3 lies off
the great circle that the propagator preserves. When ``phi == 0`` the
overlaps reduce to ``|cos((chi + delta) / 2)|`` and ``|sin((chi + delta) / 2)|``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import qmath, qsd2
from .errors import BrokenRegime, DegenerateTriple, NoOrthogonalityTime
from .ptcore import PtHamiltonian

# overlap magnitudes closer than this to 0 or 1 make a triple degenerate
DEGENERACY_TOL = 1e-9


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.remainder(angle, 2 * math.pi)
    return math.pi if a == -math.pi else a


@dataclass(frozen=True)
class BlochState:
    beta: float
    gamma: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.beta <= math.pi:
            raise DegenerateTriple(f"beta must lie in [0, pi], got {self.beta}")
        object.__setattr__(self, "gamma", self.gamma % (2 * math.pi))

    @property
    def ket(self) -> np.ndarray:
        return np.array(
            [math.cos(self.beta / 2), cmath.exp(1j * self.gamma) * math.sin(self.beta / 2)]
        )


def symmetric_triple(beta: float) -> tuple[BlochState, BlochState, BlochState]:
    """Three states evenly spaced in meridian on the parallel ``beta``."""
    return tuple(BlochState(beta, 2 * math.pi * j / 3) for j in range(3))


def overlap_cos(a: BlochState, b: BlochState) -> float:
    """``|<a|b>|`` from the Bloch angles."""
    c = (
        1
        + math.cos(a.beta) * math.cos(b.beta)
        + math.sin(a.beta) * math.sin(b.beta) * math.cos(a.gamma - b.gamma)
    ) / 2
    return math.sqrt(min(max(c, 0.0), 1.0))


@dataclass(frozen=True)
class CanonicalTriple:
    """A triple rotated into canonical form by ``rot = R3 @ R2 @ R1``.

    ``eps12`` is the overlap angle of states 1 and 2 and ``(mu, nu)`` are the
    Bloch angles of the rotated state 3 (overall phases dropped).
    """

    eps12: float
    mu: float
    nu: float
    rot: np.ndarray
    lam: float
    states: tuple[BlochState, BlochState, BlochState]

    @property
    def pair(self) -> qsd2.StatePair:
        return qsd2.StatePair(self.eps12)

    @property
    def psi3(self) -> np.ndarray:
        return np.array(
            [math.cos(self.mu / 2), cmath.exp(1j * self.nu) * math.sin(self.mu / 2)]
        )

    @property
    def alpha_c(self) -> float:
        return qsd2.critical_alpha(self.eps12)


def _check_nondegenerate(states) -> None:
    for i, j in ((0, 1), (0, 2), (1, 2)):
        c = overlap_cos(states[i], states[j])
        if c < DEGENERACY_TOL:
            raise DegenerateTriple(f"states {i + 1} and {j + 1} are orthogonal")
        if c > 1 - DEGENERACY_TOL:
            raise DegenerateTriple(f"states {i + 1} and {j + 1} coincide")


def canonicalize(psi1: BlochState, psi2: BlochState, psi3: BlochState) -> CanonicalTriple:
    states = (psi1, psi2, psi3)
    _check_nondegenerate(states)
    b1, b2, b3 = (st.beta for st in states)
    g1, g2, g3 = (st.gamma for st in states)
    c1, s1 = math.cos(b1 / 2), math.sin(b1 / 2)
    c2, s2 = math.cos(b2 / 2), math.sin(b2 / 2)
    c3, s3 = math.cos(b3 / 2), math.sin(b3 / 2)

    # R1 takes psi1 to |0>
    r1 = np.array(
        [
            [c1, s1 * cmath.exp(-1j * g1)],
            [-s1 * cmath.exp(1j * g1), c1],
        ]
    )
    # R2 sets the meridian of psi2 to 3 pi / 2. lam is the phase of the second
    # component of R1 psi2 (relative to g2) minus that of the first component.
    d21 = g2 - g1
    lam = math.atan2(s1 * c2 * math.sin(d21), c1 * s2 - s1 * c2 * math.cos(d21)) - math.atan2(
        s1 * s2 * math.sin(d21), c1 * c2 + s1 * s2 * math.cos(d21)
    )
    r2 = np.diag([1.0, -1j * cmath.exp(-1j * (lam + g2))])
    # R3 rotates about X to reach the canonical parallels
    eps12 = math.acos(overlap_cos(psi1, psi2))
    x = (math.pi - 2 * eps12) / 4
    r3 = np.array(
        [
            [math.cos(x), -1j * math.sin(x)],
            [-1j * math.sin(x), math.cos(x)],
        ]
    )
    rot = r3 @ r2 @ r1

    # components of rot @ psi3, with the tan/cot factors multiplied through
    e = cmath.exp(1j * (g1 - g2 - lam))
    e31 = cmath.exp(1j * (g3 - g1))
    cx, sx = math.cos(x), math.sin(x)
    kappa1 = c3 * (c1 * cx + s1 * sx * e) + s3 * e31 * (s1 * cx - c1 * sx * e)
    kappa2 = 1j * c3 * (s1 * cx * e - c1 * sx) - 1j * s3 * e31 * (s1 * sx + c1 * cx * e)
    mu = 2 * math.acos(min(abs(kappa1), 1.0))
    if abs(kappa1) > 0 and abs(kappa2) > 0:
        nu = (cmath.phase(kappa2) - cmath.phase(kappa1)) % (2 * math.pi)
    else:
        nu = 0.0
    return CanonicalTriple(eps12, mu, nu, rot, lam, states)


@dataclass(frozen=True)
class ProtocolResult:
    """Stage-one outcome for a canonical triple at a given ``alpha``.

    ``o31`` and ``o32`` are ``|<psi'3|psi'1>|`` and ``|<psi'3|psi'2>|``;
    ``o21`` is the residual overlap of evolved states 1 and 2 (zero in
    exact arithmetic). ``p1``, ``p2``, ``p3`` are the probabilities of a
    correct identification assuming a conclusive second stage.
    """

    alpha: float
    t: float
    delta: float
    chi: float
    phi: float
    o31: float
    o32: float
    o21: float
    p1: float
    p2: float
    p3: float

    @property
    def overlaps(self) -> tuple[float, float]:
        return self.o31, self.o32


def _require_alpha(eps: float, alpha: float, omega: float) -> tuple[PtHamiltonian, float]:
    if not alpha < math.pi / 2:
        raise BrokenRegime(f"alpha must be below pi/2, got {alpha}")
    alpha_c = qsd2.critical_alpha(eps)
    if alpha < alpha_c - 1e-12:
        raise NoOrthogonalityTime(
            f"alpha={alpha:.6g} is below the critical value {alpha_c:.6g}"
        )
    h = PtHamiltonian.from_alpha(max(alpha, alpha_c), omega)
    times = qsd2.orthogonality_times(eps, h)
    if times is None:
        raise NoOrthogonalityTime(f"no orthogonality time at alpha={alpha:.6g}")
    return h, times.t0


def stage_one(triple: CanonicalTriple, alpha: float, omega: float = 1.0) -> ProtocolResult:
    h, t = _require_alpha(triple.eps12, alpha, omega)
    a = max(alpha, qsd2.critical_alpha(triple.eps12))
    eps = triple.eps12
    wt = omega * t
    x = (math.pi - 2 * eps) / 4
    cwm, cwp = math.cos(wt - a), math.cos(wt + a)
    sw, cw = math.sin(wt), math.cos(wt)

    # evolved psi1 (up to 1/cos(a) and the global phase) is (A, -i B)
    big_a = cwm * math.cos(x) - sw * math.sin(x)
    big_b = sw * math.cos(x) + cwp * math.sin(x)
    den = math.sqrt(
        1
        - math.cos(2 * wt) * math.sin(a) ** 2
        + 2 * sw * math.sin(a) * (cw * math.cos(a) * math.sin(eps) - sw * math.cos(eps))
    )
    delta = 2 * math.atan2(big_b / den, big_a / den)

    # evolved psi2, used only for the residual overlap check
    y = (math.pi + 2 * eps) / 4
    a2 = cwm * math.cos(y) - sw * math.sin(y)
    b2 = sw * math.cos(y) + cwp * math.sin(y)
    n2 = math.hypot(a2, b2)
    o21 = abs(math.cos(delta / 2) * a2 + math.sin(delta / 2) * b2) / n2

    cm, sm = math.cos(triple.mu / 2), math.sin(triple.mu / 2)
    en = cmath.exp(1j * triple.nu)
    tau1 = cwm * cm - 1j * sw * en * sm
    tau2 = -1j * sw * cm + cwp * en * sm
    chi = 2 * math.atan2(abs(tau2), abs(tau1))
    if abs(tau1) > 0 and abs(tau2) > 0:
        phi = _wrap(cmath.phase(tau2) - cmath.phase(tau1) - math.pi / 2)
    else:
        phi = 0.0
    # (chi, phi) and (-chi, phi + pi) are the same state; keep |phi| <= pi/2
    if abs(phi) > math.pi / 2:
        chi, phi = -chi, _wrap(phi + math.pi)

    hd, hc = delta / 2, chi / 2
    ep = cmath.exp(1j * phi)
    o31 = abs(math.cos(hd) * math.cos(hc) - math.sin(hd) * math.sin(hc) * ep)
    o32 = abs(math.sin(hd) * math.cos(hc) + math.cos(hd) * math.sin(hc) * ep)
    return ProtocolResult(
        alpha=a,
        t=t,
        delta=delta,
        chi=chi,
        phi=phi,
        o31=o31,
        o32=o32,
        o21=o21,
        p1=1.0,
        p2=1.0 - o21**2,
        p3=1.0 - o32**2,
    )


def evolved_basis(result: ProtocolResult) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis ``(psi'1, psi'2)`` after stage-one evolution."""
    hd = result.delta / 2
    return (
        np.array([math.cos(hd), -1j * math.sin(hd)]),
        np.array([math.sin(hd), 1j * math.cos(hd)]),
    )


def alignment_unitary(phi1) -> np.ndarray:
    """Unitary sending ``phi1`` to |H> and its orthogonal complement to |V>."""
    phi1 = qmath.normalize(phi1)
    return np.vstack([np.conj(phi1), np.conj(qmath.perp(phi1))])


@dataclass(frozen=True)
class StageTwo:
    """Second-stage discrimination of states 1 and 3 as a canonical pair."""

    eps13: float
    hamiltonian: PtHamiltonian
    t: float
    rot: np.ndarray
    evolved_overlap: float

    @property
    def pair(self) -> qsd2.StatePair:
        return qsd2.StatePair(self.eps13)


def stage_two(triple: CanonicalTriple, alpha2: float, omega: float = 1.0) -> StageTwo:
    s1, s2, s3 = triple.states
    sub = canonicalize(s1, s3, s2)
    h, t = _require_alpha(sub.eps12, alpha2, omega)
    overlap = abs(qsd2.renormalized_overlap(sub.pair, h, t))
    return StageTwo(sub.eps12, h, t, sub.rot, overlap)


def stage_two_alpha(triple: CanonicalTriple, alpha: float) -> float:
    """Default second-stage ``alpha``: reuse stage one's unless it is below
    the critical value for the (1, 3) pair."""
    eps13 = math.acos(overlap_cos(triple.states[0], triple.states[2]))
    return max(alpha, qsd2.critical_alpha(eps13))


def count_ratio_probabilities(counts) -> tuple[float, float, float]:
    """Correct-identification estimators from photon counts.

    ``counts[j]`` holds ``(n1h, n1v, n2h, n2v)`` recorded with input state
    ``j + 1``; stage-two counts of input 2 are ignored.
    """
    (a1h, a1v, a2h, a2v), (b1h, b1v, _, _), (c1h, c1v, c2h, c2v) = counts

    def frac(num, den):
        return num / den if den > 0 else float("nan")

    p1 = frac(a1h, a1h + a1v) * frac(a2h, a2h + a2v)
    p2 = frac(b1v, b1h + b1v)
    p3 = frac(c1h, c1h + c1v) * frac(c2v, c2h + c2v)
    return p1, p2, p3


def predicted_counts_probabilities(result: ProtocolResult) -> tuple[float, float, float]:
    """Expected values of the count-ratio estimators for an ideal stage two."""
    expected = (
        (1.0, 0.0, 1.0, 0.0),
        (result.o21**2, 1.0 - result.o21**2, 0.0, 0.0),
        (result.o31**2, result.o32**2, 0.0, 1.0),
    )
    return count_ratio_probabilities(expected)
