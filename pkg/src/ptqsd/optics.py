"""Compile 2x2 operators into polarization-optics recipes.

A unitary is written (up to global phase) as

    u = [[a0 - i a1, -i a2 - a3], [-i a2 + a3, a0 + i a1]],   a0 >= 0,

factored into Euler angles ``exp(-i xi Y/2) exp(-i eta Z/2) exp(-i zeta Y/2)``
and realised by quarter/half/quarter wave plates. A nonunitary operator is
split as ``c T M W`` with ``M = diag(1, m)``; ``M`` is an interferometer with
a half-wave plate at ``theta`` in the V path, attenuating V by
``sin(2 theta) = m``.

Jones conventions (all equalities hold up to a global phase):

    R(p)   = [[cos p, -sin p], [sin p, cos p]]
    HWP(p) = R(p) diag(1, -1) R(-p)
    QWP(p) = R(p) diag(1,  i) R(-p)
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import qmath
from .errors import InvalidParameter


def rotation(p: float) -> np.ndarray:
    c, s = math.cos(p), math.sin(p)
    return np.array([[c, -s], [s, c]], dtype=complex)


def hwp(p: float) -> np.ndarray:
    return rotation(p) @ np.diag([1, -1]).astype(complex) @ rotation(-p)


def qwp(p: float) -> np.ndarray:
    return rotation(p) @ np.diag([1, 1j]) @ rotation(-p)


def loss_element(p: float) -> np.ndarray:
    """Interferometer with a HWP at ``p`` in the V arm: ``diag(1, sin 2p)``."""
    return np.diag([1.0, math.sin(2 * p)]).astype(complex)


class Quaternion(NamedTuple):
    a0: float
    a1: float
    a2: float
    a3: float

    @property
    def matrix(self) -> np.ndarray:
        a0, a1, a2, a3 = self
        return np.array([[a0 - 1j * a1, -1j * a2 - a3], [-1j * a2 + a3, a0 + 1j * a1]])


def quaternion_params(u) -> Quaternion:
    u = qmath.as_matrix(u)
    if not qmath.is_unitary(u, 1e-10):
        raise InvalidParameter("quaternion_params requires a unitary matrix")
    s = u * cmath.exp(-0.5j * cmath.phase(np.linalg.det(u)))
    a = np.array(
        [
            0.5 * (s[0, 0] + s[1, 1]).real,
            0.5 * (s[1, 1] - s[0, 0]).imag,
            -0.5 * (s[0, 1] + s[1, 0]).imag,
            0.5 * (s[1, 0] - s[0, 1]).real,
        ]
    )
    a /= np.linalg.norm(a)
    if a[0] < 0:
        a = -a
    return Quaternion(*(float(x) + 0.0 for x in a))


def _arctan_ratio(num: float, den: float) -> float:
    """``arctan(num / den)`` with ``0/0 -> 0`` and ``x/0 -> sign(x) pi/2``."""
    if den == 0.0:
        return 0.0 if num == 0.0 else math.copysign(math.pi / 2, num)
    return math.atan(num / den)


def _ry(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(angle: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * angle), cmath.exp(0.5j * angle)])


@dataclass(frozen=True)
class EulerAngles:
    xi: float
    eta: float
    zeta: float

    @property
    def matrix(self) -> np.ndarray:
        return _ry(self.xi) @ _rz(self.eta) @ _ry(self.zeta)


def euler_angles(a) -> EulerAngles:
    a0, a1, a2, a3 = (float(x) for x in a)
    sign_a1 = 1.0 if a1 >= 0 else -1.0
    corr = 0.5 * math.pi * (1.0 - sign_a1)
    p = _arctan_ratio(a3, a0)
    q = _arctan_ratio(a2, a1)
    eta = 2 * math.acos(min(1.0, math.hypot(a0, a3)))
    return EulerAngles(p + q + corr, eta, p - q - corr)


@dataclass(frozen=True)
class WaveplateSequence:
    """Fast-axis angles of ``QWP(q1) HWP(h) QWP(q2)``; light meets q2 first."""

    q1_angle: float
    h_angle: float
    q2_angle: float

    @property
    def jones(self) -> np.ndarray:
        return qwp(self.q1_angle) @ hwp(self.h_angle) @ qwp(self.q2_angle)


def waveplate_angles(e: EulerAngles) -> WaveplateSequence:
    return WaveplateSequence(
        math.pi / 4 + e.xi / 2,
        -math.pi / 4 + (e.xi + e.eta - e.zeta) / 4,
        math.pi / 4 - e.zeta / 2,
    )


def compile_unitary(u) -> WaveplateSequence:
    return waveplate_angles(euler_angles(quaternion_params(u)))


@dataclass(frozen=True)
class LossyDecomposition:
    c: complex
    t_unitary: np.ndarray
    m_diag: tuple[float, float]
    w_unitary: np.ndarray
    hwp_loss_angle: float

    @property
    def m_matrix(self) -> np.ndarray:
        return np.diag(self.m_diag).astype(complex)

    def reconstruct(self) -> np.ndarray:
        return self.c * self.t_unitary @ self.m_matrix @ self.w_unitary


def decompose_lossy(m) -> LossyDecomposition:
    """Factor ``m = c T M W`` via the SVD, with ``T`` and ``W`` special unitary."""
    m = qmath.as_matrix(m)
    u, (s1, s2), vdag = qmath.svd2(m)
    if s1 == 0.0:
        raise InvalidParameter("cannot decompose the zero matrix")
    pu = cmath.phase(np.linalg.det(u))
    pv = cmath.phase(np.linalg.det(vdag))
    t_unitary = u * cmath.exp(-0.5j * pu)
    w_unitary = vdag * cmath.exp(-0.5j * pv)
    c = s1 * cmath.exp(0.5j * (pu + pv))
    ratio = min(max(s2 / s1, 0.0), 1.0)
    return LossyDecomposition(c, t_unitary, (1.0, ratio), w_unitary, 0.5 * math.asin(ratio))


@dataclass(frozen=True)
class OpticalElement:
    stage: str
    kind: str
    angle: float
    active: bool = True

    @property
    def angle_deg(self) -> float:
        return math.degrees(self.angle)


def _fixed(x: float) -> str:
    # round first so that -1e-17 prints as +0.000...
    return f"{round(x, 12) + 0.0:+.12f}"


@dataclass(frozen=True)
class BenchSheet:
    """Optical elements in the order a photon meets them: W, loss, T."""

    elements: list[OpticalElement]
    c: complex
    attenuation: float
    w_plates: WaveplateSequence
    t_plates: WaveplateSequence
    notes: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [
            "# optical bench sheet (photon path order)",
            f"# scale factor c = {_fixed(self.c.real)}{_fixed(self.c.imag)}j (dropped on the bench)",
            f"# V-path attenuation m = {self.attenuation:.12g}",
        ]
        for i, el in enumerate(self.elements, 1):
            state = "" if el.active else "  (inactive: no loss)"
            lines.append(
                f"{i}. {el.stage:<4} {el.kind:<4} "
                f"{el.angle_deg:+14.8f} deg  {el.angle:+.12f} rad{state}"
            )
        lines.extend(f"# {n}" for n in self.notes)
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "c": [self.c.real, self.c.imag],
            "attenuation": self.attenuation,
            "elements": [
                {
                    "stage": el.stage,
                    "kind": el.kind,
                    "angle_rad": el.angle,
                    "angle_deg": el.angle_deg,
                    "active": el.active,
                }
                for el in self.elements
            ],
            "notes": list(self.notes),
        }


def _plates(stage: str, seq: WaveplateSequence) -> list[OpticalElement]:
    return [
        OpticalElement(stage, "QWP", seq.q2_angle),
        OpticalElement(stage, "HWP", seq.h_angle),
        OpticalElement(stage, "QWP", seq.q1_angle),
    ]


def bench_sheet(d: LossyDecomposition) -> BenchSheet:
    w_seq = compile_unitary(d.w_unitary)
    t_seq = compile_unitary(d.t_unitary)
    lossless = d.m_diag[1] >= 1.0
    notes = ["loss stage empty: M is the identity"] if lossless else []
    elements = (
        _plates("W", w_seq)
        + [OpticalElement("M", "HWP", d.hwp_loss_angle, active=not lossless)]
        + _plates("T", t_seq)
    )
    return BenchSheet(elements, d.c, d.m_diag[1], w_seq, t_seq, notes)


def bench_jones(sheet: BenchSheet) -> np.ndarray:
    """Jones matrix of the bench (without ``c``), composed in photon order."""
    out = qmath.IDENTITY.copy()
    for el in sheet.elements:
        if el.stage == "M":
            out = loss_element(el.angle) @ out
        elif el.kind == "QWP":
            out = qwp(el.angle) @ out
        else:
            out = hwp(el.angle) @ out
    return out
