"""Closed-form complex 2x2 linear algebra.

Matrices are ``(2, 2)`` complex numpy arrays and kets are length-2 complex
arrays. Every decomposition here is written out explicitly (characteristic
polynomial plus explicit vectors) so results are deterministic and exact to
double precision; nothing calls an iterative eigensolver.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import InvalidParameter

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

KET_H = np.array([1, 0], dtype=complex)
KET_V = np.array([0, 1], dtype=complex)

# construction-time invariant checks
CHECK_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise InvalidParameter(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidParameter("matrix has non-finite entries")
    return m


def as_ket(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (2,):
        raise InvalidParameter(f"expected a 2-component ket, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidParameter("ket has non-finite entries")
    return v


def ket(a0: complex, a1: complex) -> np.ndarray:
    return as_ket([a0, a1])


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def normalize(v) -> np.ndarray:
    v = as_ket(v)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise InvalidParameter("cannot normalize the zero vector")
    return v / n


def norm2(v) -> float:
    v = np.asarray(v)
    return float(np.real(np.vdot(v, v)))


def perp(v: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to the unit vector ``v``."""
    return np.array([-np.conj(v[1]), np.conj(v[0])])


def projector(v) -> np.ndarray:
    v = as_ket(v)
    return np.outer(v, np.conj(v))


def is_hermitian(m, tol: float = CHECK_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - dagger(m))) <= tol)


def is_unitary(m, tol: float = CHECK_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(dagger(m) @ m - IDENTITY)) <= tol)


def frobenius(m) -> float:
    return float(np.linalg.norm(np.asarray(m), "fro"))


def phase_aligned_distance(a, b) -> float:
    """Frobenius distance between ``a`` and ``b`` after the best global phase.

    The optimal phase is ``arg tr(a^dagger b)``, which minimises
    ``||e^{i phi} a - b||_F``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    z = np.vdot(a, b)
    phase = z / abs(z) if abs(z) > 0 else 1.0
    return float(np.linalg.norm(phase * a - b))


def _fix_phase(v: np.ndarray) -> complex:
    """Unit phase that makes the first nonzero component of ``v`` real >= 0."""
    for c in v:
        if abs(c) > 1e-150:
            return abs(c) / c
        if abs(c) > 0:
            # tiny entries: the ratio form would overflow
            return cmath.exp(-1j * cmath.phase(c))
    return 1.0


def eigs_hermitian2(m, tol: float = CHECK_TOL):
    """Eigen-decomposition of a Hermitian 2x2 matrix.

    Writing ``m = [[t + z, b], [b*, t - z]]`` the eigenvalues are ``t -/+ r``
    with ``r = sqrt(z^2 + |b|^2)``.

    Returns:
        ``(lam_low, lam_high, v_low, v_high)`` with eigenvalues ascending and
        orthonormal eigenvectors.
    """
    m = as_matrix(m)
    if not is_hermitian(m, tol * max(1.0, float(np.max(np.abs(m))))):
        raise InvalidParameter("eigs_hermitian2 requires a Hermitian matrix")
    a = float(m[0, 0].real)
    d = float(m[1, 1].real)
    b = complex(0.5 * (m[0, 1] + np.conj(m[1, 0])))
    t = 0.5 * (a + d)
    z = 0.5 * (a - d)
    r = math.hypot(z, abs(b))
    if r == 0.0:
        return t, t, KET_H.copy(), KET_V.copy()
    # pick the eigenvector form whose norm is bounded away from zero
    if z >= 0:
        v_high = np.array([r + z, np.conj(b)], dtype=complex)
    else:
        v_high = np.array([b, r - z], dtype=complex)
    # rescale first so tiny (subnormal) entries do not underflow in the norm
    mx = float(np.max(np.abs(v_high)))
    v_high = (v_high.real / mx) + 1j * (v_high.imag / mx)
    v_high /= np.linalg.norm(v_high)
    v_high *= _fix_phase(v_high)
    v_low = perp(v_high)
    v_low *= _fix_phase(v_low)
    return t - r, t + r, v_low, v_high


def svd2(m):
    """Singular-value decomposition ``m = u @ diag(sigma) @ vdag``.

    The right singular vectors come from the closed-form eigenvectors of
    ``m^dagger m``. Only the leading left vector is obtained by division
    (by the largest singular value); the second is its orthogonal complement
    so small singular values do not cost accuracy. Each column of ``u`` has
    its first nonzero component real and nonnegative.

    Returns:
        ``(u, (sigma_max, sigma_min), vdag)``
    """
    m = as_matrix(m)
    if not np.any(m):
        return IDENTITY.copy(), (0.0, 0.0), IDENTITY.copy()
    _, lam_high, _, v1 = eigs_hermitian2(dagger(m) @ m, tol=1e-8)
    s1 = math.sqrt(max(lam_high, 0.0))
    u1 = m @ v1 / s1
    u1 /= np.linalg.norm(u1)
    p1 = _fix_phase(u1)
    u1 *= p1
    v1 = v1 * p1

    u2 = perp(u1)
    u2 *= _fix_phase(u2)
    v2 = perp(v1)
    z = np.vdot(u2, m @ v2)
    s2 = abs(z)
    if s2 > 0:
        v2 = v2 * (np.conj(z) / s2)
    s2 = min(s2, s1)

    u = np.column_stack([u1, u2])
    vdag = dagger(np.column_stack([v1, v2]))
    return u, (s1, s2), vdag


def density_matrix(x, tol: float = CHECK_TOL) -> np.ndarray:
    """Validated density matrix from a ket or a 2x2 matrix.

    Kets are normalised first. Matrices must already be Hermitian, unit
    trace and positive semidefinite to within ``tol``.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape == (2,):
        return projector(normalize(x))
    rho = as_matrix(x)
    if not is_hermitian(rho, tol):
        raise InvalidParameter("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise InvalidParameter(f"density matrix trace {np.trace(rho).real} != 1")
    lo, _, _, _ = eigs_hermitian2(rho, tol)
    if lo < -tol:
        raise InvalidParameter(f"density matrix has negative eigenvalue {lo}")
    return rho


def trace_distance(r1, r2) -> float:
    """Trace distance ``tr|r1 - r2| / 2`` between two density matrices."""
    r1 = density_matrix(r1)
    r2 = density_matrix(r2)
    diff = r1 - r2
    if not is_hermitian(diff, 1e-8):
        raise InvalidParameter("difference of density matrices is not Hermitian")
    lo, hi, _, _ = eigs_hermitian2(diff, tol=1e-8)
    return float(min(1.0, 0.5 * (abs(lo) + abs(hi))))


def fidelity(r1, r2) -> float:
    """Uhlmann fidelity, using the qubit identity
    ``F = tr(r1 r2) + 2 sqrt(det r1 det r2)``."""
    r1 = density_matrix(r1)
    r2 = density_matrix(r2)
    d = max(np.linalg.det(r1).real, 0.0) * max(np.linalg.det(r2).real, 0.0)
    f = np.trace(r1 @ r2).real + 2.0 * math.sqrt(d)
    return float(min(max(f, 0.0), 1.0))


def bloch_vector(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(rho @ p).real for p in (PAULI_X, PAULI_Y, PAULI_Z)])


def from_bloch(s) -> np.ndarray:
    sx, sy, sz = s
    return 0.5 * (IDENTITY + sx * PAULI_X + sy * PAULI_Y + sz * PAULI_Z)
