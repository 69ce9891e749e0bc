"""Monte-Carlo model of the photon-counting experiment.

Randomness: every task draws from its own generator,
``substream(seed, *key)``, which wraps
``SeedSequence(seed, spawn_key=key)``. Keys are tuples of small integers
that identify the task (experiment kind, grid index, trial, sub-step), so a
run gives identical numbers regardless of evaluation order or worker count.

Passing ``shots=None`` selects infinite-shot mode. Exact outcome
probabilities are then used in place of sampled frequencies.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize

from . import ptcore, qmath, qsd2, qsd3
from .errors import InvalidParameter

KIND_TWO_STATE = 2
KIND_THREE_STATE = 3

_R = np.array([1, 1j]) / math.sqrt(2)
_L = np.array([1, -1j]) / math.sqrt(2)
_D = np.array([1, 1]) / math.sqrt(2)
_A = np.array([1, -1]) / math.sqrt(2)
# (label, plus state, minus state); the order matches (Sx, Sy, Sz)
TOMOGRAPHY_BASES = (
    ("DA", _D, _A),
    ("RL", _R, _L),
    ("HV", qmath.KET_H, qmath.KET_V),
)


def substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(key)))


@dataclass(frozen=True)
class CountRecord:
    labels: list[str]
    counts: list[int]
    shots: int
    seed: int

    def __post_init__(self):
        if sum(self.counts) != self.shots:
            raise InvalidParameter("counts do not add up to shots")

    def __getitem__(self, label: str) -> int:
        return self.counts[self.labels.index(label)]


def _check_effects(effects) -> list[np.ndarray]:
    effects = [qmath.as_matrix(e) for e in effects]
    for e in effects:
        lo, _, _, _ = qmath.eigs_hermitian2(e)
        if lo < -1e-10:
            raise InvalidParameter(f"effect has negative eigenvalue {lo:.3g}")
    lo, _, _, _ = qmath.eigs_hermitian2(qmath.IDENTITY - sum(effects))
    if lo < -1e-10:
        raise InvalidParameter("effects sum to more than the identity")
    return effects


def outcome_probabilities(state, effects) -> np.ndarray:
    """Probabilities of each effect plus a final "lost" entry."""
    rho = qmath.density_matrix(state)
    p = np.array([np.trace(rho @ e).real for e in _check_effects(effects)])
    p = np.clip(p, 0.0, 1.0)
    lost = max(0.0, 1.0 - p.sum())
    return np.append(p, lost) / (p.sum() + lost)


def simulate_counts(
    state,
    effects: Sequence[np.ndarray],
    shots: int,
    seed: int,
    labels: Sequence[str] | None = None,
    rng: np.random.Generator | None = None,
) -> CountRecord:
    """Multinomial photon counts for ``effects`` plus the residual loss outcome.

    ``rng`` overrides the generator built from ``seed`` (used for substreams);
    ``seed`` is still recorded.
    """
    if shots < 0:
        raise InvalidParameter("shots must be nonnegative")
    p = outcome_probabilities(state, effects)
    if labels is None:
        labels = [f"e{i}" for i in range(len(effects))]
    labels = list(labels) + ["lost"]
    rng = rng if rng is not None else substream(seed)
    counts = rng.multinomial(int(shots), p)
    return CountRecord(labels, [int(c) for c in counts], int(shots), int(seed))


class Estimate(NamedTuple):
    value: float
    stderr: float


def estimate_dissipation(lost: int, detected: int) -> Estimate:
    """Lost-photon fraction ``lost / (lost + detected)`` and its binomial error."""
    n = lost + detected
    if lost < 0 or detected < 0 or n <= 0:
        raise InvalidParameter("need a positive total photon count")
    p = lost / n
    return Estimate(p, math.sqrt(p * (1 - p) / n))


@dataclass(frozen=True)
class TomographyResult:
    rho: np.ndarray
    stokes: np.ndarray
    stokes_raw: np.ndarray
    stokes_stderr: np.ndarray
    shots_per_basis: int | None

    def fidelity_to(self, ref) -> float:
        return qmath.fidelity(self.rho, ref)

    @property
    def stderr(self) -> np.ndarray:
        """Standard errors of the entries of the linear-inversion estimate.

        Diagonal entries carry ``se(Sz)/2``; off-diagonal ones combine the
        real (``Sx``) and imaginary (``Sy``) parts in quadrature.
        """
        ex, ey, ez = self.stokes_stderr
        off = 0.5 * math.hypot(ex, ey)
        return np.array([[0.5 * ez, off], [off, 0.5 * ez]])


def physical_projection(rho) -> np.ndarray:
    """Clamp negative eigenvalues to zero and restore unit trace."""
    rho = np.asarray(rho, dtype=complex)
    rho = 0.5 * (rho + qmath.dagger(rho))
    lo, hi, v_lo, v_hi = qmath.eigs_hermitian2(rho)
    lo, hi = max(lo, 0.0), max(hi, 0.0)
    out = lo * qmath.projector(v_lo) + hi * qmath.projector(v_hi)
    return out / (lo + hi)


def _mle_bloch(n_plus: np.ndarray, n_total: np.ndarray, start: np.ndarray) -> np.ndarray:
    """Maximum-likelihood Bloch vector; the open ball is reached through
    ``r = x / sqrt(1 + |x|^2)``."""

    def to_ball(x):
        return x / math.sqrt(1.0 + x @ x)

    def nll(x):
        r = to_ball(x)
        p = np.clip(0.5 * (1 + r), 1e-300, 1.0)
        q = np.clip(0.5 * (1 - r), 1e-300, 1.0)
        return -float(n_plus @ np.log(p) + (n_total - n_plus) @ np.log(q))

    r0 = start * min(1.0, 0.999 / max(np.linalg.norm(start), 1e-12))
    x0 = r0 / math.sqrt(max(1.0 - r0 @ r0, 1e-12))
    res = minimize(nll, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
    return to_ball(res.x)


def tomography(
    state,
    shots_per_basis: int | None,
    seed: int = 0,
    method: str = "linear",
    visibility: float = 1.0,
    rng: np.random.Generator | None = None,
) -> TomographyResult:
    """Three-basis (D/A, R/L, H/V) tomography of a detected-photon state.

    ``state`` is a ket or density matrix; it is renormalised, so pass the
    postselected output of a lossy channel directly. ``visibility`` < 1 mixes
    in white noise before measurement. ``method`` is ``"linear"`` (Stokes
    inversion with eigenvalue clamping) or ``"mle"``.
    """
    if method not in ("linear", "mle"):
        raise InvalidParameter(f"unknown tomography method {method!r}")
    if shots_per_basis is not None and shots_per_basis < 1:
        raise InvalidParameter("shots_per_basis must be at least 1")
    if not 0.0 <= visibility <= 1.0:
        raise InvalidParameter("visibility must lie in [0, 1]")
    x = np.asarray(state, dtype=complex)
    if x.shape == (2,):
        rho = qmath.projector(qmath.normalize(x))
    else:
        rho = qmath.as_matrix(x)
        rho = rho / np.trace(rho).real
    rho = visibility * rho + (1 - visibility) * 0.5 * qmath.IDENTITY

    p_plus = np.array(
        [min(1.0, max(0.0, np.vdot(plus, rho @ plus).real)) for _, plus, _ in TOMOGRAPHY_BASES]
    )
    if shots_per_basis is None:
        raw = 2 * p_plus - 1
        err = np.zeros(3)
        n_plus = n_total = None
    else:
        rng = rng if rng is not None else substream(seed)
        n_total = np.full(3, float(shots_per_basis))
        n_plus = np.array([rng.binomial(shots_per_basis, p) for p in p_plus], dtype=float)
        raw = 2 * n_plus / n_total - 1
        err = np.sqrt(np.clip(1 - raw**2, 0.0, None) / n_total)

    rho_hat = physical_projection(qmath.from_bloch(raw))
    if method == "mle" and n_plus is not None:
        rho_hat = qmath.from_bloch(_mle_bloch(n_plus, n_total, qmath.bloch_vector(rho_hat)))
    return TomographyResult(rho_hat, qmath.bloch_vector(rho_hat), raw, err, shots_per_basis)


def _mean_std(xs) -> tuple[float, float]:
    xs = np.asarray(xs, dtype=float)
    if xs.size < 2:
        return float(xs.mean()), 0.0
    return float(xs.mean()), float(xs.std(ddof=1))


def _run_tasks(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


@dataclass(frozen=True)
class TwoStateRow:
    t: float
    d_theory: float
    d_mean: float
    d_std: float
    dissipation1_theory: float
    dissipation1_mean: float
    dissipation1_std: float
    dissipation2_theory: float
    dissipation2_mean: float
    dissipation2_std: float
    fidelity1_mean: float
    fidelity2_mean: float


def _two_state_trial(task):
    (epsilon, s, omega, theta, t, shots, seed, i, k, visibility, method) = task
    pair = qsd2.make_pair(epsilon)
    h = qsd2.hamiltonian_for_s(s, omega, theta)
    v = ptcore.physical_evolution(ptcore.propagator(h, t))
    detect = qmath.dagger(v) @ v
    out = []
    for j, psi in enumerate((pair.psi1, pair.psi2)):
        phi = ptcore.evolve_normalized(v, psi)
        if shots is None:
            diss = ptcore.dissipation(v, psi)
            tomo = tomography(phi, None, visibility=visibility, method=method)
        else:
            rec = simulate_counts(
                psi, [detect], shots, seed, ["detected"],
                rng=substream(seed, KIND_TWO_STATE, i, k, j, 0),
            )
            diss = estimate_dissipation(rec["lost"], rec["detected"]).value
            tomo = tomography(
                phi, shots, seed, method=method, visibility=visibility,
                rng=substream(seed, KIND_TWO_STATE, i, k, j, 1),
            )
        out.append((diss, tomo.rho, tomo.fidelity_to(phi)))
    d = qmath.trace_distance(out[0][1], out[1][1])
    return d, out[0][0], out[1][0], out[0][2], out[1][2]


def experiment_two_state(
    epsilon: float,
    s: float,
    times: Sequence[float],
    shots: int | None = 30_000,
    trials: int = 10,
    seed: int = 0,
    omega: float = 1.0,
    theta: float = math.pi / 2,
    visibility: float = 1.0,
    method: str = "linear",
    jobs: int = 1,
) -> list[TwoStateRow]:
    """Simulated dissipations and tomographic trace distance along a time grid.

    ``shots`` photons enter the channel for each loss measurement, and
    ``shots`` detected photons are recorded in each of the three tomography
    bases. Error bars are sample standard deviations over ``trials``
    independently seeded repetitions.
    """
    pair = qsd2.make_pair(epsilon)
    h = qsd2.hamiltonian_for_s(s, omega, theta)
    times = [float(t) for t in times]
    if not times:
        raise InvalidParameter("time grid is empty")
    if trials < 1:
        raise InvalidParameter("trials must be at least 1")
    n_trials = 1 if shots is None else trials
    tasks = [
        (epsilon, s, omega, theta, t, shots, seed, i, k, visibility, method)
        for i, t in enumerate(times)
        for k in range(n_trials)
    ]
    results = _run_tasks(_two_state_trial, tasks, jobs)

    rows = []
    for i, t in enumerate(times):
        chunk = results[i * n_trials : (i + 1) * n_trials]
        v = ptcore.physical_evolution(ptcore.propagator(h, t))
        d_th = qsd2.evolved_trace_distance(pair, h, t)
        d1_th = ptcore.dissipation(v, pair.psi1)
        d2_th = ptcore.dissipation(v, pair.psi2)
        cols = list(zip(*chunk))
        d_m, d_s = _mean_std(cols[0])
        a_m, a_s = _mean_std(cols[1])
        b_m, b_s = _mean_std(cols[2])
        rows.append(
            TwoStateRow(
                t, d_th, d_m, d_s, d1_th, a_m, a_s, d2_th, b_m, b_s,
                float(np.mean(cols[3])), float(np.mean(cols[4])),
            )
        )
    return rows


@dataclass(frozen=True)
class ThreeStateRow:
    alpha: float
    t: float
    p1_theory: float
    p2_theory: float
    p3_theory: float
    p1_mean: float
    p1_std: float
    p2_mean: float
    p2_std: float
    p3_mean: float
    p3_std: float


def _h_probability(a: np.ndarray, v: np.ndarray, rot: np.ndarray, psi: np.ndarray) -> float:
    out = qmath.normalize(a @ v @ rot @ psi)
    return float(min(1.0, abs(out[0]) ** 2))


def _stage_probabilities(states, alpha: float, alpha2: float | None, omega: float):
    """P(H) for each input in stage one and (inputs 1, 3) in stage two."""
    triple = qsd3.canonicalize(*states)
    kets = [st.ket for st in states]
    h = ptcore.PtHamiltonian.from_alpha(max(alpha, triple.alpha_c), omega)
    t = qsd2.orthogonality_times(triple.eps12, h).t0
    v = ptcore.physical_evolution(ptcore.propagator(h, t))
    a = qsd3.alignment_unitary(v @ triple.rot @ kets[0])
    first = [_h_probability(a, v, triple.rot, k) for k in kets]

    a2_alpha = qsd3.stage_two_alpha(triple, alpha) if alpha2 is None else alpha2
    st2 = qsd3.stage_two(triple, a2_alpha, omega)
    v2 = ptcore.physical_evolution(ptcore.propagator(st2.hamiltonian, st2.t))
    a2 = qsd3.alignment_unitary(v2 @ st2.rot @ kets[0])
    second = [_h_probability(a2, v2, st2.rot, k) for k in (kets[0], kets[2])]
    return t, first, second


def _three_state_trial(task):
    (betas, gammas, alpha, alpha2, omega, shots, seed, i, k) = task
    states = [qsd3.BlochState(b, g) for b, g in zip(betas, gammas)]
    _, first, second = _stage_probabilities(states, alpha, alpha2, omega)
    rng = substream(seed, KIND_THREE_STATE, i, k)

    def hv(p):
        if shots is None:
            return p, 1.0 - p
        nh = int(rng.binomial(shots, p))
        return nh, shots - nh

    a1 = hv(first[0])
    b1 = hv(first[1])
    c1 = hv(first[2])
    a2 = hv(second[0])
    c2 = hv(second[1])
    return qsd3.count_ratio_probabilities(
        (a1 + a2, b1 + (0, 0), c1 + c2)
    )


def experiment_three_state(
    beta: float,
    alphas: Sequence[float],
    shots: int | None = 30_000,
    trials: int = 10,
    seed: int = 0,
    gammas: Sequence[float] | None = None,
    betas: Sequence[float] | None = None,
    alpha2: float | None = None,
    omega: float = 1.0,
    jobs: int = 1,
) -> list[ThreeStateRow]:
    """Simulated two-stage identification probabilities along an alpha grid.

    The default triple sits on the parallel ``beta`` at meridians 0, 2pi/3,
    4pi/3. ``shots`` detected photons are recorded per input state and stage.
    Stage two reuses ``alpha`` unless ``alpha2`` is given (raised to the
    (1, 3) critical value if needed).
    """
    betas = tuple(betas) if betas is not None else (beta,) * 3
    gammas = tuple(gammas) if gammas is not None else tuple(2 * math.pi * j / 3 for j in range(3))
    states = [qsd3.BlochState(b, g) for b, g in zip(betas, gammas)]
    triple = qsd3.canonicalize(*states)
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise InvalidParameter("alpha grid is empty")
    n_trials = 1 if shots is None else trials
    tasks = [
        (betas, gammas, a, alpha2, omega, shots, seed, i, k)
        for i, a in enumerate(alphas)
        for k in range(n_trials)
    ]
    results = _run_tasks(_three_state_trial, tasks, jobs)
    rows = []
    for i, a in enumerate(alphas):
        th = qsd3.stage_one(triple, a, omega)
        p_th = qsd3.predicted_counts_probabilities(th)
        cols = list(zip(*results[i * n_trials : (i + 1) * n_trials]))
        stats = [_mean_std(c) for c in cols]
        rows.append(
            ThreeStateRow(
                a, th.t, *p_th,
                stats[0][0], stats[0][1], stats[1][0], stats[1][1], stats[2][0], stats[2][1],
            )
        )
    return rows


KIND_MUTUAL_INFO = 4


def _mutual_info_trial(task):
    (epsilon, s, omega, shots, seed, i, k) = task
    pair = qsd2.make_pair(epsilon)
    h = qsd2.hamiltonian_for_s(s, omega)
    t0 = qsd2.orthogonality_times(epsilon, h).t0
    povm = qsd2.discrimination_povm(pair, h, t0)
    effects = [povm.pi2, povm.pi3]
    table = []
    for j, psi in enumerate((pair.psi1, pair.psi2)):
        if shots is None:
            p = outcome_probabilities(psi, effects)
        else:
            rec = simulate_counts(
                psi, effects, shots, seed, rng=substream(seed, KIND_MUTUAL_INFO, i, k, j)
            )
            p = np.array(rec.counts, dtype=float) / shots
        # reorder to (lost, "psi1", "psi2") to mirror the POVM numbering
        table.append([p[2], p[0], p[1]])
    return qsd2.mutual_information_table(povm.priors, table)


def experiment_mutual_information(
    epsilon: float,
    s_values: Sequence[float],
    shots: int | None = 30_000,
    trials: int = 10,
    seed: int = 0,
    omega: float = 1.0,
    jobs: int = 1,
) -> list[Estimate]:
    """Mutual information estimated from simulated three-outcome counts.

    Each trial sends ``shots`` photons per input state; the likelihood
    table is the empirical outcome frequencies. Returns (mean, std) per
    ``s`` over trials.
    """
    n_trials = 1 if shots is None else trials
    tasks = [
        (epsilon, float(s), omega, shots, seed, i, k)
        for i, s in enumerate(s_values)
        for k in range(n_trials)
    ]
    results = _run_tasks(_mutual_info_trial, tasks, jobs)
    return [
        Estimate(*_mean_std(results[i * n_trials : (i + 1) * n_trials]))
        for i in range(len(s_values))
    ]
