"""Tabular sweeps and their CSV serialisation.

Every table written by the command line has a fixed, documented column list
in ``SCHEMAS``. CSV files use ``,`` separators, ``.`` decimals, a header row
and LF line endings; floats carry 17 significant digits so values round-trip
exactly.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import astuple, dataclass, field, fields
from typing import Sequence

import numpy as np

from . import photonlab, ptcore, qsd2, qsd3

SCHEMAS: dict[str, list[tuple[str, str]]] = {
    "pair-evolve": [
        ("t", "evolution time (omega t in radians when omega = 1)"),
        ("inner_product", "<psi1|U^dag U|psi2>, real part (unnormalised states)"),
        ("overlap", "|<psi1'|psi2'>| of the renormalised evolved states"),
        ("trace_distance", "trace distance D of the renormalised evolved states"),
        ("dissipation1", "lost-photon fraction of psi1 through the passive channel"),
        ("dissipation2", "lost-photon fraction of psi2 through the passive channel"),
    ],
    "mutual-info": [
        ("s", "Hamiltonian coupling s (omega fixed)"),
        ("t0", "first orthogonality time (nan below the critical s)"),
        ("mutual_information", "PT discrimination mutual information, bits"),
        ("usd", "optimal unambiguous discrimination, bits"),
        ("med", "Helstrom minimum-error discrimination, bits"),
        ("dissipation1", "lost-photon fraction of psi1 at t0"),
        ("dissipation2", "lost-photon fraction of psi2 at t0"),
    ],
    "three-state": [
        ("alpha", "PT parameter alpha of stage one"),
        ("t", "stage-one orthogonality time"),
        ("delta", "angle of the evolved psi1"),
        ("chi", "signed angle of the evolved psi3"),
        ("phi", "out-of-plane phase of the evolved psi3"),
        ("o31", "|<psi3'|psi1'>|"),
        ("o32", "|<psi3'|psi2'>|"),
        ("p1", "probability of correctly identifying psi1"),
        ("p2", "probability of correctly identifying psi2"),
        ("p3", "probability of correctly identifying psi3"),
    ],
    "experiment-two": [
        (f.name, d)
        for f, d in zip(
            fields(photonlab.TwoStateRow),
            [
                "evolution time",
                "analytic trace distance",
                "simulated trace distance, mean over trials",
                "simulated trace distance, standard deviation over trials",
                "analytic dissipation of psi1",
                "simulated dissipation of psi1, mean",
                "simulated dissipation of psi1, standard deviation",
                "analytic dissipation of psi2",
                "simulated dissipation of psi2, mean",
                "simulated dissipation of psi2, standard deviation",
                "mean tomographic fidelity of evolved psi1",
                "mean tomographic fidelity of evolved psi2",
            ],
        )
    ],
    "experiment-three": [
        (f.name, d)
        for f, d in zip(
            fields(photonlab.ThreeStateRow),
            [
                "PT parameter alpha",
                "stage-one orthogonality time",
                "analytic P1",
                "analytic P2",
                "analytic P3",
                "simulated P1, mean",
                "simulated P1, standard deviation",
                "simulated P2, mean",
                "simulated P2, standard deviation",
                "simulated P3, mean",
                "simulated P3, standard deviation",
            ],
        )
    ],
    "locus": [
        ("s", "Hamiltonian coupling s"),
        ("t0", "first orthogonality time"),
        ("t1", "second orthogonality time"),
    ],
    "distance-map": [
        ("s", "Hamiltonian coupling s"),
        ("t", "evolution time"),
        ("trace_distance", "trace distance of the renormalised evolved states"),
    ],
    "locus-mc": [
        ("s", "Hamiltonian coupling s"),
        ("branch", "0 for t0, 1 for t1 = pi/omega - t0"),
        ("t", "orthogonality time"),
        ("d_theory", "analytic trace distance (1 at an orthogonality time)"),
        ("d_mean", "simulated trace distance, mean over trials"),
        ("d_std", "simulated trace distance, standard deviation over trials"),
    ],
    "mutual-info-mc": [
        ("s", "Hamiltonian coupling s"),
        ("t0", "first orthogonality time"),
        ("mutual_information", "analytic PT mutual information, bits"),
        ("mi_mean", "simulated mutual information, mean over trials"),
        ("mi_std", "simulated mutual information, standard deviation"),
        ("usd", "optimal unambiguous discrimination, bits"),
        ("med", "Helstrom minimum-error discrimination, bits"),
    ],
    "overlaps": [
        ("alpha", "PT parameter alpha"),
        ("o31_sq", "|<psi3'|psi1'>|^2"),
        ("o32_sq", "|<psi3'|psi2'>|^2"),
    ],
}


@dataclass
class Table:
    schema: str
    rows: list[tuple] = field(default_factory=list)

    @property
    def columns(self) -> list[str]:
        return [c for c, _ in SCHEMAS[self.schema]]

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)


def fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def to_csv(table: Table) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        if len(row) != len(table.columns):
            raise ValueError("row length does not match the schema")
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def atomic_write(path: str, data: str | bytes) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        kwargs = {} if isinstance(data, bytes) else {"encoding": "utf-8", "newline": "\n"}
        with os.fdopen(fd, mode, **kwargs) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def time_grid(t_max: float, steps: int) -> list[float]:
    if steps < 1:
        raise ValueError("grid must have at least one point")
    if steps == 1:
        return [0.0]
    return [t_max * i / (steps - 1) for i in range(steps)]


def pair_evolve(epsilon: float, h: ptcore.PtHamiltonian, times: Sequence[float]) -> Table:
    pair = qsd2.make_pair(epsilon)
    table = Table("pair-evolve")
    for t in times:
        v = ptcore.physical_evolution(ptcore.propagator(h, t))
        table.rows.append(
            (
                t,
                qsd2.evolved_inner_product(pair, h, t).real,
                abs(qsd2.renormalized_overlap(pair, h, t)),
                qsd2.evolved_trace_distance(pair, h, t),
                ptcore.dissipation(v, pair.psi1),
                ptcore.dissipation(v, pair.psi2),
            )
        )
    return table


def mutual_info_sweep(epsilon: float, s_values: Sequence[float], omega: float = 1.0) -> Table:
    pair = qsd2.make_pair(epsilon)
    usd, med = qsd2.usd_baseline(epsilon), qsd2.med_baseline(epsilon)
    table = Table("mutual-info")
    for s in s_values:
        h = qsd2.hamiltonian_for_s(s, omega)
        times = qsd2.orthogonality_times(epsilon, h)
        if times is None:
            table.rows.append((s, math.nan, math.nan, usd, med, math.nan, math.nan))
            continue
        povm = qsd2.discrimination_povm(pair, h, times.t0)
        mi = qsd2.mutual_information(povm, pair.psi1, pair.psi2)
        v = ptcore.physical_evolution(ptcore.propagator(h, times.t0))
        table.rows.append(
            (
                s, times.t0, mi, usd, med,
                ptcore.dissipation(v, pair.psi1), ptcore.dissipation(v, pair.psi2),
            )
        )
    return table


def three_state_sweep(states, alphas: Sequence[float], omega: float = 1.0) -> Table:
    triple = qsd3.canonicalize(*states)
    table = Table("three-state")
    for a in alphas:
        r = qsd3.stage_one(triple, a, omega)
        p = qsd3.predicted_counts_probabilities(r)
        table.rows.append((r.alpha, r.t, r.delta, r.chi, r.phi, r.o31, r.o32, *p))
    return table


def experiment_table(rows) -> Table:
    kind = "experiment-two" if rows and isinstance(rows[0], photonlab.TwoStateRow) else "experiment-three"
    return Table(kind, [astuple(r) for r in rows])


def log_grid(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [lo]
    grid = list(np.geomspace(lo, hi, n))
    grid[0], grid[-1] = lo, hi
    return [float(x) for x in grid]
