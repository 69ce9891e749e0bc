"""Figure-reproduction presets: CSV tables per panel plus SVG plots.

``build(preset, ...)`` returns ``{panel_name: Table}`` and a summary dict;
``write(preset, outdir, ...)`` serialises both and renders one SVG per panel
from the same tables. Analytic columns come straight from the module-level
formulas; Monte-Carlo columns come from :mod:`ptqsd.photonlab`.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import photonlab, qsd2, qsd3, sweeps
from .sweeps import Table

PRESETS = ("fig2", "fig3", "fig4", "fig5", "fig7", "figS2")

FIG7_ALPHAS = (0.8, 1.2, 1.5)


@dataclass(frozen=True)
class SimOptions:
    shots: int | None = 30_000
    trials: int = 10
    seed: int = 0
    jobs: int = 1


def _two_state_times(epsilon: float, s: float, steps: int) -> list[float]:
    """Uniform grid on [0, pi] plus the orthogonality times, sorted."""
    times = set(sweeps.time_grid(math.pi, steps))
    ot = qsd2.orthogonality_times(epsilon, qsd2.hamiltonian_for_s(s))
    if ot is not None:
        times.update(ot)
    return sorted(times)


def _two_state_panels(epsilon: float, s_values, opts: SimOptions, steps: int):
    tables = {}
    for tag, s in zip("abc", s_values):
        times = _two_state_times(epsilon, s, steps)
        rows = photonlab.experiment_two_state(
            epsilon, s, times, opts.shots, opts.trials, opts.seed, jobs=opts.jobs
        )
        tables[tag] = sweeps.experiment_table(rows)
    return tables


def _fig_two_state(epsilon: float, opts: SimOptions, steps: int):
    s_c = qsd2.critical_s(epsilon)
    s_values = (1.1, 3.0, s_c)
    tables = _two_state_panels(epsilon, s_values, opts, steps)
    summary = {"epsilon": epsilon, "s": dict(zip("abc", s_values))}
    for tag, s in zip("abc", s_values):
        ot = qsd2.orthogonality_times(epsilon, qsd2.hamiltonian_for_s(s))
        summary[f"orthogonality_times_{tag}"] = None if ot is None else list(ot)
    return tables, summary


def _fig4(opts: SimOptions, steps: int):
    epsilon = math.pi / 3
    s_c = qsd2.critical_s(epsilon)
    s_map = sweeps.log_grid(s_c, 10.0, 40)
    times = sweeps.time_grid(math.pi, steps)
    pair = qsd2.make_pair(epsilon)
    dmap = Table("distance-map")
    locus = Table("locus")
    for s in s_map:
        h = qsd2.hamiltonian_for_s(s)
        for t in times:
            dmap.rows.append((s, t, qsd2.evolved_trace_distance(pair, h, t)))
        ot = qsd2.orthogonality_times(epsilon, h)
        locus.rows.append((s, ot.t0, ot.t1))

    # Monte-Carlo D at both orthogonality times on a coarser s grid
    mc = Table("locus-mc")
    for i, s in enumerate(sweeps.log_grid(s_c, 10.0, 8)):
        ot = qsd2.orthogonality_times(epsilon, qsd2.hamiltonian_for_s(s))
        rows = photonlab.experiment_two_state(
            epsilon, s, list(ot), opts.shots, opts.trials, opts.seed + i, jobs=opts.jobs
        )
        for branch, r in enumerate(rows):
            mc.rows.append((s, branch, r.t, r.d_theory, r.d_mean, r.d_std))
    d_std = mc.column("d_std")
    summary = {
        "epsilon": epsilon,
        "s_critical": s_c,
        "mc_d_mean_min": float(np.min(mc.column("d_mean"))),
        "mc_d_std_median": float(np.median(d_std)),
    }
    return {"a": dmap, "a_locus": locus, "b": mc}, summary


def _fig5(opts: SimOptions):
    epsilon = math.pi / 3
    s_c = qsd2.critical_s(epsilon)
    s_values = sweeps.log_grid(s_c, 10.0, 30)
    analytic = sweeps.mutual_info_sweep(epsilon, s_values)
    est = photonlab.experiment_mutual_information(
        epsilon, s_values, opts.shots, opts.trials, opts.seed, jobs=opts.jobs
    )
    table = Table("mutual-info-mc")
    cols = analytic.columns
    for row, e in zip(analytic.rows, est):
        r = dict(zip(cols, row))
        table.rows.append(
            (r["s"], r["t0"], r["mutual_information"], e.value, e.stderr, r["usd"], r["med"])
        )
    usd = qsd2.usd_baseline(epsilon)
    summary = {
        "epsilon": epsilon,
        "usd_baseline": usd,
        "med_baseline": qsd2.med_baseline(epsilon),
        "crossing_s": _usd_crossing(epsilon, s_c, usd),
        "critical_s": s_c,
        "mutual_information_at_critical": qsd2.pt_mutual_information(epsilon, s_c),
    }
    return {"a": table}, summary


def _usd_crossing(epsilon: float, s_c: float, usd: float) -> float:
    """Smallest s on [s_c, 10] where the PT curve reaches the USD line.

    The curve starts on the line at ``s_c`` and rises, so the crossing is the
    left endpoint unless the curve dips below first, in which case bisect.
    """
    f = lambda s: qsd2.pt_mutual_information(epsilon, s) - usd  # noqa: E731
    if f(s_c) >= -1e-12:
        return s_c
    lo, hi = s_c, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f(mid) < 0 else (lo, mid)
    return hi


def _fig7(opts: SimOptions):
    tables, summary = {}, {}
    for tag, beta in (("a", math.pi / 3), ("b", math.pi / 2)):
        triple = qsd3.canonicalize(*qsd3.symmetric_triple(beta))
        alphas = [triple.alpha_c, *FIG7_ALPHAS]
        rows = photonlab.experiment_three_state(
            beta, alphas, opts.shots, opts.trials, opts.seed, jobs=opts.jobs
        )
        tables[tag] = sweeps.experiment_table(rows)
        summary[f"alpha_c_{tag}"] = triple.alpha_c
        summary[f"beta_{tag}"] = beta
    return tables, summary


def _figS2():
    tables, summary = {}, {}
    for tag, beta in (("a", math.pi / 3), ("b", math.pi / 2)):
        triple = qsd3.canonicalize(*qsd3.symmetric_triple(beta))
        a_c = triple.alpha_c
        # stop just short of the exceptional point
        alphas = [a_c + (math.pi / 2 - 1e-6 - a_c) * i / 60 for i in range(61)]
        table = Table("overlaps")
        for a in alphas:
            r = qsd3.stage_one(triple, a)
            table.rows.append((a, r.o31**2, r.o32**2))
        tables[tag] = table
        summary[f"o32_sq_limit_{tag}"] = table.rows[-1][2]
    return tables, summary


def build(preset: str, opts: SimOptions | None = None, steps: int = 61):
    """Tables and summary for one preset."""
    opts = opts or SimOptions()
    if preset == "fig2":
        return _fig_two_state(math.pi / 3, opts, steps)
    if preset == "fig3":
        return _fig_two_state(math.pi / 6, opts, steps)
    if preset == "fig4":
        return _fig4(opts, steps)
    if preset == "fig5":
        return _fig5(opts)
    if preset == "fig7":
        return _fig7(opts)
    if preset == "figS2":
        return _figS2()
    raise ValueError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")


# ---- plotting ---------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "ptqsd"
    plt.rcParams["svg.fonttype"] = "none"
    return plt


def _save(fig, path: str) -> None:
    import io

    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    sweeps.atomic_write(path, buf.getvalue())


def _plot_two_state(plt, t: Table, title: str):
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(5, 6), sharex=True)
    x = t.column("t")
    ax1.plot(x, t.column("d_theory"), "k-", label="analytic")
    ax1.errorbar(x, t.column("d_mean"), t.column("d_std"), fmt="o", ms=3, label="simulated")
    ax1.set_ylabel("trace distance D")
    ax1.legend(loc="lower right")
    ax1.set_title(title)
    for k, c in ((1, "tab:red"), (2, "tab:blue")):
        ax2.plot(x, t.column(f"dissipation{k}_theory"), "-", color=c, label=f"psi{k}")
        ax2.errorbar(
            x, t.column(f"dissipation{k}_mean"), t.column(f"dissipation{k}_std"),
            fmt="o", ms=3, color=c,
        )
    ax2.set_xlabel("t")
    ax2.set_ylabel("dissipation")
    ax2.legend()
    return fig


def _plot(plt, preset: str, name: str, table: Table, summary: dict):
    if table.schema == "experiment-two":
        return _plot_two_state(plt, table, f"{preset}{name}: s = {summary['s'][name]:.4g}")
    fig, ax = plt.subplots(figsize=(5, 4))
    if table.schema == "distance-map":
        s = np.unique(table.column("s"))
        tt = np.unique(table.column("t"))
        d = table.column("trace_distance").reshape(len(s), len(tt))
        mesh = ax.pcolormesh(s, tt, d.T, shading="auto", vmin=0, vmax=1)
        fig.colorbar(mesh, ax=ax, label="D")
        ax.set_xscale("log")
        ax.set_xlabel("s")
        ax.set_ylabel("t")
    elif table.schema == "locus":
        ax.plot(table.column("s"), table.column("t0"), "k-", label="t0")
        ax.plot(table.column("s"), table.column("t1"), "k--", label="t1")
        ax.set_xscale("log")
        ax.set_xlabel("s")
        ax.set_ylabel("t where D = 1")
        ax.legend()
    elif table.schema == "locus-mc":
        for b, m in ((0, "o"), (1, "s")):
            sel = table.column("branch") == b
            ax.errorbar(
                table.column("s")[sel], table.column("d_mean")[sel], table.column("d_std")[sel],
                fmt=m, ms=4, label=f"t{b}",
            )
        ax.axhline(1.0, color="k", lw=0.8)
        ax.set_xscale("log")
        ax.set_xlabel("s")
        ax.set_ylabel("simulated D")
        ax.legend()
    elif table.schema == "mutual-info-mc":
        s = table.column("s")
        ax.plot(s, table.column("mutual_information"), "k-", label="PT")
        ax.errorbar(s, table.column("mi_mean"), table.column("mi_std"), fmt="o", ms=3, label="simulated")
        ax.plot(s, table.column("usd"), "b--", label="USD")
        ax.plot(s, table.column("med"), "m--", label="MED")
        ax.set_xscale("log")
        ax.set_xlabel("s")
        ax.set_ylabel("mutual information (bits)")
        ax.legend()
    elif table.schema == "experiment-three":
        a = table.column("alpha")
        for k, m in ((1, "o"), (2, "s"), (3, "^")):
            ax.plot(a, table.column(f"p{k}_theory"), "-", lw=0.8)
            ax.errorbar(a, table.column(f"p{k}_mean"), table.column(f"p{k}_std"), fmt=m, ms=4, label=f"P{k}")
        ax.set_xlabel("alpha")
        ax.set_ylabel("probability")
        ax.legend()
    elif table.schema == "overlaps":
        a = table.column("alpha")
        ax.plot(a, table.column("o31_sq"), label="|<psi3'|psi1'>|^2")
        ax.plot(a, table.column("o32_sq"), label="|<psi3'|psi2'>|^2")
        ax.set_xlabel("alpha")
        ax.legend()
    ax.set_title(f"{preset}{name.split('_')[0]}")
    fig.tight_layout()
    return fig


def write(preset: str, outdir: str, opts: SimOptions | None = None, steps: int = 61) -> list[str]:
    """Write ``<preset><panel>.csv``/``.svg`` and ``<preset>_summary.json``."""
    tables, summary = build(preset, opts, steps)
    os.makedirs(outdir, exist_ok=True)
    plt = _pyplot()
    written = []
    for name, table in tables.items():
        base = os.path.join(outdir, f"{preset}{name}")
        sweeps.atomic_write(base + ".csv", sweeps.to_csv(table))
        fig = _plot(plt, preset, name, table, summary)
        _save(fig, base + ".svg")
        plt.close(fig)
        written += [base + ".csv", base + ".svg"]
    path = os.path.join(outdir, f"{preset}_summary.json")
    sweeps.atomic_write(path, json.dumps(summary, indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written
