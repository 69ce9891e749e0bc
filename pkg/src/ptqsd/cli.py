"""Command-line interface: ``ptqsd <subcommand> [options]``.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.
Options may also come from a flat ``key=value`` file given by ``--config``;
flags on the command line override it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import figures, optics, photonlab, ptcore, qmath, qsd2, qsd3, sweeps
from .errors import InvalidParameter, PtqsdError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

SUBCOMMANDS = (
    "pair-evolve",
    "orthogonality",
    "critical",
    "mutual-info",
    "three-state",
    "compile",
    "experiment",
    "figures",
)

# options converted by --degrees
ANGLE_OPTIONS = ("epsilon", "theta", "alpha", "alpha2", "beta", "betas", "gammas", "alphas")


class UsageError(Exception):
    pass


def _schema_text(*names: str) -> str:
    out = ["CSV columns:"]
    for name in names:
        out.append(f"  [{name}]")
        out += [f"    {col:<22} {desc}" for col, desc in sweeps.SCHEMAS[name]]
    return "\n".join(out)


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("list is empty")
    return vals


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {n}")
    return n


def _default_seed() -> int:
    raw = os.environ.get("PTQSD_SEED")
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PTQSD_SEED must be an integer, got {raw!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common options")
    g.add_argument("--config", metavar="FILE", help="key=value file of defaults (flags override)")
    g.add_argument("--degrees", action="store_true", help="read angle options in degrees")
    g.add_argument("--omega", type=float, default=1.0, help="eigenvalue half-gap omega (default 1)")
    g.add_argument("--theta", type=float, default=math.pi / 2, help="phase theta (default pi/2)")
    g.add_argument("--out", metavar="PATH", help="write the result here instead of stdout")


def _hamiltonian_opts(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--s", type=float, help="coupling s (alpha = arccos(omega/s))")
    g.add_argument("--alpha", type=float, help="PT parameter alpha in [0, pi/2)")


def _sim_opts(p: argparse.ArgumentParser, seed: int) -> None:
    g = p.add_argument_group("simulation options")
    g.add_argument("--shots", type=_positive_int, default=30_000, help="photons per measurement (default 30000)")
    g.add_argument("--trials", type=_positive_int, default=10, help="seeded repetitions per point (default 10)")
    g.add_argument("--seed", type=int, default=seed, help="master seed (default $PTQSD_SEED or 0)")
    g.add_argument("--infinite-shot", action="store_true", help="use exact probabilities instead of sampling")
    g.add_argument("--jobs", type=_positive_int, default=1, help="worker processes (results do not depend on it)")


def build_parser(seed: int = 0) -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(
        prog="ptqsd",
        description="PT-symmetric quantum state discrimination toolkit.",
        epilog=_schema_text(*sweeps.SCHEMAS) + "\n\nEnvironment: PTQSD_SEED sets the default --seed.",
        formatter_class=fmt,
    )
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", required=True)

    p = sub.add_parser("pair-evolve", help="evolve the two-state pair along a time grid",
                       epilog=_schema_text("pair-evolve"), formatter_class=fmt)
    p.add_argument("--epsilon", type=float, required=True, help="overlap angle, cos(epsilon) = <psi1|psi2>")
    _hamiltonian_opts(p)
    p.add_argument("--t", type=_float_list, help="explicit comma-separated times")
    p.add_argument("--t-max", type=float, default=math.pi, help="grid end (default pi)")
    p.add_argument("--steps", type=_positive_int, default=61, help="grid points (default 61)")
    _common(p)

    p = sub.add_parser("orthogonality", help="times where the evolved pair is orthogonal")
    p.add_argument("--epsilon", type=float, required=True)
    _hamiltonian_opts(p)
    _common(p)

    p = sub.add_parser("critical", help="critical alpha and s for a pair or a symmetric triple")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--epsilon", type=float, help="two-state overlap angle")
    g.add_argument("--beta", type=float, help="parallel of the symmetric three-state triple")
    _common(p)

    p = sub.add_parser("mutual-info", help="PT, USD and MED mutual information versus s",
                       epilog=_schema_text("mutual-info"), formatter_class=fmt)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--s", type=_float_list, help="explicit comma-separated s values")
    p.add_argument("--s-min", type=float, help="log-grid start (default: critical s)")
    p.add_argument("--s-max", type=float, default=10.0)
    p.add_argument("--s-steps", type=_positive_int, default=30)
    _common(p)

    p = sub.add_parser("three-state", help="stage-one overlaps and P1..P3 versus alpha",
                       epilog=_schema_text("three-state"), formatter_class=fmt)
    _triple_opts(p)
    p.add_argument("--alphas", type=_float_list, help="alpha values (default: alpha_c, 0.8, 1.2, 1.5)")
    _common(p)

    p = sub.add_parser("compile", help="optical bench sheet for a propagator or matrix")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--s", type=float, help="coupling s of the PT propagator")
    g.add_argument("--alpha", type=float, help="PT parameter alpha of the propagator")
    g.add_argument("--matrix", help="explicit matrix 'a,b;c,d' (Python complex literals, e.g. 1+2j)")
    p.add_argument("--t", type=float, help="evolution time")
    p.add_argument("--epsilon", type=float, help="with no --t, use the t0 (or t1) of this pair")
    p.add_argument("--branch", choices=("t0", "t1"), default="t0")
    _common(p)

    p = sub.add_parser("experiment", help="Monte-Carlo simulation of the photonic experiment",
                       epilog=_schema_text("experiment-two", "experiment-three", "mutual-info-mc"),
                       formatter_class=fmt)
    p.add_argument("kind", choices=("two-state", "three-state", "mutual-info"))
    p.add_argument("--epsilon", type=float, help="two-state overlap angle")
    p.add_argument("--s", type=_float_list, help="coupling s (one value for two-state, a list for mutual-info)")
    p.add_argument("--t", type=_float_list, help="times (default: grid on [0, pi] plus t0, t1)")
    p.add_argument("--steps", type=_positive_int, default=61)
    _triple_opts(p)
    p.add_argument("--alphas", type=_float_list, help="three-state alpha values")
    p.add_argument("--alpha2", type=float, help="stage-two alpha (default: stage-one alpha raised to critical)")
    p.add_argument("--visibility", type=float, default=1.0, help="tomography visibility (default 1)")
    p.add_argument("--method", choices=("linear", "mle"), default="linear", help="tomography reconstruction")
    _sim_opts(p, seed)
    _common(p)

    p = sub.add_parser("figures", help="reproduce figure panels as CSV + SVG",
                       epilog=_schema_text("experiment-two", "distance-map", "locus", "locus-mc",
                                           "mutual-info-mc", "experiment-three", "overlaps"),
                       formatter_class=fmt)
    p.add_argument("preset", choices=(*figures.PRESETS, "all"))
    p.add_argument("--outdir", default="figures", help="output directory (default ./figures)")
    p.add_argument("--steps", type=_positive_int, default=61, help="time-grid points")
    _sim_opts(p, seed)
    _common(p)
    return parser


def _triple_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=float, help="parallel of the symmetric triple (meridians 0, 2pi/3, 4pi/3)")
    p.add_argument("--betas", type=_float_list, help="three parallels of an arbitrary triple")
    p.add_argument("--gammas", type=_float_list, help="three meridians of an arbitrary triple")


# ---- config file --------------------------------------------------------------


def read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("_", "-")] = value
    return out


def _config_tokens(cfg: dict[str, str]) -> list[str]:
    tokens = []
    for key, value in cfg.items():
        if key == "config":
            continue
        if value.lower() in ("true", "yes", "on"):
            tokens.append(f"--{key}")
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            tokens += [f"--{key}", value]
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    """Splice ``--config`` entries in right after the subcommand."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    tokens = _config_tokens(read_config(known.config))
    for i, a in enumerate(argv):
        if a in SUBCOMMANDS:
            # keep positionals (e.g. the figure preset) directly after the subcommand
            j = i + 1
            if j < len(argv) and not argv[j].startswith("-"):
                j += 1
            return argv[:j] + tokens + argv[j:]
    return argv


# ---- helpers ------------------------------------------------------------------


def _to_radians(args) -> None:
    if not args.degrees:
        return
    for name in ANGLE_OPTIONS:
        v = getattr(args, name, None)
        if v is None:
            continue
        setattr(args, name, [math.radians(x) for x in v] if isinstance(v, list) else math.radians(v))


def _hamiltonian(args) -> ptcore.PtHamiltonian:
    if args.s is not None:
        return qsd2.hamiltonian_for_s(args.s, args.omega, args.theta)
    return ptcore.PtHamiltonian.from_alpha(args.alpha, args.omega, args.theta)


def _states(args) -> list[qsd3.BlochState]:
    if args.betas is not None or args.gammas is not None:
        if args.betas is None or args.gammas is None:
            raise UsageError("--betas and --gammas must be given together")
        if len(args.betas) != 3 or len(args.gammas) != 3:
            raise UsageError("--betas and --gammas need exactly three values each")
        return [qsd3.BlochState(b, g) for b, g in zip(args.betas, args.gammas)]
    if args.beta is None:
        raise UsageError("give --beta or --betas/--gammas")
    return list(qsd3.symmetric_triple(args.beta))


def _emit(args, text: str) -> None:
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)


def _write(path: str, text: str) -> None:
    try:
        sweeps.atomic_write(path, text)
    except OSError as exc:
        raise UsageError(f"cannot write {path!r}: {exc.strerror}") from None


def _shots(args):
    return None if args.infinite_shot else args.shots


def _need(args, *names) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


# ---- subcommands ---------------------------------------------------------------


def cmd_pair_evolve(args) -> int:
    h = _hamiltonian(args)
    times = args.t if args.t is not None else sweeps.time_grid(args.t_max, args.steps)
    _emit(args, sweeps.to_csv(sweeps.pair_evolve(args.epsilon, h, times)))
    return EXIT_OK


def cmd_orthogonality(args) -> int:
    h = _hamiltonian(args)
    ot = qsd2.orthogonality_times(args.epsilon, h)
    if ot is None:
        _emit(args, "no orthogonality time\n")
    else:
        _emit(args, f"t0 = {sweeps.fmt(ot.t0)}\nt1 = {sweeps.fmt(ot.t1)}\n")
    return EXIT_OK


def cmd_critical(args) -> int:
    if args.epsilon is not None:
        eps = args.epsilon
        label = "epsilon"
    else:
        triple = qsd3.canonicalize(*qsd3.symmetric_triple(args.beta))
        eps = triple.eps12
        label = "epsilon12"
    lines = [
        f"{label} = {sweeps.fmt(eps)}",
        f"sin_alpha_c = {sweeps.fmt(qsd2.critical_sin_alpha(eps))}",
        f"alpha_c = {sweeps.fmt(qsd2.critical_alpha(eps))}",
        f"s_crit = {sweeps.fmt(qsd2.critical_s(eps, args.omega))}",
    ]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_mutual_info(args) -> int:
    if args.s is not None:
        s_values = args.s
    else:
        lo = args.s_min if args.s_min is not None else qsd2.critical_s(args.epsilon, args.omega)
        if not 0 < lo <= args.s_max:
            raise UsageError("need 0 < --s-min <= --s-max")
        s_values = sweeps.log_grid(lo, args.s_max, args.s_steps)
    _emit(args, sweeps.to_csv(sweeps.mutual_info_sweep(args.epsilon, s_values, args.omega)))
    return EXIT_OK


def _default_alphas(states) -> list[float]:
    triple = qsd3.canonicalize(*states)
    return [triple.alpha_c, *figures.FIG7_ALPHAS]


def cmd_three_state(args) -> int:
    states = _states(args)
    alphas = args.alphas if args.alphas is not None else _default_alphas(states)
    _emit(args, sweeps.to_csv(sweeps.three_state_sweep(states, alphas, args.omega)))
    return EXIT_OK


def parse_matrix(text: str) -> np.ndarray:
    try:
        rows = [[complex(x.strip().replace(" ", "")) for x in r.split(",")] for r in text.split(";")]
        m = np.array(rows, dtype=complex)
    except ValueError:
        raise UsageError(f"cannot parse matrix {text!r}; expected 'a,b;c,d'") from None
    if m.shape != (2, 2):
        raise UsageError("matrix must be 2x2, written 'a,b;c,d'")
    return m


def cmd_compile(args) -> int:
    source = {}
    if args.matrix is not None:
        m = parse_matrix(args.matrix)
        source["matrix"] = args.matrix
    else:
        h = _hamiltonian(args)
        if args.t is not None:
            t = args.t
        elif args.epsilon is not None:
            ot = qsd2.orthogonality_times(args.epsilon, h)
            if ot is None:
                raise InvalidParameter("no orthogonality time for this epsilon and Hamiltonian")
            t = ot.t0 if args.branch == "t0" else ot.t1
        else:
            raise UsageError("give --t or --epsilon to fix the evolution time")
        m = ptcore.propagator(h, t).matrix
        source.update(r=h.r, s=h.s, theta=h.theta, alpha=h.alpha, t=t)
    d = optics.decompose_lossy(m)
    sheet = optics.bench_sheet(d)
    text = sheet.to_text()
    sys.stdout.write(text)
    if args.out:
        record = {
            "source": source,
            "reconstruction_error": qmath.frobenius(d.reconstruct() - m),
            "bench_sheet": sheet.to_dict(),
            "text": text,
        }
        _write(args.out, json.dumps(record, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_experiment(args) -> int:
    shots = _shots(args)
    if args.kind == "two-state":
        _need(args, "epsilon", "s")
        if len(args.s) != 1:
            raise UsageError("two-state takes a single --s value")
        s = args.s[0]
        times = args.t if args.t is not None else figures._two_state_times(args.epsilon, s, args.steps)
        rows = photonlab.experiment_two_state(
            args.epsilon, s, times, shots, args.trials, args.seed, args.omega, args.theta,
            args.visibility, args.method, args.jobs,
        )
        table = sweeps.experiment_table(rows)
    elif args.kind == "mutual-info":
        _need(args, "epsilon", "s")
        est = photonlab.experiment_mutual_information(
            args.epsilon, args.s, shots, args.trials, args.seed, args.omega, args.jobs
        )
        analytic = sweeps.mutual_info_sweep(args.epsilon, args.s, args.omega)
        table = sweeps.Table("mutual-info-mc")
        for row, e in zip(analytic.rows, est):
            table.rows.append((row[0], row[1], row[2], e.value, e.stderr, row[3], row[4]))
    else:
        states = _states(args)
        alphas = args.alphas if args.alphas is not None else _default_alphas(states)
        rows = photonlab.experiment_three_state(
            states[0].beta, alphas, shots, args.trials, args.seed,
            gammas=[st.gamma for st in states], betas=[st.beta for st in states],
            alpha2=args.alpha2, omega=args.omega, jobs=args.jobs,
        )
        table = sweeps.experiment_table(rows)
    _emit(args, sweeps.to_csv(table))
    return EXIT_OK


def cmd_figures(args) -> int:
    opts = figures.SimOptions(_shots(args), args.trials, args.seed, args.jobs)
    presets = figures.PRESETS if args.preset == "all" else (args.preset,)
    try:
        os.makedirs(args.outdir, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {args.outdir!r}: {exc.strerror}") from None
    if not os.access(args.outdir, os.W_OK):
        raise UsageError(f"output directory {args.outdir!r} is not writable")
    for preset in presets:
        try:
            written = figures.write(preset, args.outdir, opts, args.steps)
        except OSError as exc:
            raise UsageError(f"cannot write figures to {args.outdir!r}: {exc.strerror}") from None
        for path in written:
            print(path)
    return EXIT_OK


COMMANDS = {
    "pair-evolve": cmd_pair_evolve,
    "orthogonality": cmd_orthogonality,
    "critical": cmd_critical,
    "mutual-info": cmd_mutual_info,
    "three-state": cmd_three_state,
    "compile": cmd_compile,
    "experiment": cmd_experiment,
    "figures": cmd_figures,
}


def _error(msg: str) -> None:
    print(f"ptqsd: error: {msg}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        seed = _default_seed()
        argv = _expand_config(argv)
        parser = build_parser(seed)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code) if exc.code is not None else EXIT_OK
        _to_radians(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        _error(str(exc))
        return EXIT_USAGE
    except (InvalidParameter, ValueError) as exc:
        _error(str(exc))
        return EXIT_USAGE
    except (PtqsdError, ArithmeticError, np.linalg.LinAlgError) as exc:
        _error(f"numerical failure: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
