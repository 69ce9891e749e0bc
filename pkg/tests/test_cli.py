import json
import math
import subprocess
import sys

import pytest

from ptqsd import cli, sweeps

EPS60 = "1.0471975511965976"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(line.split(" = ") for line in text.strip().splitlines())


def test_critical_epsilon(capsys):
    code, out, _ = run(capsys, "critical", "--epsilon", "1.0471975512")
    assert code == 0
    assert float(kv(out)["s_crit"]) == pytest.approx(1.038, abs=1e-3)


def test_critical_degrees_and_beta(capsys):
    _, out, _ = run(capsys, "critical", "--epsilon", "30", "--degrees")
    assert float(kv(out)["s_crit"]) == pytest.approx(math.sqrt(1.5), abs=1e-12)
    _, out, _ = run(capsys, "critical", "--beta", "90", "--degrees")
    assert float(kv(out)["alpha_c"]) == pytest.approx(0.27, abs=0.005)


def test_orthogonality_none(capsys):
    code, out, _ = run(capsys, "orthogonality", "--epsilon", "0.5235987756", "--s", "1.1")
    assert code == 0
    assert out.strip() == "no orthogonality time"


def test_orthogonality_times(capsys):
    code, out, _ = run(capsys, "orthogonality", "--epsilon", EPS60, "--s", "3")
    assert code == 0
    assert float(kv(out)["t0"]) == pytest.approx(0.23833876, abs=1e-8)


def test_pair_evolve_t0(capsys):
    code, out, _ = run(capsys, "pair-evolve", "--epsilon", "1.0471975512", "--s", "3", "--t", "0")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == ",".join(c for c, _ in sweeps.SCHEMAS["pair-evolve"])
    d = float(row.split(",")[header.split(",").index("trace_distance")])
    assert d == pytest.approx(math.sin(math.pi / 3), abs=1e-9)


def test_pair_evolve_grid_row_count(capsys, tmp_path):
    out_path = tmp_path / "p.csv"
    code, out, _ = run(capsys, "pair-evolve", "--epsilon", EPS60, "--alpha", "1", "--steps", "7", "--out", str(out_path))
    assert code == 0 and out == ""
    assert len(out_path.read_text().splitlines()) == 8


@pytest.mark.parametrize(
    "argv",
    [
        ["pair-evolve", "--epsilon", "2", "--s", "3", "--t", "0"],
        ["pair-evolve", "--epsilon", "1", "--alpha", "1.6", "--t", "0"],
        ["pair-evolve", "--epsilon", "1", "--s", "0.5", "--t", "0"],
        ["pair-evolve", "--epsilon", "1", "--s", "3", "--bogus"],
        ["pair-evolve", "--epsilon", "1"],
        ["nosuch"],
        ["three-state", "--betas", "1,2"],
        ["compile", "--matrix", "1,2;3"],
        ["compile", "--matrix", "0,0;0,0"],
        ["experiment", "two-state", "--s", "3"],
    ],
)
def test_validation_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.strip()


def test_mutual_info_default_grid(capsys):
    code, out, _ = run(capsys, "mutual-info", "--epsilon", EPS60, "--s-steps", "5")
    rows = out.strip().splitlines()
    assert code == 0 and len(rows) == 6
    first = dict(zip(rows[0].split(","), map(float, rows[1].split(","))))
    assert first["mutual_information"] == pytest.approx(0.5, abs=1e-9)


def test_three_state_default_alphas(capsys):
    code, out, _ = run(capsys, "three-state", "--beta", EPS60)
    rows = [r.split(",") for r in out.strip().splitlines()]
    assert code == 0 and len(rows) == 5
    p3 = [float(r[rows[0].index("p3")]) for r in rows[1:]]
    assert p3 == sorted(p3)


def test_compile_writes_record(capsys, tmp_path):
    path = tmp_path / "bench.json"
    code, out, _ = run(capsys, "compile", "--s", "3", "--epsilon", EPS60, "--out", str(path))
    assert code == 0
    assert out.count("\n") >= 10
    rec = json.loads(path.read_text())
    assert len(rec["bench_sheet"]["elements"]) == 7
    assert rec["reconstruction_error"] < 1e-10
    assert rec["text"] == out


def test_compile_matrix_identity(capsys):
    code, out, _ = run(capsys, "compile", "--matrix", "1,0;0,1")
    assert code == 0 and "loss stage empty" in out


def test_experiment_two_state_deterministic(capsys):
    argv = ["experiment", "two-state", "--epsilon", EPS60, "--s", "3", "--t", "0.2,0.9",
            "--shots", "3000", "--trials", "3", "--seed", "5"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--jobs", "2")
    assert a == b and len(a.splitlines()) == 3


def test_seed_from_environment(capsys, monkeypatch):
    argv = ["experiment", "three-state", "--beta", EPS60, "--alphas", "1.0", "--shots", "500", "--trials", "2"]
    monkeypatch.setenv("PTQSD_SEED", "7")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--seed", "7")
    _, c, _ = run(capsys, *argv, "--seed", "8")
    assert a == b != c
    monkeypatch.setenv("PTQSD_SEED", "x")
    assert run(capsys, *argv)[0] == 2


def test_infinite_shot(capsys):
    code, out, _ = run(capsys, "experiment", "mutual-info", "--epsilon", EPS60, "--s", "3", "--infinite-shot")
    header, row = out.strip().splitlines()
    r = dict(zip(header.split(","), map(float, row.split(","))))
    assert code == 0
    assert r["mi_mean"] == pytest.approx(r["mutual_information"], abs=1e-9)
    assert r["mi_std"] == 0.0


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# two-state run\nepsilon = {EPS60}\ns=3\n", encoding="utf-8")
    _, out, _ = run(capsys, "orthogonality", "--config", str(cfg))
    assert float(kv(out)["t0"]) == pytest.approx(0.23833876, abs=1e-8)
    _, out, _ = run(capsys, "orthogonality", "--config", str(cfg), "--s", "1.1")
    assert float(kv(out)["t0"]) != pytest.approx(0.23833876, abs=1e-3)
    cfg.write_text("nonsense\n")
    assert run(capsys, "orthogonality", "--config", str(cfg))[0] == 2
    assert run(capsys, "orthogonality", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_config_with_positional_preset(capsys, tmp_path):
    cfg = tmp_path / "fig.cfg"
    cfg.write_text(f"outdir={tmp_path / 'out'}\nshots=500\ntrials=2\n")
    code, out, _ = run(capsys, "figures", "figS2", "--config", str(cfg))
    assert code == 0
    assert (tmp_path / "out" / "figS2a.csv").exists()


def test_figures_unwritable_outdir(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(capsys, "figures", "figS2", "--outdir", str(blocker / "sub"))
    assert code == 2 and "error" in err


def test_help_documents_every_schema(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    for name, cols in sweeps.SCHEMAS.items():
        assert f"[{name}]" in out
        for col, _ in cols:
            assert col in out


def test_console_entry_point_module():
    proc = subprocess.run(
        [sys.executable, "-m", "ptqsd", "critical", "--epsilon", EPS60],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "s_crit" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "ptqsd", "critical"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_numerical_failure_exit_3(capsys, monkeypatch):
    from ptqsd import qsd2
    from ptqsd.errors import NotDiscriminating

    def boom(*args, **kwargs):
        raise NotDiscriminating("evolved states not orthogonal")

    monkeypatch.setattr(qsd2, "orthogonality_times", boom)
    code, _, err = run(capsys, "orthogonality", "--epsilon", EPS60, "--s", "3")
    assert code == 3 and "numerical failure" in err
