import json
import subprocess
import sys

import pytest

from qmacro.cli import main

ALL_COMMANDS = [
    "lg-chsh",
    "lg-wigner",
    "parity-violation",
    "coarse-overlap",
    "char-fn",
    "cat-lg",
    "decoherence",
    "cat-circuit",
    "chain-epsilon",
    "field-propagator",
    "ensemble-dicke",
    "ensemble-singlet",
    "ensemble-admixture",
    "undecidability-audit",
    "ghz",
]


def _run(args):
    return main(args)


def test_every_subcommand_has_a_selftest(tmp_path):
    for cmd in ALL_COMMANDS:
        assert _run([cmd, "--selftest", "-o", str(tmp_path / "x")]) == 0


def test_byte_identical_reruns(tmp_path):
    cases = [
        (["lg-chsh", "--j", "0.5", "--sweep-omega-dt", "0.1:1.0:0.1"], "a.csv"),
        (["undecidability-audit", "--N", "2", "--axioms", "bell", "--shots", "1000", "--seed", "7"], "a.json"),
        (["decoherence", "--steps", "20"], "b.csv"),
        (["ghz"], "g.json"),
    ]
    for args, name in cases:
        p1 = tmp_path / ("one_" + name)
        p2 = tmp_path / ("two_" + name)
        assert _run(args + ["-o", str(p1)]) == 0
        assert _run(args + ["-o", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()


def test_csv_headers_echo_config(tmp_path):
    out = tmp_path / "sweep.csv"
    assert _run(["lg-wigner", "--sweep-de-dt", "0.1:2.0:0.1", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# qmacro")
    assert lines[1].startswith("# config:")
    assert json.loads(lines[1].split("config:", 1)[1])["sweep"] == "0.1:2.0:0.1"
    assert lines[2] == "de_dt,k"
    assert len(lines) > 10


def test_chain_epsilon_zero_pattern(tmp_path):
    out = tmp_path / "chain.csv"
    assert _run(["chain-epsilon", "--alpha", "0.99", "--d", "1", "--n", "1:6", "-o", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[3:]]
    eps = {int(r[1]): float(r[5]) for r in rows}
    assert eps[1] == 0.0 and eps[5] == 0.0 and eps[6] == 0.0
    assert eps[2] > 0.0 and eps[3] > 0.0 and eps[4] > 0.0


def test_undecidability_audit_json(tmp_path):
    out = tmp_path / "audit.json"
    assert _run([
        "undecidability-audit", "--N", "2", "--axioms", "bell",
        "--shots", "10000", "--seed", "7", "-o", str(out),
    ]) == 0
    payload = json.loads(out.read_text())
    assert payload["meta"]["artifact"] == "qmacro"
    assert payload["results"]["n_decidable"] == 4
    assert payload["results"]["n_undecidable"] == 12
    dets = [r for r in payload["results"]["rows"] if r["deterministic"]]
    assert len(dets) == 4
    for row in payload["results"]["rows"]:
        assert row["decidable"] == row["deterministic"]


def test_user_errors_exit_code_one(tmp_path):
    assert _run(["undecidability-audit", "--shots", "100"]) == 1        # missing seed
    assert _run(["undecidability-audit", "--axioms", "ghz", "--N", "2"]) == 1
    assert _run(["lg-chsh", "--sweep-omega-dt", "nonsense"]) == 1
    assert _run(["field-propagator", "--mass", "0.0", "-o", str(tmp_path / "f.csv")]) == 1


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "qmacro.cli", "--version"], capture_output=True, text=True
    )
    assert proc.returncode == 0


def test_tolerance_override(tmp_path):
    out = tmp_path / "o.csv"
    assert _run(["coarse-overlap", "--j-list", "25", "--tol", "quadrature=1e-5", "-o", str(out)]) == 0
    from qmacro.config import TOL, set_tolerances

    assert TOL.quadrature == 1e-5
    set_tolerances(quadrature=1e-6)


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("QMACRO_OUTDIR", str(tmp_path))
    assert _run(["lg-wigner", "--sweep-de-dt", "0.5:1.0:0.5"]) == 0
    assert (tmp_path / "lg_wigner.csv").exists()


def test_q_surface_dump(tmp_path):
    out = tmp_path / "overlap.csv"
    dump = tmp_path / "q_surface.csv"
    assert _run(["coarse-overlap", "--j-list", "10", "-o", str(out), "--dump-q", str(dump)]) == 0
    lines = dump.read_text().splitlines()
    assert lines[2] == "theta,phi,value"
    theta, phi, value = (float(x) for x in lines[3].split(","))
    assert 0.0 <= theta <= 3.15 and value >= 0.0
