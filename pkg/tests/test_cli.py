import json

import numpy as np
import pytest

from pathlyap.cli import run
from pathlyap.fixtures import de_bruijn_1_graph, demo_system, mixed_horizon_graph
from pathlyap.graphs import de_bruijn, dual
from test_graphs import lonely_loop


def write_json(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.fixture
def demo_files(tmp_path):
    return {
        "system": write_json(tmp_path, "system.json", demo_system().to_json()),
        "db1": write_json(tmp_path, "db1.json", de_bruijn_1_graph().to_json()),
        "mixed": write_json(
            tmp_path, "mixed.json", mixed_horizon_graph().to_json()
        ),
        "lonely": write_json(tmp_path, "lonely.json", lonely_loop().to_json()),
        "dir": tmp_path,
    }


# ---------------------------------------------------------------------------
# graph subcommands
# ---------------------------------------------------------------------------

def test_debruijn_then_check_complete(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert run(["graph", "debruijn", "-a", "a,b", "-k", "2",
                "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["nodes"]) == 4
    capsys.readouterr()
    assert run(["graph", "check", "--complete", str(out)]) == 0


def test_check_path_complete_failure_prints_witness(demo_files, capsys):
    code = run(["graph", "check", "--path-complete", demo_files["lonely"]])
    captured = capsys.readouterr()
    assert code == 1
    assert "b" in captured.out


def test_check_defaults_to_all_properties(demo_files, capsys):
    assert run(["graph", "check", demo_files["db1"]]) == 0
    out = capsys.readouterr().out
    assert "path-complete" in out
    assert "complete" in out
    assert "deterministic" in out


def test_usage_errors_exit_two(demo_files, capsys):
    assert run(["graph", "check", "--bogus", demo_files["db1"]]) == 2
    assert run(["graph", "check", str(demo_files["dir"] / "nope.json")]) == 2
    bad = demo_files["dir"] / "bad.json"
    bad.write_text("{not json")
    assert run(["graph", "check", str(bad)]) == 2
    assert run(["no-such-command"]) == 2


def test_dual_twice_is_identity(demo_files, tmp_path, capsys):
    once = tmp_path / "dual1.json"
    twice = tmp_path / "dual2.json"
    assert run(["graph", "dual", demo_files["mixed"], "-o", str(once)]) == 0
    assert run(["graph", "dual", str(once), "-o", str(twice)]) == 0
    assert json.loads(twice.read_text()) == json.loads(
        (demo_files["dir"] / "mixed.json").read_text()
    )


# ---------------------------------------------------------------------------
# observer and covering subcommands
# ---------------------------------------------------------------------------

def test_observer_build_and_core(demo_files, tmp_path, capsys):
    obs_file = tmp_path / "obs.json"
    assert run(["observer", "build", demo_files["db1"],
                "-o", str(obs_file)]) == 0
    data = json.loads(obs_file.read_text())
    assert data["root"] == "{[a],[b]}"
    core_file = tmp_path / "core.json"
    assert run(["observer", "core", str(obs_file), "-o", str(core_file)]) == 0
    core = json.loads(core_file.read_text())
    assert len(core["nodes"]) == 2
    assert len(core["edges"]) == 4


def test_observer_build_rejects_incomplete_graph(demo_files, capsys):
    code = run(["observer", "build", demo_files["lonely"]])
    assert code == 1
    assert "b" in capsys.readouterr().out


def test_covering_validate_and_graphs(demo_files, tmp_path, capsys):
    fam = write_json(tmp_path, "fam.json", {
        "alphabet": ["a", "b"],
        "members": [
            {"name": "[a]", "stem": ["a"]},
            {"name": "[b]", "stem": ["b"]},
        ],
    })
    assert run(["covering", "validate", fam]) == 0
    graph_file = tmp_path / "covgraph.json"
    assert run(["covering", "to-graph", fam, "-o", str(graph_file)]) == 0
    produced = json.loads(graph_file.read_text())
    assert sorted(produced["nodes"]) == ["[a]", "[b]"]

    partial = write_json(tmp_path, "partial.json", {
        "alphabet": ["a", "b"],
        "members": [{"name": "[aa]", "stem": ["a", "a"]},
                    {"name": "[ab]", "stem": ["a", "b"]}],
    })
    capsys.readouterr()
    assert run(["covering", "validate", partial]) == 1
    assert "b" in capsys.readouterr().out
    assert run(["covering", "to-graph", partial]) == 1


def test_covering_from_graph_round_trip(demo_files, tmp_path, capsys):
    obs_file = tmp_path / "obs.json"
    assert run(["observer", "build", demo_files["mixed"],
                "-o", str(obs_file)]) == 0
    cov_file = tmp_path / "cov.json"
    assert run(["covering", "from-graph", str(obs_file),
                "-o", str(cov_file)]) == 0
    assert run(["covering", "validate", str(cov_file)]) == 0
    back = tmp_path / "back.json"
    assert run(["covering", "to-graph", str(cov_file), "-o", str(back)]) == 0
    obs = json.loads(obs_file.read_text())
    produced = json.loads(back.read_text())
    assert produced["nodes"] == obs["nodes"]
    assert sorted(map(tuple, produced["edges"])) == sorted(
        map(tuple, obs["edges"])
    )


# ---------------------------------------------------------------------------
# jsr, certificate, simulate, decrease-check
# ---------------------------------------------------------------------------

def test_jsr_upper_text_and_json(demo_files, tmp_path, capsys):
    assert run(["jsr", "upper", "--graph", demo_files["db1"],
                "--system", demo_files["system"], "--tol", "1e-3"]) == 0
    text = capsys.readouterr().out
    assert "3.922" in text

    assert run(["jsr", "upper", "--graph", demo_files["db1"],
                "--system", demo_files["system"], "--tol", "1e-3",
                "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"rho_upper", "trace", "certificate"}

    cert_file = write_json(tmp_path, "cert.json", payload["certificate"])
    assert run(["certificate", "verify", "--certificate", cert_file,
                "--system", demo_files["system"]]) == 0


def test_jsr_upper_incomplete_graph_exits_one(demo_files):
    assert run(["jsr", "upper", "--graph", demo_files["lonely"],
                "--system", demo_files["system"]]) == 1


def test_jsr_upper_resource_limit_exits_three(demo_files, tmp_path):
    big = write_json(tmp_path, "big.json", de_bruijn(("a", "b"), 5).to_json())
    assert run(["jsr", "upper", "--graph", big,
                "--system", demo_files["system"]]) == 3


def test_jsr_lower(demo_files, capsys):
    assert run(["jsr", "lower", "--system", demo_files["system"],
                "--max-len", "2"]) == 0
    out = capsys.readouterr().out
    assert "3.91738" in out
    assert "a,b" in out


def test_certificate_verify_failure_exits_one(demo_files, tmp_path, capsys):
    from pathlyap.lyapunov import QuadraticCertificate

    cert = QuadraticCertificate(
        de_bruijn_1_graph(),
        {"[a]": np.eye(2), "[b]": np.eye(2)},
        rho=1.0,
    )
    cert_file = write_json(tmp_path, "badcert.json", cert.to_json())
    assert run(["certificate", "verify", "--certificate", cert_file,
                "--system", demo_files["system"]]) == 1


def test_certificate_lift(demo_files, tmp_path, capsys):
    run(["jsr", "upper", "--graph", demo_files["mixed"],
         "--system", demo_files["system"], "--tol", "1e-3",
         "--format", "json"])
    cert = json.loads(capsys.readouterr().out)["certificate"]
    cert_file = write_json(tmp_path, "cert.json", cert)
    obs_file = tmp_path / "obs.json"
    run(["observer", "build", demo_files["mixed"], "-o", str(obs_file)])
    lifted = tmp_path / "lifted.json"
    assert run(["certificate", "lift", "--certificate", cert_file,
                "--observer", str(obs_file), "-o", str(lifted)]) == 0
    data = json.loads(lifted.read_text())
    assert set(data) == {"rho", "dimension", "members"}
    assert len(data["members"]) == 5


def test_simulate_command(demo_files, capsys):
    assert run(["simulate", "--system", demo_files["system"],
                "--word", "a", "--x0", "1,0", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["states"] == [[1.0, 0.0], [3.0, -2.0]]


def test_decrease_check_seed_reproducibility(demo_files, tmp_path, capsys):
    run(["jsr", "upper", "--graph", demo_files["mixed"],
         "--system", demo_files["system"], "--tol", "1e-3",
         "--format", "json"])
    cert_file = write_json(
        tmp_path, "cert.json",
        json.loads(capsys.readouterr().out)["certificate"],
    )
    obs_file = tmp_path / "obs.json"
    run(["observer", "build", demo_files["mixed"], "-o", str(obs_file)])
    capsys.readouterr()
    argv = ["decrease-check", "--certificate", cert_file,
            "--observer", str(obs_file), "--system", demo_files["system"],
            "--trials", "10", "--horizon", "8", "--seed", "5",
            "--format", "json"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first
    report = json.loads(first)
    assert report["failures"] == 0
    assert report["seed"] == 5
