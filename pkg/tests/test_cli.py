import json
import os
import subprocess
import sys

import pytest

from plumbo.cli import main
from plumbo.fixtures import chain, trefoil
from plumbo.graph import dump_graph


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_rational_from_file(tmp_path, capsys):
    p = tmp_path / "g.json"
    p.write_text(dump_graph(chain([-2, -2, -2])))
    code, doc = run_json(capsys, "rational", "--input", str(p))
    assert code == 0 and doc["status"] == "ok" and doc["rational"] is True


def test_dinv_lens(capsys):
    code, doc = run_json(capsys, "dinv", "--input", "@m2")
    assert code == 0
    assert [c["d"] for c in doc["classes"]] == ["1/4", "-1/4"]
    assert all(c["d"] == c["max_zero_cube"] for c in doc["classes"])


@pytest.mark.parametrize("cmd, key, value", [
    ("homology", None, None),
    ("delta", None, None),
    ("lspace", "lspace", False),
])
def test_graph_commands_on_sigma237(capsys, cmd, key, value):
    code, doc = run_json(capsys, cmd, "--input", "@sigma237")
    assert code == 0 and doc["command"] == cmd
    if key:
        assert doc[key] == value


def test_knot_and_model(capsys):
    code, doc = run_json(capsys, "knot", "--input", "@trefoil")
    assert code == 0
    assert doc["classes"][0]["jumps"] == ["1", "0", "-1"]
    code, doc = run_json(capsys, "model", "--input", "@trefoil")
    assert doc["classes"][0]["model"] == {"q": "0", "alphas": ["0"], "betas": ["1", "-1"]}


def test_marked_file_input(tmp_path, capsys):
    p = tmp_path / "k.json"
    p.write_text(dump_graph(trefoil()))
    code, doc = run_json(capsys, "verify", "--input", str(p), "--k", "7..8")
    assert code == 0 and doc["all_equal"]
    assert [c["k"] for c in doc["checks"]] == [7, 8, 8]


def test_cone_and_hfminus(capsys):
    code, doc = run_json(capsys, "cone", "--input", "@unknot", "--k", "2..3", "--kind", "chain")
    assert code == 0 and len(doc["cones"]) == 1 + 2
    code, doc = run_json(capsys, "hfminus", "--input", "@sigma237", "--vertex", "r")
    assert code == 0 and doc["all_equal"]


def test_sum_fixture_pair(capsys):
    code, doc = run_json(capsys, "sum", "--input", "@unknot+trefoil")
    assert code == 0 and doc["all_equivalent"]


def test_table_format(capsys):
    code, out = run(capsys, "dinv", "--input", "@m2", "--format", "table")
    assert code == 0
    lines = out.splitlines()
    assert any(line.startswith("classes[0].d ") and line.endswith('"1/4"') for line in lines)


@pytest.mark.parametrize("argv", [
    ["homology", "--input", "/nonexistent/file.json"],
    ["homology", "--input", "@no_such_fixture"],
    ["homology"],
    ["rational", "--input", "@trefoil"],
    ["knot", "--input", "@m2"],
    ["cone", "--input", "@trefoil", "--k", "3..4"],
    ["cone", "--input", "@trefoil", "--k", "9..7"],
    ["cone", "--input", "@trefoil", "--k", "x"],
    ["homology", "--input", "@a3", "--nmax", "0"],
    ["no-such-command"],
])
def test_input_errors_exit_1(capsys, argv):
    code = main(argv)
    capsys.readouterr()
    assert code == 1


def test_malformed_and_indefinite_files(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "homology", "--input", str(p))[0] == 1
    p.write_text(json.dumps({"vertices": [{"id": "a", "framing": 1}], "edges": []}))
    code, doc = run_json(capsys, "homology", "--input", str(p))
    assert code == 1 and doc["error"] == "NotNegativeDefinite"


def test_uncertified_truncation_exits_2(capsys):
    code, doc = run_json(capsys, "homology", "--input", "@sigma237", "--nmax", "1")
    assert code == 2 and doc["status"] == "consistency-failure"


def test_output_is_deterministic_across_processes():
    outs = []
    for seed in ("0", "7"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, "-m", "plumbo", "knot", "--input", "@trefoil"],
                              capture_output=True, env=env, check=True)
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
