"""Acceptance run: ``selftest`` twice in fresh interpreters, one line per criterion.

Criteria 1 to 10 are read from the first report; criterion 11 compares the
two reports byte for byte.  Criteria marked as known deviations are expected
to fail and count as green when they do; the line says so.
"""
import json
import os
import subprocess
import sys

import pytest

LINES: dict[int, str] = {}
TITLE_11 = "selftest twice gives byte-identical reports"


def _selftest(hash_seed: str) -> tuple[int, bytes]:
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    proc = subprocess.run([sys.executable, "-m", "plumbo", "selftest", "--seed", "0"],
                          capture_output=True, env=env, timeout=3 * 3600)
    return proc.returncode, proc.stdout


@pytest.fixture(scope="module")
def runs():
    return _selftest("0"), _selftest("1")


@pytest.fixture(scope="module")
def report(runs):
    (code, out), _ = runs
    doc = json.loads(out)
    body = doc["report"] if doc["status"] == "consistency-failure" else doc
    assert "criteria" in body, doc
    return code, {c["number"]: c for c in body["criteria"]}


def _line(num: int, title: str, passed: bool, deviation: str | None) -> str:
    out = f"criterion {num:2d} {'PASS' if passed else 'FAIL'}: {title}"
    if deviation:
        out += f" [known deviation: {deviation}]"
    return out


@pytest.mark.slow
@pytest.mark.parametrize("num", range(1, 11))
def test_criterion(report, num):
    _, crit = report
    c = crit[num]
    LINES[num] = _line(num, c["title"], c["passed"], c["deviation"])
    print(LINES[num])
    assert c["passed"] == c["expected"], c["details"]


@pytest.mark.slow
def test_criterion_11_determinism(runs):
    (c1, out1), (c2, out2) = runs
    same = out1 == out2 and c1 == c2
    LINES[11] = _line(11, TITLE_11, same, None)
    print(LINES[11])
    assert same


@pytest.mark.slow
def test_selftest_exit_code(report):
    code, crit = report
    assert code == (0 if all(c["passed"] == c["expected"] for c in crit.values()) else 2)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
