import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
sys.path.insert(0, str(Path(__file__).parent))

INSTANCES = ["two_planes", "ci22", "quartic", "line_point", "plane", "nonbuchsbaum",
             "hyperplane_point"]

_outcomes = {}


def load(name):
    from gcmlab.cli import parse_instance
    return parse_instance(str(CORPUS / f"{name}.inst"))


@pytest.fixture(scope="session")
def corpus():
    return {name: load(name) for name in INSTANCES}


@pytest.fixture
def two_planes():
    return load("two_planes")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    n = mark.args[0]
    ok = rep.passed or rep.skipped if rep.when == "call" else rep.passed
    if rep.when == "setup" and ok:
        return
    prev = _outcomes.get(n, True)
    _outcomes[n] = prev and ok


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if _outcomes[n] else 'FAIL'}")
