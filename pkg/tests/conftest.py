import sys
from importlib.resources import files
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bassserre.fileformat import load  # noqa: E402
from bassserre.words import PathGroup  # noqa: E402

FIXTURES = ["dinf", "psl2z", "hnn", "f2", "chain"]


def fixture_path(name):
    return Path(str(files("bassserre") / "fixtures" / f"{name}.gog"))


def gog(name):
    return load(fixture_path(name))


@pytest.fixture(scope="session")
def groups():
    return {n: PathGroup(gog(n)) for n in FIXTURES}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
