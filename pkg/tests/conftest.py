import pytest

from qcoh.toric import ToricOrbifold

COMPACT = ["p1", "p12", "p112", "f2", "f3", "p112x"]
WEAK_FANO = ["p1", "p12", "p112", "f2", "p112x"]

_REPORT = []


def record(line):
    _REPORT.append(line)
    print(line)


@pytest.fixture(scope="session")
def orbifold():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = ToricOrbifold(name)
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_REPORT, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
