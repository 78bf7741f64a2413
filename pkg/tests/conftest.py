import pytest

from scaffoldlab.ramification import compute_breaks, decompose
from scaffoldlab.scaffold import ScaffoldBuilder
from scaffoldlab.series import parse_series
from scaffoldlab.tower import Tower

FAMILIES = {
    "A": (2, ["t^-1", "t^-3"]),
    "B": (2, ["t^-3", "t^-9"]),
    "C": (3, ["t^-1", "t^-4"]),
    "D": (2, ["t^-1", "t^-5", "t^-13"]),
}


class Family:
    def __init__(self, name):
        p, beta = FAMILIES[name]
        self.name = name
        self.p = p
        self.n = len(beta)
        self.beta = [parse_series(s, p) for s in beta]
        self.breaks = compute_breaks(self.beta, p)
        self.dec = decompose(self.beta, p)
        self.tower = Tower(p, self.beta)
        self.builder = ScaffoldBuilder(self.tower, self.dec, self.breaks)


_cache = {}


def family(name):
    if name not in _cache:
        _cache[name] = Family(name)
    return _cache[name]


@pytest.fixture(params=sorted(FAMILIES))
def fam(request):
    return family(request.param)


@pytest.fixture
def famA():
    return family("A")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
