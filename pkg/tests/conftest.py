import numpy as np
import pytest

CRITERIA = {
    1: "symmetrization identity",
    2: "congruence invariance of all distances",
    3: "directed triangle inequality and asymmetry witness",
    4: "n = 2 coincidences",
    5: "kappa convergence",
    6: "geodesic length equals distance",
    7: "extremal affine consistency and sampled minimality",
    8: "non-unique piecewise-linear family",
    9: "boundary round trip and equivariance",
    10: "sequence limits",
    11: "unit-ball closed forms and gauge identities",
    12: "kernel quality",
    13: "CLI determinism",
}
_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    k = mark.args[0]
    ok = rep.passed and not rep.skipped
    _results[k] = _results.get(k, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        if k in _results:
            status = "PASS" if _results[k] else "FAIL"
            terminalreporter.write_line(f"criterion {k:2d} {status}  {CRITERIA[k]}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
