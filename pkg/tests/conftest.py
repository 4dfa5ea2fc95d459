import numpy as np
import pytest

from gaussrate import channel as chn

# representative (label, tau, nbar) for every row of the classification table
TABLE_ROWS = [
    (chn.A1, 0.0, 1.0),
    (chn.A2, 0.0, 0.5),
    (chn.B1, 1.0, 0.0),
    (chn.B2, 1.0, 3.0),
    (chn.B2ID, 1.0, 0.0),
    (chn.CATT, 0.3, 0.5),
    (chn.CAMP, 1.7, 3.0),
    (chn.D, -0.5, 0.5),
]



def draw_params(rng, label):
    """Random ``(tau, nbar)`` consistent with class ``label``."""
    nbar = 0.0 if label in (chn.B1, chn.B2ID) else rng.uniform(0.0, 5.0)
    if label == chn.B2:
        nbar = rng.uniform(0.01, 5.0)
    tau = {chn.A1: 0.0, chn.A2: 0.0, chn.B1: 1.0, chn.B2: 1.0, chn.B2ID: 1.0,
           chn.CATT: rng.uniform(0.01, 0.99), chn.CAMP: rng.uniform(1.01, 10.0),
           chn.D: -rng.uniform(0.01, 10.0)}[label]
    return tau, nbar


_criteria = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome for the terminal summary."""

    def record(name, detail=""):
        _criteria[name] = (request.node, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s.split()[0][2:])):
        node, detail = _criteria[name]
        rep = getattr(node, "rep_call", None)
        status = "PASS" if rep is not None and rep.passed else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  {detail}")


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
