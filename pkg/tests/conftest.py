import pytest

from skewmon.bialgebroid import b1, b2, b3, b4, induced_skewmon, standard_probes


@pytest.fixture(scope="session")
def bgds():
    return {"B1": b1(), "B2": b2(), "B3": b3(), "B4": b4()}


@pytest.fixture(scope="session")
def structures(bgds):
    """Induced structures with the unit as a bimodule, plus the default probes."""
    out = {}
    for name, b in bgds.items():
        s = induced_skewmon(b, bimodule_unit=True)
        out[name] = (s, standard_probes(b, s))
    return out


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
