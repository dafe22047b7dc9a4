import math

import pytest

from lrdscat.spectral import Envelope, PowerDensity, SpectralModel


@pytest.fixture(scope="session")
def lrd03():
    return SpectralModel(0.3, Envelope(), cutoff=math.pi)


@pytest.fixture(scope="session")
def half_box():
    """``f = 1/2`` on ``[-1, 1]``: unit variance, ``R(t) = sin(t)/t``."""
    return PowerDensity(Envelope("constant", 0.5), 0.0, cutoff=1.0)


# -- acceptance summary -----------------------------------------------------------
def pytest_configure(config):
    config._acceptance = {}


@pytest.fixture
def acceptance(request):
    """``record(criterion, part, ok, detail)`` collects one line per checked part."""
    store = request.config._acceptance

    def record(criterion, part, ok, detail):
        store.setdefault(criterion, []).append((part, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = getattr(config, "_acceptance", {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(store):
        parts = store[k]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        detail = "; ".join(f"{p}: {'ok' if ok else 'FAILED'} ({d})" for p, ok, d in parts)
        terminalreporter.write_line(f"criterion {k:>2} {status}  {detail}")
