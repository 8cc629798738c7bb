import numpy as np
import pytest

import mpstop.mp
import mpstop.spectral
from mpstop import _backend

ACCEPTANCE_LINES = []


@pytest.fixture(params=_backend.available())
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    k = _backend.load(request.param)
    monkeypatch.setattr(mpstop.mp, "kernels", k)
    monkeypatch.setattr(mpstop.spectral, "kernels", k)
    return k


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record():
    """Collect one PASS/FAIL line per acceptance criterion for the summary."""

    def _record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
