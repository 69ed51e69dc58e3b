import numpy as np
import pytest

_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def record():
    """Record one acceptance line; the summary prints them after the run."""

    def _record(key: str, ok: bool, detail: str) -> bool:
        _ACCEPTANCE[key] = f"{key}: {'PASS' if ok else 'FAIL'} ({detail})"
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split()[-1])):
            terminalreporter.write_line(_ACCEPTANCE[key])


@pytest.fixture
def j2():
    return np.array([[0, 1], [0, 0]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def ginibre(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
