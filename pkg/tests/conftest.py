import functools
import warnings

import pytest

from whithamstab import WaveParams, solve_wave, whitham

_ACCEPTANCE = {}


def record(number: int, ok: bool, detail: str = "") -> None:
    """Register an acceptance outcome for the end-of-run summary."""
    _ACCEPTANCE[number] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}")


@functools.lru_cache(maxsize=None)
def cached_wave(kappa, a, b=0.0, modes=64):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return solve_wave(whitham(), WaveParams(kappa, a, b), modes=modes)


@pytest.fixture(scope="session")
def W():
    return whitham()
