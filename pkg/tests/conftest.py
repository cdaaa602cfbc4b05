import mpmath as mp
import numpy as np
import pytest

mp.mp.dps = 30


def mp_phi(z) -> complex:
    """Stirling remainder from mpmath's log Gamma (analytic on the slit plane)."""
    z = mp.mpc(z)
    return complex(mp.loggamma(z) - (mp.log(2 * mp.pi) / 2 + (z - mp.mpf(1) / 2) * mp.log(z) - z))


def mp_gamma(z) -> complex:
    return complex(mp.gamma(mp.mpc(z)))


def mp_zeta(z) -> complex:
    return complex(mp.zeta(mp.mpc(z)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion."""
    def record(number: int, passed: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
