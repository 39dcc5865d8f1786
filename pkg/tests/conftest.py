import numpy as np
import pytest

from magsob.lattice import LatticeDomain, WaveFunction

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def smooth_random_psi(domain, seed, modes=4):
    """Random complex combination of low Dirichlet sine modes."""
    rng = np.random.default_rng(seed)
    X, Y = domain.meshgrid()
    (x0, x1), (y0, y1) = domain.xlim, domain.ylim
    u = (X - x0) / (x1 - x0)
    v = (Y - y0) / (y1 - y0)
    out = np.zeros(domain.shape, complex)
    for a in range(1, modes + 1):
        for b in range(1, modes + 1):
            c = rng.normal() + 1j * rng.normal()
            out += c * np.sin(np.pi * a * u) * np.sin(np.pi * b * v)
    return WaveFunction(domain, out)


def random_psi(domain, rng):
    vals = rng.normal(size=domain.shape) + 1j * rng.normal(size=domain.shape)
    return WaveFunction(domain, vals)


@pytest.fixture
def small_square():
    return LatticeDomain.square(1.0, 33)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(
            f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
