"""Shared test helpers: independent oracles and parameter samplers."""

import math

import numpy as np
import pytest

from fbmprobe.backend import kern

# Bernoulli numbers B_2..B_16 for the Stirling tail
_BERNOULLI = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
              5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0)

_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)


def stirling_lgamma(x: float, shift: int = 40) -> float:
    """Independent ln Gamma oracle: recurrence shift plus the Stirling
    series with Bernoulli terms through B_16 (tail < 1e-27 at z >= 40)."""
    assert x > 0.0
    correction = 0.0
    z = x
    for _ in range(shift):
        correction += math.log(z)
        z += 1.0
    series = (z - 0.5) * math.log(z) - z + _HALF_LN_2PI
    zk = z
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2.0 * k * (2.0 * k - 1.0) * zk)
        zk *= z * z
    return series - correction


def t_for_beta(gamma: float, lamq: float, beta_target: float) -> float:
    """Invert the dephasing exponent: the time at which beta hits the
    target for the given parameters."""
    v = kern.v_gamma(gamma)
    return (2.0 * gamma * beta_target / (lamq * v)) ** (1.0 / (2.0 * gamma))


def draw_point(rng, beta_range=(0.05, 3.0), gamma_range=(1.05, 1.95),
               log10_lam_range=(-2.0, 2.0)):
    """Random (gamma, lambda, t) with t placed where the dephasing
    exponent is order one, i.e. where the merit functions live."""
    g = rng.uniform(*gamma_range)
    lam = 10.0 ** rng.uniform(*log10_lam_range)
    bt = rng.uniform(*beta_range)
    return g, lam, t_for_beta(g, lam, bt)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance gate verdicts, which normal capture hides."""
    try:
        from test_acceptance import ACCEPT_LINES
    except ImportError:
        return
    if ACCEPT_LINES:
        terminalreporter.section("acceptance gates")
        for line in ACCEPT_LINES:
            terminalreporter.write_line(line)
