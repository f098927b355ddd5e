import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bsc.profiles import derived_exponents
from bsc.quadrature import QuadratureConfig
from bsc.curves import log_grid, solve_phi_H, special_constants

# the exponent pairs exercised end to end
PAIRS = [(3, 1.5), (4, 2.0), (5, 2.0), (5, 2.2)]


@pytest.fixture(scope="session")
def qcfg():
    return QuadratureConfig()


@functools.lru_cache(maxsize=None)
def exps_for(n, p):
    return derived_exponents(n, p)


@functools.lru_cache(maxsize=None)
def constants_for(n, p):
    return special_constants(exps_for(n, p), QuadratureConfig())


@functools.lru_cache(maxsize=None)
def solved_grid(n, p, samples=64):
    """The 64-point log grid spanning [T_E/20, 20 T_E], solved once per
    exponent pair and shared by the multiplier/sign/key acceptance tests."""
    e = exps_for(n, p)
    cfg = QuadratureConfig()
    consts = constants_for(n, p)
    grid = log_grid(consts.T_E / 20.0, 20.0 * consts.T_E, samples)
    pts = [solve_phi_H(float(T), e, cfg, consts) for T in grid]
    return grid, pts


@pytest.fixture(scope="session")
def exps52():
    return exps_for(5, 2.0)


@pytest.fixture(scope="session")
def consts52():
    return constants_for(5, 2.0)
