"""Shared fixtures: certified representations and boundary samples.

Everything heavyweight is session-scoped; all sampling is seeded, so the
whole suite is deterministic.
"""

import pytest
from hypothesis import HealthCheck, settings

import anosovlab as al

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def rho0():
    return al.fuchsian_genus2()


@pytest.fixture(scope="session")
def sym4(rho0):
    return al.sym_power_lift(rho0, 4)


@pytest.fixture(scope="session")
def dsum_base(rho0):
    """The 4-dimensional rho0 + rho0 negative control (gapless at k = 1, 3)."""
    return al.direct_sum(rho0, rho0)


@pytest.fixture(scope="session")
def dsum_sym4(sym4):
    """The 8-dimensional sym4 + sym4 sum (partial flags only)."""
    return al.direct_sum(sym4, sym4)


@pytest.fixture(scope="session")
def boundary24(sym4):
    """24 osculating flags at jittered equispaced angles, sorted ascending."""
    return al.sample_boundary(sym4, 24, strategy="veronese", seed=7)


@pytest.fixture(scope="session")
def ccw_triple(boundary24):
    """A counterclockwise (positive) flag triple."""
    return boundary24[2], boundary24[9], boundary24[17]
