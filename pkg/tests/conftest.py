"""Shared fixtures: default scenario and a session-wide rate table."""

import pytest

from svcache.analytic import build_rate_table
from svcache.config import ContentConfig, NetworkConfig, PowerCoefficients
from svcache.objective import ObjectiveContext
from svcache.popularity import build_profile


@pytest.fixture(scope="session")
def net():
    return NetworkConfig()


@pytest.fixture(scope="session")
def content():
    return ContentConfig()


@pytest.fixture(scope="session")
def coeff():
    return PowerCoefficients()


@pytest.fixture(scope="session")
def profile(content):
    return build_profile(content)


@pytest.fixture(scope="session")
def rates(net):
    """Full analytic rate table at the default scenario (seed 0)."""
    return build_rate_table(net, seed=0)


@pytest.fixture(scope="session")
def ctx(rates, profile, net, content, coeff):
    return ObjectiveContext(rates=rates, profile=profile, net=net,
                            content=content, coeff=coeff)
