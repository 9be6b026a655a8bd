import numpy as np
import pytest

import sembit as sb


@pytest.fixture(scope="session")
def table():
    return sb.default_table()


@pytest.fixture()
def scenario():
    """Baseline asymmetric scenario: semantic user closer than bit user."""
    return sb.Scenario()


@pytest.fixture()
def symmetric_scenario():
    return sb.Scenario(d_s=30.0, d_b=30.0)


@pytest.fixture()
def realization(scenario):
    # Seed 7 is a power-sufficient draw for the baseline scenario (the
    # full band can be lifted to the similarity floor within budget).
    real = sb.sample_realization(scenario, 7)
    assert not sb.oma_extremes(scenario, real).power_limited
    return real


@pytest.fixture()
def rng():
    return np.random.default_rng(20240821)
