import pytest

from semrelay.model import SigmoidFit, SystemParams
from semrelay.penalty import PenaltyConfig, run


@pytest.fixture(scope="session")
def params():
    return SystemParams()


@pytest.fixture(scope="session")
def fit():
    return SigmoidFit()


@pytest.fixture(scope="session")
def cfg():
    return PenaltyConfig()


@pytest.fixture(scope="session")
def default_report(params, fit, cfg):
    """One full penalty run at the default W = 1 MHz, shared across tests."""
    return run(params, fit, cfg)
