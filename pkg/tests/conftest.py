import numpy as np
import pytest

from trisol import DriveParams, H0Params, validate


@pytest.fixture(scope="session")
def drive():
    """Reference drive: k=0.25, hbar=omega=1, a=0.3, x=1.6."""
    return DriveParams(a=0.3, x=1.6, omega=1.0, k=0.25, hbar=1.0)


@pytest.fixture(scope="session")
def derived(drive):
    return validate(drive)


@pytest.fixture(scope="session")
def h0():
    return H0Params(mu=10.0, lam=5.0, hbar=1.0)


@pytest.fixture(scope="session")
def soliton():
    """k=1 pulse drive: 4 = a^2 + x^2 with a=1.2, x=1.6."""
    p = DriveParams(a=1.2, x=1.6, omega=1.0, k=1.0, hbar=1.0)
    return p, validate(p)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
