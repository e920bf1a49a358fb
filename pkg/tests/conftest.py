import numpy as np
import pytest

from core.settings import ENV_KEYS, reset_settings
from core.surfaces import ellipsoid_support, round_sphere_support


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    for key in ENV_KEYS.values():
        monkeypatch.delenv(key, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def ellipsoid():
    return ellipsoid_support((1.0, 1.5, 2.0))


@pytest.fixture
def unit_sphere():
    return round_sphere_support(1.0)
