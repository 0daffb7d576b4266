import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from so3ft.core import HarmonicCoefficients, dimension
from so3ft.wigner import make_plan

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20260214)


def random_harmonic(N, rng):
    d = dimension(N)
    return HarmonicCoefficients(N, rng.standard_normal(d) + 1j * rng.standard_normal(d))


_PLANS = {}


def cached_plan(N, backend=None):
    key = (N, backend)
    if key not in _PLANS:
        _PLANS[key] = make_plan(N, backend=backend)
    return _PLANS[key]
