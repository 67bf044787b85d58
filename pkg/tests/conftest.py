import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# Numerics can be slow on loaded CI boxes; the deadline is noise there.
settings.register_profile(
    "numerics", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("numerics")


@pytest.fixture
def rng():
    return np.random.default_rng(0)
