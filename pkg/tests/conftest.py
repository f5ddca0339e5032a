import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def default_grid():
    from fredholm_disk.geometry import RadialGrid

    return RadialGrid(1e-4, 40.0, 1024)


@pytest.fixture(autouse=True, scope="session")
def _seed_numpy():
    np.random.seed(0)
