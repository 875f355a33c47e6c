import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from spdcsim.presets import preset
from spdcsim.spectral import GaussianStateParams, auto_grid, build_jsa_grid

settings.register_profile("default", deadline=None, max_examples=30,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def kdp():
    return preset("kdp-asymmetric")


@pytest.fixture(scope="session")
def bbo():
    return preset("bbo-symmetric")


@pytest.fixture(scope="session")
def kdp_grid(kdp):
    return auto_grid(kdp)


@pytest.fixture(scope="session")
def kdp_jsa(kdp, kdp_grid):
    return build_jsa_grid(kdp, kdp_grid)


def random_gaussian_params(rng, scale=1e-26, chirp=True):
    """Normalizable complex Gaussian coefficients with a Schmidt-friendly spread."""
    while True:
        a = scale * 10 ** rng.uniform(-0.5, 0.5)
        c = scale * 10 ** rng.uniform(-0.5, 0.5)
        b = rng.uniform(-0.8, 0.8) * math.sqrt(a * c)
        im = rng.normal(size=3) * scale * (1.0 if chirp else 0.0)
        try:
            return GaussianStateParams(complex(c, im[0]), complex(a, im[1]), complex(b, im[2]),
                                       complex(c, im[0]), complex(a, im[1]), complex(b, im[2]), 0.0, 0.0)
        except ValueError:
            continue


def grid_for_params(params, n=256, sds=18.0):
    """Square grid spanning ``sds`` spectral and temporal standard deviations (n is a floor)."""
    from spdcsim.grids import FrequencyGrid, next_pow2

    span = sds * max(params.spectral_sd())
    n = max(n, next_pow2(sds * max(params.temporal_sd()) * span / (2 * math.pi)))
    return FrequencyGrid(n, span)


def rel_linf(a, b):
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))
