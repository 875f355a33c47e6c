import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import grid_for_params, random_gaussian_params
from spdcsim.errors import DomainError, UsageError
from spdcsim.grids import FrequencyGrid, JointAmplitudeGrid
from spdcsim.entangle import (fedorov_ratio, fwhm, schmidt_gaussian, schmidt_gaussian_spectral_modulus,
                              schmidt_gaussian_state, schmidt_gaussian_temporal, schmidt_number, schmidt_numeric)
from spdcsim.spectral import eval_gaussian_jsa
from spdcsim.temporal import gaussian_jta, jta_via_transform


def _kernel(a, c, b, n=256, sds=14):
    sd = math.sqrt(max(c / (4 * (a * c - b * b)), a / (4 * (a * c - b * b))))
    g = FrequencyGrid(n, sds * sd)
    x = g.samples
    v = np.exp(-(a * x[:, None] ** 2 + c * x[None, :] ** 2 + 2 * b * x[:, None] * x[None, :]))
    return JointAmplitudeGrid(v, g, g).normalize()


@given(st.floats(0.3, 3), st.floats(0.3, 3), st.floats(-0.8, 0.8))
def test_gaussian_schmidt_law(a, c, r):
    b = r * math.sqrt(a * c)
    law = schmidt_gaussian(a, c, b)
    lam = schmidt_numeric(_kernel(a, c, b, n=256)).eigenvalues
    ref = law.eigenvalues(10)
    m = min(10, len(lam))
    assert np.all(ref[m:] < 1e-9)
    assert np.allclose(lam[:m], ref[:m], rtol=1e-4, atol=1e-13)


def test_schmidt_law_limits():
    assert schmidt_gaussian(1, 1, 0).K == 1.0
    assert schmidt_gaussian(1, 1, 0.999).K > 20
    with pytest.raises(DomainError):
        schmidt_gaussian(1, 1, 1.0)


def test_schmidt_number_matches_svd(kdp_jsa):
    full = schmidt_numeric(kdp_jsa)
    assert schmidt_number(kdp_jsa) == pytest.approx(full.K, rel=1e-10)
    assert schmidt_number(kdp_jsa, True) == pytest.approx(schmidt_numeric(kdp_jsa, True, False).K, rel=1e-10)
    assert full.eigenvalues.sum() <= 1 + 1e-12
    assert full.u_modes.shape[1] == len(full.eigenvalues)


def test_modes_are_orthonormal(kdp_jsa):
    r = schmidt_numeric(kdp_jsa)
    u = r.u_modes[:, :5]
    gram = u.conj().T @ u * kdp_jsa.idler_axis.step
    assert np.allclose(gram, np.eye(5), atol=1e-10)


def test_complex_gaussian_state_K():
    rng = np.random.default_rng(7)
    for _ in range(5):
        p = random_gaussian_params(rng)
        f = eval_gaussian_jsa(p, grid_for_params(p))
        assert schmidt_number(f) == pytest.approx(schmidt_gaussian_state(p).K, rel=1e-6)
        assert schmidt_number(f, True) == pytest.approx(schmidt_gaussian_spectral_modulus(p).K, rel=1e-6)
        t = gaussian_jta(p, grid_for_params(p))
        assert schmidt_number(t, True) == pytest.approx(schmidt_gaussian_temporal(p).K, rel=1e-6)


def test_full_K_is_domain_independent(kdp_jsa):
    assert schmidt_number(jta_via_transform(kdp_jsa)) == pytest.approx(schmidt_number(kdp_jsa), rel=1e-9)


def test_zero_amplitude_rejected():
    g = FrequencyGrid(64, 1.0)
    z = JointAmplitudeGrid(np.zeros((64, 64)), g, g)
    with pytest.raises(DomainError):
        schmidt_number(z)
    with pytest.raises(DomainError):
        schmidt_numeric(z)


def test_fwhm_of_gaussian():
    x = np.linspace(-10, 10, 20001)
    assert fwhm(np.exp(-x**2), x) == pytest.approx(2 * math.sqrt(math.log(2)), rel=1e-6)


def test_fwhm_rejects_two_lobes_and_truncation():
    x = np.linspace(-10, 10, 2001)
    y = np.exp(-(x - 4) ** 2) + np.exp(-(x + 4) ** 2)
    with pytest.raises(DomainError, match="separate lobes"):
        fwhm(y, x)
    assert fwhm(y, x, strict=False) > 8
    with pytest.raises(DomainError):
        fwhm(np.ones_like(x), x)


def test_fedorov_of_uncorrelated_state_is_one():
    g = FrequencyGrid(256, 20.0)
    x = g.samples
    f = JointAmplitudeGrid(np.exp(-x[:, None] ** 2 - 2 * x[None, :] ** 2), g, g).normalize()
    assert fedorov_ratio(jta_via_transform(f)) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(UsageError):
        fedorov_ratio(f)
