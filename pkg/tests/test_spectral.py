import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spdcsim.dispersion import TaylorCoefficients
from spdcsim.errors import DomainError, GridError
from spdcsim.grids import FrequencyGrid
from spdcsim.spectral import (GAMMA, GaussianStateParams, SourceConfig, auto_grid, build_jsa_grid,
                              correlation_coefficient, eval_gaussian_jsa, gaussian_params, sigma_from_fwhm)


def test_jsa_is_normalized(kdp_jsa):
    assert kdp_jsa.norm2() == pytest.approx(1.0, rel=1e-12)
    assert kdp_jsa.domain == "spectral"


def test_small_span_fails_energy_capture(kdp):
    with pytest.raises(GridError, match="energy capture"):
        build_jsa_grid(kdp, FrequencyGrid(256, 0.2 * auto_grid(kdp).span))


@pytest.mark.parametrize("bs, bi", [(1e-25, 0.0), (0.0, -3e-25), (2e-24, 5e-24)])
def test_jsi_invariant_under_signal_idler_chirp(kdp, kdp_grid, kdp_jsa, bs, bi):
    other = build_jsa_grid(kdp.with_(beta_s=bs, beta_i=bi), kdp_grid)
    assert np.max(np.abs(other.intensity - kdp_jsa.intensity)) <= 1e-10 * kdp_jsa.intensity.max()


def test_pump_chirp_changes_the_phase_but_not_the_jsi(kdp, kdp_grid, kdp_jsa):
    other = build_jsa_grid(kdp.with_(beta_p=4.77e-26), kdp_grid)
    assert np.allclose(other.intensity, kdp_jsa.intensity, rtol=0, atol=1e-10 * kdp_jsa.intensity.max())
    assert np.max(np.abs(other.values - kdp_jsa.values)) > 1e-3 * np.abs(kdp_jsa.values).max()


def test_gaussian_model_fields(kdp):
    p = gaussian_params(kdp.with_(beta_p=1e-26, beta_s=2e-26))
    tc = kdp.coefficients
    assert p.T_ss.real == pytest.approx(1 / kdp.sigma**2 + GAMMA / 4 * tc.tau_s**2)
    assert p.T_ii.real == pytest.approx(1 / kdp.sigma**2 + GAMMA / 4 * tc.tau_i**2)
    assert p.T_ss.imag == pytest.approx(-3e-26)
    assert p.T_si.imag == pytest.approx(-1e-26)
    assert p.T_ii_tilde == complex(1 / kdp.sigma**2, -1e-26)


def test_gaussian_surrogate_correlation_matches_closed_form(kdp):
    p = gaussian_params(kdp)
    g = auto_grid(kdp)
    f = build_jsa_grid(kdp, g, pmf="gaussian", order=1)
    assert correlation_coefficient(f) == pytest.approx(p.xi, abs=1e-6)
    assert correlation_coefficient(f, "pearson") == pytest.approx(-p.xi, abs=1e-6)
    with pytest.raises(ValueError):
        correlation_coefficient(f, "spearman")


@pytest.mark.xfail(strict=True, reason="sinc tails carry far more correlation than the Gaussian surrogate")
def test_numeric_sinc_correlation_below_015(kdp_jsa):
    assert abs(correlation_coefficient(kdp_jsa)) < 0.15


def test_eval_gaussian_jsa_matches_surrogate_grid(kdp):
    g = auto_grid(kdp)
    a = eval_gaussian_jsa(gaussian_params(kdp), g)
    b = build_jsa_grid(kdp.with_(include_pm_phase=False), g, pmf="gaussian", order=1)
    assert np.max(np.abs(a.values - b.values)) < 1e-9 * np.abs(a.values).max()


def test_nonnormalizable_gaussian_rejected():
    with pytest.raises(DomainError):
        GaussianStateParams(1, 1, 2, 1, 1, 2, 0, 0)


@given(st.floats(0.1e-9, 20e-9), st.floats(300e-9, 1200e-9))
def test_sigma_from_fwhm_inverts(dlam, lam):
    sig = sigma_from_fwhm(dlam, lam)
    assert sig * math.sqrt(2 * math.log(2)) == pytest.approx(2 * math.pi * 299792458.0 * dlam / lam**2)


def test_config_validation(kdp):
    with pytest.raises(ValueError):
        kdp.with_(sigma=-1.0)
    with pytest.raises(ValueError):
        kdp.with_(beta_p=math.nan)
    with pytest.raises(ValueError):
        SourceConfig(None, 415e-9, 1e13)
    with pytest.raises(ValueError):
        build_jsa_grid(kdp, auto_grid(kdp), pmf="box")


def test_with_keeps_cached_coefficients(kdp):
    tc = kdp.coefficients
    assert kdp.with_(beta_p=1e-26).coefficients is tc


def test_auto_grid_sizes(kdp, bbo):
    gk, gb = auto_grid(kdp), auto_grid(bbo)
    for cfg, g in ((kdp, gk), (bbo, gb)):
        assert g.n >= 512 and g.n & (g.n - 1) == 0
        assert g.span == pytest.approx(12 * max(gaussian_params(cfg).spectral_sd()))
        t = g.conjugate()
        assert t.span >= abs(cfg.coefficients.tau_i) + abs(cfg.coefficients.tau_s)
    bigger = auto_grid(kdp, extra_betas=[(5e-24, 5e-24)])
    assert bigger.n > gk.n


def test_taylor_only_config_builds():
    cfg = SourceConfig(None, 415e-9, 4e13, taylor=TaylorCoefficients(0.0, 2e-12))
    f = build_jsa_grid(cfg, auto_grid(cfg))
    assert f.norm2() == pytest.approx(1.0)


def test_filter_narrows_marginals(kdp):
    g = auto_grid(kdp)
    a = build_jsa_grid(kdp, g)
    b = build_jsa_grid(kdp.with_(sigma_F=1e13), g)

    def var(f):
        p = f.intensity.sum(axis=0)
        p = p / p.sum()
        x = g.samples
        return p @ x**2 - (p @ x) ** 2

    assert var(b) < var(a)
