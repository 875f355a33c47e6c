import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spdcsim.dispersion import (BBO_E, BBO_O, C_LIGHT, KDP_E, KDP_O, MEDIA, BulkMediumModel, CrystalModel,
                                Sellmeier, TaylorCoefficients, central_derivatives, phasemismatch,
                                sellmeier_gvd_half, solve_phasematching, taylor_coefficients, wavenumber)
from spdcsim.errors import DomainError, PhasematchWarning
from spdcsim.spectral import sigma_from_fwhm


@pytest.mark.parametrize("coeffs, lam, expected", [
    (KDP_O, 1.064, 1.4938), (KDP_E, 1.064, 1.4599),
    (BBO_O, 1.064, 1.6551), (BBO_E, 1.064, 1.5426),
])
def test_sellmeier_matches_handbook_indices(coeffs, lam, expected):
    assert math.sqrt(coeffs.n_squared(lam)) == pytest.approx(expected, abs=2e-4)


def test_index_ellipse_limits():
    c = CrystalModel("KDP", 0.01, 1e-9)
    assert c.index("e", 0.8) == pytest.approx(math.sqrt(KDP_O.n_squared(0.8)), rel=1e-12)
    c90 = CrystalModel("KDP", 0.01, math.pi / 2 - 1e-12)
    assert c90.index("e", 0.8) == pytest.approx(math.sqrt(KDP_E.n_squared(0.8)), rel=1e-9)


def test_isotropic_crystal_returns_ordinary_index_exactly():
    s = Sellmeier(2.1, 0.01, 0.01)
    c = CrystalModel("custom", 0.01, 0.7, s, s)
    assert c.index("e", 0.9) == c.index("o", 0.9)


def test_window_violation_names_the_window():
    c = CrystalModel("KDP", 0.02, math.radians(67.8))
    with pytest.raises(DomainError, match="KDP transparency window"):
        wavenumber(c, "signal", 2 * math.pi * C_LIGHT / 2.0e-6)
    with pytest.raises(DomainError):
        wavenumber(c, "pump", -1.0)


def test_nonphysical_sellmeier_rejected():
    bad = Sellmeier(0.5)
    c = CrystalModel("custom", 0.01, 0.5, bad, bad, window=(0.1e-6, 5e-6))
    with pytest.raises(DomainError):
        c.index("o", 1.0)


@pytest.mark.parametrize("kw", [dict(material="XYZ", length=1, theta=0.5), dict(material="KDP", length=-1, theta=0.5),
                                dict(material="KDP", length=1, theta=2.0), dict(material="custom", length=1, theta=0.5)])
def test_crystal_validation(kw):
    with pytest.raises(ValueError):
        CrystalModel(**kw)


def test_field_name_checked():
    with pytest.raises(ValueError):
        wavenumber(CrystalModel("KDP", 0.01, 1.0), "pmp", 4e15)


def test_phasematching_angles_of_presets(kdp, bbo):
    assert math.degrees(kdp.crystal.theta) == pytest.approx(67.8, abs=0.1)
    assert math.degrees(bbo.crystal.theta) == pytest.approx(28.8, abs=0.1)
    for cfg in (kdp, bbo):
        assert abs(float(phasemismatch(cfg.crystal, 0.0, 0.0, cfg.omega_c))) < 1e-9


def test_solver_rejects_bracket_without_root(kdp):
    with pytest.raises(DomainError):
        solve_phasematching(kdp.crystal, kdp.omega_c, bracket=(0.1, 0.2))


def test_unphasematched_crystal_warns(kdp):
    with pytest.warns(PhasematchWarning):
        taylor_coefficients(kdp.crystal.with_theta(1.0), kdp.omega_c)


def test_group_velocity_conditions(kdp, bbo):
    tk, tb = kdp.coefficients, bbo.coefficients
    assert abs(tk.tau_s) < 1e-3 * abs(tk.tau_i)  # pump and signal group velocities matched
    assert tb.tau_s * tb.tau_i < 0  # symmetric: opposite-sign walk-off
    assert 0.5 < abs(tb.tau_s / tb.tau_i) < 2
    assert kdp.sigma * tk.tau_i == pytest.approx(134, rel=0.01)


def test_pump_bandwidths_of_presets(kdp, bbo):
    # the commonly quoted 4.65e13 and 4.19e13 use c = 3e8 m/s
    assert kdp.sigma == pytest.approx(4.65e13, rel=2e-3)
    assert bbo.sigma == pytest.approx(4.19e13, rel=2e-3)
    assert sigma_from_fwhm(5e-9, 415e-9) * C_LIGHT / 3e8 == pytest.approx(4.6446e13 * 1, rel=1e-3)


def _mp_k(coeffs_o, coeffs_e, theta, pol, omega):
    lam = 2 * mp.pi * C_LIGHT / omega * mp.mpf(10) ** 6

    def n2(s):
        l2 = lam**2
        out = s.A + s.B / (l2 - s.C) - s.F * l2
        if s.D:
            out += s.D * l2 / (l2 - s.E)
        return out

    if pol == "o":
        n = mp.sqrt(n2(coeffs_o))
    else:
        n = 1 / mp.sqrt(mp.cos(theta) ** 2 / n2(coeffs_o) + mp.sin(theta) ** 2 / n2(coeffs_e))
    return n * omega / C_LIGHT


def test_finite_difference_derivatives_against_mpmath(kdp):
    mp.mp.dps = 40
    c = kdp.crystal
    th = mp.mpf(c.theta)
    for field, pol, w in (("signal", "o", kdp.omega_c), ("idler", "e", kdp.omega_c), ("pump", "e", 2 * kdp.omega_c)):
        f = lambda x: _mp_k(c.sellmeier_o, c.sellmeier_e, th, pol, x)  # noqa: E731
        d1_ref = float(mp.diff(f, mp.mpf(w), 1))
        d2_ref = float(mp.diff(f, mp.mpf(w), 2))
        d1, d2 = central_derivatives(lambda x: float(wavenumber(c, field, x)), w, 1e-2 * w)
        assert d1 == pytest.approx(d1_ref, rel=1e-9)
        assert d2 == pytest.approx(d2_ref, rel=1e-8)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.5, 2))
def test_central_derivatives_exact_on_quartics(a, b, c, x):
    f = lambda t: a * t**4 + b * t**2 + c * t  # noqa: E731
    d1, d2 = central_derivatives(f, x, 1e-2)
    assert d1 == pytest.approx(4 * a * x**3 + 2 * b * x + c, abs=1e-8)
    assert d2 == pytest.approx(12 * a * x**2 + 2 * b, abs=1e-6)


def test_taylor_expansion_residuals_scale_with_order(kdp):
    tc = kdp.coefficients

    def resid(scale, order):
        nu_i, nu_s = 0.7 * scale, -0.4 * scale
        exact = float(phasemismatch(kdp.crystal, nu_i, nu_s, kdp.omega_c))
        return abs(exact - float(tc.evaluate(nu_i, nu_s, order=order)))

    s = 2e12
    assert resid(2 * s, 1) / resid(s, 1) == pytest.approx(4, rel=0.05)
    assert resid(2 * s, 2) / resid(s, 2) == pytest.approx(8, rel=0.05)
    assert resid(s, 2) < 1e-3 * resid(s, 1)


@given(st.floats(-1e14, 1e14), st.floats(-1e14, 1e14))
def test_taylor_orders_differ_by_quadratic_terms(nu_i, nu_s):
    t = TaylorCoefficients(1e-13, 2e-12, 3e-28, 4e-28, 5e-28)
    d = t.evaluate(nu_i, nu_s, 2) - t.evaluate(nu_i, nu_s, 1)
    assert d == pytest.approx(3e-28 * nu_s**2 + 4e-28 * nu_i**2 + 5e-28 * nu_i * nu_s, rel=1e-9, abs=1e-15 * (1e-13 * abs(nu_s) + 2e-12 * abs(nu_i)))


def test_crystal_gvd_coefficients_positive(kdp):
    tc = kdp.coefficients
    assert tc.b_p > 0 and tc.b_s > 0 and tc.b_i > 0


def test_medium_presets_close_to_handbook_fused_silica():
    b = [0.6961663, 0.4079426, 0.8974794]
    c = [0.0684043**2, 0.1162414**2, 9.896161**2]
    assert MEDIA["fused-silica-830"].gvd_half / sellmeier_gvd_half(b, c, 830e-9) == pytest.approx(1.0, abs=0.12)
    assert MEDIA["fused-silica-415"].gvd_half / sellmeier_gvd_half(b, c, 415e-9) == pytest.approx(1.0, abs=0.12)


def test_bulk_medium_beta_linear():
    m = BulkMediumModel("x", 2e-26)
    assert m.beta(3.0) == pytest.approx(6e-26)
    assert m.gvd == pytest.approx(4e-26)
    with pytest.raises(ValueError):
        BulkMediumModel("y", math.inf)


def test_zero_length_crystal_has_no_mismatch(kdp):
    c = kdp.crystal.with_length(0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        tc = taylor_coefficients(c, kdp.omega_c)
    assert tc.tau_i == 0 and tc.b_p == 0
    assert np.all(phasemismatch(c, np.array([1e13]), np.array([2e13]), kdp.omega_c) == 0)
