"""Joint temporal amplitude: discrete transform, erf form and Gaussian form.

Time-domain convention: f~(t_i, t_s) = (1/2pi) iint f(nu_i, nu_s)
exp(-i nu_i t_i - i nu_s t_s) dnu_i dnu_s, carrier phases dropped.

The erf form integrates the Gaussian model over the sinc's Fourier
representation sinc(x/2) = (1/2) int_{-1}^{1} exp(i xi x / 2) dxi, giving

    f~ ~ exp(-C2 + C1^2 / (4 C0)) * Z(sqrt(C0), 1; C1 / (2 C0)).

In their direct form C0, C1 and C2 all carry the determinant
T~_si^2 - T~_ii T~_ss in the denominator, which vanishes for the common case
of no filtering and no signal/idler dispersion. The evaluation below uses the
equivalent determinant-free combinations instead (Q = tau^T adj(T~) tau)::

    -C2 + C1^2/(4 C0) = -(tau_i t_s - tau_s t_i)^2 / (4 Q)
    C1 / (2 C0)       = 2 tau^T adj(T~) t / Q
    sqrt(C0)          = sqrt(Q / (16 det T~))      (infinite when det T~ = 0)

so the singular case reduces continuously to a rect.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from .errors import DomainError, UsageError
from .grids import FrequencyGrid, JointAmplitudeGrid, TimeGrid
from .spectral import GaussianStateParams

SECTOR = math.pi / 4
_GL_X, _GL_W = np.polynomial.legendre.leggauss(48)


def _fft2c(a):
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(a)))


def _ifft2c(a):
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(a)))


def _centroid(weights: np.ndarray) -> tuple[float, float]:
    """Intensity centroid in samples relative to the grid center (n//2)."""
    w = weights / weights.sum()
    ni, ns = w.shape
    ki = np.arange(ni) - ni // 2
    ks = np.arange(ns) - ns // 2
    return float(w.sum(axis=1) @ ki), float(w.sum(axis=0) @ ks)


def jta_via_transform(jsa: JointAmplitudeGrid, recenter: bool = True) -> JointAmplitudeGrid:
    """Two-dimensional transform of a spectral grid to the time domain.

    With ``recenter`` the intensity centroid is moved to the grid center by a
    linear spectral phase (an exact sub-sample shift); the applied shift in
    seconds is stored in ``meta["shift"]``.
    """
    if jsa.domain != "spectral":
        raise UsageError("jta_via_transform needs a spectral-domain grid")
    gi, gs = jsa.idler_axis, jsa.signal_axis
    scale = gi.step * gs.step / (2 * math.pi)
    ft = _fft2c(jsa.values) * scale
    ti, ts = gi.conjugate(), gs.conjugate()
    shift = (0.0, 0.0)
    if recenter:
        ci, cs = _centroid(np.abs(ft) ** 2)
        if abs(ci) > 1e-9 or abs(cs) > 1e-9:
            ki = np.arange(gi.n) - gi.n // 2
            ks = np.arange(gs.n) - gs.n // 2
            ramp = np.exp(-2j * math.pi * (ci * ki[:, None] / gi.n + cs * ks[None, :] / gs.n))
            ft = _fft2c(jsa.values * ramp) * scale
            shift = (ci * ti.step, cs * ts.step)
    meta = dict(jsa.meta, shift=shift, norm_before=float(np.sum(np.abs(ft) ** 2) * ti.step * ts.step))
    return JointAmplitudeGrid(ft, ti, ts, "temporal", False, meta).normalize()


def jsa_via_transform(jta: JointAmplitudeGrid) -> JointAmplitudeGrid:
    """Inverse of :func:`jta_via_transform`, undoing any recorded recentering."""
    if jta.domain != "temporal":
        raise UsageError("jsa_via_transform needs a temporal-domain grid")
    ti, ts = jta.idler_axis, jta.signal_axis
    gi, gs = ti.conjugate(), ts.conjugate()
    vals = _ifft2c(jta.values) * (2 * math.pi) / (gi.step * gs.step)
    si, ss = jta.meta.get("shift", (0.0, 0.0))
    if si or ss:
        vals = vals * np.exp(1j * (gi.samples[:, None] * si + gs.samples[None, :] * ss))
    meta = {k: v for k, v in jta.meta.items() if k not in ("shift", "norm_before")}
    return JointAmplitudeGrid(vals, gi, gs, "spectral", False, meta).normalize()


def _ec(z, E):
    """exp(E) * erfc(z), kept finite when the two factors over/underflow."""
    right = z.real >= 0
    zz = np.where(right, z, -z)
    core = np.exp(E - z * z) * erfcx(zz)
    return np.where(right, core, 2 * np.exp(E) - core)


def _z_scaled(G: complex, x0: float, x, E=0.0):
    """exp(E) * Z(G, x0; x) for complex shift x and exponent E (broadcasting).

    The erfc difference is taken on the half-plane holding the midpoint of
    the integration path, so the two terms never cancel; short paths use
    Gauss-Legendre quadrature instead.
    """
    x = np.asarray(x)
    E = np.asarray(E)
    a, b, E = np.broadcast_arrays(G * (x + x0), G * (x - x0), E)
    x = np.broadcast_to(x, a.shape)
    flip = (a + b).real < 0
    # 0.5 [erf(a) - erf(b)] = 0.5 [erfc(lo) - erfc(hi)]
    lo = np.where(flip, -a, b)
    hi = np.where(flip, -b, a)
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        out = np.array(0.5 * (_ec(lo, E) - _ec(hi, E)), dtype=complex, ndmin=1).reshape(a.shape)
        quad = (abs(G * x0) <= 0.5) & (np.abs(2 * G * G * x * x0) <= 20.0)
        if np.any(quad):
            u = G * (x[quad][:, None] + x0 * _GL_X[None, :])
            out[quad] = (G * x0 / math.sqrt(math.pi)) * (np.exp(E[quad][:, None] - u * u) @ _GL_W)
    return out


def z_envelope(G: complex, x0: float, x):
    """Z(G, x0; x) = (1/sqrt(pi)) int_{G(x-x0)}^{G(x+x0)} exp(-t^2) dt.

    Requires |arg G| <= pi/4. ``G = inf`` returns the rect limit.
    """
    x = np.asarray(x, dtype=float)
    if isinstance(G, (float, int)) and math.isinf(G):
        return np.where(np.abs(x) < x0, 1.0, np.where(np.abs(x) == x0, 0.5, 0.0)).astype(complex)
    G = complex(G)
    if G == 0:
        return np.zeros_like(x, dtype=complex)
    if abs(cmath.phase(G)) > SECTOR * (1 + 1e-12):
        raise DomainError(f"Z function needs |arg G| <= pi/4, got {cmath.phase(G):.6f} rad")
    return _z_scaled(G, x0, x.astype(complex))


@dataclass(frozen=True)
class ErfJtaParams:
    """Coefficients of the erf-form JTA.

    ``C1 = c1_i t_i + c1_s t_s`` and ``C2 = c2_ii t_i^2 + c2_ss t_s^2 +
    2 c2_si t_i t_s`` in direct form; they are infinite when ``singular``.
    ``Q`` and ``det`` are the determinant-free pieces evaluation relies on.
    """

    C0: complex
    c1_i: complex
    c1_s: complex
    c2_ii: complex
    c2_ss: complex
    c2_si: complex
    T_ss: complex
    T_ii: complex
    T_si: complex
    tau_s: float
    tau_i: float
    Q: complex
    det: complex
    singular: bool

    @property
    def G(self):
        """sqrt(C0); ``inf`` in the singular (rect) limit."""
        if self.singular:
            return math.inf
        return cmath.sqrt(self.C0)


def erf_params(params: GaussianStateParams, tau_s: float | None = None, rel_tol: float = 1e-12) -> ErfJtaParams:
    """Build erf-form coefficients from the filter/pump/dispersion part of ``params``.

    ``tau_s`` overrides the signal walk-off (e.g. 0 for the ideal
    asymmetric case).
    """
    tss, tii, tsi = params.T_ss_tilde, params.T_ii_tilde, params.T_si_tilde
    ts = params.tau_s if tau_s is None else tau_s
    ti = params.tau_i
    det = tii * tss - tsi * tsi
    Q = tss * ti * ti - 2 * tsi * ti * ts + tii * ts * ts
    if Q == 0:
        raise DomainError("erf form needs a nonzero walk-off combination tau^T adj(T) tau")
    scale = abs(tii * tss) + abs(tsi) ** 2
    singular = abs(det) <= rel_tol * scale
    if singular:
        inf = complex(math.inf, 0)
        C0 = c1i = c1s = c2ii = c2ss = c2si = inf
    else:
        # M = inverse of [[T_ii, T_si], [T_si, T_ss]]
        mii, mss, msi = tss / det, tii / det, -tsi / det
        C0 = (ti * ti * mii + 2 * ti * ts * msi + ts * ts * mss) / 16
        c1i = (ti * mii + ts * msi) / 4
        c1s = (ti * msi + ts * mss) / 4
        c2ii, c2ss, c2si = mii / 4, mss / 4, msi / 4
        if C0.real < 0:
            raise DomainError("erf form violates |arg sqrt(C0)| <= pi/4 (Re C0 < 0)")
    return ErfJtaParams(C0, c1i, c1s, c2ii, c2ss, c2si, tss, tii, tsi, ts, ti, Q, det, singular)


def erf_jta(params: ErfJtaParams, t_i, t_s):
    """Unnormalized erf-form amplitude at times (t_i, t_s), broadcasting."""
    t_i = np.asarray(t_i, dtype=float)
    t_s = np.asarray(t_s, dtype=float)
    p = params
    cross = p.tau_i * t_s - p.tau_s * t_i
    E = -(cross**2) / (4 * p.Q)
    # tau^T adj(T) t with adj = [[T_ss, -T_si], [-T_si, T_ii]] in (i, s) order
    proj = p.tau_i * (p.T_ss * t_i - p.T_si * t_s) + p.tau_s * (p.T_ii * t_s - p.T_si * t_i)
    c = 2 * proj / p.Q
    if p.singular:
        # c is real in the rect limit; tiny imaginary parts are roundoff
        cr = np.abs(c.real)
        return np.exp(E) * np.where(cr < 1.0, 1.0, np.where(cr == 1.0, 0.5, 0.0))
    return _z_scaled(cmath.sqrt(p.C0), 1.0, c, E)


def _time_axes(grid):
    if isinstance(grid, TimeGrid):
        return grid, grid
    if isinstance(grid, FrequencyGrid):
        t = grid.conjugate()
        return t, t
    return tuple(grid)


def erf_jta_grid(params: ErfJtaParams, grid) -> JointAmplitudeGrid:
    """Sample :func:`erf_jta` on a time grid (or the conjugate of a frequency grid)."""
    ti, ts = _time_axes(grid)
    vals = erf_jta(params, ti.samples[:, None], ts.samples[None, :])
    return JointAmplitudeGrid(np.asarray(vals, dtype=complex), ti, ts, "temporal", False,
                              {"source": "erf"}).normalize()


def gaussian_jta(params: GaussianStateParams, grid) -> JointAmplitudeGrid:
    """Gaussian-model JTA: exp(Om_s2 t_i^2 + Om_i2 t_s^2 - 2 Om_si2 t_i t_s)."""
    ti, ts = _time_axes(grid)
    t_i = ti.samples[:, None]
    t_s = ts.samples[None, :]
    vals = np.exp(params.omega_s2 * t_i**2 + params.omega_i2 * t_s**2 - 2 * params.omega_si2 * t_i * t_s)
    return JointAmplitudeGrid(vals, ti, ts, "temporal", False, {"source": "gaussian"}).normalize()


def asymmetric_rect_jti(sigma: float, beta_p: float, tau_i: float, t_i, t_s):
    """Closed-form JTI for tau_s = 0: Gaussian in t_s times rect in t_s - t_i."""
    t_i = np.asarray(t_i, dtype=float)
    t_s = np.asarray(t_s, dtype=float)
    gauss = np.exp(-(t_s**2) * sigma**2 / (2 * (1 + beta_p**2 * sigma**4)))
    d = np.abs(t_s - t_i)
    half = abs(tau_i) / 2
    rect = np.where(d < half, 1.0, np.where(d == half, 0.5, 0.0))
    return gauss * rect


__all__ = [
    "jta_via_transform", "jsa_via_transform", "z_envelope", "ErfJtaParams", "erf_params", "erf_jta",
    "erf_jta_grid", "gaussian_jta", "asymmetric_rect_jti",
]
