"""Chronocyclic Wigner function (CWF) of the heralded signal photon.

The herald bandwidth ``sigma_g`` follows the filter convention used for the
JSA: it is the 1/e width of an amplitude filter, so the idler-detection
efficiency weighting |f|^2 is exp(-2 nu0^2 / sigma_g^2).  This is the choice
under which the analytic coefficient T_ii,hat = T_ii + 1/sigma_g^2 holds.

W(nu, t) = int dnu0 g(nu0) int dw' f(nu0, nu + w'/2) f*(nu0, nu - w'/2) exp(i w' t)

Its time axis therefore uses the exp(+i w t) kernel, which is mirrored with
respect to the joint temporal amplitude built by :mod:`spdcsim.temporal`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entangle import fwhm
from .errors import DomainError, GridError, UsageError
from .grids import FrequencyGrid, JointAmplitudeGrid, TimeGrid
from .spectral import GaussianStateParams

# Heralded-spectrum weight allowed outside the central half of the grid.  Sinc
# phasematching leaves a tail whose weight falls only as 1/span, so Gaussian
# states meet 1e-6 easily while sinc states need this looser default.
SUPPORT_TOL = 1e-2
REAL_TOL = 1e-9
ROW_CHUNK = 256
FWHM_PER_HALFWIDTH = 2 * math.sqrt(math.log(2))


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Real CWF sampled as ``values[nu, t]`` with unit total integral."""

    values: np.ndarray
    nu_axis: FrequencyGrid
    t_axis: TimeGrid
    sigma_g: float
    imag_residue: float = 0.0

    def __post_init__(self):
        if self.values.shape != (self.nu_axis.n, self.t_axis.n):
            raise UsageError("values shape does not match the axes")
        if np.iscomplexobj(self.values):
            raise UsageError("WignerGrid values must be real")
        self.values.setflags(write=False)

    @property
    def cell(self) -> float:
        return self.nu_axis.step * self.t_axis.step

    def total(self) -> float:
        return float(self.values.sum() * self.cell)


@dataclass(frozen=True)
class CwfAnalytic:
    """Gaussian-model CWF coefficients.

    ``T1_sq``, ``T2_sq`` and ``T3_sq`` are the squared-notation coefficients
    (all in s^2). ``Gamma`` is dimensionless: Gamma * nu * t with nu in rad/s
    and t in s is the exponent of the mixed term.
    """

    T1_sq: float
    T2_sq: float
    T3_sq: float
    T_ii_hat: float
    Gamma: float
    Delta_t: float
    Delta_omega: float
    Delta_omega_M: float
    Delta_t_M: float
    Delta_t_0: float
    Delta: float
    sigma_g: float

    @property
    def positivity(self) -> float:
        """4 - Gamma^2 Delta_t^2 Delta_omega^2, positive for a valid Gaussian."""
        return 4.0 - (self.Gamma * self.Delta_t * self.Delta_omega) ** 2

    @property
    def fwhm_omega_M(self) -> float:
        return FWHM_PER_HALFWIDTH * self.Delta_omega_M

    @property
    def fwhm_t_M(self) -> float:
        return FWHM_PER_HALFWIDTH * self.Delta_t_M

    @property
    def time_bandwidth(self) -> float:
        """Delta_omega_M * Delta_t_M, equal to 1 for a transform-limited photon."""
        return self.Delta_omega_M * self.Delta_t_M

    def evaluate(self, nu, t) -> np.ndarray:
        nu = np.asarray(nu, dtype=float)
        t = np.asarray(t, dtype=float)
        pref = math.sqrt(self.positivity) / (2 * math.pi * self.Delta_t * self.Delta_omega)
        return pref * np.exp(-(nu / self.Delta_omega) ** 2 - (t / self.Delta_t) ** 2 + self.Gamma * nu * t)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "Gamma", "Delta_t", "Delta_omega", "T1_sq", "T2_sq", "T3_sq", "T_ii_hat", "Delta_omega_M",
            "Delta_t_M", "Delta_t_0", "Delta", "sigma_g")} | {
            "fwhm_omega_M": self.fwhm_omega_M, "fwhm_t_M": self.fwhm_t_M}


def _t_hat(params: GaussianStateParams, sigma_g: float) -> float:
    herald = 0.0 if math.isinf(sigma_g) else 1.0 / sigma_g**2
    return params.T_ii.real + herald


def cwf_analytic(params: GaussianStateParams, sigma_g: float = math.inf) -> CwfAnalytic:
    if not sigma_g > 0:
        raise ValueError("sigma_g must be positive or infinite")
    th = _t_hat(params, sigma_g)
    ss_r, ss_i = params.T_ss.real, params.T_ss.imag
    si_r, si_i = params.T_si.real, params.T_si.imag
    t1 = 2 * (ss_r + si_i**2 / th)
    t2 = 2 * (ss_i - si_r * si_i / th)
    t3 = 2 * (ss_r - si_r**2 / th)
    if not t3 > 0:
        raise DomainError("CWF positivity violated (T3^2 <= 0): parameters outside the Gaussian model's validity")
    gamma = 2 * t2 / t1
    d_omega2 = t1 / (t2 * t2 + t1 * t3)
    dt0_2 = 2 * ss_r
    dtm_2 = t1 + t2 * t2 / t3
    return CwfAnalytic(
        T1_sq=t1, T2_sq=t2, T3_sq=t3, T_ii_hat=th, Gamma=gamma,
        Delta_t=math.sqrt(t1), Delta_omega=math.sqrt(d_omega2),
        Delta_omega_M=1.0 / math.sqrt(t3), Delta_t_M=math.sqrt(dtm_2),
        Delta_t_0=math.sqrt(dt0_2), Delta=broadening_excess(params, sigma_g), sigma_g=sigma_g,
    )


def broadening_excess(params: GaussianStateParams, sigma_g: float = math.inf) -> float:
    """Delta = Delta_t_M^2 - Delta_t_0^2 as a ratio of quadratic forms.

    Delta / 2 = (T_hat x^2 + c y^2 - 2 b x y) / (T_hat c - b^2), with
    x = T_ss,I, y = T_si,I, b = T_si,R, c = T_ss,R; the numerator is a
    positive semidefinite form, hence Delta >= 0.
    """
    th = _t_hat(params, sigma_g)
    x, y = params.T_ss.imag, params.T_si.imag
    b, c = params.T_si.real, params.T_ss.real
    return 2 * (th * x * x + c * y * y - 2 * b * x * y) / (th * c - b * b)


def _herald_weight(nu0: np.ndarray, sigma_g: float) -> np.ndarray:
    if math.isinf(sigma_g):
        return np.ones_like(nu0)
    return np.exp(-2 * (nu0 / sigma_g) ** 2)


def herald_spectrum(f: JointAmplitudeGrid, sigma_g: float = math.inf) -> np.ndarray:
    """Heralded signal spectrum int dnu0 g(nu0) |f(nu0, nu)|^2, normalized to unit area."""
    if f.domain != "spectral":
        raise UsageError("herald_spectrum needs a spectral-domain grid")
    g = _herald_weight(f.idler_axis.samples, sigma_g)
    p = g @ f.intensity
    return p / (p.sum() * f.signal_axis.step)


def _upsample_signal(values: np.ndarray) -> np.ndarray:
    """Trigonometric interpolation to half the spectral step along axis 1.

    Sample k of the result sits at detuning (k - n) * step / 2, so coarse
    sample j maps to fine sample 2 j.
    """
    n = values.shape[1]
    spec = np.fft.fft(np.fft.ifftshift(values, axes=1), axis=1)
    pad = np.zeros((values.shape[0], 2 * n), dtype=complex)
    h = n // 2
    pad[:, :h] = spec[:, :h]
    pad[:, -h + 1:] = spec[:, -h + 1:]
    pad[:, h] = 0.5 * spec[:, h]
    pad[:, -h] = 0.5 * spec[:, h]
    return np.fft.fftshift(2 * np.fft.ifft(pad, axis=1), axes=1)


def support_fraction(f: JointAmplitudeGrid, sigma_g: float = math.inf) -> float:
    """Heralded-spectrum weight outside the central half of the signal axis.

    Evaluating W at nu needs the amplitude at nu +- w'/2; when all of the
    signal support sits in the central half of the grid those reads stay
    on-grid, so this fraction bounds the weight of the reads set to zero.
    """
    p = herald_spectrum(f, sigma_g)
    nu = f.signal_axis.samples
    outside = np.abs(nu) > 0.25 * f.signal_axis.span
    return float(p[outside].sum() / p.sum())


def _auto_zoom(f: JointAmplitudeGrid, g: np.ndarray, max_zoom: int = 4, tail: float = 1e-9) -> int:
    # heralded temporal marginal (exp(+i w t) kernel) on the coarse conjugate grid;
    # zoom while the window still holds all but ``tail`` of its weight
    amp = np.fft.ifft(np.fft.ifftshift(f.values, axes=1), axis=1)
    q = np.fft.fftshift(g @ (np.abs(amp) ** 2))
    q = q / q.sum()
    t = f.signal_axis.conjugate().samples
    window = f.signal_axis.conjugate().span
    k = 0
    while k < max_zoom:
        half = window / 2 ** (k + 2)
        if q[np.abs(t) >= half].sum() > tail:
            break
        k += 1
    return k


def cwf_grid(config, *, sigma_g: float = math.inf, support_tol: float = SUPPORT_TOL, max_doublings: int = 3,
             **kw) -> FrequencyGrid:
    """Automatic JSA grid for a CWF: twice the usual span, widened until the support check passes."""
    from .spectral import auto_grid, build_jsa_grid

    sds = kw.pop("span_sds", 24.0)
    for _ in range(max_doublings + 1):
        grid = auto_grid(config, span_sds=sds, **kw)
        if support_fraction(build_jsa_grid(config, grid, edge_tol=None), sigma_g) <= support_tol:
            break
        sds *= 2
    return grid


def cwf_numeric(f: JointAmplitudeGrid, sigma_g: float = math.inf, zoom: int | None = None,
                support_tol: float = SUPPORT_TOL) -> WignerGrid:
    """Numerical CWF on the signal frequency axis times a time axis.

    The signal axis is first interpolated to half its step so that the lag
    w' = nu_+ - nu_- runs in steps of the original grid spacing; the w'
    integral over each row is then one FFT. The time axis has n samples with
    step dt / 2^zoom, dt being the conjugate step of the JSA grid; ``zoom``
    is chosen automatically from the heralded temporal marginal when None.
    """
    if f.domain != "spectral":
        raise UsageError("cwf_numeric needs a spectral-domain grid")
    if not sigma_g > 0:
        raise ValueError("sigma_g must be positive or infinite")
    frac = support_fraction(f, sigma_g)
    if frac > support_tol:
        raise GridError(f"CWF support violated: {frac:.2e} of the heralded spectrum lies outside the central "
                        f"half of the grid (limit {support_tol:.0e}); increase the grid span")
    nu_axis = f.signal_axis
    n = nu_axis.n
    d_nu = nu_axis.step
    g = _herald_weight(f.idler_axis.samples, sigma_g)
    if zoom is None:
        zoom = _auto_zoom(f, g)
    zoom = int(zoom)
    if zoom < 0:
        raise ValueError("zoom must be non-negative")
    fine = _upsample_signal(np.asarray(f.values))
    rho = (fine.T * g) @ fine.conj() * f.idler_axis.step  # rho[u, v] on the fine axis

    full = nu_axis.conjugate()
    t_axis = TimeGrid(n, full.span / 2**zoom)
    L = n * 2**zoom
    lags = np.arange(-(n - 1), n)
    # t_k = (k - L/2) 2 pi / (L d_nu): exp(i m d_nu t_k) = (-1)^m exp(2 pi i m k / L)
    sign = np.where(lags % 2 == 0, 1.0, -1.0)
    fold = lags % L
    keep = slice(L // 2 - n // 2, L // 2 + n // 2)
    chunk = max(8, min(ROW_CHUNK, 2**22 // L))
    out = np.empty((n, n))
    imag = 0.0
    for start in range(0, n, chunk):
        rows = np.arange(start, min(n, start + chunk))
        u = 2 * rows[:, None] + lags[None, :]
        v = 2 * rows[:, None] - lags[None, :]
        ok = (u >= 0) & (u < 2 * n) & (v >= 0) & (v < 2 * n)
        c = np.where(ok, rho[np.clip(u, 0, 2 * n - 1), np.clip(v, 0, 2 * n - 1)], 0.0) * (d_nu * sign)
        folded = np.zeros((len(rows), L), dtype=complex)
        np.add.at(folded, (slice(None), fold), c)
        w = (L * np.fft.ifft(folded, axis=1))[:, keep]
        imag = max(imag, float(np.max(np.abs(w.imag))))
        out[rows] = w.real
    peak = float(np.max(np.abs(out)))
    total = float(out.sum() * d_nu * t_axis.step)
    if not (total > 0 and math.isfinite(total)):
        raise GridError("CWF has zero or non-finite total weight on this grid")
    return WignerGrid(out / total, nu_axis, t_axis, sigma_g, imag / peak)


@dataclass(frozen=True, eq=False)
class CwfMarginals:
    nu: np.ndarray
    spectral: np.ndarray
    t: np.ndarray
    temporal: np.ndarray
    widths: dict


def _widths(y, x, prefix: str) -> dict:
    return {f"{prefix}_halfwidth_1e": 0.5 * fwhm(y, x, strict=False, level=math.exp(-1)),
            f"{prefix}_fwhm": fwhm(y, x, strict=False, level=0.5)}


def cwf_marginals(w: WignerGrid) -> CwfMarginals:
    """Spectral and temporal marginals (unit area) with 1/e half-widths and FWHM."""
    nu, t = w.nu_axis.samples, w.t_axis.samples
    spec = w.values.sum(axis=1) * w.t_axis.step
    temp = w.values.sum(axis=0) * w.nu_axis.step
    spec = spec / (spec.sum() * w.nu_axis.step)
    temp = temp / (temp.sum() * w.t_axis.step)
    widths = _widths(spec, nu, "spectral") | _widths(temp, t, "temporal")
    return CwfMarginals(nu, spec, t, temp, widths)


__all__ = ["WignerGrid", "CwfAnalytic", "CwfMarginals", "cwf_numeric", "cwf_analytic", "cwf_marginals",
           "broadening_excess", "herald_spectrum", "support_fraction", "cwf_grid"]
