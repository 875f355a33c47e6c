"""Joint spectral amplitude: full numerical grid and Gaussian model."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .dispersion import C_LIGHT, CrystalModel, TaylorCoefficients, phasemismatch, taylor_coefficients
from .errors import DomainError, GridError
from .grids import FrequencyGrid, JointAmplitudeGrid, edge_fraction, next_pow2

INF = math.inf
GAMMA = 0.193
# Tolerated weight in the outer 2-pixel frame.  The sinc tails of a
# phasematching function decay only as 1/nu^2, so a looser bound than for
# Gaussian states is needed on practical grids.
EDGE_TOL = 1e-3


def sigma_from_fwhm(fwhm_wavelength: float, center_wavelength: float) -> float:
    """Pump amplitude width sigma from an intensity FWHM given in wavelength.

    sigma = 2 pi c dlam / lam^2 / sqrt(2 ln 2), matching the envelope
    exp(-nu^2 / sigma^2) whose intensity has FWHM sigma * sqrt(2 ln 2).
    """
    d_omega = 2 * math.pi * C_LIGHT * fwhm_wavelength / center_wavelength**2
    return d_omega / math.sqrt(2 * math.log(2))


@dataclass(frozen=True)
class SourceConfig:
    """Everything needed to build one two-photon state.

    Either ``crystal`` (exact Sellmeier phasemismatch) or ``taylor`` (a
    user-supplied expansion) must be given; when both are present the crystal
    drives the numerical grid and ``taylor`` overrides the expansion used by
    the Gaussian model.
    """

    crystal: CrystalModel | None
    pump_wavelength: float
    sigma: float
    sigma_F: float = INF
    sigma_g: float = INF
    beta_p: float = 0.0
    beta_s: float = 0.0
    beta_i: float = 0.0
    include_pm_phase: bool = True
    taylor: TaylorCoefficients | None = None
    name: str = "custom"

    def __post_init__(self):
        if self.crystal is None and self.taylor is None:
            raise ValueError("SourceConfig needs a crystal or Taylor coefficients")
        if not self.sigma > 0 or not math.isfinite(self.sigma):
            raise ValueError("sigma must be positive and finite")
        for nm in ("sigma_F", "sigma_g"):
            if not getattr(self, nm) > 0:
                raise ValueError(f"{nm} must be positive or infinite")
        for nm in ("beta_p", "beta_s", "beta_i"):
            if not math.isfinite(getattr(self, nm)):
                raise ValueError(f"{nm} must be finite")
        if not self.pump_wavelength > 0:
            raise ValueError("pump wavelength must be positive")

    @property
    def omega_c(self) -> float:
        """Degenerate signal/idler frequency (half the pump frequency)."""
        return math.pi * C_LIGHT / self.pump_wavelength

    @cached_property
    def coefficients(self) -> TaylorCoefficients:
        if self.taylor is not None:
            return self.taylor
        return taylor_coefficients(self.crystal, self.omega_c)

    def with_(self, **changes) -> "SourceConfig":
        new = replace(self, **changes)
        if "crystal" not in changes and "taylor" not in changes and "pump_wavelength" not in changes \
                and "coefficients" in self.__dict__:
            new.__dict__["coefficients"] = self.__dict__["coefficients"]
        return new


def _axes(grid) -> tuple[FrequencyGrid, FrequencyGrid]:
    if isinstance(grid, FrequencyGrid):
        return grid, grid
    gi, gs = grid
    return gi, gs


def _filter(nu, width):
    if math.isinf(width):
        return np.ones_like(nu)
    return np.exp(-(nu / width) ** 2)


def build_jsa_grid(config: SourceConfig, grid, *, pmf: str = "sinc", order: int | None = None,
                   edge_tol: float | None = EDGE_TOL) -> JointAmplitudeGrid:
    """Sample f(nu_i, nu_s) = PMF * pump * dispersion phase * filters.

    ``grid`` is a FrequencyGrid (shared by both axes) or an (idler, signal)
    pair. ``order=None`` uses the exact phasemismatch; 1 or 2 use the Taylor
    expansion to that order. ``pmf="gaussian"`` swaps the sinc for
    exp(-gamma x^2), the surrogate behind the Gaussian model. Set
    ``edge_tol=None`` to skip the energy-capture check.
    """
    gi, gs = _axes(grid)
    nu_i = gi.samples[:, None]
    nu_s = gs.samples[None, :]
    if order is None and config.crystal is None:
        order = 2
    if order is None:
        ldk = phasemismatch(config.crystal, nu_i, nu_s, config.omega_c)
    else:
        ldk = config.coefficients.evaluate(nu_i, nu_s, order=order)
    half = 0.5 * ldk
    if pmf == "sinc":
        amp = np.sinc(half / math.pi)
    elif pmf == "gaussian":
        amp = np.exp(-GAMMA * half**2)
    else:
        raise ValueError("pmf must be 'sinc' or 'gaussian'")
    nu_p = nu_i + nu_s
    phase = config.beta_p * nu_p**2 + config.beta_s * nu_s**2 + config.beta_i * nu_i**2
    if config.include_pm_phase:
        phase = phase + half
    f = amp * np.exp(-(nu_p / config.sigma) ** 2) * np.exp(1j * phase)
    f = f * _filter(nu_i, config.sigma_F) * _filter(nu_s, config.sigma_F)
    out = JointAmplitudeGrid(f, gi, gs, "spectral", False,
                             {"source": config.name, "pmf": pmf}).normalize()
    if edge_tol is not None:
        frac = edge_fraction(out.intensity)
        if frac > edge_tol:
            raise GridError(f"JSA energy capture violated: edge-frame weight {frac:.2e} > {edge_tol:.0e}; "
                            "increase the grid span")
    return out


@dataclass(frozen=True)
class GaussianStateParams:
    """Complex quadratic-form coefficients of the Gaussian JSA.

    f = N exp[-(T_ii nu_i^2 + T_ss nu_s^2 + 2 T_si nu_i nu_s)]. The ``*_tilde``
    fields hold the coefficients before the phasematching contribution
    gamma tau_l tau_m / 4 is added to the real parts.
    """

    T_ss: complex
    T_ii: complex
    T_si: complex
    T_ss_tilde: complex
    T_ii_tilde: complex
    T_si_tilde: complex
    tau_s: float
    tau_i: float
    gamma: float = GAMMA

    def __post_init__(self):
        a, c, b = self.T_ii.real, self.T_ss.real, self.T_si.real
        if not (a > 0 and c > 0 and a * c - b * b > 0):
            raise DomainError("Gaussian parameters are not normalizable (real parts not positive definite)")

    @property
    def _denominator(self) -> complex:
        return 4 * (self.T_si**2 - self.T_ii * self.T_ss)

    # time-domain exponent: Omega_s2 t_i^2 + Omega_i2 t_s^2 - 2 Omega_si2 t_i t_s
    @property
    def omega_s2(self) -> complex:
        return self.T_ss / self._denominator

    @property
    def omega_i2(self) -> complex:
        return self.T_ii / self._denominator

    @property
    def omega_si2(self) -> complex:
        return self.T_si / self._denominator

    @property
    def xi(self) -> float:
        """Correlation coefficient T_si,R / sqrt(T_ss,R T_ii,R)."""
        return self.T_si.real / math.sqrt(self.T_ss.real * self.T_ii.real)

    def spectral_matrix(self) -> np.ndarray:
        """Real part as a 2x2 matrix in (idler, signal) order."""
        return np.array([[self.T_ii.real, self.T_si.real], [self.T_si.real, self.T_ss.real]])

    def spectral_sd(self) -> tuple[float, float]:
        """Standard deviations (idler, signal) of the intensity |f|^2."""
        cov = np.linalg.inv(4 * self.spectral_matrix())
        return math.sqrt(cov[0, 0]), math.sqrt(cov[1, 1])

    def temporal_sd(self) -> tuple[float, float]:
        """Standard deviations (t_i, t_s) of the temporal intensity."""
        prec = -4 * np.array([[self.omega_s2.real, -self.omega_si2.real],
                              [-self.omega_si2.real, self.omega_i2.real]])
        cov = np.linalg.inv(prec)
        return math.sqrt(cov[0, 0]), math.sqrt(cov[1, 1])


def gaussian_params(config: SourceConfig, gamma: float = GAMMA) -> GaussianStateParams:
    """Gaussian-approximation coefficients for ``config``."""
    tc = config.coefficients
    filt = 0.0 if math.isinf(config.sigma_F) else 1.0 / config.sigma_F**2
    pump = 1.0 / config.sigma**2
    tss_t = complex(filt + pump, -(config.beta_p + config.beta_s))
    tii_t = complex(filt + pump, -(config.beta_p + config.beta_i))
    tsi_t = complex(pump, -config.beta_p)
    q = gamma / 4
    return GaussianStateParams(
        T_ss=tss_t + q * tc.tau_s**2,
        T_ii=tii_t + q * tc.tau_i**2,
        T_si=tsi_t + q * tc.tau_s * tc.tau_i,
        T_ss_tilde=tss_t, T_ii_tilde=tii_t, T_si_tilde=tsi_t,
        tau_s=tc.tau_s, tau_i=tc.tau_i, gamma=gamma,
    )


def eval_gaussian_jsa(params: GaussianStateParams, grid) -> JointAmplitudeGrid:
    gi, gs = _axes(grid)
    nu_i = gi.samples[:, None]
    nu_s = gs.samples[None, :]
    f = np.exp(-(params.T_ii * nu_i**2 + params.T_ss * nu_s**2 + 2 * params.T_si * nu_i * nu_s))
    return JointAmplitudeGrid(f, gi, gs, "spectral", False, {"source": "gaussian"}).normalize()


def _moments(g: JointAmplitudeGrid):
    w = g.intensity
    total = w.sum()
    xi = g.idler_axis.samples
    xs = g.signal_axis.samples
    pi = w.sum(axis=1) / total
    ps = w.sum(axis=0) / total
    mi, ms = pi @ xi, ps @ xs
    vi = pi @ (xi - mi) ** 2
    vs = ps @ (xs - ms) ** 2
    cov = (xi - mi) @ (w / total) @ (xs - ms)
    return vi, vs, cov


def correlation_coefficient(jsi: JointAmplitudeGrid, convention: str = "xi") -> float:
    """Moment-based idler/signal correlation of |f|^2.

    ``convention="xi"`` returns -cov/(sd_i sd_s), the sign convention in
    which a Gaussian state gives T_si,R / sqrt(T_ss,R T_ii,R): anti-correlated
    spectra (narrow pump) approach +1. ``convention="pearson"`` returns the
    plain Pearson coefficient, which is the negative of that.
    """
    vi, vs, cov = _moments(jsi)
    if vi <= 0 or vs <= 0:
        raise DomainError("degenerate marginal: zero variance on one axis")
    r = float(cov / math.sqrt(vi * vs))
    if convention == "pearson":
        return r
    if convention == "xi":
        return -r
    raise ValueError("convention must be 'xi' or 'pearson'")


def auto_grid(config: SourceConfig, *, n: int | None = None, span: float | None = None,
              n_min: int = 512, extra_betas=(), time_sds: float = 4.0,
              span_sds: float = 12.0) -> FrequencyGrid:
    """Pick a square frequency grid for ``config``.

    The span is ``span_sds`` standard deviations of the broader Gaussian-model
    marginal. The size is the smallest power of two (at least ``n_min``) whose
    conjugate time window holds ``time_sds`` temporal standard deviations on
    each side plus the crystal walk-off lengths. ``extra_betas`` lists
    (beta_s, beta_i) pairs the grid must also accommodate, e.g. the end of a
    propagation sweep.
    """
    params = gaussian_params(config)
    if span is None:
        span = span_sds * max(params.spectral_sd())
    if n is None:
        cases = [params] + [gaussian_params(config.with_(beta_s=bs, beta_i=bi)) for bs, bi in extra_betas]
        t_sd = max(max(p.temporal_sd()) for p in cases)
        tc = config.coefficients
        t_span = 2 * (time_sds * t_sd + 0.5 * (abs(tc.tau_i) + abs(tc.tau_s)))
        n = max(n_min, next_pow2(t_span * span / (2 * math.pi)))
    return FrequencyGrid(n, span, config.omega_c)


__all__ = [
    "GAMMA", "INF", "EDGE_TOL", "SourceConfig", "GaussianStateParams", "sigma_from_fwhm",
    "build_jsa_grid", "gaussian_params", "eval_gaussian_jsa", "correlation_coefficient", "auto_grid",
]
