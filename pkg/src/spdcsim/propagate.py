"""Dispersive propagation, entanglement migration and dispersion suppression."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .dispersion import BulkMediumModel
from .entangle import fedorov_ratio, schmidt_gaussian_temporal, schmidt_number
from .errors import DomainError, UsageError
from .grids import FrequencyGrid, JointAmplitudeGrid
from .spectral import GAMMA, SourceConfig, auto_grid, build_jsa_grid, gaussian_params
from .temporal import jta_via_transform
from .wigner import cwf_analytic, cwf_grid, cwf_marginals, cwf_numeric

ASYMMETRY_RATIO = 0.05


@dataclass(frozen=True)
class PropagationScenario:
    """A source followed by bulk media of length z (one per photon when unbalanced)."""

    config: SourceConfig
    medium: BulkMediumModel
    z_values: tuple = tuple(np.linspace(0.0, 8.0, 41))
    medium_signal: BulkMediumModel | None = None
    grid: FrequencyGrid | None = None

    def __post_init__(self):
        z = tuple(float(v) for v in self.z_values)
        if not z:
            raise ValueError("z_values must not be empty")
        if min(z) < 0 or not all(math.isfinite(v) for v in z):
            raise ValueError("propagation distances must be finite and non-negative")
        object.__setattr__(self, "z_values", z)

    @property
    def balanced(self) -> bool:
        return self.medium_signal is None

    @property
    def B_pair(self) -> tuple[float, float]:
        """(B_idler, B_signal) in s^2/m."""
        sig = self.medium if self.medium_signal is None else self.medium_signal
        return self.medium.gvd_half, sig.gvd_half

    def config_at(self, z: float) -> SourceConfig:
        b_i, b_s = self.B_pair
        c = self.config
        return c.with_(beta_i=c.beta_i + b_i * z, beta_s=c.beta_s + b_s * z)

    def resolve_grid(self) -> FrequencyGrid:
        if self.grid is not None:
            return self.grid
        b_i, b_s = self.B_pair
        zmax = max(self.z_values)
        c = self.config
        return auto_grid(c, extra_betas=[(c.beta_s + b_s * zmax, c.beta_i + b_i * zmax)])


@dataclass(frozen=True, eq=False)
class MigrationCurve:
    z: np.ndarray
    K: float
    K_mS: float
    K_mT: np.ndarray
    K_mT_analytic: np.ndarray
    z_min: float
    K_mT_min: float
    fedorov: np.ndarray | None = None
    z_min_parabolic: float = math.nan
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"K": self.K, "K_mS": self.K_mS, "z_min": self.z_min, "K_mT_min": self.K_mT_min,
                "z_min_parabolic": self.z_min_parabolic}


def propagate_state(f: JointAmplitudeGrid, B, z: float) -> JointAmplitudeGrid:
    """Multiply by exp(i z (B_i nu_i^2 + B_s nu_s^2)).

    ``B`` is one coefficient for balanced propagation or an (idler, signal)
    pair, in s^2/m.
    """
    if f.domain != "spectral":
        raise UsageError("propagate_state needs a spectral-domain grid")
    if z < 0:
        raise ValueError("propagation distance must be non-negative")
    b_i, b_s = (B, B) if np.isscalar(B) else B
    if z == 0 or (b_i == 0 and b_s == 0):
        return f.replace_values(np.array(f.values))
    nu_i = f.idler_axis.samples[:, None]
    nu_s = f.signal_axis.samples[None, :]
    phase = np.exp(1j * z * (b_i * nu_i**2 + b_s * nu_s**2))
    return f.replace_values(f.values * phase, meta=dict(f.meta, z=z))


def _k_mt(f: JointAmplitudeGrid, B, z: float) -> float:
    jta = jta_via_transform(propagate_state(f, B, z), recenter=False)
    return schmidt_number(jta, modulus_only=True)


def _parabola_vertex(x, y) -> float:
    (x0, x1, x2), (y0, y1, y2) = x, y
    den = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / den
    if not a > 0:
        return float(x1)
    return float(-b / (2 * a))


def migration_sweep(scenario: PropagationScenario, *, fedorov: bool = False, refine: bool = True,
                    xatol: float = 1e-4) -> MigrationCurve:
    """Modulus-only temporal Schmidt number along the propagation path.

    The sampled minimum is bracketed by its neighbours; ``z_min_parabolic`` is
    the 3-point parabola through log K_mT there and ``z_min`` the result of a
    bounded scalar minimisation inside the same bracket (the parabola alone
    is biased because the minimum is sharp and asymmetric).
    """
    grid = scenario.resolve_grid()
    f0 = build_jsa_grid(scenario.config, grid)
    B = scenario.B_pair
    z = np.asarray(scenario.z_values)
    kmt = np.array([_k_mt(f0, B, zz) for zz in z])
    ana = np.array([schmidt_gaussian_temporal(gaussian_params(scenario.config_at(zz))).K for zz in z])
    fed = None
    if fedorov:
        fed = np.array([fedorov_ratio(jta_via_transform(propagate_state(f0, B, zz)), strict=False) for zz in z])
    K = schmidt_number(f0)
    K_mS = schmidt_number(f0, modulus_only=True)
    j = int(np.argmin(kmt))
    z_min, k_min, z_par = float(z[j]), float(kmt[j]), math.nan
    if 0 < j < len(z) - 1:
        z_par = _parabola_vertex(z[j - 1:j + 2], np.log(kmt[j - 1:j + 2]))
        if refine:
            res = minimize_scalar(lambda x: _k_mt(f0, B, x), bounds=(z[j - 1], z[j + 1]), method="bounded",
                                  options={"xatol": xatol})
            if res.fun < k_min:
                z_min, k_min = float(res.x), float(res.fun)
    return MigrationCurve(z, K, K_mS, kmt, ana, z_min, k_min, fed, z_par, {"grid_n": grid.n, "grid_span": grid.span})


def suppression_report(config: SourceConfig, gamma: float = GAMMA) -> dict:
    """Dimensionless figures of merit for dispersion suppression.

    ``delta_over_beta_p`` is the closed form obtained with T_ii,R ~ gamma
    tau_i^2 / 4, T_ss,R = T_si,R = 1/sigma^2 and beta_s = -beta_p;
    ``delta_over_beta_p_exact`` evaluates the same quantity from the full
    Gaussian coefficients.
    """
    tc = config.coefficients
    sigma, bp = config.sigma, config.beta_p
    st = sigma * tc.tau_i
    s2b = sigma**2 * bp
    asym = abs(tc.tau_s) <= ASYMMETRY_RATIO * abs(tc.tau_i)
    out = {
        "sigma_tau_i": st,
        "sigma2_beta_p": s2b,
        "asymmetric": bool(asym),
        "tau_s_over_tau_i": tc.tau_s / tc.tau_i if tc.tau_i else math.inf,
        "xi": gaussian_params(config, gamma).xi,
        "xi_approx": 2 / (math.sqrt(gamma) * abs(st)) if st else math.inf,
        "imag_mixed": 2 * s2b / (math.sqrt(gamma) * st) if st else math.inf,
        "delta_over_beta_p": 2 * s2b / (gamma * st * st / 4 - 1),
    }
    if bp != 0:
        matched = config.with_(beta_s=-bp)
        out["delta_over_beta_p_exact"] = cwf_analytic(gaussian_params(matched, gamma)).Delta / bp
    else:
        out["delta_over_beta_p_exact"] = 0.0
    return out


@dataclass(frozen=True, eq=False)
class DurationCurve:
    beta: np.ndarray
    Delta_t_M: np.ndarray
    Delta: np.ndarray
    Delta_t_0: float
    beta_min: float
    Delta_t_M_min: float
    numeric: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {"Delta_t_0": self.Delta_t_0, "beta_min": self.beta_min, "Delta_t_M_min": self.Delta_t_M_min}


def duration_sweep(config: SourceConfig, beta_values, *, numeric: bool = False) -> DurationCurve:
    """Heralded signal duration with beta_s = beta_i = beta.

    Delta_t_M^2 is exactly quadratic in beta (T1 and T3 do not depend on it,
    T2 is linear), so the parabola through the sampled minimum and its
    neighbours gives the stationary point exactly.
    """
    beta = np.asarray(beta_values, dtype=float)
    if beta.ndim != 1 or len(beta) < 3:
        raise ValueError("duration_sweep needs at least three beta values")
    cw = [cwf_analytic(gaussian_params(config.with_(beta_s=b, beta_i=b)), config.sigma_g) for b in beta]
    dtm = np.array([c.Delta_t_M for c in cw])
    delta = np.array([c.Delta for c in cw])
    dt0 = cw[0].Delta_t_0
    j = int(np.argmin(dtm))
    j = min(max(j, 1), len(beta) - 2)
    bmin = _parabola_vertex(beta[j - 1:j + 2], dtm[j - 1:j + 2] ** 2)
    dmin = cwf_analytic(gaussian_params(config.with_(beta_s=bmin, beta_i=bmin)), config.sigma_g).Delta_t_M
    num = None
    if numeric:
        num = np.empty(len(beta))
        for k, b in enumerate(beta):
            c = config.with_(beta_s=b, beta_i=b)
            w = cwf_numeric(build_jsa_grid(c, cwf_grid(c, sigma_g=config.sigma_g)), config.sigma_g)
            num[k] = cwf_marginals(w).widths["temporal_halfwidth_1e"]
    return DurationCurve(beta, dtm, delta, dt0, bmin, dmin, num)


def check_nonnegative(curve: DurationCurve, rtol: float = 1e-12) -> None:
    """Raise if any sampled duration falls below the dispersion-free value."""
    if np.any(curve.Delta < -rtol * curve.Delta_t_0**2) or np.any(curve.Delta_t_M < curve.Delta_t_0 * (1 - rtol)):
        raise DomainError("heralded duration below its dispersion-free value")


__all__ = ["PropagationScenario", "MigrationCurve", "DurationCurve", "propagate_state", "migration_sweep",
           "suppression_report", "duration_sweep", "check_nonnegative"]
