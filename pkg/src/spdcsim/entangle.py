"""Schmidt decomposition, Gaussian Schmidt laws and the Fedorov ratio."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError, UsageError
from .grids import JointAmplitudeGrid
from .spectral import GaussianStateParams

TRUNCATION = 1e-10


@dataclass(frozen=True, eq=False)
class SchmidtResult:
    eigenvalues: np.ndarray
    K: float
    purity: float
    domain: str
    modulus_only: bool
    u_modes: np.ndarray | None = None  # columns, idler axis
    v_modes: np.ndarray | None = None  # columns, signal axis

    def to_dict(self) -> dict:
        return {"K": self.K, "purity": self.purity, "domain": self.domain,
                "modulus_only": self.modulus_only, "eigenvalues": [float(x) for x in self.eigenvalues]}


def _kept(lam: np.ndarray, tol: float) -> int:
    cum = np.cumsum(lam)
    return int(min(len(lam), np.searchsorted(cum, 1.0 - tol) + 1))


def schmidt_numeric(f: JointAmplitudeGrid, modulus_only: bool = False, with_modes: bool = True,
                    truncation: float = TRUNCATION) -> SchmidtResult:
    """Schmidt decomposition of a sampled amplitude.

    The kernel is scaled by sqrt(dnu_i dnu_s) so the squared singular values
    approximate the continuum eigenvalues. ``with_modes=False`` skips the mode
    functions and uses a Hermitian eigensolver on the Gram matrix, which is
    considerably faster for sweeps.
    """
    vals = np.abs(f.values) if modulus_only else f.values
    dx, dy = f.idler_axis.step, f.signal_axis.step
    norm = math.sqrt(float(np.sum(np.abs(vals) ** 2)) * dx * dy)
    if not norm > 0:
        raise DomainError("cannot decompose an all-zero amplitude")
    kern = vals * (math.sqrt(dx * dy) / norm)
    u = v = None
    try:
        if with_modes:
            U, s, Vh = np.linalg.svd(kern, full_matrices=False)
            lam = s**2
        else:
            gram = kern.T @ kern.conj() if np.iscomplexobj(kern) else kern.T @ kern
            lam = np.clip(np.linalg.eigvalsh(gram)[::-1], 0.0, None)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Schmidt decomposition failed ({exc}); kernel condition estimate "
                             f"{np.linalg.cond(kern):.3e}") from exc
    total = float(lam.sum())
    if not (total > 0 and math.isfinite(total)):
        raise NumericalError("Schmidt eigenvalues are not finite")
    lam = lam / total
    purity = float(np.sum(lam**2))
    m = _kept(lam, truncation)
    if with_modes:
        u = U[:, :m] / math.sqrt(dx)
        v = Vh[:m, :].T / math.sqrt(dy)
    return SchmidtResult(lam[:m].copy(), 1.0 / purity, purity, f.domain, modulus_only, u, v)


def schmidt_number(f: JointAmplitudeGrid, modulus_only: bool = False) -> float:
    """K = 1 / sum(lambda^2) without diagonalizing.

    With G = A^H A, sum(lambda) = tr G and sum(lambda^2) = ||G||_F^2, so a
    single matrix product suffices.
    """
    a = np.abs(f.values) if modulus_only else np.asarray(f.values)
    gram = a.conj().T @ a
    tr = float(np.real(np.trace(gram)))
    fro2 = float(np.sum(np.abs(gram) ** 2))
    if not (tr > 0 and fro2 > 0 and math.isfinite(fro2)):
        raise DomainError("cannot evaluate the Schmidt number of an all-zero amplitude")
    return tr * tr / fro2


@dataclass(frozen=True)
class GaussianSchmidt:
    """Geometric Schmidt law lambda_n = (1 - mu^2) mu^(2n)."""

    mu: float

    @property
    def K(self) -> float:
        m2 = self.mu**2
        return (1 + m2) / (1 - m2)

    @property
    def purity(self) -> float:
        return 1.0 / self.K

    def eigenvalues(self, n: int) -> np.ndarray:
        m2 = self.mu**2
        return (1 - m2) * m2 ** np.arange(n)


def schmidt_gaussian(a: float, c: float, b: float) -> GaussianSchmidt:
    """Schmidt law of the real kernel exp[-(a x^2 + c y^2 + 2 b x y)].

    mu = (sqrt(ac) - sqrt(ac - b^2)) / |b|, and mu = 0 when b = 0.
    """
    if not (a > 0 and c > 0 and a * c - b * b > 0):
        raise DomainError("quadratic form is not normalizable")
    if b == 0:
        return GaussianSchmidt(0.0)
    # (sqrt(ac) - sqrt(ac - b^2)) / |b| rewritten to avoid cancellation
    r = math.sqrt(a * c)
    mu = abs(b) / (r + math.sqrt(r * r - b * b))
    return GaussianSchmidt(mu)


def schmidt_gaussian_temporal(params: GaussianStateParams) -> GaussianSchmidt:
    """Modulus-only temporal Schmidt law (the analytic K_mT) of a Gaussian state."""
    return schmidt_gaussian(-params.omega_s2.real, -params.omega_i2.real, params.omega_si2.real)


def schmidt_gaussian_spectral_modulus(params: GaussianStateParams) -> GaussianSchmidt:
    """Modulus-only spectral Schmidt law (the analytic K_mS)."""
    return schmidt_gaussian(params.T_ii.real, params.T_ss.real, params.T_si.real)


def schmidt_gaussian_state(params: GaussianStateParams) -> GaussianSchmidt:
    """Schmidt law of the full complex Gaussian JSA.

    Tracing out the idler leaves rho(y, y') ~ exp(-A y^2 - A* y'^2 + 2 C y y')
    with A = T_ss - T_si^2 / (2 T_ii,R) and C = |T_si|^2 / (2 T_ii,R); its
    eigenvalues are geometric with mu^2 = (A_R - sqrt(A_R^2 - C^2)) / C.
    """
    a_r = params.T_ii.real
    A_r = (params.T_ss - params.T_si**2 / (2 * a_r)).real
    C = abs(params.T_si) ** 2 / (2 * a_r)
    if C == 0:
        return GaussianSchmidt(0.0)
    if not A_r > C:
        raise DomainError("reduced state is not normalizable")
    t = C / (A_r + math.sqrt(A_r * A_r - C * C))
    return GaussianSchmidt(math.sqrt(t))


def half_max_crossings(y: np.ndarray, x: np.ndarray, level: float = 0.5) -> np.ndarray:
    """Linearly interpolated abscissae where y crosses level * max(y)."""
    y = np.asarray(y, dtype=float)
    thr = level * y.max()
    above = y >= thr
    idx = np.nonzero(above[1:] != above[:-1])[0]
    y0, y1 = y[idx], y[idx + 1]
    return x[idx] + (thr - y0) / (y1 - y0) * (x[idx + 1] - x[idx])


def fwhm(y, x, strict: bool = True, level: float = 0.5, max_gap: float = 0.1) -> float:
    """Full width at ``level`` of max between the outermost crossings.

    With ``strict``, a profile that drops below the level for more than
    ``max_gap`` of that width (separate lobes) is rejected as ambiguous;
    ripple-induced extra crossings within a single lobe are tolerated.
    """
    cr = half_max_crossings(y, x, level)
    if len(cr) < 2:
        raise DomainError(f"profile has {len(cr)} crossings of the {level:g}-max level; "
                          "the grid does not contain the full width")
    width = float(cr[-1] - cr[0])
    if strict and len(cr) > 2:
        gaps = cr[2:-1:2] - cr[1:-2:2]  # intervals spent below the level
        if len(gaps) and gaps.max() > max_gap * width:
            raise DomainError(f"ambiguous width: {len(cr)} crossings of the {level:g}-max level "
                              "delimit separate lobes")
    return width


def fedorov_ratio(jti: JointAmplitudeGrid, strict: bool = True) -> float:
    """Unconditional over conditional idler emission-time width.

    Numerator: FWHM of the idler marginal (signal time integrated out).
    Denominator: FWHM of the idler slice at the signal time t_0 with the
    largest marginal emission probability.
    """
    if jti.domain != "temporal":
        raise UsageError("fedorov_ratio needs a temporal-domain grid")
    w = jti.intensity
    t_i = jti.idler_axis.samples
    marginal = w.sum(axis=1)
    j0 = int(np.argmax(w.sum(axis=0)))
    return fwhm(marginal, t_i, strict) / fwhm(w[:, j0], t_i, strict)


__all__ = [
    "SchmidtResult", "GaussianSchmidt", "schmidt_numeric", "schmidt_number", "schmidt_gaussian", "schmidt_gaussian_temporal",
    "schmidt_gaussian_spectral_modulus", "schmidt_gaussian_state", "fwhm", "half_max_crossings",
    "fedorov_ratio",
]
