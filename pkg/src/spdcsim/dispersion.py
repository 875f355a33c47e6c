"""Crystal and bulk-medium dispersion.

Refractive indices come from two-resonance Sellmeier formulas (wavelength in
micrometres)::

    n^2 = A + B / (lam^2 - C) + D lam^2 / (lam^2 - E) - F lam^2

which covers both the Zernike KDP set and the Eimerl BBO set. The
extraordinary index at cut angle theta follows the index ellipse
``1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2``.

Field polarizations are fixed for type-II collinear phasematching: the pump
and idler are extraordinary, the signal is ordinary.

All frequencies are angular (rad/s), lengths in metres and times in seconds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NumericalError, PhasematchWarning

C_LIGHT = 299_792_458.0

POLARIZATION = {"pump": "e", "signal": "o", "idler": "e"}

# relative step for the finite-difference stencils
FD_STEP = 1e-2


@dataclass(frozen=True)
class Sellmeier:
    """Coefficients of the two-resonance Sellmeier form (lam in um)."""

    A: float
    B: float = 0.0
    C: float = 0.0
    D: float = 0.0
    E: float = 0.0
    F: float = 0.0

    @classmethod
    def from_list(cls, coeffs: Sequence[float]) -> "Sellmeier":
        coeffs = [float(c) for c in coeffs]
        if not 1 <= len(coeffs) <= 6:
            raise ValueError("Sellmeier coefficient list needs 1 to 6 entries (A, B, C, D, E, F)")
        return cls(*coeffs)

    def as_list(self) -> list[float]:
        return [self.A, self.B, self.C, self.D, self.E, self.F]

    def n_squared(self, lam_um):
        l2 = np.asarray(lam_um, dtype=float) ** 2
        out = self.A + self.B / (l2 - self.C) - self.F * l2
        if self.D != 0.0:
            out = out + self.D * l2 / (l2 - self.E)
        return out


# Zernike (1964), room temperature
KDP_O = Sellmeier(2.259276, 0.01008956, 0.012942625, 13.00522, 400.0)
KDP_E = Sellmeier(2.132668, 0.008637494, 0.012281043, 3.2279924, 400.0)
# Eimerl et al. (1987)
BBO_O = Sellmeier(2.7405, 0.0184, 0.0179, F=0.0155)
BBO_E = Sellmeier(2.3730, 0.0128, 0.0156, F=0.0044)

# transparency windows in metres
WINDOWS = {"KDP": (0.174e-6, 1.57e-6), "BBO": (0.189e-6, 3.5e-6)}
SELLMEIER = {"KDP": (KDP_O, KDP_E), "BBO": (BBO_O, BBO_E)}


def _as_sellmeier(value) -> Sellmeier:
    if isinstance(value, Sellmeier):
        return value
    return Sellmeier.from_list(value)


@dataclass(frozen=True)
class CrystalModel:
    """Uniaxial crystal: material, length, cut angle and Sellmeier data.

    ``material`` is ``"KDP"``, ``"BBO"`` or ``"custom"``. For the two named
    materials the embedded Sellmeier data and transparency window are used
    unless explicitly overridden.
    """

    material: str
    length: float
    theta: float
    sellmeier_o: Sellmeier | Sequence[float] | None = None
    sellmeier_e: Sellmeier | Sequence[float] | None = None
    window: tuple[float, float] | None = None

    def __post_init__(self):
        mat = self.material if self.material == "custom" else self.material.upper()
        if mat not in ("KDP", "BBO", "custom"):
            raise ValueError(f"unknown material {self.material!r}; expected KDP, BBO or custom")
        object.__setattr__(self, "material", mat)
        if not (self.length >= 0.0 and math.isfinite(self.length)):
            raise ValueError("crystal length must be finite and non-negative")
        if not 0.0 < self.theta < math.pi / 2:
            raise ValueError("cut angle must lie in (0, pi/2)")
        so, se = self.sellmeier_o, self.sellmeier_e
        if mat == "custom":
            if so is None or se is None:
                raise ValueError("custom crystals need both sellmeier_o and sellmeier_e")
        else:
            so = SELLMEIER[mat][0] if so is None else so
            se = SELLMEIER[mat][1] if se is None else se
        object.__setattr__(self, "sellmeier_o", _as_sellmeier(so))
        object.__setattr__(self, "sellmeier_e", _as_sellmeier(se))
        win = self.window
        if win is None:
            win = WINDOWS.get(mat, (0.2e-6, 3.0e-6))
        object.__setattr__(self, "window", (float(win[0]), float(win[1])))

    def with_theta(self, theta: float) -> "CrystalModel":
        return CrystalModel(self.material, self.length, theta, self.sellmeier_o,
                            self.sellmeier_e, self.window)

    def with_length(self, length: float) -> "CrystalModel":
        return CrystalModel(self.material, length, self.theta, self.sellmeier_o,
                            self.sellmeier_e, self.window)

    def index(self, pol: str, lam_um, theta: float | None = None):
        """Refractive index for polarization ``'o'`` or ``'e'`` at ``lam_um``."""
        theta = self.theta if theta is None else theta
        no2 = self.sellmeier_o.n_squared(lam_um)
        if pol == "o":
            n2 = no2
        elif self.sellmeier_e == self.sellmeier_o:
            n2 = no2
        else:
            ne2 = self.sellmeier_e.n_squared(lam_um)
            n2 = 1.0 / (math.cos(theta) ** 2 / no2 + math.sin(theta) ** 2 / ne2)
        if np.any(~np.isfinite(n2)) or np.any(n2 <= 1.0):
            raise DomainError("refractive index is not real and > 1 at the requested wavelength")
        return np.sqrt(n2)


def _check_window(crystal: CrystalModel, omega) -> np.ndarray:
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("angular frequency must be positive")
    lam = 2 * math.pi * C_LIGHT / omega
    lo, hi = crystal.window
    if np.any(lam < lo) or np.any(lam > hi):
        raise DomainError(
            f"wavelength outside the {crystal.material} transparency window "
            f"[{lo * 1e9:.0f} nm, {hi * 1e9:.0f} nm]"
        )
    return lam


def wavenumber(crystal: CrystalModel, field: str, omega, theta: float | None = None):
    """Wavenumber k = n(omega) omega / c for ``field`` in {pump, signal, idler}."""
    try:
        pol = POLARIZATION[field]
    except KeyError:
        raise ValueError(f"field must be one of {sorted(POLARIZATION)}") from None
    lam = _check_window(crystal, omega)
    n = crystal.index(pol, lam * 1e6, theta)
    return n * np.asarray(omega, dtype=float) / C_LIGHT


def phasemismatch(crystal: CrystalModel, nu_i, nu_s, omega_c: float, theta: float | None = None):
    """All-orders L*dk at detunings (nu_i, nu_s) from the degenerate frequency.

    dk = k_p(2 w_c + nu_i + nu_s) - k_s(w_c + nu_s) - k_i(w_c + nu_i); arrays
    broadcast against each other.
    """
    nu_i = np.asarray(nu_i, dtype=float)
    nu_s = np.asarray(nu_s, dtype=float)
    kp = wavenumber(crystal, "pump", 2 * omega_c + (nu_i + nu_s), theta)
    ks = wavenumber(crystal, "signal", omega_c + nu_s, theta)
    ki = wavenumber(crystal, "idler", omega_c + nu_i, theta)
    return crystal.length * (kp - (ks + ki))


def central_derivatives(func: Callable, x: float, h: float) -> tuple[float, float]:
    """First and second derivatives by 5-point stencils plus one Richardson step."""

    def stencil(step):
        fm2, fm1, f0, fp1, fp2 = (float(func(x + k * step)) for k in (-2, -1, 0, 1, 2))
        d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * step)
        d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * step * step)
        return d1, d2

    a1, a2 = stencil(h)
    b1, b2 = stencil(h / 2)
    return (16 * b1 - a1) / 15, (16 * b2 - a2) / 15


@dataclass(frozen=True)
class TaylorCoefficients:
    """Expansion L*dk ~ dk0 + tau_s nu_s + tau_i nu_i + b_s nu_s^2 + b_i nu_i^2 + b_p nu_s nu_i."""

    tau_s: float
    tau_i: float
    b_s: float = 0.0
    b_i: float = 0.0
    b_p: float = 0.0
    dk0: float = 0.0
    omega_c: float = float("nan")

    def evaluate(self, nu_i, nu_s, order: int = 2):
        nu_i = np.asarray(nu_i, dtype=float)
        nu_s = np.asarray(nu_s, dtype=float)
        out = self.dk0 + self.tau_s * nu_s + self.tau_i * nu_i
        if order >= 2:
            out = out + self.b_s * nu_s**2 + self.b_i * nu_i**2 + self.b_p * nu_s * nu_i
        return out


def taylor_coefficients(crystal: CrystalModel, omega_c: float, step: float = FD_STEP) -> TaylorCoefficients:
    """Group-velocity mismatch and GVD coefficients of the crystal at omega_c.

    ``step`` is the finite-difference step relative to the frequency being
    differentiated at. Warns with :class:`PhasematchWarning` when the constant
    term exceeds 1e-6.
    """
    L = crystal.length
    wp = 2 * omega_c

    def k_of(field):
        return lambda w: float(wavenumber(crystal, field, w))

    kp1, kp2 = central_derivatives(k_of("pump"), wp, step * wp)
    ks1, ks2 = central_derivatives(k_of("signal"), omega_c, step * omega_c)
    ki1, ki2 = central_derivatives(k_of("idler"), omega_c, step * omega_c)
    dk0 = float(phasemismatch(crystal, 0.0, 0.0, omega_c))
    if abs(dk0) > 1e-6:
        warnings.warn(f"crystal not phasematched at omega_c: L*dk0 = {dk0:.3e}", PhasematchWarning,
                      stacklevel=2)
    return TaylorCoefficients(
        tau_s=L * (kp1 - ks1),
        tau_i=L * (kp1 - ki1),
        b_s=0.5 * L * (kp2 - ks2),
        b_i=0.5 * L * (kp2 - ki2),
        b_p=L * kp2,
        dk0=dk0,
        omega_c=omega_c,
    )


def solve_phasematching(crystal: CrystalModel, omega_c: float, tol: float = 1e-9,
                        bracket: tuple[float, float] = (0.01, math.pi / 2 - 0.01)) -> float:
    """Cut angle theta for which L*dk(0, 0) vanishes at degenerate omega_c.

    Root-finding is done on dk per unit length (so it also works for L = 0);
    the result is accepted once |L*dk| < tol.
    """
    unit = crystal.with_length(1.0)

    def dk(theta):
        return float(phasemismatch(unit, 0.0, 0.0, omega_c, theta))

    lo, hi = bracket
    if dk(lo) * dk(hi) > 0:
        raise DomainError("no type-II phasematching angle in the search bracket")
    theta = brentq(dk, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    residual = crystal.length * dk(theta)
    if abs(residual) > tol:
        raise NumericalError(f"phasematching solver did not converge: L*dk = {residual:.3e}")
    return float(theta)


@dataclass(frozen=True)
class BulkMediumModel:
    """Dispersive bulk medium characterised by B = kappa''/2 in s^2/m."""

    name: str
    gvd_half: float
    reference_wavelength: float = float("nan")

    def __post_init__(self):
        if not math.isfinite(self.gvd_half):
            raise ValueError("gvd_half must be finite")

    @property
    def gvd(self) -> float:
        """kappa'' in s^2/m."""
        return 2.0 * self.gvd_half

    def beta(self, z: float) -> float:
        """Accumulated quadratic phase coefficient B*z after a length z."""
        return self.gvd_half * z


MEDIA = {
    "fused-silica-830": BulkMediumModel("fused-silica-830", 1.81e-26, 830e-9),
    "fused-silica-415": BulkMediumModel("fused-silica-415", 5.07e-26, 415e-9),
}


def sellmeier_gvd_half(coeffs_b: Sequence[float], coeffs_c: Sequence[float], wavelength: float,
                       step: float = FD_STEP) -> float:
    """B = k''/2 of an isotropic medium given standard Sellmeier terms.

    Uses n^2 = 1 + sum B_j lam^2 / (lam^2 - C_j) with lam in um; handy for
    cross-checking the bulk-medium presets against handbook data.
    """

    def k(w):
        lam = 2 * math.pi * C_LIGHT / w * 1e6
        n2 = 1.0 + sum(b * lam**2 / (lam**2 - c) for b, c in zip(coeffs_b, coeffs_c))
        return math.sqrt(n2) * w / C_LIGHT

    w0 = 2 * math.pi * C_LIGHT / wavelength
    _, k2 = central_derivatives(k, w0, step * w0)
    return 0.5 * k2


__all__ = [
    "C_LIGHT", "POLARIZATION", "Sellmeier", "CrystalModel", "TaylorCoefficients", "BulkMediumModel",
    "MEDIA", "wavenumber", "phasemismatch", "taylor_coefficients", "solve_phasematching",
    "central_derivatives", "sellmeier_gvd_half",
]
