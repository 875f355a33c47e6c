"""Named source presets."""

from __future__ import annotations

import math
from functools import lru_cache

from .dispersion import MEDIA, CrystalModel, solve_phasematching
from .spectral import SourceConfig, sigma_from_fwhm

_PRESETS = {
    "kdp-asymmetric": dict(material="KDP", length=0.02, pump=415e-9, fwhm=5e-9, nominal_deg=67.8, quoted_sigma=4.65e13,
                           text="KDP, 415 nm pump, 5 nm FWHM, L = 2 cm, theta = 67.8 deg "
                                "(pump and signal group velocities matched)"),
    "bbo-symmetric": dict(material="BBO", length=2.29e-3, pump=757e-9, fwhm=15e-9, nominal_deg=28.8, quoted_sigma=4.19e13,
                          text="BBO, 757 nm pump, 15 nm FWHM, L = 2.29 mm, theta = 28.8 deg "
                               "(symmetric group-velocity mismatch)"),
}


@lru_cache(maxsize=None)
def preset(name: str) -> SourceConfig:
    """SourceConfig for a named preset, cut at its solved phasematching angle."""
    try:
        p = _PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(_PRESETS)}") from None
    omega_c = math.pi * 299_792_458.0 / p["pump"]
    seed = CrystalModel(p["material"], p["length"], math.radians(p["nominal_deg"]))
    theta = solve_phasematching(seed, omega_c)
    cfg = SourceConfig(seed.with_theta(theta), p["pump"], sigma_from_fwhm(p["fwhm"], p["pump"]), name=name)
    cfg.coefficients  # warm the cache
    return cfg


def list_presets() -> list[tuple[str, str]]:
    """(name, one-line description) for every preset, including sigma.

    The computed sigma uses the exact speed of light; the nominal value in
    brackets is the commonly quoted figure for the preset, which follows
    from c = 3e8 m/s.
    """
    out = []
    for name, p in _PRESETS.items():
        sigma = sigma_from_fwhm(p["fwhm"], p["pump"])
        out.append((name, f"{p['text']}; sigma = {sigma:.4e} rad/s (nominal {p['quoted_sigma']:.2e})"))
    return out


def medium(name: str):
    try:
        return MEDIA[name]
    except KeyError:
        raise KeyError(f"unknown medium {name!r}; available: {', '.join(MEDIA)}") from None
