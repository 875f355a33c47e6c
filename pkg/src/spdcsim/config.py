"""Scenario files: YAML loading, schema validation and translation to library objects."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from .dispersion import MEDIA, BulkMediumModel, CrystalModel, TaylorCoefficients, solve_phasematching
from .errors import UsageError
from .grids import FrequencyGrid
from .presets import preset
from .spectral import SourceConfig, auto_grid, sigma_from_fwhm

DEFAULT_FORMATS = ("csv", "json")


class _Loader(yaml.SafeLoader):
    """SafeLoader that also reads exponent floats without a dot (``1e-26``)."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
                |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
                |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
                |[-+]?\.(?:inf|Inf|INF)
                |\.(?:nan|NaN|NAN))$""", re.X),
    list("-+0123456789."),
)


def schema() -> dict:
    text = resources.files("spdcsim").joinpath("scenario.schema.json").read_text()
    return json.loads(text)


def parse_scenario(text: str) -> dict:
    """Parse and validate scenario text; an empty document gives an empty dict."""
    try:
        data = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        raise UsageError(f"scenario is not valid YAML: {exc}") from exc
    data = {} if data is None else data
    try:
        jsonschema.validate(data, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"scenario schema violation at {where}: {exc.message}") from exc
    return data


def load_scenario(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read scenario {path}: {exc.strerror or exc}") from exc
    return parse_scenario(text)


def _inf(value):
    return math.inf if value is None else float(value)


def source_config(scenario: dict, *, preset_name: str | None = None, beta_p=None, beta_s=None, beta_i=None,
                  compensate_crystal_chirp: bool | None = None) -> SourceConfig:
    """SourceConfig from the ``source`` section plus command-line overrides."""
    src = dict(scenario.get("source", {}))
    if preset_name is not None:
        src["preset"] = preset_name
    base = None
    if "preset" in src:
        try:
            base = preset(src["preset"])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    changes = {}
    if "crystal" in src or "pump_wavelength_nm" in src:
        lam = src.get("pump_wavelength_nm", None if base is None else base.pump_wavelength * 1e9)
        if lam is None:
            raise UsageError("source needs pump_wavelength_nm")
        lam *= 1e-9
        changes["pump_wavelength"] = lam
        if "crystal" in src:
            cr = src["crystal"]
            omega_c = math.pi * 299_792_458.0 / lam
            seed_deg = cr.get("theta_deg", 45.0)
            crystal = CrystalModel(cr["material"], cr["length_mm"] * 1e-3, math.radians(seed_deg))
            if "theta_deg" not in cr:
                crystal = crystal.with_theta(solve_phasematching(crystal, omega_c))
            changes["crystal"] = crystal
    if "taylor" in src:
        t = src["taylor"]
        changes["taylor"] = TaylorCoefficients(t["tau_s"], t["tau_i"], t.get("b_s", 0.0), t.get("b_i", 0.0),
                                               t.get("b_p", 0.0))
        if base is None and "crystal" not in changes:
            changes["crystal"] = None
    if "sigma" in src:
        changes["sigma"] = float(src["sigma"])
    elif "pump_fwhm_nm" in src:
        lam = changes.get("pump_wavelength", None if base is None else base.pump_wavelength)
        if lam is None:
            raise UsageError("source needs pump_wavelength_nm to convert pump_fwhm_nm")
        changes["sigma"] = sigma_from_fwhm(src["pump_fwhm_nm"] * 1e-9, lam)
    for key in ("sigma_F", "sigma_g"):
        if key in src:
            changes[key] = _inf(src[key])
    for key in ("beta_p", "beta_s", "beta_i", "include_pm_phase"):
        if key in src:
            changes[key] = src[key]
    for key, val in (("beta_p", beta_p), ("beta_s", beta_s), ("beta_i", beta_i)):
        if val is not None:
            changes[key] = float(val)
    if base is None:
        missing = [k for k in ("pump_wavelength", "sigma") if k not in changes]
        if "crystal" not in changes and "taylor" not in changes:
            missing.append("crystal or taylor")
        if missing:
            raise UsageError(f"source section is incomplete (missing {', '.join(missing)}) and names no preset")
        changes.setdefault("crystal", None)
        try:
            cfg = SourceConfig(**changes, name="custom")
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        try:
            cfg = base.with_(**changes)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    comp = src.get("compensate_crystal_chirp", False) if compensate_crystal_chirp is None else compensate_crystal_chirp
    if comp:
        cfg = cfg.with_(beta_p=-cfg.coefficients.b_p / 4)
    return cfg


def grid_for(config: SourceConfig, scenario: dict, *, n=None, span=None, **kw) -> FrequencyGrid:
    g = scenario.get("grid", {})
    n = g.get("n", "auto") if n is None else n
    span = g.get("span", "auto") if span is None else span
    return auto_grid(config, n=None if n == "auto" else int(n), span=None if span == "auto" else float(span), **kw)


def medium_for(options: dict) -> tuple[BulkMediumModel, BulkMediumModel | None]:
    name = options.get("medium", "fused-silica-830")
    if name not in MEDIA:
        raise UsageError(f"unknown medium {name!r}; available: {', '.join(MEDIA)}")
    med = MEDIA[name]
    if "B" in options:
        med = BulkMediumModel(f"{name} (B override)", float(options["B"]), med.reference_wavelength)
    sig = None
    if "B_signal" in options:
        sig = BulkMediumModel(f"{name} (signal B override)", float(options["B_signal"]), med.reference_wavelength)
    return med, sig


def z_values(options: dict) -> np.ndarray:
    if "z" in options:
        return np.asarray(options["z"], dtype=float)
    return np.linspace(options.get("z_start", 0.0), options.get("z_stop", 8.0), options.get("z_num", 41))


def beta_values(options: dict, config: SourceConfig) -> np.ndarray:
    if "beta" in options:
        return np.asarray(options["beta"], dtype=float)
    scale = abs(config.beta_p) if config.beta_p else 1e-26
    return np.linspace(options.get("beta_start", -3 * scale), options.get("beta_stop", 1 * scale),
                       options.get("beta_num", 81))


def config_echo(config: SourceConfig) -> dict:
    """Plain-data description of a resolved SourceConfig."""
    tc = config.coefficients
    out = {"name": config.name, "pump_wavelength": config.pump_wavelength, "sigma": config.sigma,
           "sigma_F": config.sigma_F, "sigma_g": config.sigma_g, "beta_p": config.beta_p,
           "beta_s": config.beta_s, "beta_i": config.beta_i, "include_pm_phase": config.include_pm_phase,
           "taylor": {"tau_s": tc.tau_s, "tau_i": tc.tau_i, "b_s": tc.b_s, "b_i": tc.b_i, "b_p": tc.b_p}}
    if config.crystal is not None:
        c = config.crystal
        out["crystal"] = {"material": c.material, "length": c.length, "theta_deg": math.degrees(c.theta)}
    return out


@dataclass
class RunOptions:
    out_dir: Path
    formats: tuple = DEFAULT_FORMATS
    overrides: dict = field(default_factory=dict)
